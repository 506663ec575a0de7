use rand::Rng;

use crate::arith::{rat, Rat};
use crate::error::{Error, Result};
use crate::poly::{MPoly, UPoly};

use super::cert::SosCert;

/// Result of removing the denominator from `sum a_i (f_i / g)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasselsOutput {
    /// `sum a_i p_i^2 = h` with univariate `p_i` stored as one-variable polynomials.
    pub cert: SosCert,
    pub h: UPoly,
    /// Degree of the denominator before each step, ending with 0.
    pub denominator_degrees: Vec<usize>,
}

/// Polynomials `p_i` with `sum a_i p_i^2 = (sum a_i f_i^2) / g^2`, obtained
/// by repeatedly reflecting the rational point through the polynomial part
/// of its coordinates.
pub fn cassels_descent(weights: &[Rat], fs: &[UPoly], g: &UPoly) -> Result<CasselsOutput> {
    if weights.len() != fs.len() {
        return Err(Error::Dimension(format!("{} weights for {} polynomials", weights.len(), fs.len())));
    }
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if weights.iter().any(Rat::is_negative) {
        return Err(Error::Input("weights must be nonnegative".into()));
    }
    let num: UPoly = weights.iter().zip(fs).map(|(a, f)| (f * f).scale(a)).fold(UPoly::zero(), |s, t| &s + &t);
    let h = num.exact_div(&(g * g))?;

    // zero weights contribute nothing and get p_i = 0
    let active: Vec<usize> = (0..fs.len()).filter(|&i| !weights[i].is_zero()).collect();
    let a: Vec<&Rat> = active.iter().map(|&i| &weights[i]).collect();
    let mut f: Vec<UPoly> = active.iter().map(|&i| fs[i].clone()).collect();
    let mut g = g.clone();
    let mut degrees = vec![g.degree().expect("nonzero")];

    while g.degree() != Some(0) {
        let mut q = Vec::with_capacity(f.len());
        let mut all_exact = true;
        for fi in &f {
            let (qi, ri) = fi.div_rem(&g)?;
            all_exact &= ri.is_zero();
            q.push(qi);
        }
        if all_exact {
            f = q;
            g = UPoly::one();
            degrees.push(0);
            break;
        }
        let s = &weighted_dot(&a, &q, &q) - &h;
        let t = &weighted_dot(&a, &f, &q) - &(&g * &h);
        let two_t = t.scale(&Rat::from(2));
        let new_f: Vec<UPoly> = f.iter().zip(&q).map(|(fi, qi)| &(&s * fi) - &(&two_t * qi)).collect();
        let new_g = &(&s * &g) - &two_t;
        let (dn, dg) = (new_g.degree(), g.degree());
        assert!(dn.is_some() && dn < dg, "denominator degree must drop");
        f = new_f;
        g = new_g;
        degrees.push(g.degree().expect("nonzero"));
    }

    let c = g.as_constant().expect("constant denominator");
    let inv = c.recip();
    let mut p = vec![UPoly::zero(); fs.len()];
    for (k, &i) in active.iter().enumerate() {
        p[i] = f[k].scale(&inv);
    }
    let cert = SosCert::from_pairs(
        1,
        weights.iter().zip(&p).map(|(w, pi)| (w.clone(), MPoly::from_upoly(pi, 1, 0))).collect(),
    )?;
    debug_assert_eq!(cert.expand(), MPoly::from_upoly(&h, 1, 0));
    Ok(CasselsOutput { cert, h, denominator_degrees: degrees })
}

fn weighted_dot(a: &[&Rat], x: &[UPoly], y: &[UPoly]) -> UPoly {
    a.iter().zip(x.iter().zip(y)).map(|(w, (u, v))| (u * v).scale(w)).fold(UPoly::zero(), |s, t| &s + &t)
}

/// An input `(weights, fs, g)` with three terms and a nonconstant
/// denominator for which `sum a_i f_i^2 / g^2` is a polynomial. Built from
/// the identity `|(p1 + i p2)(u + i v)^2|^2 = (p1^2 + p2^2)(u^2 + v^2)^2`.
pub fn pythagorean_instance(rng: &mut impl Rng) -> (Vec<Rat>, Vec<UPoly>, UPoly) {
    let poly = |deg: usize, rng: &mut dyn rand::RngCore| {
        UPoly::new((0..=deg).map(|_| rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3))).collect())
    };
    loop {
        let du = rng.gen_range(1..=2);
        let u = poly(du, rng);
        let v = poly(rng.gen_range(0..=2), rng);
        let g = &(&u * &u) + &(&v * &v);
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        let p1 = poly(rng.gen_range(0..=3), rng);
        let p2 = poly(rng.gen_range(0..=3), rng);
        if p1.is_zero() && p2.is_zero() {
            continue;
        }
        // (u + i v)^2 = (u^2 - v^2) + i (2 u v)
        let re = &(&u * &u) - &(&v * &v);
        let im = (&u * &v).scale(&Rat::from(2));
        let f1 = &(&p1 * &re) - &(&p2 * &im);
        let f2 = &(&p1 * &im) + &(&p2 * &re);
        let f3 = &poly(rng.gen_range(0..=2), rng) * &g;
        let a = Rat::from(rng.gen_range(1i64..=4));
        let b = rat(rng.gen_range(0i64..=3), rng.gen_range(1i64..=2));
        return (vec![a.clone(), a, b], vec![f1, f2, f3], g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_i64(c)
    }

    #[test]
    fn exact_division_case() {
        let out = cassels_descent(&[Rat::one()], &[u(&[0, 0, 1])], &u(&[0, 1])).unwrap();
        assert_eq!(out.cert.terms()[0].poly, MPoly::from_upoly(&u(&[0, 1]), 1, 0));
        assert_eq!(out.denominator_degrees, vec![1, 0]);
    }

    #[test]
    fn two_terms_over_x() {
        let fs = [u(&[0, 1, 1]), u(&[0, -1, 1])];
        let out = cassels_descent(&[Rat::one(), Rat::one()], &fs, &u(&[0, 1])).unwrap();
        assert_eq!(out.h, u(&[2, 0, 2]));
        assert_eq!(out.cert.expand(), MPoly::from_upoly(&u(&[2, 0, 2]), 1, 0));
    }

    #[test]
    fn genuine_descent_with_remainders() {
        // 2 ((x^2 - 1)^2 + (2x)^2) / (x^2 + 1)^2 = 2
        let fs = [u(&[-1, 0, 1]), u(&[0, 2])];
        let g = u(&[1, 0, 1]);
        let out = cassels_descent(&[Rat::from(2), Rat::from(2)], &fs, &g).unwrap();
        assert_eq!(out.h, u(&[2]));
        assert_eq!(out.cert.expand(), MPoly::constant(1, Rat::from(2)));
        assert!(out.denominator_degrees.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rejects_non_polynomial_quotient() {
        assert_eq!(cassels_descent(&[Rat::one()], &[u(&[1])], &u(&[0, 1])), Err(Error::InexactDivision));
        assert_eq!(cassels_descent(&[Rat::one()], &[u(&[1])], &UPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn zero_weight_gets_zero_polynomial() {
        let out = cassels_descent(&[Rat::one(), Rat::zero()], &[u(&[0, 0, 1]), u(&[5])], &u(&[0, 1])).unwrap();
        assert!(out.cert.terms()[1].poly.is_zero());
    }

    #[test]
    fn random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (w, fs, g) = pythagorean_instance(&mut rng);
            let out = cassels_descent(&w, &fs, &g).unwrap();
            assert_eq!(out.cert.expand(), MPoly::from_upoly(&out.h, 1, 0));
            assert!(out.denominator_degrees.windows(2).all(|d| d[1] < d[0]));
            assert!(out.denominator_degrees.len() <= g.degree().unwrap() + 1);
        }
    }
}
