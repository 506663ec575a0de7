//! Quadratic forms over the rationals: congruence diagonalization, inertia,
//! and positive semidefiniteness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{CharSign, Mat, Rat, SymMat};
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::rootcount::sign_changes_of;
use crate::sos::SosCert;

/// `M = P^T diag(D) P` with `P` invertible; the rows of `P` are the
/// coefficient vectors of the linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagCongruence {
    pub p: Mat,
    pub d: Vec<Rat>,
}

impl DiagCongruence {
    /// `P^T diag(D) P`.
    pub fn reconstruct(&self) -> Mat {
        let pt = self.p.transpose();
        let dp = Mat::diag(&self.d).mul(&self.p).expect("square");
        pt.mul(&dp).expect("square")
    }

    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn signature(&self) -> i64 {
        self.d.iter().map(|x| x.signum() as i64).sum()
    }
}

/// Counts of positive, negative and zero diagonal entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Congruence diagonalization by repeated square completion. A nonzero
/// diagonal pivot `a_ii` contributes `a_ii (row_i / a_ii . x)^2`; when the
/// remaining diagonal vanishes, a nonzero `a_ij` is split as
/// `2 c h1 h2 = c/2 (h1 + h2)^2 - c/2 (h1 - h2)^2`.
pub fn diagonalize(m: &SymMat) -> DiagCongruence {
    let n = m.dim();
    let mut a = m.rows();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut used = vec![false; n];

    loop {
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let lambda = a[i][i].clone();
            let l: Vec<Rat> = a[i].iter().map(|x| x / &lambda).collect();
            subtract_outer(&mut a, &lambda, &l);
            used[i] = true;
            rows.push(l);
            d.push(lambda);
            continue;
        }
        let pair = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = pair else { break };
        let c = a[i][j].clone();
        let h1: Vec<Rat> = a[j].iter().map(|x| x / &c).collect();
        let h2: Vec<Rat> = a[i].iter().map(|x| x / &c).collect();
        let l1: Vec<Rat> = h1.iter().zip(&h2).map(|(x, y)| x + y).collect();
        let l2: Vec<Rat> = h1.iter().zip(&h2).map(|(x, y)| x - y).collect();
        let half = &c / Rat::from(2);
        subtract_outer(&mut a, &half, &l1);
        subtract_outer(&mut a, &(-&half), &l2);
        used[i] = true;
        used[j] = true;
        rows.push(l1);
        rows.push(l2);
        d.push(half.clone());
        d.push(-half);
    }
    for (k, _) in used.iter().enumerate().filter(|(_, u)| !**u) {
        let mut e = vec![Rat::zero(); n];
        e[k] = Rat::one();
        rows.push(e);
        d.push(Rat::zero());
    }
    let p = if n == 0 { Mat::zeros(0, 0) } else { Mat::from_rows(rows).expect("square") };
    DiagCongruence { p, d }
}

/// Diagonalization of a general matrix, rejecting asymmetric input.
pub fn diagonalize_mat(m: &Mat) -> Result<DiagCongruence> {
    Ok(diagonalize(&SymMat::from_mat(m)?))
}

fn subtract_outer(a: &mut [Vec<Rat>], lambda: &Rat, l: &[Rat]) {
    for (i, li) in l.iter().enumerate() {
        if li.is_zero() {
            continue;
        }
        let s = lambda * li;
        for (j, lj) in l.iter().enumerate() {
            if !lj.is_zero() {
                a[i][j] -= &s * lj;
            }
        }
    }
}

pub fn inertia(m: &SymMat) -> Inertia {
    let dc = diagonalize(m);
    let positive = dc.d.iter().filter(|x| x.is_positive()).count();
    let negative = dc.d.iter().filter(|x| x.is_negative()).count();
    Inertia { positive, negative, zero: dc.d.len() - positive - negative }
}

pub fn rank(m: &SymMat) -> usize {
    diagonalize(m).rank()
}

/// Number of positive minus number of negative squares.
pub fn signature(m: &SymMat) -> i64 {
    diagonalize(m).signature()
}

/// Signature from sign changes of `h = det(M - X I)` and `h(-X)`. Exact
/// because `h` is real-rooted.
pub fn signature_descartes(m: &SymMat) -> i64 {
    let h = m.to_mat().charpoly(CharSign::Minus).expect("square");
    sign_changes_of(&h) as i64 - sign_changes_of(&h.compose_neg()) as i64
}

/// Every coefficient of `det(M + X I)` is nonnegative.
pub fn is_psd(m: &SymMat) -> bool {
    m.to_mat().charpoly(CharSign::Plus).expect("square").coeffs().iter().all(|c| !c.is_negative())
}

/// Every diagonal entry of a congruence diagonalization is nonnegative.
pub fn is_psd_by_diagonal(m: &SymMat) -> bool {
    diagonalize(m).d.iter().all(|x| !x.is_negative())
}

/// Every principal minor is nonnegative (exponential in the dimension).
pub fn is_psd_by_minors(m: &SymMat) -> bool {
    let n = m.dim();
    assert!(n < usize::BITS as usize, "dimension too large for minor enumeration");
    let full = m.to_mat();
    (1..(1usize << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        !full.principal_submatrix(&idx).det().expect("square").is_negative()
    })
}

/// Positive definite: psd and of full rank.
pub fn is_pd(m: &SymMat) -> bool {
    let dc = diagonalize(m);
    dc.d.iter().all(Rat::is_positive)
}

/// Writes `w^T M w` as `sum lambda_k l_k(w)^2` with `lambda_k > 0`, where `w`
/// is a vector of polynomials and each `l_k` has primitive integer
/// coefficients whose first nonzero entry is positive.
pub fn weighted_squares_in_basis(m: &SymMat, w: &[MPoly], nvars: usize) -> Result<SosCert> {
    if w.len() != m.dim() {
        return Err(Error::Dimension(format!("{} basis polynomials for dimension {}", w.len(), m.dim())));
    }
    let dc = diagonalize(m);
    if dc.d.iter().any(Rat::is_negative) {
        return Err(Error::NotPsd);
    }
    let mut cert = SosCert::empty(nvars);
    for (k, lambda) in dc.d.iter().enumerate() {
        if lambda.is_zero() {
            continue;
        }
        let (scale, coeffs) = primitive(dc.p.row(k));
        let mut poly = MPoly::zero(nvars);
        for (c, b) in coeffs.iter().zip(w) {
            if !c.is_zero() {
                poly = &poly + &b.scale(c);
            }
        }
        // lambda * (l)^2 = lambda / scale^2 * (scale * l)^2
        cert.push(lambda / (&scale * &scale), poly);
    }
    Ok(cert)
}

/// Same as [`weighted_squares_in_basis`] with `w` the monomials `x^v_i`.
pub fn weighted_square_decomposition(m: &SymMat, v: &[Vec<u32>]) -> Result<SosCert> {
    let nvars = v.first().map_or(0, Vec::len);
    if v.iter().any(|e| e.len() != nvars) {
        return Err(Error::Dimension("monomials of different lengths".into()));
    }
    let w: Vec<MPoly> = v.iter().map(|e| MPoly::monomial(e.clone(), Rat::one())).collect();
    weighted_squares_in_basis(m, &w, nvars)
}

/// Scale factor `s` and `s * l` with `s * l` a primitive integer vector whose
/// first nonzero entry is positive.
fn primitive(l: &[Rat]) -> (Rat, Vec<Rat>) {
    let lcm = l.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = l.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return (Rat::one(), l.to_vec());
    }
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let mut s = Rat::new(lcm, g);
    if lead_neg {
        s = -s;
    }
    let scaled = l.iter().map(|x| x * &s).collect();
    (s, scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::poly::parse_poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hyperbolic_example() -> SymMat {
        // 2X1X2 + 2X1X3 + 2X2X3 + 2X3X4
        SymMat::from_i64(&[&[0, 1, 1, 0], &[1, 0, 1, 0], &[1, 1, 0, 1], &[0, 0, 1, 0]])
    }

    pub(crate) fn random_sym(rng: &mut ChaCha8Rng, n: usize, zero_diag: bool) -> SymMat {
        let mut s = SymMat::zeros(n);
        for i in 0..n {
            for j in i..n {
                if i == j && zero_diag {
                    continue;
                }
                let v = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-4i64..=4) };
                s.set(i, j, Rat::new(v, rng.gen_range(1i64..=3)));
            }
        }
        s
    }

    #[test]
    fn hyperbolic_split_reproduces_known_diagonal() {
        let m = hyperbolic_example();
        let dc = diagonalize(&m);
        assert_eq!(dc.reconstruct(), m.to_mat());
        assert_eq!(dc.d, vec![rat(1, 2), rat(-1, 2), Rat::from(-2), rat(1, 2)]);
        let expected = Mat::from_rows(vec![
            vec![Rat::from(1), Rat::from(1), Rat::from(2), Rat::zero()],
            vec![Rat::from(1), Rat::from(-1), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), Rat::zero(), Rat::one(), rat(-1, 2)],
            vec![Rat::zero(), Rat::zero(), Rat::zero(), Rat::one()],
        ])
        .unwrap();
        assert_eq!(dc.p, expected);
        assert_eq!(rank(&m), 4);
        assert_eq!(signature(&m), 0);
        assert_eq!(signature_descartes(&m), 0);
    }

    #[test]
    fn identity_is_positive() {
        let dc = diagonalize(&SymMat::identity(3));
        assert!(dc.d.iter().all(Rat::is_positive));
        assert_eq!(signature(&SymMat::identity(5)), 5);
        assert_eq!(rank(&SymMat::identity(5)), 5);
    }

    #[test]
    fn asymmetric_is_rejected() {
        assert_eq!(diagonalize_mat(&Mat::from_i64(&[&[1, 2], &[0, 1]])), Err(Error::Asymmetric));
    }

    #[test]
    fn psd_examples() {
        let g = SymMat::from_i64(&[&[2, 1, -3], &[1, 5, 0], &[-3, 0, 5]]);
        assert!(is_psd(&g) && is_psd_by_diagonal(&g) && is_psd_by_minors(&g));
        let d = SymMat::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(!is_psd(&d));
    }

    #[test]
    fn gram_example_two_squares() {
        let g = SymMat::from_i64(&[&[2, 1, -3], &[1, 5, 0], &[-3, 0, 5]]);
        let v = vec![vec![2, 0], vec![1, 1], vec![0, 2]];
        let cert = weighted_square_decomposition(&g, &v).unwrap();
        let p = |s: &str| parse_poly(s, 2).unwrap();
        assert_eq!(cert.len(), 2);
        assert_eq!(cert.terms()[0].weight, rat(1, 2));
        assert_eq!(cert.terms()[0].poly, p("2*x^2 + x*y - 3*y^2"));
        assert_eq!(cert.terms()[1].weight, rat(1, 2));
        assert_eq!(cert.terms()[1].poly, p("3*x*y + y^2"));
        assert_eq!(cert.expand(), p("2*x^4 + 5*y^4 - x^2*y^2 + 2*x^3*y"));
    }

    #[test]
    fn zero_matrix_gives_empty_certificate() {
        let cert = weighted_square_decomposition(&SymMat::zeros(2), &[vec![1], vec![0]]).unwrap();
        assert!(cert.is_empty());
        assert_eq!(weighted_square_decomposition(&SymMat::from_i64(&[&[-1]]), &[vec![1]]), Err(Error::NotPsd));
    }

    #[test]
    fn random_congruence_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 0..60 {
            let m = random_sym(&mut rng, 5, k % 3 == 0);
            let dc = diagonalize(&m);
            assert_eq!(dc.reconstruct(), m.to_mat());
            assert!(!dc.p.det().unwrap().is_zero());
        }
    }

    #[test]
    fn random_gram_products_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let data = (0..12).map(|_| Rat::from(rng.gen_range(-3i64..=3))).collect();
            let a = Mat::new(3, 4, data).unwrap();
            let ata = SymMat::from_mat(&a.transpose().mul(&a).unwrap()).unwrap();
            assert!(is_psd(&ata));
            let v: Vec<Vec<u32>> = (0..4).map(|i| vec![i, 3 - i]).collect();
            let cert = weighted_square_decomposition(&ata, &v).unwrap();
            assert!(cert.len() <= 3);
            assert_eq!(cert.expand(), crate::sos::gram_expand(&ata, &v, 2));
        }
    }

    proptest::proptest! {
        #[test]
        fn signature_methods_agree(seed in 0u64..1000, n in 0usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_sym(&mut rng, n, seed % 4 == 0);
            let dc = diagonalize(&m);
            proptest::prop_assert_eq!(dc.signature(), signature_descartes(&m));
            let h = m.to_mat().charpoly(CharSign::Minus).unwrap();
            let zero_mult = h.coeffs().iter().take_while(|c| c.is_zero()).count();
            proptest::prop_assert_eq!(dc.rank(), n - zero_mult);
        }

        #[test]
        fn psd_criteria_agree(seed in 0u64..1000, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_sym(&mut rng, n, false);
            let e = is_psd(&m);
            proptest::prop_assert_eq!(e, is_psd_by_diagonal(&m));
            proptest::prop_assert_eq!(e, is_psd_by_minors(&m));
        }

        #[test]
        fn sylvester_invariance(seed in 0u64..500, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_sym(&mut rng, n, false);
            let data = (0..n * n).map(|_| Rat::from(rng.gen_range(-3i64..=3))).collect();
            let q = Mat::new(n, n, data).unwrap();
            proptest::prop_assume!(!q.det().unwrap().is_zero());
            let moved = SymMat::from_mat(&q.transpose().mul(&m.to_mat()).unwrap().mul(&q).unwrap()).unwrap();
            proptest::prop_assert_eq!(inertia(&moved), inertia(&m));
        }
    }
}
