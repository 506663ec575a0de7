//! Conic representation by exact pivoting, with convex-hull membership,
//! halved Newton polytopes and linear Nichtnegativstellensätze built on it.

use std::cmp::Ordering;

use crate::arith::{Mat, Rat};
use crate::error::{Error, Result};
use crate::poly::MPoly;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Outcome of writing `x` as a nonnegative combination of `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicOutcome {
    /// `x = sum coeffs[k] * E[basis[k]]` with nonnegative coefficients and
    /// linearly independent `E[basis[k]]`.
    Member { basis: Vec<usize>, coeffs: Vec<Rat> },
    /// `functional` is nonnegative on `E`, negative on `x` and vanishes on the
    /// linearly independent vectors `E[kernel[k]]`, one fewer than `rank E`.
    Separated { functional: Vec<Rat>, kernel: Vec<usize> },
    /// `x` is outside `span E`; `functional` vanishes on `E` and is negative
    /// on `x`.
    OutsideSpan { functional: Vec<Rat> },
}

/// Result when `E` spans the ambient space: only the first two cases occur.
pub type ConicResult = ConicOutcome;

impl ConicOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, ConicOutcome::Member { .. })
    }

    /// Exact check of the postconditions of whichever case this is.
    pub fn verify(&self, e: &[Vec<Rat>], x: &[Rat]) -> bool {
        match self {
            ConicOutcome::Member { basis, coeffs } => {
                if basis.len() != coeffs.len() || coeffs.iter().any(Rat::is_negative) {
                    return false;
                }
                let mut sum = vec![Rat::zero(); x.len()];
                for (&b, c) in basis.iter().zip(coeffs) {
                    for (s, v) in sum.iter_mut().zip(&e[b]) {
                        *s += c * v;
                    }
                }
                sum == x && independent(e, basis)
            }
            ConicOutcome::Separated { functional, kernel } => {
                e.iter().all(|v| !dot(functional, v).is_negative())
                    && dot(functional, x).is_negative()
                    && kernel.iter().all(|&k| dot(functional, &e[k]).is_zero())
                    && independent(e, kernel)
                    && kernel.len() + 1 == rank_of(e, x.len())
            }
            ConicOutcome::OutsideSpan { functional } => {
                e.iter().all(|v| dot(functional, v).is_zero()) && dot(functional, x).is_negative()
            }
        }
    }
}

fn rank_of(e: &[Vec<Rat>], n: usize) -> usize {
    if e.is_empty() {
        return 0;
    }
    Mat::from_rows(e.to_vec()).map(|m| m.rank()).unwrap_or(n)
}

fn independent(e: &[Vec<Rat>], idx: &[usize]) -> bool {
    if idx.is_empty() {
        return true;
    }
    let rows: Vec<Vec<Rat>> = idx.iter().map(|&k| e[k].clone()).collect();
    Mat::from_rows(rows).map(|m| m.rank() == idx.len()).unwrap_or(false)
}

fn check_dims(e: &[Vec<Rat>], x: &[Rat]) -> Result<()> {
    if let Some(v) = e.iter().find(|v| v.len() != x.len()) {
        return Err(Error::Dimension(format!("vector of length {} in a space of dimension {}", v.len(), x.len())));
    }
    Ok(())
}

/// Pivoting with least-index choices. Vectors outside the span of `E` are
/// reported with a separating functional taken from a complement.
pub fn conic_decompose(e: &[Vec<Rat>], x: &[Rat]) -> Result<ConicOutcome> {
    check_dims(e, x)?;
    let n = x.len();

    // greedy basis of span E in index order, completed by unit vectors
    let mut basis: Vec<usize> = Vec::new();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for (k, v) in e.iter().enumerate() {
        cols.push(v.clone());
        if rank_of(&cols, n) == cols.len() {
            basis.push(k);
        } else {
            cols.pop();
        }
    }
    let r = basis.len();
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut unit = vec![Rat::zero(); n];
        unit[k] = Rat::one();
        cols.push(unit);
        if rank_of(&cols, n) < cols.len() {
            cols.pop();
        }
    }

    loop {
        // rows of T^{-1} are the dual functionals of the current basis
        let t = Mat::from_rows(cols.clone())?.transpose();
        let tinv = if n == 0 { Mat::zeros(0, 0) } else { t.inverse().expect("basis") };
        let coords = tinv.mul_vec(x)?;
        if let Some(k) = (r..n).find(|&k| !coords[k].is_zero()) {
            let mut functional = tinv.row(k).to_vec();
            if coords[k].is_positive() {
                functional.iter_mut().for_each(|c| *c = -c.clone());
            }
            return Ok(finish(ConicOutcome::OutsideSpan { functional }, e, x));
        }
        let negative = (0..r).filter(|&p| coords[p].is_negative()).min_by_key(|&p| basis[p]);
        let Some(pos) = negative else {
            let mut order: Vec<usize> = (0..r).collect();
            order.sort_by_key(|&p| basis[p]);
            let outcome = ConicOutcome::Member {
                basis: order.iter().map(|&p| basis[p]).collect(),
                coeffs: order.iter().map(|&p| coords[p].clone()).collect(),
            };
            return Ok(finish(outcome, e, x));
        };
        let functional = tinv.row(pos).to_vec();
        match e.iter().position(|v| dot(&functional, v).is_negative()) {
            None => {
                let mut kernel: Vec<usize> = (0..r).filter(|&p| p != pos).map(|p| basis[p]).collect();
                kernel.sort_unstable();
                return Ok(finish(ConicOutcome::Separated { functional, kernel }, e, x));
            }
            Some(w) => {
                basis[pos] = w;
                cols[pos] = e[w].clone();
            }
        }
    }
}

fn finish(outcome: ConicOutcome, e: &[Vec<Rat>], x: &[Rat]) -> ConicOutcome {
    assert!(outcome.verify(e, x), "pivoting produced an invalid result");
    outcome
}

/// Conic representation for a family `E` that spans the ambient space.
pub fn conic_representation(e: &[Vec<Rat>], x: &[Rat]) -> Result<ConicResult> {
    check_dims(e, x)?;
    if rank_of(e, x.len()) < x.len() {
        return Err(Error::Span);
    }
    conic_decompose(e, x)
}

/// Whether `alpha` lies in the convex hull of `points`.
pub fn convex_membership(points: &[Vec<Rat>], alpha: &[Rat]) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::Input("empty point set".into()));
    }
    let lift = |p: &[Rat]| {
        let mut v = p.to_vec();
        v.push(Rat::one());
        v
    };
    let e: Vec<Vec<Rat>> = points.iter().map(|p| lift(p)).collect();
    check_dims(&e, &lift(alpha))?;
    Ok(conic_decompose(&e, &lift(alpha))?.is_member())
}

/// Ascending total degree, ties broken by descending lexicographic order, so
/// `x1` precedes `x2`.
pub fn degree_then_lex_desc(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

fn to_rat(e: &[u32]) -> Vec<Rat> {
    e.iter().map(|&k| Rat::from(k as i64)).collect()
}

/// Lattice points of half the Newton polytope of `f`.
pub fn newton_halved_lattice(f: &MPoly) -> Result<Vec<Vec<u32>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    let support: Vec<Vec<Rat>> = f.support().iter().map(|e| to_rat(e)).collect();
    let bounds: Vec<u32> = (0..n).map(|i| f.degree_in(i).div_ceil(2)).collect();
    let mins: Vec<u32> = (0..n).map(|i| f.terms().map(|(m, _)| m.exps()[i]).min().unwrap_or(0)).collect();
    let mut out = Vec::new();
    let mut point = vec![0u32; n];
    loop {
        let in_box = point.iter().zip(&mins).all(|(&b, &lo)| 2 * b >= lo);
        if in_box {
            let doubled: Vec<Rat> = point.iter().map(|&b| Rat::from(2 * b as i64)).collect();
            if convex_membership(&support, &doubled)? {
                out.push(point.clone());
            }
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == n {
                out.sort_by(|a, b| degree_then_lex_desc(a, b));
                return Ok(out);
            }
            if point[i] < bounds[i] {
                point[i] += 1;
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Support exponents of `f` that are not in the convex hull of the others.
pub fn newton_vertices(f: &MPoly) -> Result<Vec<Vec<u32>>> {
    let support = f.support();
    if support.len() <= 1 {
        return Ok(support);
    }
    let pts: Vec<Vec<Rat>> = support.iter().map(|e| to_rat(e)).collect();
    let mut out = Vec::new();
    for (k, e) in support.iter().enumerate() {
        let others: Vec<Vec<Rat>> = pts.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        if !convex_membership(&others, &pts[k])? {
            out.push(e.clone());
        }
    }
    Ok(out)
}

/// Outcome of the linear Nichtnegativstellensatz.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearNns {
    /// `f = lambda0 + sum lambdas[i] * l_i` with all coefficients nonnegative.
    Certificate { lambda0: Rat, lambdas: Vec<Rat> },
    /// A point where every `l_i` is nonnegative and `f` is negative.
    Witness(Vec<Rat>),
    /// `{l_i >= 0}` is empty: `-1 = lambda0 + sum lambdas[i] * l_i`.
    EmptySet { lambda0: Rat, lambdas: Vec<Rat> },
}

impl LinearNns {
    pub fn verify(&self, f: &MPoly, ls: &[MPoly]) -> bool {
        let expand = |lambda0: &Rat, lambdas: &[Rat]| {
            let mut sum = MPoly::constant(f.nvars(), lambda0.clone());
            for (c, l) in lambdas.iter().zip(ls) {
                sum = &sum + &l.scale(c);
            }
            sum
        };
        let nonneg = |lambda0: &Rat, lambdas: &[Rat]| {
            !lambda0.is_negative() && lambdas.len() == ls.len() && lambdas.iter().all(|c| !c.is_negative())
        };
        match self {
            LinearNns::Certificate { lambda0, lambdas } => nonneg(lambda0, lambdas) && expand(lambda0, lambdas) == *f,
            LinearNns::EmptySet { lambda0, lambdas } => {
                nonneg(lambda0, lambdas) && expand(lambda0, lambdas) == MPoly::constant(f.nvars(), Rat::from(-1))
            }
            LinearNns::Witness(x) => {
                ls.iter().all(|l| l.eval(x).is_ok_and(|v| !v.is_negative()))
                    && f.eval(x).is_ok_and(|v| v.is_negative())
            }
        }
    }
}

/// `(a0, a1, .., an)` for `a0 + sum a_i x_i`.
fn affine_vector(p: &MPoly, n: usize) -> Result<Vec<Rat>> {
    if p.total_degree().unwrap_or(0) > 1 {
        return Err(Error::Degree(format!("`{p}` is not affine-linear")));
    }
    if p.nvars() != n {
        return Err(Error::Dimension(format!("{} vs {} variables", p.nvars(), n)));
    }
    let mut v = vec![p.constant_term()];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        v.push(p.coeff(&e));
    }
    Ok(v)
}

fn spread(m: usize, basis: &[usize], coeffs: &[Rat]) -> (Rat, Vec<Rat>) {
    let mut all = vec![Rat::zero(); m + 1];
    for (&b, c) in basis.iter().zip(coeffs) {
        all[b] = c.clone();
    }
    let lambda0 = all.remove(0);
    (lambda0, all)
}

/// Decides whether the affine-linear `f` is nonnegative on
/// `{x : l_i(x) >= 0}`, returning a certificate of nonnegativity, a
/// violating point, or a proof that the set is empty.
pub fn linear_nns(f: &MPoly, ls: &[MPoly]) -> Result<LinearNns> {
    let n = f.nvars();
    let fv = affine_vector(f, n)?;
    let mut e = vec![{
        let mut one = vec![Rat::zero(); n + 1];
        one[0] = Rat::one();
        one
    }];
    for l in ls {
        e.push(affine_vector(l, n)?);
    }
    let m = ls.len();

    let mut minus_one = vec![Rat::zero(); n + 1];
    minus_one[0] = Rat::from(-1);
    let feasible = match conic_decompose(&e, &minus_one)? {
        ConicOutcome::Member { basis, coeffs } => {
            let (lambda0, lambdas) = spread(m, &basis, &coeffs);
            return Ok(LinearNns::EmptySet { lambda0, lambdas });
        }
        ConicOutcome::Separated { functional, .. } | ConicOutcome::OutsideSpan { functional } => {
            let phi0 = functional[0].clone();
            functional[1..].iter().map(|c| c / &phi0).collect::<Vec<Rat>>()
        }
    };

    let point = match conic_decompose(&e, &fv)? {
        ConicOutcome::Member { basis, coeffs } => {
            let (lambda0, lambdas) = spread(m, &basis, &coeffs);
            return Ok(LinearNns::Certificate { lambda0, lambdas });
        }
        ConicOutcome::Separated { functional, .. } | ConicOutcome::OutsideSpan { functional } => functional,
    };
    let x0 = point[0].clone();
    let witness: Vec<Rat> = if x0.is_positive() {
        point[1..].iter().map(|c| c / &x0).collect()
    } else {
        // recession direction: lf(l_i)(dir) >= 0 and lf(f)(dir) < 0
        let dir = &point[1..];
        let slope = dot(&fv[1..], dir);
        let fy = f.eval(&feasible)?;
        let lambda = Rat::max(Rat::zero(), &fy / -&slope) + Rat::one();
        feasible.iter().zip(dir).map(|(y, d)| y + &lambda * d).collect()
    };
    let out = LinearNns::Witness(witness);
    assert!(out.verify(f, ls), "witness construction failed");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn standard_basis_member() {
        let e = vec![v(&[1, 0]), v(&[0, 1])];
        let out = conic_representation(&e, &v(&[1, 1])).unwrap();
        assert_eq!(out, ConicOutcome::Member { basis: vec![0, 1], coeffs: v(&[1, 1]) });
    }

    #[test]
    fn standard_basis_separated() {
        let e = vec![v(&[1, 0]), v(&[0, 1])];
        let x = v(&[-1, 0]);
        let out = conic_representation(&e, &x).unwrap();
        assert!(out.verify(&e, &x));
        let ConicOutcome::Separated { functional, kernel } = out else { panic!("expected separation") };
        assert_eq!(functional, v(&[1, 0]));
        assert_eq!(kernel, vec![1]);
    }

    #[test]
    fn span_errors() {
        assert_eq!(conic_representation(&[v(&[1, 0])], &v(&[1, 0])), Err(Error::Span));
        assert_eq!(conic_representation(&[], &v(&[1])), Err(Error::Span));
        let out = conic_decompose(&[v(&[1, 0])], &v(&[0, 1])).unwrap();
        assert!(matches!(out, ConicOutcome::OutsideSpan { .. }));
        assert!(conic_decompose(&[v(&[1])], &v(&[1, 0])).is_err());
    }

    #[test]
    fn convex_examples() {
        let seg = [v(&[0]), v(&[2])];
        assert!(convex_membership(&seg, &v(&[1])).unwrap());
        let tri = [v(&[4, 2]), v(&[2, 4]), v(&[0, 0])];
        assert!(convex_membership(&tri, &v(&[2, 2])).unwrap());
        assert!(!convex_membership(&tri, &v(&[3, 0])).unwrap());
        assert!(convex_membership(&[], &v(&[0])).is_err());
    }

    #[test]
    fn halved_newton_examples() {
        let motzkin = parse_poly("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2).unwrap();
        assert_eq!(newton_halved_lattice(&motzkin).unwrap(), vec![vec![0, 0], vec![1, 1], vec![2, 1], vec![1, 2]]);
        let f = parse_poly("2*x^4 + 5*y^4 - x^2*y^2 + 2*x^3*y", 2).unwrap();
        assert_eq!(newton_halved_lattice(&f).unwrap(), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(newton_halved_lattice(&parse_poly("7", 3).unwrap()).unwrap(), vec![vec![0, 0, 0]]);
        assert!(newton_halved_lattice(&MPoly::zero(2)).is_err());
        assert_eq!(newton_vertices(&motzkin).unwrap().len(), 3);
    }

    #[test]
    fn linear_nns_examples() {
        let p = |s: &str| parse_poly(s, 1).unwrap();
        let out = linear_nns(&p("x"), &[p("x")]).unwrap();
        assert_eq!(out, LinearNns::Certificate { lambda0: Rat::zero(), lambdas: v(&[1]) });
        let out = linear_nns(&p("1 + x"), &[p("x"), p("-x")]).unwrap();
        assert_eq!(out, LinearNns::Certificate { lambda0: Rat::one(), lambdas: v(&[1, 0]) });
        let out = linear_nns(&p("-1"), &[p("x")]).unwrap();
        assert_eq!(out, LinearNns::Witness(v(&[0])));
        let out = linear_nns(&p("x"), &[p("x - 1"), p("-x")]).unwrap();
        assert!(matches!(out, LinearNns::EmptySet { .. }));
        assert!(out.verify(&p("x"), &[p("x - 1"), p("-x")]));
        assert!(matches!(linear_nns(&p("x^2"), &[]), Err(Error::Degree(_))));
    }

    #[test]
    fn linear_nns_recession_witness() {
        // S = {x >= 1}, f = 5 - x is negative far out on the ray
        let p = |s: &str| parse_poly(s, 1).unwrap();
        let out = linear_nns(&p("5 - x"), &[p("x - 1")]).unwrap();
        assert!(matches!(out, LinearNns::Witness(_)));
        assert!(out.verify(&p("5 - x"), &[p("x - 1")]));
    }

    fn exhaustive_member(e: &[Vec<Rat>], x: &[Rat]) -> bool {
        // some linearly independent subset writes x with nonnegative coefficients
        let m = e.len();
        for mask in 0u32..(1 << m) {
            let idx: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
            if idx.len() > x.len() || !independent(e, &idx) {
                continue;
            }
            if idx.is_empty() {
                if x.iter().all(Rat::is_zero) {
                    return true;
                }
                continue;
            }
            let a = Mat::from_rows(idx.iter().map(|&k| e[k].clone()).collect()).unwrap().transpose();
            if let Some(c) = a.solve(x).unwrap() {
                if c.iter().all(|t| !t.is_negative()) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn random_instances_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..150 {
            let m = rng.gen_range(0..=6);
            let e: Vec<Vec<Rat>> = (0..m).map(|_| (0..3).map(|_| Rat::from(rng.gen_range(-2i64..=2))).collect()).collect();
            let x: Vec<Rat> = (0..3).map(|_| Rat::from(rng.gen_range(-2i64..=2))).collect();
            let out = conic_decompose(&e, &x).unwrap();
            assert!(out.verify(&e, &x));
            assert_eq!(out.is_member(), exhaustive_member(&e, &x));
        }
    }

    #[test]
    fn nns_random_instances_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let r = |rng: &mut ChaCha8Rng| Rat::from(rng.gen_range(-3i64..=3));
            let mk = |rng: &mut ChaCha8Rng| {
                MPoly::from_terms(2, [(vec![0, 0], r(rng)), (vec![1, 0], r(rng)), (vec![0, 1], r(rng))])
            };
            let f = mk(&mut rng);
            let ls: Vec<MPoly> = (0..rng.gen_range(0..4)).map(|_| mk(&mut rng)).collect();
            let out = linear_nns(&f, &ls).unwrap();
            assert!(out.verify(&f, &ls), "{out:?} for {f} over {ls:?}");
        }
    }
}
