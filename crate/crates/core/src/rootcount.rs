//! Real-root counting with Hermite forms and Descartes' rule of signs.


use crate::arith::{Mat, Rat, SymMat};
use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::quadform::diagonalize;

/// Sign changes in the sequence of nonzero coefficients (zero for `0`).
pub fn sign_changes_of(f: &UPoly) -> usize {
    let signs: Vec<i32> = f.coeffs().iter().map(Rat::signum).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn sign_changes(f: &UPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(sign_changes_of(f))
}

/// `(sigma(f), sigma(f) mod 2)`: an upper bound on the number of positive
/// roots with multiplicity, and the parity that number shares.
pub fn positive_root_count_bound(f: &UPoly) -> Result<(usize, usize)> {
    let s = sign_changes(f)?;
    Ok((s, s % 2))
}

/// Companion matrix: ones on the subdiagonal, last column `-a_0..-a_{d-1}`.
pub fn companion(f: &UPoly) -> Result<Mat> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.degree().expect("monic is nonzero");
    let mut c = Mat::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            c.set(i + 1, i, Rat::one());
        }
        c.set(i, d - 1, -f.coeff(i));
    }
    Ok(c)
}

/// Hermite matrix of `f` with respect to `g` along with its trace sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteData {
    pub f: UPoly,
    pub g: UPoly,
    pub h: SymMat,
    /// `traces[k] = tr(g(C_f) C_f^k)` for `k = 0..=2d-2`.
    pub traces: Vec<Rat>,
}

/// `N * C_f`, computed as a column shift.
fn mul_companion(n: &Mat, f: &UPoly) -> Mat {
    let d = n.cols();
    let mut out = Mat::zeros(n.rows(), d);
    for i in 0..n.rows() {
        for j in 0..d - 1 {
            out.set(i, j, n.get(i, j + 1).clone());
        }
        let last: Rat = (0..d).filter(|&k| !f.coeff(k).is_zero()).map(|k| n.get(i, k) * f.coeff(k)).sum();
        out.set(i, d - 1, -last);
    }
    out
}

/// `g(C_f)` by Horner after reducing `g` modulo `f`.
fn eval_at_companion(g: &UPoly, f: &UPoly) -> Mat {
    let d = f.degree().expect("nonzero");
    let r = g.rem(f).expect("nonzero modulus");
    let mut acc = Mat::zeros(d, d);
    for c in r.coeffs().iter().rev() {
        acc = mul_companion(&acc, f);
        for i in 0..d {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    acc
}

pub fn hermite_form(f: &UPoly, g: &UPoly) -> Result<HermiteData> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.degree().expect("monic is nonzero");
    if d == 0 {
        return Err(Error::EmptyForm);
    }
    let mut m = eval_at_companion(g, f);
    let mut traces = Vec::with_capacity(2 * d - 1);
    for k in 0..(2 * d - 1) {
        if k > 0 {
            m = mul_companion(&m, f);
        }
        traces.push(m.trace());
    }
    let mut h = SymMat::zeros(d);
    for i in 0..d {
        for j in i..d {
            h.set(i, j, traces[i + j].clone());
        }
    }
    Ok(HermiteData { f: f.clone(), g: g.clone(), h, traces })
}

/// Monic normalization of a nonzero `f`; `None` for nonzero constants.
fn normalized(f: &UPoly) -> Result<Option<UPoly>> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(None),
        Some(_) => Ok(Some(f.monic())),
    }
}

/// Number of distinct real roots.
pub fn count_real_roots(f: &UPoly) -> Result<usize> {
    count_real_with_signs(f, &[])
}

/// Number of distinct complex roots.
pub fn count_complex_distinct(f: &UPoly) -> Result<usize> {
    match normalized(f)? {
        None => Ok(0),
        Some(fm) => Ok(diagonalize(&hermite_form(&fm, &UPoly::one())?.h).rank()),
    }
}

/// Number of distinct real roots `x` of `f` with `g_i(x) > 0` for all `i`.
pub fn count_real_with_signs(f: &UPoly, gs: &[UPoly]) -> Result<usize> {
    let Some(fm) = normalized(f)? else {
        return Ok(0);
    };
    let m = gs.len();
    assert!(m < 32, "too many side conditions");
    let reduced: Vec<UPoly> = gs.iter().map(|g| g.rem(&fm).expect("nonzero modulus")).collect();
    let squares: Vec<UPoly> = reduced.iter().map(|g| (g * g).rem(&fm).expect("nonzero modulus")).collect();
    let mut total: i64 = 0;
    for mask in 0..(1u32 << m) {
        let mut g = UPoly::one();
        for i in 0..m {
            let factor = if mask >> i & 1 == 1 { &squares[i] } else { &reduced[i] };
            g = (&g * factor).rem(&fm).expect("nonzero modulus");
        }
        total += diagonalize(&hermite_form(&fm, &g)?.h).signature();
    }
    let denom = 1i64 << m;
    debug_assert_eq!(total % denom, 0);
    Ok((total / denom) as usize)
}

/// `rank H(f) = signature H(f)` after monic normalization.
pub fn is_real_rooted(f: &UPoly) -> Result<bool> {
    match normalized(f)? {
        None => Ok(true),
        Some(fm) => {
            let dc = diagonalize(&hermite_form(&fm, &UPoly::one())?.h);
            Ok(dc.rank() as i64 == dc.signature())
        }
    }
}

/// Positive roots with multiplicity of a real-rooted `f`, equal to its
/// number of sign changes.
pub fn count_positive_roots_realrooted(f: &UPoly) -> Result<usize> {
    if !is_real_rooted(f)? {
        return Err(Error::NotRealRooted);
    }
    sign_changes(f)
}

/// Whether some real `x` satisfies `g_i(x) > 0` for every `i`.
pub fn decide_strict_system(gs: &[UPoly]) -> Result<bool> {
    if gs.iter().any(UPoly::is_zero) {
        return Err(Error::Input("a side condition is the zero polynomial".into()));
    }
    let g = gs.iter().fold(UPoly::one(), |acc, gi| &acc * gi);
    let f = &(&UPoly::one() - &(&g * &g)) * &g.derivative();
    if f.is_zero() {
        return Ok(gs.iter().all(|gi| gi.eval(&Rat::zero()).is_positive()));
    }
    Ok(count_real_with_signs(&f.monic(), gs)? > 0)
}

impl HermiteData {
    pub fn signature(&self) -> i64 {
        diagonalize(&self.h).signature()
    }

    pub fn rank(&self) -> usize {
        diagonalize(&self.h).rank()
    }

    pub fn is_hankel(&self) -> bool {
        let d = self.h.dim();
        (0..d).all(|i| (0..d).all(|j| *self.h.get(i, j) == self.traces[i + j]))
    }
}

/// Power sums `p_k = sum of k-th powers of the roots`, `k = 0..count`, by
/// Newton's identities.
pub fn power_sums(f: &UPoly, count: usize) -> Result<Vec<Rat>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let d = f.degree().expect("monic is nonzero");
    // f = X^d + c_1 X^{d-1} + ... + c_d
    let c = |i: usize| if i <= d { f.coeff(d - i) } else { Rat::zero() };
    let mut p = vec![Rat::from(d as i64)];
    for k in 1..count {
        let mut s = -(c(k) * Rat::from(k as i64));
        for i in 1..k {
            s -= c(i) * &p[k - i];
        }
        p.push(s);
    }
    Ok(p)
}
