use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::UPoly;
use crate::arith::Rat;
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically: first by total
/// degree, then lexicographically with `x1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exps(self) -> Vec<u32> {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.0.iter().zip(point).filter(|(e, _)| **e > 0).map(|(e, x)| x.pow(*e)).product()
    }

    fn render(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals. No zero coefficient
/// is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> MPoly {
        MPoly::from_terms(nvars, [(vec![0; nvars], c)])
    }

    /// The variable with 0-based index `i`. Panics when out of range.
    pub fn var(nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars, "variable index out of range");
        MPoly::from_terms(nvars, [(Monomial::var(nvars, i).0, Rat::one())])
    }

    pub fn monomial(exps: Vec<u32>, c: Rat) -> MPoly {
        let n = exps.len();
        MPoly::from_terms(n, [(exps, c)])
    }

    /// Sums like terms; exponent vectors must have length `nvars`.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn from_upoly(u: &UPoly, nvars: usize, var: usize) -> MPoly {
        MPoly::from_terms(
            nvars,
            u.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Univariate view; every variable other than `var` must be absent.
    pub fn to_upoly_in(&self, var: usize) -> Result<UPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return Err(Error::Input("polynomial is not univariate".into()));
            }
            let k = m.0.get(var).copied().unwrap_or(0) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rat::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    pub fn to_upoly(&self) -> Result<UPoly> {
        self.to_upoly_in(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Exponent vectors of the support, ascending graded-lex.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|m| m.0.clone()).collect()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!("point of length {} for {} variables", point.len(), self.nvars)));
        }
        Ok(self.terms.iter().map(|(m, c)| c * m.eval(point)).sum())
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64() * m.0.iter().zip(point).map(|(&e, x)| x.powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Partial derivative with respect to the variable of 0-based index `i`.
    pub fn derivative(&self, i: usize) -> Result<MPoly> {
        if i >= self.nvars {
            return Err(Error::VariableIndex { index: i, nvars: self.nvars });
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[i] -= 1;
            out.add_term(Monomial(d), c * Rat::from(e as i64));
        }
        Ok(out)
    }

    /// Sum of the terms of top total degree; `lf(0) = 0`.
    pub fn leading_form(&self) -> MPoly {
        let Some(d) = self.total_degree() else {
            return self.clone();
        };
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Homogenization with a new variable `X0` prepended at index 0, so
    /// `f*(1, p) = f(p)`. The zero polynomial maps to zero.
    pub fn homogenize(&self) -> MPoly {
        let d = self.total_degree().unwrap_or(0);
        let mut out = MPoly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = Vec::with_capacity(self.nvars + 1);
            e.push(d - m.degree());
            e.extend_from_slice(&m.0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Sets the variable at index 0 to one and drops it.
    pub fn dehomogenize(&self) -> Result<MPoly> {
        if self.nvars == 0 {
            return Err(Error::Dimension("no variable to dehomogenize".into()));
        }
        let mut out = MPoly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            out.add_term(Monomial(m.0[1..].to_vec()), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `subs[i]` for the i-th variable. All substitutes must share
    /// one variable count, which becomes that of the result.
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly> {
        if subs.len() != self.nvars {
            return Err(Error::Dimension(format!("{} substitutes for {} variables", subs.len(), self.nvars)));
        }
        let m = subs.first().map_or(0, MPoly::nvars);
        if subs.iter().any(|s| s.nvars != m) {
            return Err(Error::Dimension("substitutes over different rings".into()));
        }
        let mut out = MPoly::zero(m);
        for (mono, c) in &self.terms {
            let mut t = MPoly::constant(m, c.clone());
            for (s, &e) in subs.iter().zip(&mono.0) {
                if e > 0 {
                    t = &t * &s.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Same polynomial in a ring with `n` variables; fails if a dropped
    /// variable occurs.
    pub fn with_nvars(&self, n: usize) -> Result<MPoly> {
        let mut out = MPoly::zero(n);
        for (m, c) in &self.terms {
            if m.0.iter().skip(n).any(|&e| e > 0) {
                return Err(Error::VariableIndex { index: n, nvars: n });
            }
            let mut e = m.0.clone();
            e.resize(n, 0);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    fn check_same_ring(&self, other: &MPoly) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
    }
}

impl fmt::Display for MPoly {
    /// Graded-lex descending, variables named `x1..xn`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            super::write_term(f, c, &m.render(), k == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_same_ring(rhs);
        let mut out = MPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> MPoly {
        parse_poly(s, n).unwrap()
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = MPoly> {
        proptest::collection::vec((proptest::collection::vec(0u32..4, nvars), -5i64..5, 1i64..4), 0..5).prop_map(
            move |ts| MPoly::from_terms(nvars, ts.into_iter().map(|(e, a, b)| (e, Rat::new(a, b)))),
        )
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let f = p("1 + x2 + x1 + x2^2 + x1*x2 + x1^2", 2);
        assert_eq!(f.to_string(), "x1^2 + x1*x2 + x2^2 + x1 + x2 + 1");
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^2*y", 2).derivative(0).unwrap(), p("2*x*y", 2));
        assert!(p("7", 2).derivative(1).unwrap().is_zero());
        assert_eq!(p("x", 1).derivative(1), Err(Error::VariableIndex { index: 1, nvars: 1 }));
    }

    #[test]
    fn homogenize_examples() {
        assert_eq!(p("x + 1", 1).homogenize(), p("x2 + x1", 2));
        let motzkin = p("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2);
        let form = p("x2^4*x3^2 + x2^2*x3^4 - 3*x1^2*x2^2*x3^2 + x1^6", 3);
        assert_eq!(motzkin.homogenize(), form);
        assert!(MPoly::zero(2).homogenize().is_zero());
    }

    #[test]
    fn leading_form_examples() {
        assert_eq!(p("x^2 + x", 1).leading_form(), p("x^2", 1));
        assert!(MPoly::zero(1).leading_form().is_zero());
    }

    #[test]
    fn eval_example() {
        let f = p("x^2 + y", 2);
        assert_eq!(f.eval(&[Rat::from(2), Rat::from(1)]).unwrap(), Rat::from(5));
        assert!(f.eval(&[Rat::from(2)]).is_err());
    }

    #[test]
    fn compose_cubes_variables() {
        let f = p("x^2*y + 1", 2);
        let cubes = [p("x^3", 2), p("y^3", 2)];
        assert_eq!(f.compose(&cubes).unwrap(), p("x^6*y^3 + 1", 2));
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn degree_is_additive(a in arb_poly(3), b in arb_poly(3)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let d = (&a * &b).total_degree().unwrap();
            prop_assert_eq!(d, a.total_degree().unwrap() + b.total_degree().unwrap());
            prop_assert_eq!((&a * &b).leading_form(), &a.leading_form() * &b.leading_form());
        }

        #[test]
        fn homogenization_laws(a in arb_poly(2), b in arb_poly(2), x in -4i64..4, y in -4i64..4) {
            prop_assert_eq!(a.homogenize().dehomogenize().unwrap(), a.clone());
            let pt = [Rat::from(x), Rat::from(y)];
            let hp = [Rat::one(), Rat::from(x), Rat::from(y)];
            prop_assert_eq!(a.homogenize().eval(&hp).unwrap(), a.eval(&pt).unwrap());
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).homogenize(), &a.homogenize() * &b.homogenize());
        }

        #[test]
        fn print_parse_roundtrip(a in arb_poly(3)) {
            prop_assert_eq!(parse_poly(&a.to_string(), 3).unwrap(), a);
        }

        #[test]
        fn derivative_is_termwise(a in arb_poly(2)) {
            let d = a.derivative(0).unwrap();
            for (m, c) in a.terms() {
                let e = m.exps();
                if e[0] > 0 {
                    prop_assert_eq!(d.coeff(&[e[0] - 1, e[1]]), c * Rat::from(e[0] as i64));
                }
            }
            prop_assert!(d.num_terms() <= a.num_terms());
        }
    }
}
