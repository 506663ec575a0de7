use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Rat, SymMat};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, MPoly, Monomial};
use crate::quadform::is_psd;

/// One weighted square `weight * poly^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosTerm {
    pub weight: Rat,
    pub poly: MPoly,
}

/// Weighted sum of squares `sum weight_k * p_k^2` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosCert {
    nvars: usize,
    terms: Vec<SosTerm>,
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },
    #[error("certificate does not expand to the target")]
    ExpansionMismatch,
    #[error("Gram matrix is not positive semidefinite")]
    NotPsd,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree cap exceeded in multiplier {index}")]
    DegreeCap { index: usize },
}

impl SosCert {
    pub fn new(nvars: usize, terms: Vec<SosTerm>) -> Result<SosCert> {
        if terms.iter().any(|t| t.poly.nvars() != nvars) {
            return Err(Error::Dimension("certificate term over a different ring".into()));
        }
        Ok(SosCert { nvars, terms })
    }

    pub fn empty(nvars: usize) -> SosCert {
        SosCert { nvars, terms: Vec::new() }
    }

    pub fn from_pairs(nvars: usize, pairs: Vec<(Rat, MPoly)>) -> Result<SosCert> {
        SosCert::new(nvars, pairs.into_iter().map(|(weight, poly)| SosTerm { weight, poly }).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[SosTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, weight: Rat, poly: MPoly) {
        assert_eq!(poly.nvars(), self.nvars, "certificate term over a different ring");
        self.terms.push(SosTerm { weight, poly });
    }

    /// `sum weight * poly^2`.
    pub fn expand(&self) -> MPoly {
        self.terms.iter().fold(MPoly::zero(self.nvars), |acc, t| &acc + &(&t.poly * &t.poly).scale(&t.weight))
    }

    /// Largest total degree among the squared polynomials.
    pub fn max_poly_degree(&self) -> Option<u32> {
        self.terms.iter().filter_map(|t| t.poly.total_degree()).max()
    }

    pub fn check_weights(&self) -> std::result::Result<(), Rejection> {
        match self.terms.iter().position(|t| t.weight.is_negative()) {
            Some(index) => Err(Rejection::NegativeWeight { index }),
            None => Ok(()),
        }
    }

    /// Exact verification that the certificate expands to `f`.
    pub fn verify(&self, f: &MPoly) -> std::result::Result<(), Rejection> {
        self.check_weights()?;
        if f.nvars() != self.nvars {
            return Err(Rejection::Shape(format!("{} vs {} variables", f.nvars(), self.nvars)));
        }
        if &self.expand() != f {
            return Err(Rejection::ExpansionMismatch);
        }
        Ok(())
    }

    pub fn to_json(&self) -> TermsJson {
        TermsJson {
            terms: self.terms.iter().map(|t| TermJson { weight: t.weight.clone(), poly: t.poly.to_string() }).collect(),
        }
    }

    pub fn from_json(json: &TermsJson, nvars: usize) -> Result<SosCert> {
        let terms = json
            .terms
            .iter()
            .map(|t| Ok(SosTerm { weight: t.weight.clone(), poly: parse_poly(&t.poly, nvars)? }))
            .collect::<Result<Vec<_>>>()?;
        SosCert::new(nvars, terms)
    }
}

/// `f = v^T G v` with `G` psd, checked exactly.
pub fn verify_gram(f: &MPoly, gram: &SymMat, monomials: &[Vec<u32>]) -> std::result::Result<(), Rejection> {
    if gram.dim() != monomials.len() {
        return Err(Rejection::Shape(format!("{} monomials for a {}-dim Gram matrix", monomials.len(), gram.dim())));
    }
    if monomials.iter().any(|m| m.len() != f.nvars()) {
        return Err(Rejection::Shape("monomial of the wrong length".into()));
    }
    if gram_expand(gram, monomials, f.nvars()) != *f {
        return Err(Rejection::ExpansionMismatch);
    }
    if !is_psd(gram) {
        return Err(Rejection::NotPsd);
    }
    Ok(())
}

/// The polynomial `v^T G v`.
pub fn gram_expand(gram: &SymMat, monomials: &[Vec<u32>], nvars: usize) -> MPoly {
    let mut terms = Vec::new();
    for i in 0..monomials.len() {
        for j in 0..monomials.len() {
            let g = gram.get(i, j);
            if !g.is_zero() {
                let m = Monomial::new(monomials[i].clone()).mul(&Monomial::new(monomials[j].clone()));
                terms.push((m.into_exps(), g.clone()));
            }
        }
    }
    MPoly::from_terms(nvars, terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: Rat,
    pub poly: String,
}

/// `{ "terms": [{ "weight": "p/q", "poly": text }, ...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermsJson {
    pub terms: Vec<TermJson>,
}

/// `{ "target": text, "monomials": [[e, ...], ...], "gram": [["p/q", ...], ...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramJson {
    pub target: String,
    pub monomials: Vec<Vec<u32>>,
    pub gram: Vec<Vec<Rat>>,
}

/// Either certificate shape; the Gram form is tried first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertJson {
    Gram(GramJson),
    Terms(TermsJson),
}

impl GramJson {
    pub fn new(target: &MPoly, monomials: &[Vec<u32>], gram: &SymMat) -> GramJson {
        GramJson { target: target.to_string(), monomials: monomials.to_vec(), gram: gram.rows() }
    }

    pub fn gram_matrix(&self) -> Result<SymMat> {
        SymMat::from_rows(self.gram.clone())
    }
}
