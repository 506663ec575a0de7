use std::collections::{BTreeMap, HashMap};

use crate::arith::{Rat, SymMat};
use crate::conic::degree_then_lex_desc;
use crate::error::{Error, Result};
use crate::poly::MPoly;

/// All exponent vectors in `n` variables of total degree at most `k`, in
/// ascending degree with ties broken by descending lexicographic order.
pub fn monomials_up_to(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, k, &mut cur, &mut out);
    out.sort_by(|a, b| degree_then_lex_desc(a, b));
    out
}

/// `c_0 + sum_k c_k y_k`, keyed by moment index; index 0 is the constant
/// since `y_0 = 1`.
pub type LinForm = BTreeMap<usize, Rat>;

/// One symmetric block whose entries are affine in the moments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmiBlock {
    pub g: MPoly,
    /// Position of `g` in the input list, `None` for the moment matrix.
    pub source: Option<usize>,
    /// Half degree `r` with `2 r + deg g <= d`.
    pub half_degree: u32,
    pub basis: Vec<Vec<u32>>,
    /// Upper triangle in row-major order.
    pub entries: Vec<LinForm>,
}

impl LmiBlock {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinForm {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let k = self.size();
        &self.entries[i * k - i * (i + 1) / 2 + j]
    }

    /// The block at a full moment vector (`y[0] = 1`).
    pub fn evaluate(&self, y: &[Rat]) -> SymMat {
        let k = self.size();
        let mut s = SymMat::zeros(k);
        for i in 0..k {
            for j in i..k {
                let v: Rat = self.entry(i, j).iter().map(|(&idx, c)| c * &y[idx]).sum();
                s.set(i, j, v);
            }
        }
        s
    }
}

/// Degree-`d` moment and localizing blocks for `g_0 = 1, g_1, ..., g_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LasserreRelaxation {
    pub n: usize,
    pub d: u32,
    pub gs: Vec<MPoly>,
    /// Moment index: `monomials[k]` is the exponent of `y_k`; `monomials[0] = 0`.
    pub monomials: Vec<Vec<u32>>,
    pub blocks: Vec<LmiBlock>,
}

impl LasserreRelaxation {
    /// Number of free moment variables `y_1..y_m`.
    pub fn num_vars(&self) -> usize {
        self.monomials.len() - 1
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(LmiBlock::size).collect()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m == exps)
    }

    /// `y_alpha = x^alpha`, the moment vector of the point evaluation at `x`.
    pub fn point_moments(&self, x: &[Rat]) -> Vec<Rat> {
        self.monomials.iter().map(|m| m.iter().zip(x).map(|(&e, xi)| xi.pow(e)).product()).collect()
    }

    pub fn evaluate(&self, y: &[Rat]) -> Vec<SymMat> {
        self.blocks.iter().map(|b| b.evaluate(y)).collect()
    }

    /// Linear functional `sum_alpha f_alpha y_alpha` as a form in the moments.
    pub fn linearize(&self, f: &MPoly) -> Result<LinForm> {
        let index: HashMap<&[u32], usize> = self.monomials.iter().enumerate().map(|(k, m)| (m.as_slice(), k)).collect();
        let mut out = LinForm::new();
        for (m, c) in f.terms() {
            let k = *index
                .get(m.exps())
                .ok_or_else(|| Error::Degree(format!("objective term of degree {} exceeds {}", m.degree(), self.d)))?;
            out.insert(k, c.clone());
        }
        Ok(out)
    }
}

/// Moment matrix and one localizing block per `g_i` with `0 < deg g_i <= d`
/// or nonzero constant `g_i`; zero polynomials and those of degree above
/// `d` are left out.
pub fn build_relaxation(n: usize, gs: &[MPoly], d: u32) -> Result<LasserreRelaxation> {
    if d == 0 {
        return Err(Error::Degree("relaxation degree must be at least 1".into()));
    }
    if let Some(g) = gs.iter().find(|g| g.nvars() != n) {
        return Err(Error::Dimension(format!("constraint in {} variables, expected {n}", g.nvars())));
    }
    let monomials = monomials_up_to(n, d);
    let index: HashMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut blocks = Vec::new();
    let one = MPoly::one(n);
    let kept = std::iter::once((None, &one))
        .chain(gs.iter().enumerate().map(|(i, g)| (Some(i), g)))
        .filter(|(_, g)| !g.is_zero() && g.total_degree().is_some_and(|k| k <= d));
    for (source, g) in kept {
        let r = (d - g.total_degree().expect("nonzero")) / 2;
        let basis = monomials_up_to(n, r);
        let k = basis.len();
        let mut entries = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            for j in i..k {
                let mut form = LinForm::new();
                for (m, c) in g.terms() {
                    let e: Vec<u32> = (0..n).map(|v| basis[i][v] + basis[j][v] + m.exps()[v]).collect();
                    let slot = form.entry(index[&e]).or_insert_with(Rat::zero);
                    *slot += c;
                }
                form.retain(|_, c| !c.is_zero());
                entries.push(form);
            }
        }
        blocks.push(LmiBlock { g: g.clone(), source, half_degree: r, basis, entries });
    }
    Ok(LasserreRelaxation { n, d, gs: gs.to_vec(), monomials, blocks })
}
