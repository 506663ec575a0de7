use serde::{Deserialize, Serialize};

use super::relaxation::monomials_up_to;
use crate::error::{Error, Result};
use crate::poly::{parse_poly, MPoly};
use crate::sos::{solve_blocks, GramBlock, Outcome, SearchSettings, SosCert, TermsJson};

/// `f = sum_i sigma_i g_i` with `g_0 = 1` and weighted-square `sigma_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCert {
    /// `sigmas[0]` multiplies 1, `sigmas[i]` multiplies `gs[i - 1]`.
    pub sigmas: Vec<SosCert>,
}

impl ModuleCert {
    pub fn expand(&self, gs: &[MPoly]) -> MPoly {
        let mut out = self.sigmas[0].expand();
        for (s, g) in self.sigmas[1..].iter().zip(gs) {
            out = &out + &(&s.expand() * g);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleRejection {
    /// Expected one multiplier per constraint plus one for the constant.
    Count { expected: usize, found: usize },
    NegativeWeight { sigma: usize, term: usize },
    /// `2 deg p + deg g_i` exceeds the relaxation degree.
    DegreeCap { sigma: usize, term: usize },
    Ring,
    Mismatch,
}

impl std::fmt::Display for ModuleRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleRejection::Count { expected, found } => write!(f, "expected {expected} multipliers, found {found}"),
            ModuleRejection::NegativeWeight { sigma, term } => write!(f, "term {term} of multiplier {sigma} has a negative weight"),
            ModuleRejection::DegreeCap { sigma, term } => write!(f, "term {term} of multiplier {sigma} exceeds the degree cap"),
            ModuleRejection::Ring => write!(f, "polynomials over different variable counts"),
            ModuleRejection::Mismatch => write!(f, "the combination does not expand to the target"),
        }
    }
}

/// Exact membership check of `f` in the degree-`d` truncated quadratic module.
pub fn verify_module_membership(
    f: &MPoly,
    gs: &[MPoly],
    d: u32,
    cert: &ModuleCert,
) -> std::result::Result<(), ModuleRejection> {
    if cert.sigmas.len() != gs.len() + 1 {
        return Err(ModuleRejection::Count { expected: gs.len() + 1, found: cert.sigmas.len() });
    }
    let n = f.nvars();
    if gs.iter().any(|g| g.nvars() != n) || cert.sigmas.iter().any(|s| s.nvars() != n) {
        return Err(ModuleRejection::Ring);
    }
    let one = MPoly::one(n);
    for (si, (sigma, g)) in cert.sigmas.iter().zip(std::iter::once(&one).chain(gs)).enumerate() {
        for (ti, t) in sigma.terms().iter().enumerate() {
            if t.weight.is_negative() {
                return Err(ModuleRejection::NegativeWeight { sigma: si, term: ti });
            }
            if t.weight.is_zero() || t.poly.is_zero() {
                continue;
            }
            let dp = t.poly.total_degree().expect("nonzero");
            match g.total_degree() {
                Some(dg) if 2 * dp + dg <= d => {}
                _ => return Err(ModuleRejection::DegreeCap { sigma: si, term: ti }),
            }
        }
    }
    if &cert.expand(gs) != f {
        return Err(ModuleRejection::Mismatch);
    }
    Ok(())
}

/// `{ "target": text, "gs": [text, ...], "degree": d, "sigmas": [{ "terms": [...] }, ...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleCertJson {
    pub target: String,
    pub gs: Vec<String>,
    pub degree: u32,
    pub sigmas: Vec<TermsJson>,
}

impl ModuleCertJson {
    pub fn new(f: &MPoly, gs: &[MPoly], d: u32, cert: &ModuleCert) -> ModuleCertJson {
        ModuleCertJson {
            target: f.to_string(),
            gs: gs.iter().map(ToString::to_string).collect(),
            degree: d,
            sigmas: cert.sigmas.iter().map(SosCert::to_json).collect(),
        }
    }

    /// Target, constraints and certificate over `nvars` variables.
    pub fn decode(&self, nvars: usize) -> Result<(MPoly, Vec<MPoly>, ModuleCert)> {
        let f = parse_poly(&self.target, nvars)?;
        let gs = self.gs.iter().map(|g| parse_poly(g, nvars)).collect::<Result<Vec<_>>>()?;
        let sigmas = self.sigmas.iter().map(|s| SosCert::from_json(s, nvars)).collect::<Result<Vec<_>>>()?;
        Ok((f, gs, ModuleCert { sigmas }))
    }
}

/// Gram blocks of the degree-`d` module: one per usable multiplier, with
/// the index of the multiplier (0 for the constant).
pub fn module_blocks(n: usize, gs: &[MPoly], d: u32) -> Vec<(usize, GramBlock)> {
    let one = MPoly::one(n);
    std::iter::once(&one)
        .chain(gs)
        .enumerate()
        .filter_map(|(i, g)| {
            let dg = g.total_degree().filter(|&k| k <= d)?;
            let r = (d - dg) / 2;
            Some((i, GramBlock::new(g.clone(), monomials_up_to(n, r))))
        })
        .collect()
}

/// Searches for a degree-`d` module certificate of `f`.
pub fn find_module_cert_with(f: &MPoly, gs: &[MPoly], d: u32, settings: &SearchSettings) -> Result<Outcome<ModuleCert>> {
    let n = f.nvars();
    if gs.iter().any(|g| g.nvars() != n) {
        return Err(Error::Dimension("constraints over a different ring".into()));
    }
    if f.total_degree().is_some_and(|k| k > d) {
        return Err(Error::Degree(format!("target degree exceeds {d}")));
    }
    let (slots, blocks): (Vec<usize>, Vec<GramBlock>) = module_blocks(n, gs, d).into_iter().unzip();
    Ok(match solve_blocks(f, blocks, settings)? {
        Outcome::Certified(sol) => {
            let mut sigmas = vec![SosCert::empty(n); gs.len() + 1];
            for (slot, c) in slots.into_iter().zip(sol.certificates()) {
                sigmas[slot] = c;
            }
            let cert = ModuleCert { sigmas };
            verify_module_membership(f, gs, d, &cert).expect("exact certificate");
            Outcome::Certified(cert)
        }
        Outcome::Infeasible(r) => Outcome::Infeasible(r),
        Outcome::Unknown(s) => Outcome::Unknown(s),
    })
}

pub fn find_module_cert(f: &MPoly, gs: &[MPoly], d: u32) -> Result<Outcome<ModuleCert>> {
    find_module_cert_with(f, gs, d, &SearchSettings::default())
}

/// Converts a plain sum-of-squares certificate into a module certificate
/// using only the constant multiplier.
pub fn sos_only(cert: SosCert, ngs: usize) -> ModuleCert {
    let n = cert.nvars();
    let mut sigmas = vec![cert];
    sigmas.extend(std::iter::repeat_with(|| SosCert::empty(n)).take(ngs));
    ModuleCert { sigmas }
}
