use super::module::{find_module_cert_with, module_blocks, ModuleCert};
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::sos::{numeric_gap, Outcome, SearchSettings};

/// Settings for [`lower_bound_bisect`].
#[derive(Clone, Copy, Debug)]
pub struct BisectSettings {
    pub search: SearchSettings,
    /// Projection gap below which `f - lambda` counts as feasible.
    pub gap_tol: f64,
    /// How many doublings the bracket search may take.
    pub max_expansions: u32,
}

impl Default for BisectSettings {
    fn default() -> BisectSettings {
        BisectSettings { search: SearchSettings::default(), gap_tol: 1e-6, max_expansions: 20 }
    }
}

/// Bracket `[lo, hi]` for the optimal value of the degree-`d` relaxation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub lo: Rat,
    pub hi: Rat,
    /// Certificate for `f - lo`; when absent `lo` is only numerically supported.
    pub cert: Option<ModuleCert>,
    pub iterations: usize,
}

impl Bisection {
    pub fn is_certified(&self) -> bool {
        self.cert.is_some()
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

fn shifted(f: &MPoly, lambda: &Rat) -> MPoly {
    f - &MPoly::constant(f.nvars(), lambda.clone())
}

fn looks_feasible(f: &MPoly, gs: &[MPoly], d: u32, lambda: &Rat, settings: &BisectSettings) -> Result<bool> {
    let blocks: Vec<_> = module_blocks(f.nvars(), gs, d).into_iter().map(|(_, b)| b).collect();
    Ok(numeric_gap(&shifted(f, lambda), &blocks, &settings.search)? < settings.gap_tol)
}

/// Bisection on `lambda` for membership of `f - lambda` in the degree-`d`
/// truncated quadratic module. A value counts as feasible when the numeric
/// projections converge or an exact certificate is found; the returned `lo`
/// is the largest feasible value that has an exact certificate. `hi` is
/// only numerically supported. Without a given bracket, one is grown from 0
/// by doubling.
pub fn lower_bound_bisect(
    f: &MPoly,
    gs: &[MPoly],
    d: u32,
    iterations: usize,
    bracket: Option<(Rat, Rat)>,
    settings: &BisectSettings,
) -> Result<Outcome<Bisection>> {
    if f.total_degree().is_some_and(|k| k > d) {
        return Err(Error::Degree(format!("objective degree exceeds {d}")));
    }
    // numeric test first, exact certification when it looks infeasible
    let decide = |l: &Rat| -> Result<Option<Option<ModuleCert>>> {
        if looks_feasible(f, gs, d, l, settings)? {
            return Ok(Some(None));
        }
        Ok(find_module_cert_with(&shifted(f, l), gs, d, &settings.search)?.certified().map(Some))
    };
    let mut tested: Vec<(Rat, Option<ModuleCert>)> = Vec::new();
    let (mut lo, mut hi) = match bracket {
        Some((lo, hi)) if lo < hi => (lo, hi),
        Some(_) => return Err(Error::Input("bracket must satisfy lo < hi".into())),
        None => {
            let mut found = None;
            let zero = Rat::zero();
            let mut step = Rat::one();
            if let Some(c) = decide(&zero)? {
                tested.push((zero.clone(), c));
                let mut lo = zero;
                for _ in 0..settings.max_expansions {
                    match decide(&step)? {
                        Some(c) => tested.push((step.clone(), c)),
                        None => {
                            found = Some((lo, step));
                            break;
                        }
                    }
                    lo = step.clone();
                    step = &step * &Rat::from(2);
                }
            } else {
                let mut hi = zero;
                for _ in 0..settings.max_expansions {
                    let cand = -step.clone();
                    if let Some(c) = decide(&cand)? {
                        tested.push((cand.clone(), c));
                        found = Some((cand, hi));
                        break;
                    }
                    hi = cand;
                    step = &step * &Rat::from(2);
                }
            }
            match found {
                Some(b) => b,
                None => return Ok(Outcome::Unknown("no bracket found".into())),
            }
        }
    };
    if tested.is_empty() {
        tested.push((lo.clone(), None));
    }

    let half = Rat::new(1, 2);
    for _ in 0..iterations {
        let mid = &(&lo + &hi) * &half;
        match decide(&mid)? {
            Some(c) => {
                lo = mid.clone();
                tested.push((mid, c));
            }
            None => hi = mid,
        }
    }

    for (l, cert) in tested.into_iter().rev() {
        let cert = match cert {
            Some(c) => Some(c),
            None => find_module_cert_with(&shifted(f, &l), gs, d, &settings.search)?.certified(),
        };
        if let Some(cert) = cert {
            return Ok(Outcome::Certified(Bisection { lo: l, hi, cert: Some(cert), iterations }));
        }
    }
    Ok(Outcome::Certified(Bisection { lo, hi, cert: None, iterations }))
}
