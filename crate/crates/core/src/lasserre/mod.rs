//! Truncated quadratic modules and their moment relaxations: block
//! construction, SDPA output, exact membership certificates and bisection
//! lower bounds.

mod bisect;
mod module;
mod relaxation;
mod sdpa;

pub use bisect::{lower_bound_bisect, BisectSettings, Bisection};
pub use module::{
    find_module_cert, find_module_cert_with, module_blocks, sos_only, verify_module_membership, ModuleCert,
    ModuleCertJson, ModuleRejection,
};
pub use relaxation::{build_relaxation, monomials_up_to, LasserreRelaxation, LinForm, LmiBlock};
pub use sdpa::{emit_sdpa, parse_sdpa, to_sdpa, SdpaEntry, SdpaProblem};
