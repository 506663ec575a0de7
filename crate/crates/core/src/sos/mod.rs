//! Sums of squares: Gram families, numeric search with exact rounding, and
//! univariate denominator removal.

mod cassels;
mod cert;
mod gram;
pub mod numeric;
mod rationalize;

pub use cassels::{cassels_descent, pythagorean_instance, CasselsOutput};
pub use cert::{gram_expand, verify_gram, CertJson, GramJson, Rejection, SosCert, SosTerm, TermJson, TermsJson};
pub use gram::{
    find_gram, find_gram_with, find_sos, verify_sos, SosCertificate, gram_family, numeric_gap, quick_obstruction, solve_blocks, BlockSolution, GramBlock,
    GramCert, GramFamily, InfeasibleReason, Outcome, SearchSettings,
};
pub use rationalize::{denominator_ladder, numeric_kernel, rational_subspace, round_vec};
