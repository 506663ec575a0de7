mod mpoly;
mod parse;
mod upoly;

use std::fmt;

pub use mpoly::{Monomial, MPoly};
pub use parse::{parse_poly, parse_poly_auto, parse_upoly};
pub use upoly::UPoly;

use crate::arith::Rat;

/// Shared term printer: `c*mono` with the sign folded into the separator.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, c: &Rat, mono: &str, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let a = c.abs();
    if mono.is_empty() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{a}*{mono}")
    }
}
