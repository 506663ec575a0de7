//! Exact real-algebraic toolkit over the rationals: root counting, quadratic
//! forms, conic duality, sums-of-squares certificates and moment relaxations.

pub mod arith;
pub mod conic;
pub mod error;
pub mod poly;

pub use arith::{rat, CharSign, Mat, Rat, SymMat};
pub use error::{Error, Result};
pub use poly::{parse_poly, parse_poly_auto, parse_upoly, MPoly, Monomial, UPoly};
pub mod lasserre;
pub mod quadform;
pub mod rootcount;
pub mod sos;
