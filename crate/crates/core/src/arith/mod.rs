mod mat;
mod rat;

pub use mat::{CharSign, Mat, SymMat};
pub use rat::{rat, Rat};
