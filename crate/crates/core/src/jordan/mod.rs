//! Generic engine for finite-dimensional real Jordan algebras given by
//! structure constants.

mod algebra;
mod decompose;
mod identities;

pub use algebra::{Element, JordanAlgebra, JordanCheck, JordanError, LinOp, DEFAULT_SEED};
pub use decompose::Ideal;

