pub mod calabi;
pub mod catalog;
pub mod composition;
pub mod hypersurface;
pub mod io;
pub mod jordan;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod triple;

pub use rational::Rational;
pub use scalar::{Mode, Scalar, TOL};
