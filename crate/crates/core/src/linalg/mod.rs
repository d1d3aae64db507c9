//! Dense and sparse linear algebra over the two scalar backends.

mod expm;
mod mat;
mod span;

pub use expm::expm;
pub use mat::Mat;
pub use span::{kernel_of_images, Insert, SpanBasis};
