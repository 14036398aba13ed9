//! Small numerical kernels shared by the solver and the profile builders.

pub mod interp;
pub mod linalg;
pub mod quad;
pub mod roots;

pub use interp::{HermiteQuintic, Pchip};
pub use linalg::Tridiagonal;
pub use quad::GaussLegendre;
