//! Dense complex kernels: singular values, eigenvalues, linear solves and
//! orthonormalization. Everything here works on small matrices and favours
//! robustness over speed.

mod eigen;
mod lu;
mod qr;
mod svd;

pub use eigen::{eigenvalues, hessenberg};
pub use lu::{inverse, solve};
pub use qr::{gram_schmidt, orthonormal_complement};
pub use svd::{singular_values, svd, Svd};
