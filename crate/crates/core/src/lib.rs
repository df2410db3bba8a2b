//! Numerical toolkit for algebraic operators on `C^d`: minimal polynomials,
//! generalized eigenspace decompositions, unitarity criteria, orbit growth and
//! norm-growth bounds.

pub mod algebraic;
pub mod criteria;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod report;
pub mod sequence;
pub mod settings;
pub mod spectrum;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector};
pub use settings::Settings;
