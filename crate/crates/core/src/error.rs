use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// One eigenvalue cluster: centroid and the number of raw eigenvalues merged into it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix dimension {dim} exceeds the supported maximum of {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("ill-conditioned spectrum: {reason} (coarse clustering has {} roots, fine clustering has {})", coarse.len(), fine.len())]
    IllConditionedSpectrum {
        reason: String,
        coarse: Vec<Cluster>,
        fine: Vec<Cluster>,
    },

    #[error("decomposition failure: {0}")]
    DecompositionFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("contradictory parameters: {0}")]
    Contradiction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
