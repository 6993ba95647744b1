//! Exact train-track transition matrices for half-twist mapping classes on
//! punctured spheres, with certified stretch factors and the number theory
//! of their minimal polynomials.
//!
//! ```
//! use halftwist::{catalog, pipeline};
//!
//! let report = pipeline::analyze(&catalog::phi(), &pipeline::default_epsilon()).unwrap();
//! assert!(report.certified());
//! assert_eq!(report.q_string, "y - 18");
//! ```

pub mod catalog;
pub mod construction;
pub mod engine;
pub mod numfmt;
pub mod pipeline;
pub mod poly;
mod ser;
pub mod spectral;
pub mod verify;

use thiserror::Error;

pub use construction::{ConstructionError, ConstructionSpec, MultiTwistSet, Powers, Provenance, Puncture};
pub use engine::{EngineError, NotCarried, TransitionMatrix};
pub use poly::{IntPolynomial, PolyError};
pub use spectral::{IntMatrix, SpectralError};

/// Pipeline stage at which an error surfaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Build,
    Matrix,
    Spectral,
    NumberTheory,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("build: {0}")]
    Construction(#[from] ConstructionError),
    #[error("matrix: {0}")]
    Engine(#[from] EngineError),
    #[error("spectral: {0}")]
    Spectral(#[from] SpectralError),
    #[error("number theory: {0}")]
    Poly(#[from] PolyError),
}

impl Error {
    pub fn stage(&self) -> Stage {
        match self {
            Error::Construction(_) => Stage::Build,
            Error::Engine(_) => Stage::Matrix,
            Error::Spectral(_) => Stage::Spectral,
            Error::Poly(_) => Stage::NumberTheory,
        }
    }

    /// Process exit code: 2 validation, 3 not carried, 4 precision exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Engine(EngineError::NotCarried(_)) => 3,
            Error::Poly(PolyError::PrecisionExhausted(_)) => 4,
            _ => 2,
        }
    }
}
