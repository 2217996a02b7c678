//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid extent: x_max ({x_max}) must exceed x_min ({x_min})")]
    InvalidExtent { x_min: f64, x_max: f64 },

    #[error("invalid grid size {n}: need a power of two >= 8")]
    InvalidSize { n: usize },

    #[error("wrong representation: expected {expected}, got {got}")]
    WrongRepresentation {
        expected: &'static str,
        got: &'static str,
    },

    #[error("representation mismatch between operands")]
    RepresentationMismatch,

    #[error("grids do not match")]
    GridMismatch,

    #[error("invalid gamma {0}: cubic strength must be positive")]
    InvalidGamma(f64),

    #[error("invalid measurement outcome {0}: must be positive here")]
    InvalidOutcome(f64),

    #[error("out of regime: stationary-phase form undefined for y_m <= x (y_m = {y_m}, x = {x})")]
    OutOfRegime { x: f64, y_m: f64 },

    #[error("quadrature did not converge: |error estimate| {err:.3e} > tolerance {tol:.3e}")]
    NonConvergence { err: f64, tol: f64 },

    #[error("state has (near-)zero norm")]
    ZeroState,

    #[error("state not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("truncation: {fraction:.3e} of the norm lies in the outer {edge:.0}% of the grid")]
    Truncation { fraction: f64, edge: f64 },

    #[error("outcome {y_m} lies beyond the momentum grid extent {extent}")]
    OutcomeOffGrid { y_m: f64, extent: f64 },

    #[error("zero overlap: conditioned state norm {norm:.3e} below threshold")]
    ZeroOverlap { norm: f64 },

    #[error("no bimodality: found {found} momentum peak(s), need two")]
    NoBimodality { found: usize },

    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },

    #[error("invalid state spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidExtent { .. } => "invalid-extent",
            Error::InvalidSize { .. } => "invalid-size",
            Error::WrongRepresentation { .. } => "wrong-representation",
            Error::RepresentationMismatch => "representation-mismatch",
            Error::GridMismatch => "grid-mismatch",
            Error::InvalidGamma(_) => "invalid-gamma",
            Error::InvalidOutcome(_) => "invalid-outcome",
            Error::OutOfRegime { .. } => "out-of-regime",
            Error::NonConvergence { .. } => "non-convergence",
            Error::ZeroState => "zero-state",
            Error::NotNormalized { .. } => "not-normalized",
            Error::Truncation { .. } => "truncation",
            Error::OutcomeOffGrid { .. } => "outcome-off-grid",
            Error::ZeroOverlap { .. } => "zero-overlap",
            Error::NoBimodality { .. } => "no-bimodality",
            Error::InvalidWindow { .. } => "invalid-window",
            Error::InvalidSpec(_) => "invalid-spec",
        }
    }
}
