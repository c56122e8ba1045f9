//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Uncovered stretch of trial factors reported by a failed coverage check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CoverageGap {
    /// Lower end of the uncovered interval, in rescaled units.
    pub xi_lo: f64,
    /// Upper end of the uncovered interval, in rescaled units.
    pub xi_hi: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A setup violates a construction invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The sampling grid is too coarse for the fastest fringe in band.
    #[error(
        "sampling step {dl_nm} nm too coarse: the fastest in-band fringe requires \
         dl <= {max_dl_nm} nm (fringe period / 8)"
    )]
    InadequateSampling { dl_nm: f64, max_dl_nm: f64 },

    /// Malformed interferogram or plan file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A well-formed file whose contents break a type invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Infeasible planning request.
    #[error("planning error: {0}")]
    Planning(String),

    /// The starting displacement is below the method minimum.
    #[error(
        "planning error: x0 = {x0_nm} nm is below the method minimum x0 = {min_x0_nm} nm"
    )]
    InfeasibleStart { x0_nm: f64, min_x0_nm: f64 },

    /// A sequence plan fails to cover the requested trial-factor range.
    #[error("coverage violation for N = {n}: {message}")]
    Coverage {
        n: u64,
        message: String,
        gaps: Vec<CoverageGap>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
