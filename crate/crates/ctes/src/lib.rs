//! Simulation and analysis toolkit for factoring integers with multi-path
//! interference patterns.
//!
//! An M-arm interferometer whose arm lengths follow (m-1)^j * x produces a
//! normalized spectrum that depends only on x/lambda. Rescaling the recorded
//! wavelength axis by N/x turns the same interferogram into a parallel
//! divisor probe for any candidate N: integer positions xi = N*lambda/x that
//! reach unit intensity are factors of N. This crate provides:
//!
//! - [`sumcore`] - exact evaluation of the interference intensity and of
//!   worst-case non-factor ceilings
//! - [`instrument`] - a virtual interferometer/spectrometer with a seeded
//!   noise model and a CSV + JSON-header file format
//! - [`analysis`] - per-candidate rescaling, interpolation at trial-factor
//!   positions, and factor/non-factor verdicts
//! - [`planner`] - single-shot feasibility ranges, geometric displacement
//!   sequences covering whole candidate ranges, uncertainty budgets, and
//!   end-to-end sequence runs
//! - [`oracle`] - trial-division ground truth used to cross-check everything

pub mod analysis;
pub mod error;
pub mod instrument;
pub mod oracle;
pub mod planner;
pub mod sumcore;
mod util;

pub use analysis::{FactorReport, ScanPolicy, TrialCheck, Verdict};
pub use error::{Error, Result};
pub use instrument::{Band, Interferogram, NoiseSpec, Sample, SetupSpec};
pub use planner::{Method, SequencePlan, SequenceReport, UncertaintyBudget};
pub use sumcore::{Intensity, SumConfig};
