//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced by scene construction, scattering evaluation, PDP
/// processing, fitting, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Scene construction or validation failed (bad wall extents, Tx/Rx on
    /// the wrong side of the wall, non-positive frequency, ...).
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    /// A ray-geometry operation received positions it cannot handle
    /// (e.g. an endpoint behind the scattering patch).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A model parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The BK series did not converge within the term cap.
    #[error("BK series did not converge within {max_terms} terms (g = {g:.6e})")]
    SeriesNonConvergence { g: f64, max_terms: usize },

    /// Back-to-back calibration found reference bins below the magnitude
    /// floor; dividing by them would blow up the calibrated response.
    #[error("calibration reference below floor at {} bin(s): {bins:?}", bins.len())]
    CalibrationFloor { bins: Vec<usize> },

    /// An operation that needs at least one nonzero PDP bin got none.
    #[error("empty power-delay profile: {0}")]
    EmptyProfile(String),

    /// A tap's delay exceeds the PDP synthesis span.
    #[error("tap delay {delay_ns:.3} ns exceeds synthesis span {span_ns:.3} ns")]
    SpanExceeded { delay_ns: f64, span_ns: f64 },

    /// Two datasets that must share a label grid do not.
    #[error("dataset alignment error: {0}")]
    Alignment(String),

    /// A data file failed to parse; `line` is 1-based and includes the header.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A config or data file violates its documented schema.
    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
