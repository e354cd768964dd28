use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solvers and the file readers.
#[derive(Debug, Error)]
pub enum Error {
    /// A field of an input record is non-finite or out of range.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    /// A config, train or fixture file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient scan range: found {found} of {requested} requested roots below beta = {beta_max:.6e} 1/m")]
    InsufficientScanRange {
        found: usize,
        requested: usize,
        beta_max: f64,
    },

    #[error("spurious root at beta = {beta:.12e} 1/m: sigma_min/sigma_max = {ratio:.3e}")]
    SpuriousRoot { beta: f64, ratio: f64 },

    #[error("repeated root at beta = {beta:.12e} 1/m: sigma_2/sigma_max = {ratio:.3e}")]
    RepeatedRoot { beta: f64, ratio: f64 },

    #[error("quadrature did not converge after {panels} panels (relative change {change:.3e})")]
    Quadrature { panels: usize, change: f64 },

    #[error("damping ratio {0} is not supported: only underdamped modes (0 <= xi < 1)")]
    UnsupportedDamping(f64),

    #[error("dynamic amplification factor undefined: quasi-static maximum is zero")]
    UndefinedDaf,

    /// An error raised while running one speed of a sweep.
    #[error("at {speed_kmh:.3} km/h: {source}")]
    AtSpeed {
        speed_kmh: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of an error, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numerical,
    Io,
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Validation { .. } | Error::Parse { .. } | Error::Domain(_) => ErrorClass::Input,
            Error::UnsupportedDamping(_) => ErrorClass::Input,
            Error::InsufficientScanRange { .. }
            | Error::SpuriousRoot { .. }
            | Error::RepeatedRoot { .. }
            | Error::Quadrature { .. }
            | Error::UndefinedDaf => ErrorClass::Numerical,
            Error::AtSpeed { source, .. } => source.class(),
            Error::Io { .. } => ErrorClass::Io,
        }
    }
}
