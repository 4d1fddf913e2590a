use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Angular momentum arguments outside their domain (negative `j`, `|m| > j`, ...).
    #[error("angular momentum domain error: {0}")]
    Domain(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// One entry per failing record.
    #[error("dataset validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("frequency {omega} a.u. is within {tolerance:e} a.u. of the pole of {transition} (|ΔE| = {delta_e})")]
    Pole {
        transition: String,
        omega: f64,
        delta_e: f64,
        tolerance: f64,
    },

    #[error("unsupported evaluation: {0}")]
    Capability(&'static str),

    #[error("integrand is not finite at ω = {omega} a.u. (value {value})")]
    NonFinite { omega: f64, value: f64 },

    #[error("degenerate energy denominator {denominator:e} for dimer state {dimer} and atom state {atom}")]
    DegenerateDenominator {
        dimer: usize,
        atom: usize,
        denominator: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the environment (missing files, unreadable paths)
    /// as opposed to bad data or physics.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
