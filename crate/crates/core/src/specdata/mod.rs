//! Spectroscopic input data: atoms, the dimer polarizability source, the core
//! model, symmetry states, and the dataset file that bundles them.

mod fit;
mod format;
mod model;
mod validate;

use std::path::Path;

pub use fit::{fit_single_oscillator, SingleOscillator};
pub use format::{parse_dataset, read_dataset, serialize_dataset};
pub use model::*;
pub use validate::{validate_dataset, Check, ValidationReport, NORMALIZATION_TOLERANCE};

use crate::error::{Error, Result};

/// Reads, parses and validates a dataset file. Every failing record is listed
/// in the returned error.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let d = read_dataset(path)?;
    let report = validate_dataset(&d);
    if report.is_ok() {
        Ok(d)
    } else {
        Err(Error::Validation(report.failure_messages()))
    }
}
