//! Second-order (van der Waals) dispersion coefficients for an atom interacting
//! with a ground-state diatomic molecule in a given rotational level.
//!
//! The crate is organised bottom-up:
//!
//! * [`angular`] — Clebsch-Gordan algebra and rotation matrices,
//! * [`specdata`] — spectroscopic input data, the dataset file format and validation,
//! * [`polar`] — dynamic polarizabilities at real or imaginary frequency,
//! * [`quadrature`] and [`dispersion`] — the C6 assembly, plus the brute-force
//!   sum-over-states reference in [`oracle`],
//! * [`curves`] — long-range potential curves and their geometry.

pub mod angular;
pub mod curves;
pub mod dispersion;
pub mod error;
pub mod oracle;
pub mod polar;
pub mod quadrature;
pub mod specdata;
pub mod units;

pub use error::{Error, Result};
