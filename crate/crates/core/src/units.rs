//! Unit handling. Everything inside the crate is in atomic units (hartree, bohr).

use std::fmt;
use std::str::FromStr;

/// Wavenumbers per hartree.
pub const CM_PER_HARTREE: f64 = 219474.63137;

pub fn cm_to_hartree(cm: f64) -> f64 {
    cm / CM_PER_HARTREE
}

pub fn hartree_to_cm(e: f64) -> f64 {
    e * CM_PER_HARTREE
}

/// Unit tag carried by every energy field of a dataset file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    Hartree,
    Wavenumber,
}

impl EnergyUnit {
    pub fn to_hartree(self, value: f64) -> f64 {
        match self {
            EnergyUnit::Hartree => value,
            EnergyUnit::Wavenumber => cm_to_hartree(value),
        }
    }

    pub fn from_hartree(self, value: f64) -> f64 {
        match self {
            EnergyUnit::Hartree => value,
            EnergyUnit::Wavenumber => hartree_to_cm(value),
        }
    }
}

impl FromStr for EnergyUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "au" => Ok(EnergyUnit::Hartree),
            "cm-1" => Ok(EnergyUnit::Wavenumber),
            other => Err(format!("unknown energy unit '{other}' (expected au or cm-1)")),
        }
    }
}

impl fmt::Display for EnergyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyUnit::Hartree => "au",
            EnergyUnit::Wavenumber => "cm-1",
        })
    }
}
