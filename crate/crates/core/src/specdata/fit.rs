use super::model::{AtomicTransition, AtomicTransitionSet};
use crate::error::{Error, Result};

/// A one-transition S -> P model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleOscillator {
    /// Hartree.
    pub delta_e: f64,
    /// Bohr.
    pub radial: f64,
}

impl SingleOscillator {
    pub fn radial_squared(&self) -> f64 {
        self.radial * self.radial
    }

    /// The model as an S-state transition set.
    pub fn transition_set(&self) -> AtomicTransitionSet {
        AtomicTransitionSet::new(0, vec![AtomicTransition::new(0, 1, self.delta_e, self.radial)])
    }
}

/// Finds the single S -> P oscillator whose static polarizability is
/// `alpha_static` and whose homonuclear atom-atom C6 has magnitude `c6_homo`.
///
/// With `α(iω) = α₀ ΔE² / (ΔE² + ω²)` the homonuclear coefficient is
/// `3 α₀² ΔE / 4`, and an S -> P transition gives `α₀ = 2 r² / (3 ΔE)`.
pub fn fit_single_oscillator(alpha_static: f64, c6_homo: f64) -> Result<SingleOscillator> {
    if !(alpha_static > 0.0 && alpha_static.is_finite()) {
        return Err(Error::invalid(format!("static polarizability must be positive, got {alpha_static}")));
    }
    if !(c6_homo > 0.0 && c6_homo.is_finite()) {
        return Err(Error::invalid(format!("homonuclear C6 magnitude must be positive, got {c6_homo}")));
    }
    let delta_e = 4.0 * c6_homo / (3.0 * alpha_static * alpha_static);
    let r2 = 1.5 * alpha_static * delta_e;
    Ok(SingleOscillator {
        delta_e,
        radial: r2.sqrt(),
    })
}
