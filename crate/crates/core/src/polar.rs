//! Dynamic dipole polarizabilities of the atom, the dimer and the ionic core,
//! evaluated at real or imaginary frequency.
//!
//! Every two-level term has the form `ΔE / (ΔE² - z²)` with `z² = -ω²` on the
//! imaginary axis and `z² = ω²` on the real axis.

use crate::angular::{cg_or_zero, clebsch_gordan};
use crate::error::{Error, Result};
use crate::specdata::{
    AtomicTransition, AtomicTransitionSet, CoreModel, MolecularPolarizabilitySource, Orientation,
    PolarizabilityGrid,
};

/// Real-frequency evaluations closer than this to a resonance are rejected.
pub const POLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyArg {
    Imaginary(f64),
    Real(f64),
}

impl FrequencyArg {
    pub fn omega(self) -> f64 {
        match self {
            FrequencyArg::Imaginary(w) | FrequencyArg::Real(w) => w,
        }
    }

    pub fn z_squared(self) -> f64 {
        match self {
            FrequencyArg::Imaginary(w) => -w * w,
            FrequencyArg::Real(w) => w * w,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, FrequencyArg::Real(_))
    }

    fn check(self) -> Result<()> {
        let w = self.omega();
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::invalid(format!("frequency must be finite and non-negative, got {w}")));
        }
        Ok(())
    }
}

/// `ΔE / (ΔE² - z²)`, rejecting real frequencies on a resonance.
fn resonance(delta_e: f64, z: FrequencyArg, name: impl FnOnce() -> String) -> Result<f64> {
    if let FrequencyArg::Real(w) = z {
        if (w - delta_e.abs()).abs() < POLE_TOLERANCE {
            return Err(Error::Pole {
                transition: name(),
                omega: w,
                delta_e: delta_e.abs(),
                tolerance: POLE_TOLERANCE,
            });
        }
    }
    Ok(delta_e / (delta_e * delta_e - z.z_squared()))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarizabilityPair {
    pub par: f64,
    pub perp: f64,
}

impl PolarizabilityPair {
    pub fn new(par: f64, perp: f64) -> Self {
        Self { par, perp }
    }

    /// `(α_∥ + 2 α_⊥) / 3`
    pub fn isotropic(&self) -> f64 {
        (self.par + 2.0 * self.perp) / 3.0
    }
}

/// Contribution of a single `nl -> n'l'` transition:
/// `(2/3) ΔE / (ΔE² - z²) · r² · <1 0 l 0 | l' 0>²`.
pub fn state_to_state_polarizability(t: &AtomicTransition, z: FrequencyArg) -> Result<f64> {
    z.check()?;
    let strength = transition_strength(t)?;
    Ok(strength * resonance(t.delta_e, z, || t.name())?)
}

/// Frequency-independent part of [`state_to_state_polarizability`],
/// `(2/3) r² <1 0 l 0 | l' 0>²`.
pub fn transition_strength(t: &AtomicTransition) -> Result<f64> {
    let cg = clebsch_gordan(1, 0, t.l_from, 0, t.l_to, 0)?;
    Ok(2.0 / 3.0 * t.radial * t.radial * cg * cg)
}

/// Angular weight of the `l -> l'` channel in the atomic polarizability matrix:
/// `3 (2l+1)/(2l'+1) Σ_λ' <1 M l λ1 | l' λ'> <1 M' l λ2 | l' λ'>`.
pub fn atomic_channel_weight(l: i32, lp: i32, lambda1: i32, lambda2: i32, m: i32, mp: i32) -> Result<f64> {
    crate::angular::AngularMomentum::new(l, lambda1)?;
    crate::angular::AngularMomentum::new(l, lambda2)?;
    crate::angular::AngularMomentum::new(1, m)?;
    crate::angular::AngularMomentum::new(1, mp)?;
    if lp < 0 {
        return Ok(0.0);
    }
    // both Clebsch-Gordan factors fix λ' = λ1 + M = λ2 + M'
    let lq = lambda1 + m;
    if lambda2 + mp != lq || lq.abs() > lp {
        return Ok(0.0);
    }
    let sum = cg_or_zero(1, m, l, lambda1, lp, lq) * cg_or_zero(1, mp, l, lambda2, lp, lq);
    Ok(3.0 * (2 * l + 1) as f64 / (2 * lp + 1) as f64 * sum)
}

/// Atomic polarizability matrix `α^{λ1 λ2}_{-M -M'}(z)` of the initial level,
/// built from state-to-state terms:
/// `Σ_{l'} 3 (2l+1)/(2l'+1) Σ_{n'} α_{nl,n'l'}(z) Σ_λ' <1M lλ1|l'λ'><1M' lλ2|l'λ'>`.
pub fn atomic_polarizability_matrix(
    atom: &AtomicTransitionSet,
    lambda1: i32,
    lambda2: i32,
    m: i32,
    mp: i32,
    z: FrequencyArg,
) -> Result<f64> {
    let mut total = 0.0;
    for t in &atom.transitions {
        let w = atomic_channel_weight(atom.l, t.l_to, lambda1, lambda2, m, mp)?;
        if w != 0.0 {
            total += w * state_to_state_polarizability(t, z)?;
        }
    }
    Ok(total)
}

/// Scalar polarizability of the valence electron, `Σ α_{nl,n'l'}(z)`.
pub fn isotropic_atomic_polarizability(atom: &AtomicTransitionSet, z: FrequencyArg) -> Result<f64> {
    atom.transitions
        .iter()
        .map(|t| state_to_state_polarizability(t, z))
        .sum()
}

/// Parallel and perpendicular dimer polarizabilities.
///
/// Tabulated sources only exist on the imaginary axis; they are interpolated
/// with a monotone cubic in ω and continued beyond the last node with a
/// `1/ω²` tail.
pub fn molecular_polarizability(src: &MolecularPolarizabilitySource, z: FrequencyArg) -> Result<PolarizabilityPair> {
    z.check()?;
    match src {
        MolecularPolarizabilitySource::TransitionList(list) => {
            let mut pair = PolarizabilityPair::default();
            for (i, t) in list.iter().enumerate() {
                let term = 2.0 * t.dipole * t.dipole * resonance(t.delta_e, z, || format!("molecular transition #{}", i + 1))?;
                match t.orientation {
                    Orientation::Parallel => pair.par += term,
                    Orientation::Perpendicular => pair.perp += term,
                }
            }
            Ok(pair)
        }
        MolecularPolarizabilitySource::Grid(grid) => match z {
            FrequencyArg::Imaginary(w) => Ok(PolarizabilityPair {
                par: interpolate(&grid.omega, &grid.par, w)?,
                perp: interpolate(&grid.omega, &grid.perp, w)?,
            }),
            FrequencyArg::Real(_) => Err(Error::Capability(
                "a tabulated polarizability grid only covers imaginary frequencies",
            )),
        },
    }
}

/// Samples a source on the imaginary axis at the given nodes.
pub fn tabulate(src: &MolecularPolarizabilitySource, omega: &[f64]) -> Result<PolarizabilityGrid> {
    let mut par = Vec::with_capacity(omega.len());
    let mut perp = Vec::with_capacity(omega.len());
    for &w in omega {
        let p = molecular_polarizability(src, FrequencyArg::Imaginary(w))?;
        par.push(p.par);
        perp.push(p.perp);
    }
    Ok(PolarizabilityGrid {
        omega: omega.to_vec(),
        par,
        perp,
    })
}

fn interpolate(x: &[f64], y: &[f64], at: f64) -> Result<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::invalid("polarizability grid needs at least two points and matching arrays"));
    }
    if at <= x[0] {
        return Ok(y[0]);
    }
    if at >= x[n - 1] {
        let r = x[n - 1] / at;
        return Ok(y[n - 1] * r * r);
    }
    let k = x.partition_point(|&v| v <= at) - 1;
    let h = x[k + 1] - x[k];
    let t = (at - x[k]) / h;
    let (d0, d1) = (pchip_slope(x, y, k), pchip_slope(x, y, k + 1));
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    Ok(h00 * y[k] + h10 * h * d0 + h01 * y[k + 1] + h11 * h * d1)
}

/// Fritsch-Carlson derivative estimate at node `k`.
fn pchip_slope(x: &[f64], y: &[f64], k: usize) -> f64 {
    let n = x.len();
    let secant = |i: usize| (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if n == 2 {
        return secant(0);
    }
    let edge = |h0: f64, h1: f64, s0: f64, s1: f64| {
        let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if d.signum() != s0.signum() {
            0.0
        } else if s0.signum() != s1.signum() && d.abs() > 3.0 * s0.abs() {
            3.0 * s0
        } else {
            d
        }
    };
    if k == 0 {
        // α(iω) is even in ω, so a grid anchored at ω = 0 starts flat
        if x[0] == 0.0 {
            return 0.0;
        }
        return edge(x[1] - x[0], x[2] - x[1], secant(0), secant(1));
    }
    if k == n - 1 {
        return edge(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], secant(n - 2), secant(n - 3));
    }
    let (h0, h1) = (x[k] - x[k - 1], x[k + 1] - x[k]);
    let (s0, s1) = (secant(k - 1), secant(k));
    if s0 == 0.0 || s1 == 0.0 || s0.signum() != s1.signum() {
        return 0.0;
    }
    let w1 = 2.0 * h1 + h0;
    let w2 = h1 + 2.0 * h0;
    (w1 + w2) / (w1 / s0 + w2 / s1)
}

/// Coefficients of `α_∥` and `α_⊥` in the rotational polarizability; the
/// angular structure is independent of frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotationalWeights {
    pub par: f64,
    pub perp: f64,
}

impl RotationalWeights {
    pub fn apply(&self, pair: PolarizabilityPair) -> f64 {
        self.par * pair.par + self.perp * pair.perp
    }
}

/// Angular coefficients of [`rotational_polarizability`].
pub fn rotational_weights(j: i32, mj1: i32, mj2: i32, m: i32, mp: i32) -> Result<RotationalWeights> {
    crate::angular::AngularMomentum::new(j, mj1)?;
    crate::angular::AngularMomentum::new(j, mj2)?;
    crate::angular::AngularMomentum::new(1, m)?;
    crate::angular::AngularMomentum::new(1, mp)?;
    let mut w = RotationalWeights::default();
    // m' = mj1 - M = mj2 - M'
    let mq = mj1 - m;
    if mj2 - mp != mq {
        return Ok(w);
    }
    for jp in (j - 1).abs()..=j + 1 {
        if mq.abs() > jp {
            continue;
        }
        let ratio = (2 * j + 1) as f64 / (2 * jp + 1) as f64;
        let rot = cg_or_zero(1, -m, j, mj1, jp, mq) * cg_or_zero(1, -mp, j, mj2, jp, mq);
        if rot == 0.0 {
            continue;
        }
        let c_par = cg_or_zero(1, 0, j, 0, jp, 0);
        let c_perp = cg_or_zero(1, 1, j, 0, jp, 1);
        w.par += ratio * c_par * c_par * rot;
        w.perp += ratio * 2.0 * c_perp * c_perp * rot;
    }
    Ok(w)
}

/// Dimer polarizability `α^{mj1 mj2}_{M M'}` in the trimer frame for rotational
/// level `j`, with the rotational energy neglected in the denominators:
/// `Σ_{j'm'} (2j+1)/(2j'+1) [<10 j0|j'0>² α_∥ + 2 <11 j0|j'1>² α_⊥]
///  · <1 -M j mj1 | j' m'> <1 -M' j mj2 | j' m'>`.
pub fn rotational_polarizability(j: i32, mj1: i32, mj2: i32, m: i32, mp: i32, pair: PolarizabilityPair) -> Result<f64> {
    Ok(rotational_weights(j, mj1, mj2, m, mp)?.apply(pair))
}

/// Core polarizability on the imaginary axis.
pub fn core_polarizability(core: &CoreModel, z: FrequencyArg) -> Result<f64> {
    z.check()?;
    let FrequencyArg::Imaginary(w) = z else {
        return Err(Error::Capability("the core polarizability has no real-frequency branch"));
    };
    Ok(match *core {
        CoreModel::Constant { alpha } => alpha,
        CoreModel::EffectiveTransition { delta_e, strength } => 2.0 * delta_e * strength / (delta_e * delta_e + w * w),
    })
}
