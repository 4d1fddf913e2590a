//! C6 coefficients of an atom-dimer pair from dynamic polarizabilities.
//!
//! Every crossed coefficient is written as an imaginary-frequency integral of
//! the dimer polarizability (rotated into the trimer frame) times the atomic
//! polarizability matrix, plus a real-frequency term for each downward
//! atomic transition.
//!
//! Normalization: the bracket carries `1/(2π)` in front of the integral and
//! `-4 / ((1+M)!(1-M)!(1+M')!(1-M')!)` outside it. With the factor 2 in both
//! polarizability definitions, `(1/2π)·2·2 ∫ xy/((x²+ω²)(y²+ω²)) dω = 1/(x+y)`,
//! so this is exactly the explicit double sum of [`crate::oracle`]. The
//! downward term is the real-frequency dimer polarizability times the
//! sign-free product `(2l+1)/(2l'+1) <10 l0|l'0>² r² Σ_λ' <1M lλ1|l'λ'><1M' lλ2|l'λ'>`,
//! i.e. `(-1)^M` times the raw product of the two atomic matrix elements.
//! Both conventions are pinned by the randomized equivalence test against the
//! sum over states.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::angular::{dipole_weight, AngularMomentum};
use crate::error::{Error, Result};
use crate::polar::{
    atomic_channel_weight, core_polarizability, isotropic_atomic_polarizability, molecular_polarizability,
    rotational_weights, transition_strength, FrequencyArg, PolarizabilityPair,
};
use crate::quadrature::{integrate_semi_infinite, QuadratureRule};
use crate::specdata::{AtomKind, AtomicTransitionSet, Dataset, MolecularPolarizabilitySource, SymmetryState};

/// C6 of one symmetry state, split by origin. All in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct C6Result {
    pub total: f64,
    pub valence_integral: f64,
    pub downward_term: f64,
    pub core_term: f64,
}

/// Quadrature rule scaled to the median `|ΔE|` over every transition in the
/// dataset (molecular list, when present, and both atoms).
pub fn default_rule(d: &Dataset, nodes: usize) -> Result<QuadratureRule> {
    let mut energies = Vec::new();
    if let MolecularPolarizabilitySource::TransitionList(list) = &d.molecule {
        energies.extend(list.iter().map(|t| t.delta_e));
    }
    for kind in [AtomKind::Ground, AtomKind::Excited] {
        if let Some(a) = d.atom(kind) {
            energies.extend(a.transitions.transitions.iter().map(|t| t.delta_e));
        }
    }
    QuadratureRule::for_energies(nodes, energies)
}

fn atom_set(d: &Dataset, kind: AtomKind) -> Result<&AtomicTransitionSet> {
    d.atom(kind)
        .map(|a| &a.transitions)
        .ok_or_else(|| Error::invalid(format!("dataset has no {kind} atom")))
}

fn pair_at(d: &Dataset, omega: f64) -> Result<PolarizabilityPair> {
    molecular_polarizability(&d.molecule, FrequencyArg::Imaginary(omega))
}

#[derive(Debug, Clone, Copy, Default)]
struct CrossedParts {
    integral: f64,
    downward: f64,
}

#[allow(clippy::too_many_arguments)]
fn crossed_parts(
    d: &Dataset,
    atom: &AtomicTransitionSet,
    j: i32,
    (mj1, lambda1): (i32, i32),
    (mj2, lambda2): (i32, i32),
    rule: &QuadratureRule,
) -> Result<CrossedParts> {
    AngularMomentum::new(j, mj1)?;
    AngularMomentum::new(j, mj2)?;
    AngularMomentum::new(atom.l, lambda1)?;
    AngularMomentum::new(atom.l, lambda2)?;
    if mj1 + lambda1 != mj2 + lambda2 {
        return Err(Error::invalid(format!(
            "crossed term needs mj1 + λ1 = mj2 + λ2, got {} and {}",
            mj1 + lambda1,
            mj2 + lambda2
        )));
    }

    // The integrand is bilinear in (α_∥, α_⊥) and the per-transition
    // Lorentzians, so all angular factors collapse into one (par, perp)
    // coefficient per atomic transition.
    let n = atom.transitions.len();
    let mut coeff = vec![(0.0, 0.0); n];
    let mut downward = 0.0;
    for m in -1..=1 {
        for mp in -1..=1 {
            let rot = rotational_weights(j, mj1, mj2, m, mp)?;
            if rot.par == 0.0 && rot.perp == 0.0 {
                continue;
            }
            let pref = 4.0 * dipole_weight(m) * dipole_weight(mp);
            for (k, t) in atom.transitions.iter().enumerate() {
                let aw = atomic_channel_weight(atom.l, t.l_to, lambda1, lambda2, m, mp)? * transition_strength(t)?;
                if aw == 0.0 {
                    continue;
                }
                coeff[k].0 += pref * aw * rot.par;
                coeff[k].1 += pref * aw * rot.perp;
                if t.is_downward() {
                    let real = molecular_polarizability(&d.molecule, FrequencyArg::Real(-t.delta_e))?;
                    downward += pref * 0.5 * aw * rot.apply(real);
                }
            }
        }
    }

    let integral = if coeff.iter().all(|c| c.0 == 0.0 && c.1 == 0.0) {
        0.0
    } else {
        integrate_semi_infinite(
            |w| {
                let pair = pair_at(d, w)?;
                Ok(atom
                    .transitions
                    .iter()
                    .zip(&coeff)
                    .map(|(t, c)| t.delta_e / (t.delta_e * t.delta_e + w * w) * (c.0 * pair.par + c.1 * pair.perp))
                    .sum())
            },
            rule,
        )? / (2.0 * PI)
    };
    Ok(CrossedParts {
        integral: -integral,
        downward: -downward,
    })
}

/// Crossed coefficient between `|j mj1>|l λ1>` and `|j mj2>|l λ2>` of the
/// chosen atom.
#[allow(clippy::too_many_arguments)]
pub fn c6_crossed(
    d: &Dataset,
    atom: AtomKind,
    j: i32,
    mj1: i32,
    lambda1: i32,
    mj2: i32,
    lambda2: i32,
    rule: &QuadratureRule,
) -> Result<f64> {
    let p = crossed_parts(d, atom_set(d, atom)?, j, (mj1, lambda1), (mj2, lambda2), rule)?;
    Ok(p.integral + p.downward)
}

/// `-(2/π) Σ_M w_M² ∫ α_c(iω) α^{mj mj}_{MM}(iω) dω`, always `<= 0`.
pub fn c6_core(d: &Dataset, j: i32, mj: i32, rule: &QuadratureRule) -> Result<f64> {
    diagonal_integral(d, j, mj, rule, |w| core_polarizability(&d.core, FrequencyArg::Imaginary(w)))
}

/// `-(2/π) Σ_M w_M² ∫ a(iω) α^{mj mj}_{MM}(iω) dω` for an isotropic partner `a`.
fn diagonal_integral<F>(d: &Dataset, j: i32, mj: i32, rule: &QuadratureRule, mut partner: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    AngularMomentum::new(j, mj)?;
    let mut wpar = 0.0;
    let mut wperp = 0.0;
    for m in -1..=1 {
        let rot = rotational_weights(j, mj, mj, m, m)?;
        let w2 = dipole_weight(m) * dipole_weight(m);
        wpar += w2 * rot.par;
        wperp += w2 * rot.perp;
    }
    let integral = integrate_semi_infinite(
        |w| {
            let a = partner(w)?;
            if a == 0.0 {
                return Ok(0.0);
            }
            let pair = pair_at(d, w)?;
            Ok(a * (wpar * pair.par + wperp * pair.perp))
        },
        rule,
    )?;
    Ok(-2.0 / PI * integral)
}

/// Total C6 of a symmetry state: `Σ c1 c2` over crossed terms plus the
/// diagonal core contribution.
pub fn c6_total(d: &Dataset, s: &SymmetryState, rule: &QuadratureRule) -> Result<C6Result> {
    let atom = atom_set(d, s.atom)?;
    let mut r = C6Result::default();
    for r1 in &s.rows {
        for r2 in &s.rows {
            let p = crossed_parts(d, atom, s.j, (r1.mj, r1.lambda), (r2.mj, r2.lambda), rule)?;
            r.valence_integral += r1.c * r2.c * p.integral;
            r.downward_term += r1.c * r2.c * p.downward;
        }
        r.core_term += r1.c * r1.c * c6_core(d, s.j, r1.mj, rule)?;
    }
    r.total = r.valence_integral + r.downward_term + r.core_term;
    Ok(r)
}

/// Ground S atom: no crossed terms,
/// `-(2/π) Σ_M w_M² ∫ (α(iω) + α_c(iω)) α^{mj mj}_{MM}(iω) dω`.
pub fn c6_ground_atom(d: &Dataset, j: i32, mj: i32, rule: &QuadratureRule) -> Result<f64> {
    let atom = atom_set(d, AtomKind::Ground)?;
    if !atom.is_all_upward() || atom.transitions.is_empty() {
        return Err(Error::invalid("the ground atom needs a non-empty, all-upward transition set"));
    }
    diagonal_integral(d, j, mj, rule, |w| {
        let z = FrequencyArg::Imaginary(w);
        Ok(isotropic_atomic_polarizability(atom, z)? + core_polarizability(&d.core, z)?)
    })
}

/// Two S atoms: `-(3/π) ∫ α_A(iω) α_B(iω) dω`.
pub fn c6_atom_atom(a: &AtomicTransitionSet, b: &AtomicTransitionSet, rule: &QuadratureRule) -> Result<f64> {
    for set in [a, b] {
        if set.l != 0 || !set.is_all_upward() {
            return Err(Error::invalid("atom-atom C6 needs all-upward S-state transition sets"));
        }
    }
    let integral = integrate_semi_infinite(
        |w| {
            let z = FrequencyArg::Imaginary(w);
            Ok(isotropic_atomic_polarizability(a, z)? * isotropic_atomic_polarizability(b, z)?)
        },
        rule,
    )?;
    Ok(-3.0 / PI * integral)
}

/// [`c6_total`] for every state of the dataset, evaluated in parallel; the
/// output order follows `d.states`.
pub fn c6_sweep(d: &Dataset, rule: &QuadratureRule) -> Vec<Result<C6Result>> {
    d.states.par_iter().map(|s| c6_total(d, s, rule)).collect()
}
