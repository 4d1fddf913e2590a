//! Brute-force second-order sum over explicit intermediate states.
//!
//! This is the reference the factorized quadrature path in
//! [`crate::dispersion`] is checked against: every dipole matrix element is
//! written out, nothing is factorized, and the rotational energy is left out
//! of the denominators exactly as in the factorized form.

use rand::Rng;

use crate::angular::{cg_or_zero, dipole_weight, rotational_dipole_element, AngularMomentum};
use crate::error::{Error, Result};
use crate::specdata::{
    AtomData, AtomicTransition, AtomicTransitionSet, CoreModel, Dataset, MolecularPolarizabilitySource,
    MolecularTransition, Orientation, SymmetryState,
};

/// Denominators smaller than this are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Intermediate rotational-vibronic state `|j' m', -μ>` of the dimer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerState {
    pub jp: i32,
    pub mp: i32,
    /// Body-frame component of the transition dipole (0 parallel, ±1 perpendicular).
    pub mu: i32,
    pub delta_e: f64,
    pub dipole: f64,
}

/// Intermediate state `|n' l' λ'>` of the atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub l: i32,
    pub lambda: i32,
    pub delta_e: f64,
    /// `sqrt((2l+1)/(2l'+1)) <1 0 l 0 | l' 0> <nl|r|n'l'>`, the reduced part of the element.
    pub reduced: f64,
}

/// All dimer states reachable by one dipole transition from rotational level `j`.
pub fn expand_dimer(j: i32, transitions: &[MolecularTransition]) -> Vec<DimerState> {
    let mut out = Vec::new();
    for t in transitions {
        let mus: &[i32] = match t.orientation {
            Orientation::Parallel => &[0],
            Orientation::Perpendicular => &[1, -1],
        };
        for jp in (j - 1).abs()..=j + 1 {
            for &mu in mus {
                if mu.abs() > jp {
                    continue;
                }
                for mp in AngularMomentum::projections(jp) {
                    out.push(DimerState {
                        jp,
                        mp,
                        mu,
                        delta_e: t.delta_e,
                        dipole: t.dipole,
                    });
                }
            }
        }
    }
    out
}

/// All atomic states reachable from the initial level, one per `λ'`.
pub fn expand_atom(atom: &AtomicTransitionSet) -> Vec<AtomState> {
    let l = atom.l;
    let mut out = Vec::new();
    for t in &atom.transitions {
        let lp = t.l_to;
        if lp < 0 {
            continue;
        }
        let reduced = ((2 * l + 1) as f64 / (2 * lp + 1) as f64).sqrt() * cg_or_zero(1, 0, l, 0, lp, 0) * t.radial;
        for lambda in AngularMomentum::projections(lp) {
            out.push(AtomState {
                l: lp,
                lambda,
                delta_e: t.delta_e,
                reduced,
            });
        }
    }
    out
}

fn parity(m: i32) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `<j mj | Q^M | a>`.
fn dimer_element(j: i32, mj: i32, m: i32, a: &DimerState) -> Result<f64> {
    if a.mp != mj - m {
        return Ok(0.0);
    }
    Ok(rotational_dipole_element(j, mj, a.jp, a.mp, m, a.mu)? * a.dipole)
}

/// `<l λ | Q^{-M} | b>`.
fn atom_element(l: i32, lambda: i32, m: i32, b: &AtomState) -> f64 {
    parity(m) * b.reduced * cg_or_zero(1, m, l, lambda, b.l, b.lambda)
}

/// Crossed C6 between `|j mj1> |l λ1>` and `|j mj2> |l λ2>`:
/// `-4 Σ_{a,b} Σ_{M,M'} <mj1|Q^M|a><a|Q^{-M'}|mj2> <λ1|Q^{-M}|b><b|Q^{M'}|λ2>
///   / [(ΔE_a + ΔE_b) (1+M)!(1-M)!(1+M')!(1-M')!]`.
pub fn c6_sum_over_states(
    j: i32,
    dimer: &[DimerState],
    l: i32,
    atom: &[AtomState],
    (mj1, lambda1): (i32, i32),
    (mj2, lambda2): (i32, i32),
) -> Result<f64> {
    AngularMomentum::new(j, mj1)?;
    AngularMomentum::new(j, mj2)?;
    AngularMomentum::new(l, lambda1)?;
    AngularMomentum::new(l, lambda2)?;
    if mj1 + lambda1 != mj2 + lambda2 {
        return Err(Error::invalid(format!(
            "crossed term needs mj1 + λ1 = mj2 + λ2, got {} and {}",
            mj1 + lambda1,
            mj2 + lambda2
        )));
    }
    let mut total = 0.0;
    for (ia, a) in dimer.iter().enumerate() {
        for m in -1..=1 {
            let bra_a = dimer_element(j, mj1, m, a)?;
            if bra_a == 0.0 {
                continue;
            }
            for mp in -1..=1 {
                // <a|Q^{-M'}|mj2> = (-1)^M' <mj2|Q^{M'}|a>
                let ket_a = parity(mp) * dimer_element(j, mj2, mp, a)?;
                if ket_a == 0.0 {
                    continue;
                }
                let weight = dipole_weight(m) * dipole_weight(mp);
                for (ib, b) in atom.iter().enumerate() {
                    let bra_b = atom_element(l, lambda1, m, b);
                    // <b|Q^{M'}|λ2> = (-1)^M' <λ2|Q^{-M'}|b>
                    let ket_b = parity(mp) * atom_element(l, lambda2, mp, b);
                    let numerator = bra_a * ket_a * bra_b * ket_b;
                    if numerator == 0.0 {
                        continue;
                    }
                    let denominator = a.delta_e + b.delta_e;
                    if denominator.abs() <= DEGENERACY_TOLERANCE {
                        return Err(Error::DegenerateDenominator {
                            dimer: ia,
                            atom: ib,
                            denominator,
                        });
                    }
                    total += numerator * weight / denominator;
                }
            }
        }
    }
    Ok(-4.0 * total)
}

/// Valence-plus-downward C6 of a symmetry state, `Σ c1 c2 C6cr`, from explicit states.
/// Needs a transition-list dimer source.
pub fn c6_state_sum_over_states(d: &Dataset, s: &SymmetryState) -> Result<f64> {
    let MolecularPolarizabilitySource::TransitionList(list) = &d.molecule else {
        return Err(Error::Capability("the sum over states needs an explicit molecular transition list"));
    };
    let atom = d
        .atom(s.atom)
        .ok_or_else(|| Error::invalid(format!("dataset has no {} atom", s.atom)))?;
    let dimer = expand_dimer(s.j, list);
    let states = expand_atom(&atom.transitions);
    let mut total = 0.0;
    for r1 in &s.rows {
        for r2 in &s.rows {
            total += r1.c
                * r2.c
                * c6_sum_over_states(s.j, &dimer, atom.transitions.l, &states, (r1.mj, r1.lambda), (r2.mj, r2.lambda))?;
        }
    }
    Ok(total)
}

/// A small random atom-dimer system for the factorized-vs-explicit comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    pub j: i32,
    pub molecule: Vec<MolecularTransition>,
    pub atom: AtomicTransitionSet,
    pub bra: (i32, i32),
    pub ket: (i32, i32),
}

impl ToyModel {
    /// Up to five molecular and five atomic transitions (zero to two of them
    /// downward), `j <= 2`, `l <= 1`. Molecular and downward atomic energies are
    /// kept at least 10% apart so no denominator is near-degenerate.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let j = rng.gen_range(0..=2);
        let l = rng.gen_range(0..=1);
        let n_mol = rng.gen_range(1..=5);
        let n_atom = rng.gen_range(1..=5);
        let n_down = rng.gen_range(0..=2.min(n_atom));
        loop {
            let molecule: Vec<MolecularTransition> = (0..n_mol)
                .map(|_| MolecularTransition {
                    delta_e: rng.gen_range(0.05..1.0),
                    dipole: rng.gen_range(0.2..2.0),
                    orientation: if rng.gen_bool(0.5) {
                        Orientation::Parallel
                    } else {
                        Orientation::Perpendicular
                    },
                })
                .collect();
            let transitions: Vec<AtomicTransition> = (0..n_atom)
                .map(|i| {
                    let lp = if l == 0 || rng.gen_bool(0.5) { l + 1 } else { l - 1 };
                    let e = rng.gen_range(0.05..1.0);
                    let delta_e = if i < n_down { -e } else { e };
                    AtomicTransition::new(l, lp, delta_e, rng.gen_range(0.2..3.0))
                })
                .collect();
            let separated = transitions.iter().filter(|t| t.is_downward()).all(|t| {
                molecule
                    .iter()
                    .all(|m| (m.delta_e + t.delta_e).abs() > 0.1 * m.delta_e.max(-t.delta_e))
            });
            if !separated {
                continue;
            }
            let mj1 = rng.gen_range(-j..=j);
            let lambda1 = rng.gen_range(-l..=l);
            let total = mj1 + lambda1;
            let options: Vec<(i32, i32)> = (-l..=l)
                .filter_map(|lambda| {
                    let mj = total - lambda;
                    (mj.abs() <= j).then_some((mj, lambda))
                })
                .collect();
            let ket = options[rng.gen_range(0..options.len())];
            return Self {
                j,
                molecule,
                atom: AtomicTransitionSet::new(l, transitions),
                bra: (mj1, lambda1),
                ket,
            };
        }
    }

    pub fn has_downward(&self) -> bool {
        !self.atom.is_all_upward()
    }

    pub fn sum_over_states(&self) -> Result<f64> {
        c6_sum_over_states(
            self.j,
            &expand_dimer(self.j, &self.molecule),
            self.atom.l,
            &expand_atom(&self.atom),
            self.bra,
            self.ket,
        )
    }

    /// The model as a dataset with the atom in the excited slot and no core.
    pub fn to_dataset(&self) -> Dataset {
        let initial = self
            .atom
            .transitions
            .first()
            .map(|t| t.from.clone())
            .unwrap_or_default();
        Dataset {
            ground: None,
            excited: Some(AtomData {
                levels: Vec::new(),
                initial,
                transitions: self.atom.clone(),
            }),
            molecule: MolecularPolarizabilitySource::TransitionList(self.molecule.clone()),
            core: CoreModel::default(),
            states: Vec::new(),
            b_rot: 1e-8,
            r2: Default::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parallel(delta_e: f64, dipole: f64) -> MolecularTransition {
        MolecularTransition {
            delta_e,
            dipole,
            orientation: Orientation::Parallel,
        }
    }

    #[test]
    fn zero_dipoles_give_zero() {
        let dimer = expand_dimer(1, &[parallel(0.4, 0.0)]);
        let atom = expand_atom(&AtomicTransitionSet::new(0, vec![AtomicTransition::new(0, 1, 0.5, 1.0)]));
        assert_eq!(c6_sum_over_states(1, &dimer, 0, &atom, (0, 0), (0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn isotropic_london_pair() {
        // j = 0 dimer, S atom: -(2/3) d_A² d_B² / (ΔE_A + ΔE_B)
        let dimer = expand_dimer(0, &[parallel(0.4, 1.0)]);
        let atom = expand_atom(&AtomicTransitionSet::new(0, vec![AtomicTransition::new(0, 1, 0.5, 1.0)]));
        let got = c6_sum_over_states(0, &dimer, 0, &atom, (0, 0), (0, 0)).unwrap();
        assert_relative_eq!(got, -2.0 / 3.0 / 0.9, max_relative = 1e-13);
        assert_relative_eq!(got, -0.74074, max_relative = 1e-5);
    }

    #[test]
    fn degenerate_denominator_is_identified() {
        let dimer = expand_dimer(0, &[parallel(0.4, 1.0)]);
        let atom = expand_atom(&AtomicTransitionSet::new(1, vec![AtomicTransition::new(1, 0, -0.4, 1.0)]));
        match c6_sum_over_states(0, &dimer, 1, &atom, (0, 0), (0, 0)) {
            Err(Error::DegenerateDenominator { atom: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_projections_are_rejected() {
        let dimer = expand_dimer(1, &[parallel(0.4, 1.0)]);
        assert!(c6_sum_over_states(1, &dimer, 1, &[], (1, 0), (0, 0)).is_err());
        assert!(c6_sum_over_states(1, &dimer, 1, &[], (2, 0), (2, 0)).is_err());
    }

    #[test]
    fn state_expansion_counts() {
        let perp = MolecularTransition {
            delta_e: 0.3,
            dipole: 1.0,
            orientation: Orientation::Perpendicular,
        };
        // j = 0: only j' = 1, three m', two μ
        assert_eq!(expand_dimer(0, std::slice::from_ref(&perp)).len(), 6);
        // j = 1, parallel: j' = 0, 1, 2
        assert_eq!(expand_dimer(1, &[parallel(0.3, 1.0)]).len(), 1 + 3 + 5);
        let atom = AtomicTransitionSet::new(1, vec![AtomicTransition::new(1, 0, -0.1, 1.0), AtomicTransition::new(1, 2, 0.1, 1.0)]);
        assert_eq!(expand_atom(&atom).len(), 6);
    }

    #[test]
    fn random_models_respect_their_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = ToyModel::random(&mut rng);
            assert!(m.j <= 2 && m.atom.l <= 1);
            assert!(m.molecule.len() <= 5 && m.atom.transitions.len() <= 5);
            assert!(m.atom.downward().count() <= 2);
            assert_eq!(m.bra.0 + m.bra.1, m.ket.0 + m.ket.1);
            assert!(m.sum_over_states().is_ok());
        }
    }
}
