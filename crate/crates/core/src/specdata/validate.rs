use std::fmt;

use super::model::*;

/// Tolerance on `Σ c² = 1` for ingested eigenvectors.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub record: String,
    pub rule: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{status} {}: {}", self.record, self.rule)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn check(&mut self, record: impl Into<String>, rule: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            record: record.into(),
            rule,
            passed,
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn is_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failure_messages(&self) -> Vec<String> {
        self.failures()
            .map(|c| {
                if c.detail.is_empty() {
                    format!("{}: {}", c.record, c.rule)
                } else {
                    format!("{}: {} ({})", c.record, c.rule, c.detail)
                }
            })
            .collect()
    }
}

/// Runs every invariant check on `d`. Pure; failures are carried in the report.
pub fn validate_dataset(d: &Dataset) -> ValidationReport {
    let mut r = ValidationReport::default();

    r.check("constants", "b_rot > 0", d.b_rot > 0.0 && d.b_rot.is_finite(), format!("b_rot = {}", d.b_rot));
    for (k, v) in &d.r2 {
        r.check(format!("constants r2.{k}"), "<r²> >= 0", *v >= 0.0 && v.is_finite(), format!("{v}"));
    }

    for kind in [AtomKind::Ground, AtomKind::Excited] {
        if let Some(atom) = d.atom(kind) {
            validate_atom(&mut r, kind, atom);
        }
    }

    validate_molecule(&mut r, &d.molecule);

    match d.core {
        CoreModel::Constant { alpha } => {
            r.check("core", "alpha_c >= 0", alpha >= 0.0 && alpha.is_finite(), format!("alpha_c = {alpha}"));
        }
        CoreModel::EffectiveTransition { delta_e, strength } => {
            r.check("core", "effective transition energy > 0", delta_e > 0.0 && delta_e.is_finite(), format!("{delta_e}"));
            r.check("core", "effective transition strength > 0", strength > 0.0 && strength.is_finite(), format!("{strength}"));
        }
    }

    for (i, s) in d.states.iter().enumerate() {
        validate_state(&mut r, d, i, s);
    }
    r
}

fn validate_atom(r: &mut ValidationReport, kind: AtomKind, atom: &AtomData) {
    for lv in &atom.levels {
        let rec = format!("atom.{kind} level {}", lv.label);
        r.check(&rec, "l >= 0", lv.l >= 0, format!("l = {}", lv.l));
        r.check(&rec, "finite energy", lv.energy.is_finite(), format!("{}", lv.energy));
    }
    for t in &atom.transitions.transitions {
        let rec = format!("atom.{kind} transition {}", t.name());
        r.check(
            &rec,
            "dipole selection rule |Δl| = 1",
            (t.l_to - t.l_from).abs() == 1,
            format!("l {} -> {}", t.l_from, t.l_to),
        );
        r.check(&rec, "radial element >= 0", t.radial >= 0.0 && t.radial.is_finite(), format!("{}", t.radial));
        r.check(&rec, "ΔE != 0", t.delta_e != 0.0 && t.delta_e.is_finite(), format!("{}", t.delta_e));
        r.check(
            &rec,
            "starts from the initial level",
            t.from == atom.initial && t.l_from == atom.transitions.l,
            format!("initial level {}", atom.initial),
        );
        for label in [&t.from, &t.to] {
            if !atom.levels.is_empty() {
                r.check(&rec, "referenced level exists", atom.level(label).is_some(), label.clone());
            }
        }
    }
}

fn validate_molecule(r: &mut ValidationReport, m: &MolecularPolarizabilitySource) {
    match m {
        MolecularPolarizabilitySource::TransitionList(list) => {
            for (i, t) in list.iter().enumerate() {
                let rec = format!("molecule transition #{}", i + 1);
                r.check(&rec, "upward transition (ΔE > 0)", t.delta_e > 0.0 && t.delta_e.is_finite(), format!("{}", t.delta_e));
                r.check(&rec, "finite dipole", t.dipole.is_finite(), format!("{}", t.dipole));
            }
        }
        MolecularPolarizabilitySource::Grid(g) => {
            let rec = "molecule grid";
            let n = g.omega.len();
            r.check(rec, "equal array lengths", g.par.len() == n && g.perp.len() == n, format!("{n}/{}/{}", g.par.len(), g.perp.len()));
            r.check(rec, "at least two points", n >= 2, format!("{n}"));
            r.check(rec, "grid starts at ω = 0", g.omega.first() == Some(&0.0), format!("{:?}", g.omega.first()));
            r.check(
                rec,
                "ω strictly increasing",
                g.omega.windows(2).all(|w| w[1] > w[0]) && g.omega.iter().all(|w| w.is_finite() && *w >= 0.0),
                "",
            );
            r.check(rec, "finite α values", g.par.iter().chain(&g.perp).all(|a| a.is_finite()), "");
            r.check(
                rec,
                "α_∥(0), α_⊥(0) > 0",
                g.par.first().is_some_and(|a| *a > 0.0) && g.perp.first().is_some_and(|a| *a > 0.0),
                "",
            );
        }
    }
}

fn validate_state(r: &mut ValidationReport, d: &Dataset, i: usize, s: &SymmetryState) {
    let rec = format!("state #{} ({} j={})", i + 1, s.label, s.j);
    r.check(&rec, "j >= 0", s.j >= 0, format!("{}", s.j));
    r.check(&rec, "mJ >= 0", s.label.m_total >= 0, format!("{}", s.label.m_total));
    r.check(&rec, "at least one row", !s.rows.is_empty(), "");
    let projections_ok = s
        .rows
        .iter()
        .all(|row| (row.mj + row.lambda).abs() == s.label.m_total)
        && s.rows.windows(2).all(|w| w[0].mj + w[0].lambda == w[1].mj + w[1].lambda);
    r.check(&rec, "mj + λ = ±mJ on every row", projections_ok, "");
    r.check(&rec, "|mj| <= j", s.rows.iter().all(|row| row.mj.abs() <= s.j), "");
    r.check(&rec, "|λ| <= ell", s.rows.iter().all(|row| row.lambda.abs() <= s.ell), "");
    let norm = s.norm_squared();
    r.check(
        &rec,
        "unnormalized eigenvector",
        (norm - 1.0).abs() <= NORMALIZATION_TOLERANCE,
        format!("Σc² = {norm}"),
    );
    let reflection_ok = match s.label.reflection {
        Reflection::None => s.label.m_total != 0,
        _ => s.label.m_total == 0,
    };
    r.check(&rec, "reflection parity given exactly when mJ = 0", reflection_ok, "");
    r.check(&rec, "finite C5", s.c5.is_finite(), "");
    match d.atom(s.atom) {
        Some(atom) => r.check(
            &rec,
            "ell matches the atom's initial level",
            atom.transitions.l == s.ell,
            format!("atom l = {}, ell = {}", atom.transitions.l, s.ell),
        ),
        None => r.check(&rec, "referenced atom exists", false, s.atom.to_string()),
    }
}
