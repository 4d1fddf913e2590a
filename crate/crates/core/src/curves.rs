//! Long-range potential curves `V(R) = B j(j+1) + C5/R⁵ + C6/R⁶` and their
//! geometry: extrema, crossings and tabulation.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specdata::SymmetryLabel;
use crate::units::hartree_to_cm;

/// Lower edge of the default crossing window, bohr.
pub const DEFAULT_R_MIN: f64 = 30.0;
/// Upper edge of the default crossing window, bohr.
pub const DEFAULT_R_MAX: f64 = 3000.0;
/// Log-spaced scan points used to bracket crossings.
pub const CROSSING_SCAN_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCurve {
    pub symmetry: SymmetryLabel,
    pub j: i32,
    pub c5: f64,
    pub c6: f64,
    /// Hartree.
    pub b_rot: f64,
}

impl PotentialCurve {
    pub fn new(symmetry: SymmetryLabel, j: i32, c5: f64, c6: f64, b_rot: f64) -> Result<Self> {
        if j < 0 {
            return Err(Error::invalid(format!("rotational level must be >= 0, got {j}")));
        }
        if !(b_rot > 0.0 && b_rot.is_finite()) {
            return Err(Error::invalid(format!("rotational constant must be positive, got {b_rot}")));
        }
        Ok(Self {
            symmetry,
            j,
            c5,
            c6,
            b_rot,
        })
    }

    /// `"symmetry/j"`, e.g. `Sigma+/1`.
    pub fn label(&self) -> String {
        format!("{}/{}", self.symmetry, self.j)
    }

    pub fn asymptote(&self) -> f64 {
        self.b_rot * (self.j * (self.j + 1)) as f64
    }

    fn eval(&self, r: f64) -> f64 {
        let r5 = r.powi(5);
        self.asymptote() + self.c5 / r5 + self.c6 / (r5 * r)
    }
}

/// `B j(j+1) + C5/r⁵ + C6/r⁶`, hartree.
pub fn potential(c: &PotentialCurve, r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid(format!("distance must be positive, got {r}")));
    }
    Ok(c.eval(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Minimum,
    Maximum,
    Crossing,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Minimum => "minimum",
            FeatureKind::Maximum => "maximum",
            FeatureKind::Crossing => "crossing",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFeature {
    pub kind: FeatureKind,
    pub curve: String,
    /// The other curve of a crossing.
    pub partner: Option<String>,
    /// Bohr.
    pub r: f64,
    /// Hartree.
    pub value: f64,
    /// `value` minus the curve's asymptote, hartree.
    pub relative: f64,
}

impl CurveFeature {
    pub fn value_cm(&self) -> f64 {
        hartree_to_cm(self.value)
    }

    pub fn relative_cm(&self) -> f64 {
        hartree_to_cm(self.relative)
    }
}

impl fmt::Display for CurveFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.curve)?;
        if let Some(p) = &self.partner {
            write!(f, " x {p}")?;
        }
        write!(
            f,
            " R={:.6} a.u. V={:.6e} a.u. ({:.6} cm-1), relative to asymptote {:.6e} a.u. ({:.6} cm-1)",
            self.r,
            self.value,
            self.value_cm(),
            self.relative,
            self.relative_cm()
        )
    }
}

/// The single stationary point `r* = -6 C6 / (5 C5)` when `C5 C6 < 0`: a
/// maximum for `C5 > 0`, a minimum for `C5 < 0`.
pub fn find_extrema(c: &PotentialCurve) -> Vec<CurveFeature> {
    let product = c.c5 * c.c6;
    if product.is_nan() || product >= 0.0 {
        return Vec::new();
    }
    let r = -6.0 * c.c6 / (5.0 * c.c5);
    let value = c.eval(r);
    vec![CurveFeature {
        kind: if c.c5 > 0.0 { FeatureKind::Maximum } else { FeatureKind::Minimum },
        curve: c.label(),
        partner: None,
        r,
        value,
        relative: value - c.asymptote(),
    }]
}

/// Log-spaced grid with exact endpoints.
pub fn log_grid(r_min: f64, r_max: f64, points: usize) -> Vec<f64> {
    let ratio = (r_max / r_min).ln();
    (0..points)
        .map(|i| match i {
            0 => r_min,
            _ if i == points - 1 => r_max,
            _ => r_min * (ratio * i as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

/// Linear grid with exact endpoints.
pub fn linear_grid(r_min: f64, r_max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| match i {
            0 => r_min,
            _ if i == points - 1 => r_max,
            _ => r_min + (r_max - r_min) * i as f64 / (points - 1) as f64,
        })
        .collect()
}

fn check_range(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::invalid(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    Ok(())
}

/// Every root of `V_a - V_b` in `[r_min, r_max]`, bracketed on a log grid and
/// refined by bisection, in increasing `r`.
pub fn find_crossings(a: &PotentialCurve, b: &PotentialCurve, r_min: f64, r_max: f64) -> Result<Vec<CurveFeature>> {
    check_range(r_min, r_max)?;
    let diff = |r: f64| a.eval(r) - b.eval(r);
    let feature = |r: f64| CurveFeature {
        kind: FeatureKind::Crossing,
        curve: a.label(),
        partner: Some(b.label()),
        r,
        value: a.eval(r),
        relative: a.eval(r) - a.asymptote(),
    };
    if a.asymptote() == b.asymptote() && a.c5 == b.c5 && a.c6 == b.c6 {
        return Ok(Vec::new());
    }
    let grid = log_grid(r_min, r_max, CROSSING_SCAN_POINTS);
    let values: Vec<f64> = grid.iter().map(|&r| diff(r)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            out.push(feature(grid[i]));
        } else if f0 * f1 < 0.0 {
            out.push(feature(bisect(&diff, grid[i], grid[i + 1], f0)));
        }
    }
    if values[grid.len() - 1] == 0.0 {
        out.push(feature(r_max));
    }
    Ok(out)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Crossings between every pair of curves sharing a symmetry label, sorted by `r`.
pub fn same_symmetry_crossings(curves: &[PotentialCurve], r_min: f64, r_max: f64) -> Result<Vec<CurveFeature>> {
    check_range(r_min, r_max)?;
    let pairs: Vec<(usize, usize)> = (0..curves.len())
        .flat_map(|i| (i + 1..curves.len()).map(move |k| (i, k)))
        .filter(|&(i, k)| curves[i].symmetry == curves[k].symmetry)
        .collect();
    let found: Vec<Vec<CurveFeature>> = pairs
        .par_iter()
        .map(|&(i, k)| find_crossings(&curves[i], &curves[k], r_min, r_max))
        .collect::<Result<_>>()?;
    let mut all: Vec<CurveFeature> = found.into_iter().flatten().collect();
    all.sort_by(|x, y| x.r.total_cmp(&y.r).then_with(|| x.curve.cmp(&y.curve)));
    Ok(all)
}

/// LeRoy radius `2 (sqrt(<r_A²>) + sqrt(<r_B²>))`, bohr.
pub fn leroy_radius(r2_a: f64, r2_b: f64) -> Result<f64> {
    if !(r2_a >= 0.0 && r2_b >= 0.0) {
        return Err(Error::invalid(format!("<r²> must be >= 0, got {r2_a} and {r2_b}")));
    }
    Ok(2.0 * (r2_a.sqrt() + r2_b.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

impl std::str::FromStr for GridScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" | "lin" => Ok(GridScale::Linear),
            "log" => Ok(GridScale::Log),
            other => Err(format!("unknown scale '{other}' (expected linear or log)")),
        }
    }
}

/// Tabulated curves: `r` in bohr, one column per curve in cm⁻¹ measured from
/// the separated-pair origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub labels: Vec<String>,
    pub r: Vec<f64>,
    /// `values[i][k]`: curve `k` at `r[i]`.
    pub values: Vec<Vec<f64>>,
}

impl CurveTable {
    /// Plain-text form with a `#` header; every number printed with
    /// `precision` significant digits.
    pub fn render(&self, delimiter: &str, precision: usize) -> String {
        let digits = precision.max(1) - 1;
        let mut out = String::new();
        let mut header = vec!["R(bohr)".to_string()];
        header.extend(self.labels.iter().map(|l| format!("{l}(cm-1)")));
        let _ = writeln!(out, "# {}", header.join(delimiter));
        for (r, row) in self.r.iter().zip(&self.values) {
            let mut fields = vec![format!("{r:.digits$e}")];
            fields.extend(row.iter().map(|v| format!("{v:.digits$e}")));
            let _ = writeln!(out, "{}", fields.join(delimiter));
        }
        out
    }
}

pub fn emit_curve_table(curves: &[PotentialCurve], r_min: f64, r_max: f64, points: usize, scale: GridScale) -> Result<CurveTable> {
    check_range(r_min, r_max)?;
    if points < 2 {
        return Err(Error::invalid(format!("a curve table needs at least 2 points, got {points}")));
    }
    let r = match scale {
        GridScale::Linear => linear_grid(r_min, r_max, points),
        GridScale::Log => log_grid(r_min, r_max, points),
    };
    let values = r
        .iter()
        .map(|&x| curves.iter().map(|c| hartree_to_cm(c.eval(x))).collect())
        .collect();
    Ok(CurveTable {
        labels: curves.iter().map(PotentialCurve::label).collect(),
        r,
        values,
    })
}
