//! Gauss-Legendre quadrature on `[0, ∞)` through the rational map
//! `ω = ω₀ (1+t)/(1-t)`.

use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 64;
pub const MIN_NODES: usize = 8;

/// Gauss-Legendre nodes and weights on (-1, 1), ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed quadrature rule for semi-infinite integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: usize,
    scale: f64,
    /// Mapped abscissae `ω_i` with weights including the Jacobian.
    points: Vec<(f64, f64)>,
}

impl QuadratureRule {
    pub fn new(nodes: usize, scale: f64) -> Result<Self> {
        if nodes < MIN_NODES {
            return Err(Error::invalid(format!("quadrature needs at least {MIN_NODES} nodes, got {nodes}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!("quadrature scale must be positive, got {scale}")));
        }
        let points = gauss_legendre(nodes)
            .into_iter()
            .map(|(t, w)| {
                let omega = scale * (1.0 + t) / (1.0 - t);
                let jac = 2.0 * scale / ((1.0 - t) * (1.0 - t));
                (omega, w * jac)
            })
            .collect();
        Ok(Self { nodes, scale, points })
    }

    /// Rule whose scale is the median of `|ΔE|` over the given energies.
    pub fn for_energies(nodes: usize, energies: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(nodes, median_abs(energies)?)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Mapped nodes `(ω_i, w_i)`.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Same node count, different scale.
    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.nodes, scale)
    }
}

/// Median of `|ΔE|`; for an even count the two middle values are combined
/// geometrically, which keeps the map centred on widely separated scales.
pub fn median_abs(energies: impl IntoIterator<Item = f64>) -> Result<f64> {
    let mut v: Vec<f64> = energies
        .into_iter()
        .map(f64::abs)
        .filter(|e| *e > 0.0 && e.is_finite())
        .collect();
    if v.is_empty() {
        return Err(Error::invalid("no transition energies to set the quadrature scale"));
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] * v[n / 2]).sqrt() })
}

/// `∫₀^∞ f(ω) dω`; the first non-finite sample aborts with its frequency.
pub fn integrate_semi_infinite<F>(f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let values = sample(f, rule)?;
    Ok(values.iter().zip(&rule.points).map(|(v, (_, w))| v * w).sum())
}

/// Evaluates `f` at every mapped node, checking finiteness.
pub fn sample<F>(mut f: F, rule: &QuadratureRule) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    rule.points
        .iter()
        .map(|&(omega, _)| {
            let value = f(omega)?;
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::NonFinite { omega, value })
            }
        })
        .collect()
}
