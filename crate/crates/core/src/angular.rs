//! Integer angular-momentum algebra: Clebsch-Gordan coefficients, Wigner
//! small-d matrices, the rotational factor of dimer dipole matrix elements and
//! the multipole prefactor of the long-range expansion.
//!
//! All phases follow the Condon-Shortley convention. Clebsch-Gordan
//! coefficients are evaluated from the Racah formula with every factorial
//! kept as a vector of prime exponents, so the alternating sum is carried out
//! exactly in big integers and only the final square root touches floating
//! point.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An integer angular momentum `j` with projection `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngularMomentum {
    j: u32,
    m: i32,
}

impl AngularMomentum {
    pub fn new(j: i32, m: i32) -> Result<Self> {
        check(j, m)?;
        Ok(Self { j: j as u32, m })
    }

    pub fn j(&self) -> i32 {
        self.j as i32
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// All projections `-j..=j`.
    pub fn projections(j: i32) -> impl Iterator<Item = i32> {
        -j..=j
    }
}

fn check(j: i32, m: i32) -> Result<()> {
    if j < 0 {
        return Err(Error::domain(format!("negative angular momentum j = {j}")));
    }
    if m.abs() > j {
        return Err(Error::domain(format!("projection m = {m} exceeds j = {j}")));
    }
    Ok(())
}

fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b
}

/// Clebsch-Gordan coefficient `<j1 m1 j2 m2 | J M>`.
///
/// Returns exactly `0.0` whenever `m1 + m2 != M`, `|M| > J` or the triangle
/// rule fails. Out-of-range `m1`, `m2` and negative momenta are domain errors.
pub fn clebsch_gordan(j1: i32, m1: i32, j2: i32, m2: i32, jj: i32, mm: i32) -> Result<f64> {
    check(j1, m1)?;
    check(j2, m2)?;
    if jj < 0 {
        return Err(Error::domain(format!("negative angular momentum j = {jj}")));
    }
    if m1 + m2 != mm || mm.abs() > jj || !triangle(j1, j2, jj) {
        return Ok(0.0);
    }
    Ok(racah(j1, m1, j2, m2, jj, mm))
}

/// Same as [`clebsch_gordan`] but yields `0.0` for arguments outside the
/// domain (`|m| > j`). Convenient inside sums where the projection range is
/// implied by the other factors.
pub(crate) fn cg_or_zero(j1: i32, m1: i32, j2: i32, m2: i32, jj: i32, mm: i32) -> f64 {
    clebsch_gordan(j1, m1, j2, m2, jj, mm).unwrap_or(0.0)
}

fn racah(j1: i32, m1: i32, j2: i32, m2: i32, jj: i32, mm: i32) -> f64 {
    let k_min = 0.max(j2 - jj - m1).max(j1 - jj + m2);
    let k_max = (j1 + j2 - jj).min(j1 - m1).min(j2 + m2);
    if k_min > k_max {
        return 0.0;
    }

    let largest = (j1 + j2 + jj + 1) as usize;
    let primes = primes_up_to(largest);

    // Squared prefactor, as prime exponents.
    let mut pref = vec![0i64; primes.len()];
    add_factorial(&mut pref, &primes, jj + j1 - j2, 1);
    add_factorial(&mut pref, &primes, jj - j1 + j2, 1);
    add_factorial(&mut pref, &primes, j1 + j2 - jj, 1);
    add_factorial(&mut pref, &primes, j1 + j2 + jj + 1, -1);
    for n in [jj + mm, jj - mm, j1 - m1, j1 + m1, j2 - m2, j2 + m2] {
        add_factorial(&mut pref, &primes, n, 1);
    }

    // Denominators of the alternating sum.
    let denominators: Vec<Vec<i64>> = (k_min..=k_max)
        .map(|k| {
            let mut d = vec![0i64; primes.len()];
            for n in [
                k,
                j1 + j2 - jj - k,
                j1 - m1 - k,
                j2 + m2 - k,
                jj - j2 + m1 + k,
                jj - j1 - m2 + k,
            ] {
                add_factorial(&mut d, &primes, n, 1);
            }
            d
        })
        .collect();
    let common: Vec<i64> = (0..primes.len())
        .map(|i| denominators.iter().map(|d| d[i]).max().unwrap_or(0))
        .collect();

    let mut sum = BigInt::zero();
    for (offset, d) in denominators.iter().enumerate() {
        let mut term = BigInt::one();
        for (i, &p) in primes.iter().enumerate() {
            let e = common[i] - d[i];
            if e > 0 {
                term *= BigInt::from(p).pow(e as u32);
            }
        }
        if (k_min + offset as i32) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }

    // value^2 = (2J+1) * pref * sum^2 / common^2
    let mut num = BigUint::from((2 * jj + 1) as u32) * sum.magnitude() * sum.magnitude();
    let mut den = BigUint::one();
    for (i, &p) in primes.iter().enumerate() {
        let e = pref[i] - 2 * common[i];
        let pp = BigUint::from(p);
        if e > 0 {
            num *= pp.pow(e as u32);
        } else if e < 0 {
            den *= pp.pow((-e) as u32);
        }
    }
    let magnitude = ratio_to_f64(&num, &den).sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    // Bring both operands into f64 range while keeping ~64 leading bits.
    let shift = |x: &BigUint| x.bits().saturating_sub(900);
    let s = shift(num).max(shift(den));
    let n = (num >> s).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> s).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

fn primes_up_to(n: usize) -> Vec<u64> {
    let n = n.max(2);
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                sieve[k] = false;
                k += i;
            }
        }
    }
    out
}

/// Adds `sign * exponents(n!)` using Legendre's formula.
fn add_factorial(acc: &mut [i64], primes: &[u64], n: i32, sign: i64) {
    debug_assert!(n >= 0);
    let n = n as u64;
    for (i, &p) in primes.iter().enumerate() {
        if p > n {
            break;
        }
        let mut e = 0;
        let mut q = n / p;
        while q > 0 {
            e += q;
            q /= p;
        }
        acc[i] += sign * e as i64;
    }
}

fn factorial(n: i32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Wigner small-d matrix element `d^j_{m, mp}(beta)`.
pub fn wigner_d(j: i32, m: i32, mp: i32, beta: f64) -> Result<f64> {
    check(j, m)?;
    check(j, mp)?;
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pref = (factorial(j + m) * factorial(j - m) * factorial(j + mp) * factorial(j - mp)).sqrt();
    let k_min = 0.max(mp - m);
    let k_max = (j + mp).min(j - m);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = factorial(j + mp - k) * factorial(k) * factorial(m - mp + k) * factorial(j - m - k);
        let sign = if (m - mp + k) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * c.powi(2 * j + mp - m - 2 * k) * s.powi(m - mp + 2 * k) / denom;
    }
    Ok(pref * sum)
}

/// Rotational factor `<j mj | d^1_{M mu} | j' m'>` of a dimer dipole matrix
/// element: the molecule-frame component `mu` rotated into the trimer frame.
/// The bra is a rotational level of a Σ state; the ket carries body
/// projection `-mu`.
pub fn rotational_dipole_element(j: i32, mj: i32, jp: i32, mjp: i32, m: i32, mu: i32) -> Result<f64> {
    check(j, mj)?;
    check(jp, mjp)?;
    check(1, m)?;
    check(1, mu)?;
    if mu.abs() > jp {
        return Ok(0.0);
    }
    let norm = ((2 * jp + 1) as f64 / (2 * j + 1) as f64).sqrt();
    Ok(norm * clebsch_gordan(1, m, jp, mjp, j, mj)? * clebsch_gordan(1, mu, jp, -mu, j, 0)?)
}

/// Prefactor `f_{LA LB M}` of the multipolar expansion, quantization axis from
/// the dimer (A) to the atom (B).
pub fn multipole_prefactor(la: i32, lb: i32, m: i32) -> Result<f64> {
    if la < 0 || lb < 0 {
        return Err(Error::domain(format!("negative multipole order ({la}, {lb})")));
    }
    if m.abs() > la.min(lb) {
        return Err(Error::domain(format!("|M| = {} exceeds min(LA, LB) = {}", m.abs(), la.min(lb))));
    }
    let sign = if lb % 2 == 0 { 1.0 } else { -1.0 };
    let denom = (factorial(la + m) * factorial(la - m) * factorial(lb + m) * factorial(lb - m)).sqrt();
    Ok(sign * factorial(la + lb) / denom)
}

/// `1 / ((1+M)! (1-M)!)`, the dipole-dipole weight of component `M`.
pub fn dipole_weight(m: i32) -> f64 {
    1.0 / (factorial(1 + m) * factorial(1 - m))
}
