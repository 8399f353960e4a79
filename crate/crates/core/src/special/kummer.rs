use statrs::function::gamma::gamma;

use crate::{Error, Result};

/// Below this argument Kummer's function is summed directly; above it the
/// large-argument expansion is used.
pub const KUMMER_SERIES_CROSSOVER: f64 = 50.0;

const MAX_TERMS: usize = 20_000;

/// Kummer's confluent hypergeometric function `M(a, b, ζ)` for `ζ ≥ 0`.
///
/// Fails with [`Error::Domain`] when `b` is a nonpositive integer or `ζ < 0`
/// and with [`Error::Overflow`] when the result exceeds the `f64` range.
pub fn kummer_m(a: f64, b: f64, zeta: f64) -> Result<f64> {
    let scaled = kummer_scaled(a, b, zeta)?;
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let log_mag = zeta + scaled.abs().ln();
    let m = scaled.signum() * log_mag.exp();
    if !m.is_finite() {
        return Err(Error::Overflow(format!(
            "M({a}, {b}, {zeta}) exceeds the f64 range (log magnitude {log_mag:.3})"
        )));
    }
    Ok(m)
}

/// The exponentially scaled function `e^{-ζ} M(a, b, ζ)`.
///
/// This is the form in which the self-similar profile is built; it stays
/// finite for every `ζ ≥ 0`.
pub fn kummer_scaled(a: f64, b: f64, zeta: f64) -> Result<f64> {
    check_args(a, b, zeta)?;
    Ok(scaled_unchecked(a, b, zeta))
}

pub(crate) fn scaled_unchecked(a: f64, b: f64, zeta: f64) -> f64 {
    if a == 0.0 {
        return (-zeta).exp();
    }
    if is_nonpositive_integer(a) || zeta <= KUMMER_SERIES_CROSSOVER {
        series(a, b, zeta) * (-zeta).exp()
    } else {
        asymptotic_scaled(a, b, zeta)
    }
}

fn check_args(a: f64, b: f64, zeta: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && zeta.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument to M({a}, {b}, {zeta})")));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("M(a, b, ζ) undefined for b = {b}")));
    }
    if zeta < 0.0 {
        return Err(Error::Domain(format!("ζ = {zeta} must be nonnegative")));
    }
    Ok(())
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `Σ (a)_k/(b)_k ζ^k/k!` with Neumaier-compensated summation.
fn series(a: f64, b: f64, zeta: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * zeta / (kf + 1.0);
        if term == 0.0 {
            break;
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if kf > zeta && term.abs() <= f64::EPSILON * 1e-2 * (sum + comp).abs() {
            break;
        }
    }
    sum + comp
}

/// Large-`ζ` expansion
/// `e^{-ζ} M(a,b,ζ) ≈ Γ(b)/Γ(a) ζ^{a-b} Σ (b-a)_k (1-a)_k / (k! ζ^k)`,
/// truncated at its smallest term. The exponentially small companion
/// branch is below `e^{-ζ}` relative and is dropped.
fn asymptotic_scaled(a: f64, b: f64, zeta: f64) -> f64 {
    let prefactor = gamma(b) / gamma(a) * zeta.powf(a - b);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = term * (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * zeta);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}
