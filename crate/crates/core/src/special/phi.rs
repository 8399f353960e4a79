use statrs::function::gamma::gamma;

use super::kummer::scaled_unchecked;
use super::{ClosedForm, Jet};
use crate::{Error, Result};

/// Self-similar heat profile `Φ`, the solution of
/// `Φ'' + (z/2)Φ' + (γ/2)Φ = 0`, `Φ(0) = 1`, `Φ'(0) = 0`.
///
/// Evaluated as `Φ(z) = e^{-ζ} M((1-γ)/2, 1/2, ζ)` with `ζ = z²/4`. The first
/// derivative uses the contiguous relation
/// `Φ'(z) = -(γ/2) z e^{-ζ} M(a, 3/2, ζ)`, which has no cancellation, and the
/// second derivative is taken from the differential equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiProfile {
    gamma: f64,
    a: f64,
}

impl PhiProfile {
    /// Accepts `0 < γ ≤ 2`; values `γ ≥ 1` are flagged by [`Self::is_exploratory`].
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Parameter(format!("gamma = {gamma} must be positive")));
        }
        if gamma > 2.0 {
            return Err(Error::Parameter(format!(
                "gamma = {gamma} outside the supported range (0, 2]"
            )));
        }
        Ok(Self { gamma, a: 0.5 * (1.0 - gamma) })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Outside `(0, 1)` the profile is no longer guaranteed to be positive.
    pub fn is_exploratory(&self) -> bool {
        self.gamma >= 1.0
    }

    pub fn value_at(&self, z: f64) -> f64 {
        scaled_unchecked(self.a, 0.5, 0.25 * z * z)
    }

    pub fn slope_at(&self, z: f64) -> f64 {
        -0.5 * self.gamma * z * scaled_unchecked(self.a, 1.5, 0.25 * z * z)
    }

    /// `Φ''` from differentiating the Kummer representation twice, used to
    /// cross-check the equation-based value returned by [`ClosedForm::eval`].
    pub fn curvature_from_kummer(&self, z: f64) -> f64 {
        let zeta = 0.25 * z * z;
        let s3 = scaled_unchecked(self.a, 1.5, zeta);
        let s5 = scaled_unchecked(self.a, 2.5, zeta);
        -0.5 * self.gamma * (s3 - z * z / 3.0 * (1.5 - self.a) * s5)
    }

    /// `lim_{z→∞} z^γ Φ(z) = 2^γ Γ(1/2)/Γ((1-γ)/2)`.
    ///
    /// Zero when `(1-γ)/2` is a nonpositive integer (Gaussian-type decay).
    pub fn tail_constant(&self) -> f64 {
        if self.a <= 0.0 && self.a.fract() == 0.0 {
            return 0.0;
        }
        2f64.powf(self.gamma) * gamma(0.5) / gamma(self.a)
    }

    /// Residual `Φ'' + (z/2)Φ' + (γ/2)Φ` with `Φ''` taken from the Kummer route.
    pub fn ode_residual(&self, z: f64) -> f64 {
        self.curvature_from_kummer(z) + 0.5 * z * self.slope_at(z) + 0.5 * self.gamma * self.value_at(z)
    }
}

impl ClosedForm for PhiProfile {
    fn eval(&self, z: f64) -> Jet {
        let value = self.value_at(z);
        let d1 = self.slope_at(z);
        let d2 = -0.5 * z * d1 - 0.5 * self.gamma * value;
        Jet { value, d1, d2 }
    }

    fn label(&self) -> &'static str {
        "phi"
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// Empirical enclosures of the scaled tails of `Φ` on a window `[z_lo, z_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEnclosure {
    /// min and max of `z^γ Φ(z)`.
    pub value: (f64, f64),
    /// min and max of `-z^{γ+1} Φ'(z)`.
    pub slope: (f64, f64),
    /// min and max of `z^{γ+2} |Φ''(z)|`.
    pub curvature: (f64, f64),
}

/// Scan `z^γ Φ`, `-z^{γ+1}Φ'` and `z^{γ+2}|Φ''|` over a dense geometric grid.
///
/// Fails if `Φ ≤ 0` or `Φ' ≥ 0` anywhere on the window.
pub fn phi_asymptotic_constants(gamma: f64, z_lo: f64, z_hi: f64) -> Result<AsymptoticEnclosure> {
    if !(z_lo >= 1.0 && z_hi > z_lo && z_hi.is_finite()) {
        return Err(Error::Parameter(format!("window [{z_lo}, {z_hi}] must satisfy 1 ≤ z_lo < z_hi")));
    }
    let phi = PhiProfile::new(gamma)?;
    const POINTS: usize = 4001;
    let ratio = (z_hi / z_lo).ln();
    let mut value = (f64::INFINITY, f64::NEG_INFINITY);
    let mut slope = value;
    let mut curvature = value;
    for i in 0..POINTS {
        let z = z_lo * (ratio * i as f64 / (POINTS - 1) as f64).exp();
        let j = phi.eval(z);
        if j.value <= 0.0 {
            return Err(Error::Certification(format!("Φ({z}) = {} is not positive", j.value)));
        }
        if j.d1 >= 0.0 {
            return Err(Error::Certification(format!("Φ'({z}) = {} is not negative", j.d1)));
        }
        let v = z.powf(gamma) * j.value;
        let s = -z.powf(gamma + 1.0) * j.d1;
        let c = z.powf(gamma + 2.0) * j.d2.abs();
        value = (value.0.min(v), value.1.max(v));
        slope = (slope.0.min(s), slope.1.max(s));
        curvature = (curvature.0.min(c), curvature.1.max(c));
    }
    Ok(AsymptoticEnclosure { value, slope, curvature })
}
