use super::{ClosedForm, Jet};
use crate::{Error, Result};

/// Explicit profile `Φ̂(z) = (1 + z²/4)^{-γ/2}` used by the subsolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatPhiProfile {
    gamma: f64,
}

impl HatPhiProfile {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Parameter(format!("gamma = {gamma} must be positive")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `Φ̂'' + (z/2)Φ̂' + (γ/2)Φ̂ - (γ/4)(1+z²/4)^{-γ/2-1}`, nonnegative for all `z`.
    pub fn inequality_residual(&self, z: f64) -> f64 {
        let j = self.eval(z);
        let w = 1.0 + 0.25 * z * z;
        j.d2 + 0.5 * z * j.d1 + 0.5 * self.gamma * j.value
            - 0.25 * self.gamma * w.powf(-0.5 * self.gamma - 1.0)
    }

    /// Slack in `|Φ̂''(z)| ≤ γ(γ+1)/4 · (1+z²/4)^{-γ/2-1}`; nonnegative.
    pub fn curvature_bound_slack(&self, z: f64) -> f64 {
        let g = self.gamma;
        let w = 1.0 + 0.25 * z * z;
        0.25 * g * (g + 1.0) * w.powf(-0.5 * g - 1.0) - self.eval(z).d2.abs()
    }
}

impl ClosedForm for HatPhiProfile {
    fn eval(&self, z: f64) -> Jet {
        let g = self.gamma;
        let w = 1.0 + 0.25 * z * z;
        let p1 = w.powf(-0.5 * g - 1.0);
        Jet {
            value: w.powf(-0.5 * g),
            d1: -0.25 * g * z * p1,
            d2: g * (g + 2.0) / 16.0 * z * z * p1 / w - 0.25 * g * p1,
        }
    }

    fn label(&self) -> &'static str {
        "hat_phi"
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let h = HatPhiProfile::new(2.0).unwrap();
        assert_eq!(h.value(2.0), 0.5);
        let j = HatPhiProfile::new(0.7).unwrap().eval(0.0);
        assert_eq!((j.value, j.d1), (1.0, 0.0));
    }

    #[test]
    fn inequalities_hold() {
        for &g in &[0.1, 0.5, 1.0, 3.0] {
            let h = HatPhiProfile::new(g).unwrap();
            for i in 1..400 {
                let z = 0.05 * i as f64 * (1.0 + 0.01 * i as f64);
                assert!(h.inequality_residual(z) >= -1e-15);
                assert!(h.curvature_bound_slack(z) >= -1e-15);
            }
        }
    }
}
