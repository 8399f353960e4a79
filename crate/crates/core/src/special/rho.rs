use super::{ClosedForm, Jet};
use crate::{Error, Result};

/// Inner profile `ρ`, the solution of `ρ'' + ρ'/σ + λρ = 0`, `ρ(0) = 1`,
/// `ρ'(0) = 0`, i.e. `J₀(√λ σ)`.
///
/// Evaluated by its even power series `Σ (-λσ²/4)^k / (k!)²`; all three
/// derivatives come from their own series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoProfile {
    lambda: f64,
}

impl RhoProfile {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Parameter(format!("lambda = {lambda} must be positive")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// First positive zero, by bisection on the series.
    pub fn first_zero(&self) -> f64 {
        let mut lo = 0.0;
        let mut hi = 3.0 / self.lambda.sqrt();
        debug_assert!(self.eval(hi).value < 0.0);
        while hi - lo > 1e-14 * hi {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid).value > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Residual `ρ'' + ρ'/σ + λρ`, with `ρ'/σ → ρ''(0)` at the origin.
    pub fn ode_residual(&self, sigma: f64) -> f64 {
        let j = self.eval(sigma);
        let drift = if sigma == 0.0 { j.d2 } else { j.d1 / sigma };
        j.d2 + drift + self.lambda * j.value
    }
}

impl ClosedForm for RhoProfile {
    fn eval(&self, sigma: f64) -> Jet {
        let x = 0.25 * self.lambda * sigma * sigma;
        // t_k = (-x)^k/(k!)², u_j = (-x)^j/(j!(j+1)!)
        let mut t = 1.0f64;
        let mut u = 1.0f64;
        let mut value = 1.0;
        let mut s1 = 1.0;
        let mut s2 = 1.0;
        let mut k = 0usize;
        loop {
            let kf = k as f64;
            t *= -x / ((kf + 1.0) * (kf + 1.0));
            u *= -x / ((kf + 1.0) * (kf + 2.0));
            value += t;
            s1 += u;
            s2 += (2.0 * kf + 3.0) * u;
            k += 1;
            if (kf > x && t.abs() < 1e-18 && u.abs() * (2.0 * kf + 3.0) < 1e-18) || k > 500 {
                break;
            }
        }
        Jet {
            value,
            d1: -0.5 * self.lambda * sigma * s1,
            d2: -0.5 * self.lambda * s2,
        }
    }

    fn label(&self) -> &'static str {
        "rho"
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.first_zero())
    }
}

/// `σ₀ = min(0.99, 0.9 · first zero of ρ)`; `ρ` is positive and decreasing
/// on `[0, σ₀]`.
pub fn sigma0_of(lambda: f64) -> Result<f64> {
    let rho = RhoProfile::new(lambda)?;
    Ok((0.9 * rho.first_zero()).min(0.99))
}
