use super::{sigma0_of, ClosedForm, Jet, PhiProfile, RhoProfile};
use crate::{Error, ModelParams, Result};

/// Safety factor applied to every grid-estimated constant.
const SAFETY: f64 = 1.1;

/// Time-dependent factor `f(t) = Φ(ξ₀ s) / ρ(s)`, `s = (t+t₀)^{-1/2}`, that
/// makes the inner and outer supersolutions agree at `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingFactor {
    phi: PhiProfile,
    rho: RhoProfile,
    sigma0: f64,
    xi0: f64,
    t0: f64,
}

/// Grid estimates of the constants behind `|f'(t)| ≤ C(ξ₀)/(t+t₀)²`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MatchingFactorBound {
    /// `min ρ` on `[0, σ₀]`.
    pub rho_floor: f64,
    /// `sup |Φ'(z)|/z` on `(0, ξ₀]`.
    pub phi_slope: f64,
    /// `sup |ρ'(σ)|/σ` on `(0, σ₀]`.
    pub rho_slope: f64,
    /// `C(ξ₀)`, inflated by the safety factor.
    pub constant: f64,
}

impl MatchingFactor {
    /// Requires `ξ₀ > 0` and `t₀ > σ₀^{-2}`.
    pub fn new(params: &ModelParams, xi0: f64, t0: f64) -> Result<Self> {
        let phi = PhiProfile::new(params.gamma())?;
        let rho = RhoProfile::new(params.lambda())?;
        let sigma0 = sigma0_of(params.lambda())?;
        if !(xi0.is_finite() && xi0 > 0.0) {
            return Err(Error::Parameter(format!("xi0 = {xi0} must be positive")));
        }
        if !(t0.is_finite() && t0 > sigma0.powi(-2)) {
            return Err(Error::Parameter(format!(
                "t0 = {t0} must exceed sigma0^-2 = {}",
                sigma0.powi(-2)
            )));
        }
        Ok(Self { phi, rho, sigma0, xi0, t0 })
    }

    /// Skips the `t₀ > σ₀^{-2}` requirement; used to build deliberately
    /// inadmissible comparison functions for negative controls.
    pub(crate) fn new_unchecked(params: &ModelParams, xi0: f64, t0: f64) -> Result<Self> {
        let phi = PhiProfile::new(params.gamma())?;
        let rho = RhoProfile::new(params.lambda())?;
        let sigma0 = sigma0_of(params.lambda())?;
        Ok(Self { phi, rho, sigma0, xi0, t0 })
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn bound(&self) -> MatchingFactorBound {
        derivative_bound(&self.phi, &self.rho, self.sigma0, self.xi0)
    }
}

pub(crate) fn derivative_bound(
    phi: &PhiProfile,
    rho: &RhoProfile,
    sigma0: f64,
    xi0: f64,
) -> MatchingFactorBound {
    const POINTS: usize = 2000;
    let rho_floor = rho.value(sigma0);
    let mut phi_slope = 0.5 * phi.gamma();
    let mut rho_slope = 0.5 * rho.lambda();
    for i in 1..=POINTS {
        let frac = i as f64 / POINTS as f64;
        let z = xi0 * frac;
        phi_slope = phi_slope.max(phi.slope_at(z).abs() / z);
        let s = sigma0 * frac;
        rho_slope = rho_slope.max(rho.eval(s).d1.abs() / s);
    }
    let constant = SAFETY
        * (phi_slope * xi0 * xi0 / (2.0 * rho_floor) + rho_slope / (2.0 * rho_floor * rho_floor));
    MatchingFactorBound { rho_floor, phi_slope, rho_slope, constant }
}

impl ClosedForm for MatchingFactor {
    fn eval(&self, t: f64) -> Jet {
        let tau = t + self.t0;
        let s = tau.powf(-0.5);
        let ds = -0.5 * tau.powf(-1.5);
        let d2s = 0.75 * tau.powf(-2.5);
        let p = self.phi.eval(self.xi0 * s);
        let r = self.rho.eval(s);
        let x = self.xi0;
        let g = p.value / r.value;
        let g1 = x * p.d1 / r.value - p.value * r.d1 / (r.value * r.value);
        let g2 = x * x * p.d2 / r.value - 2.0 * x * p.d1 * r.d1 / (r.value * r.value)
            - p.value * r.d2 / (r.value * r.value)
            + 2.0 * p.value * r.d1 * r.d1 / (r.value * r.value * r.value);
        Jet { value: g, d1: g1 * ds, d2: g2 * ds * ds + g1 * d2s }
    }

    fn label(&self) -> &'static str {
        "matching_factor"
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}
