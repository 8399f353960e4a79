//! Barenblatt solutions, the self-similar change of variables and the
//! perturbation coordinates `φ` and `χ` in which the rest of the crate works.
//!
//! The chain of transforms is
//!
//! ```text
//! u(y, τ)  --(t, x, v = R^n u)-->  v(x, t)  --(v = (r²+D+φ)^{-(n-2)/2})-->  φ(r, t)  --(ξ = ln r)-->  χ(ξ, t)
//! ```
//!
//! with `R(τ) = (T-τ)^{-β}`. Only radial data are supported.

use std::fmt;
use std::sync::Arc;

use crate::{Error, ModelParams, Result};

/// Stationary profile `V_D(x) = (D + |x|²)^{-(n-2)/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarenblattProfile {
    params: ModelParams,
}

impl BarenblattProfile {
    pub fn new(params: ModelParams) -> Self {
        Self { params }
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.params.d() + r * r).powf(-0.5 * (self.params.dim() - 2.0))
    }

    pub fn at_origin(&self) -> f64 {
        self.value(0.0)
    }
}

/// Barenblatt solution `U_{D,T}(y, τ) = R^{-n} (D + (β(1-m)/2)|y/R|²)^{-1/(1-m)}`.
///
/// `d_profile` may be zero, in which case the solution separates into the
/// spatial power law `|y|^{-2/(1-m)}` times the time factor `R(τ)^{-2}`.
pub fn barenblatt_u(params: &ModelParams, d_profile: f64, t_ext: f64, y: f64, tau: f64) -> Result<f64> {
    if !(d_profile >= 0.0) {
        return Err(Error::Parameter(format!("D = {d_profile} must be nonnegative")));
    }
    if !(t_ext > 0.0) {
        return Err(Error::Parameter(format!("extinction time T = {t_ext} must be positive")));
    }
    if !(tau < t_ext) {
        return Err(Error::Domain(format!("τ = {tau} is not before the extinction time {t_ext}")));
    }
    let one_minus_m = 1.0 - params.m();
    let radius = (t_ext - tau).powf(-params.beta());
    let coeff = params.beta() * one_minus_m / 2.0;
    let s = y / radius;
    Ok(radius.powf(-params.dim()) * (d_profile + coeff * s * s).powf(-1.0 / one_minus_m))
}

/// Maps between the original variables `(y, τ, u)` and the self-similar
/// variables `(x, t, v)` for a fixed extinction time `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableStack {
    params: ModelParams,
    t_ext: f64,
}

impl VariableStack {
    pub fn new(params: ModelParams, t_ext: f64) -> Result<Self> {
        if !(t_ext.is_finite() && t_ext > 0.0) {
            return Err(Error::Parameter(format!("extinction time T = {t_ext} must be positive")));
        }
        Ok(Self { params, t_ext })
    }

    /// `R(τ) = (T-τ)^{-β}`.
    pub fn scale(&self, tau: f64) -> f64 {
        (self.t_ext - tau).powf(-self.params.beta())
    }

    pub fn t_of_tau(&self, tau: f64) -> f64 {
        (self.scale(tau) / self.scale(0.0)).ln() / self.params.mu()
    }

    pub fn tau_of_t(&self, t: f64) -> f64 {
        // (T-τ)^{-β} = T^{-β} e^{μt}
        -self.t_ext * (-self.params.mu() * t / self.params.beta()).exp_m1()
    }

    pub fn x_of_y(&self, y: f64, tau: f64) -> f64 {
        (self.params.beta() / self.params.mu()).sqrt() * y / self.scale(tau)
    }

    pub fn y_of_x(&self, x: f64, tau: f64) -> f64 {
        x * self.scale(tau) / (self.params.beta() / self.params.mu()).sqrt()
    }

    pub fn v_of_u(&self, u: f64, tau: f64) -> f64 {
        self.scale(tau).powf(self.params.dim()) * u
    }

    pub fn u_of_v(&self, v: f64, tau: f64) -> f64 {
        v * self.scale(tau).powf(-self.params.dim())
    }
}

/// `v = (r² + D + φ)^{-(n-2)/2}`.
pub fn v_from_phi(params: &ModelParams, phi: f64, r: f64) -> Result<f64> {
    let base = r * r + params.d() + phi;
    if !(base > 0.0) {
        return Err(Error::Domain(format!("r² + D + φ = {base} must be positive")));
    }
    Ok(base.powf(-0.5 * (params.dim() - 2.0)))
}

/// Inverse of [`v_from_phi`]: `φ = v^{-2/(n-2)} - r² - D`.
pub fn phi_from_v(params: &ModelParams, v: f64, r: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("v = {v} must be positive")));
    }
    Ok(v.powf(-2.0 / (params.dim() - 2.0)) - r * r - params.d())
}

/// Logarithmic radius `ξ = ln r` at which `χ(ξ, t) = φ(r, t)`.
pub fn xi_of_r(r: f64) -> f64 {
    r.ln()
}

pub fn r_of_xi(xi: f64) -> f64 {
    xi.exp()
}

/// Radial initial perturbation `φ₀(r)`.
pub trait RadialData: Send + Sync + fmt::Debug {
    fn value(&self, r: f64) -> f64;

    /// Short, stable description recorded in run manifests.
    fn descriptor(&self) -> String;
}

/// Canonical initial-data families at the `φ` level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    /// `φ₀ ≡ 0`, i.e. `v₀ = V_D`.
    Zero,
    /// `φ₀ ≡ c`, the profile `V_{D+c}`.
    Constant { level: f64 },
    /// `B (ln r)^{-γ}` for `r > 2`, capped on `[0, 2]` by a monotone cubic.
    LogTail { b: f64, gamma: f64 },
    /// Smooth bump of the given height supported in `(r_a, r_b)`.
    Bump { height: f64, r_a: f64, r_b: f64 },
    /// Smooth ramp from `0` for `r ≤ r_a` to `level` for `r ≥ r_b`.
    ConstantTail { level: f64, r_a: f64, r_b: f64 },
}

impl InitialData {
    pub fn log_tail(b: f64, gamma: f64) -> Result<Self> {
        if !(b > 0.0 && gamma >= 0.0 && b.is_finite() && gamma.is_finite()) {
            return Err(Error::Parameter(format!("log-tail needs B > 0, γ ≥ 0 (got {b}, {gamma})")));
        }
        Ok(Self::LogTail { b, gamma })
    }

    pub fn bump(height: f64, r_a: f64, r_b: f64) -> Result<Self> {
        if !(height > 0.0 && r_a >= 0.0 && r_b > r_a) {
            return Err(Error::Parameter(format!("bump needs height > 0 and 0 ≤ r_a < r_b")));
        }
        Ok(Self::Bump { height, r_a, r_b })
    }

    pub fn constant(level: f64) -> Result<Self> {
        if !(level >= 0.0 && level.is_finite()) {
            return Err(Error::Parameter(format!("constant level {level} must be nonnegative")));
        }
        Ok(Self::Constant { level })
    }

    pub fn constant_tail(level: f64, r_a: f64, r_b: f64) -> Result<Self> {
        if !(level > 0.0 && r_a >= 0.0 && r_b > r_a) {
            return Err(Error::Parameter(format!("constant tail needs level > 0 and 0 ≤ r_a < r_b")));
        }
        Ok(Self::ConstantTail { level, r_a, r_b })
    }

    /// Value at `r = 0` of the cap of the log-tail family.
    fn cap_height(b: f64, gamma: f64) -> (f64, f64, f64) {
        let l2 = std::f64::consts::LN_2;
        let edge = b * l2.powf(-gamma);
        let slope = -0.5 * b * gamma * l2.powf(-gamma - 1.0);
        // Fritsch–Carlson: with zero slope at the origin the cubic is monotone
        // as long as |slope| ≤ 3 |secant|; taking height - edge = |slope|
        // puts the ratio at 2.
        (edge + slope.abs(), edge, slope)
    }
}

impl RadialData for InitialData {
    fn value(&self, r: f64) -> f64 {
        match *self {
            InitialData::Zero => 0.0,
            InitialData::Constant { level } => level,
            InitialData::LogTail { b, gamma } => {
                if r > 2.0 {
                    b * r.ln().powf(-gamma)
                } else {
                    let (height, edge, slope) = Self::cap_height(b, gamma);
                    let s = r / 2.0;
                    let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
                    let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
                    let h11 = s.powi(3) - s * s;
                    h00 * height + h01 * edge + 2.0 * h11 * slope
                }
            }
            InitialData::Bump { height, r_a, r_b } => {
                let u = (2.0 * r - r_a - r_b) / (r_b - r_a);
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    height * (1.0 - 1.0 / (1.0 - u * u)).exp()
                }
            }
            InitialData::ConstantTail { level, r_a, r_b } => {
                let u = (r - r_a) / (r_b - r_a);
                level * smooth_step(u)
            }
        }
    }

    fn descriptor(&self) -> String {
        match *self {
            InitialData::Zero => "zero".to_string(),
            InitialData::Constant { level } => format!("const(level={level})"),
            InitialData::LogTail { b, gamma } => format!("log-tail(B={b},gamma={gamma})"),
            InitialData::Bump { height, r_a, r_b } => format!("bump(height={height},r_a={r_a},r_b={r_b})"),
            InitialData::ConstantTail { level, r_a, r_b } => {
                format!("constant-tail(level={level},r_a={r_a},r_b={r_b})")
            }
        }
    }
}

fn smooth_step(u: f64) -> f64 {
    let e = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        e(u) / (e(u) + e(1.0 - u))
    }
}

/// A user-supplied radial function, validated to be nonnegative.
#[derive(Clone)]
pub struct RadialFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    name: String,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction").field("name", &self.name).finish()
    }
}

impl RadialData for RadialFunction {
    fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    fn descriptor(&self) -> String {
        self.name.clone()
    }
}

/// Initial perturbation `φ₀` for data `v₀ = (|x|² + D + ψ₀)^{-(n-2)/2}`.
///
/// At the `φ` level this is the identity on radial `ψ₀`; the function is
/// sampled on a probe grid over `[0, 10⁶]` and rejected if it is negative or
/// non-finite anywhere there.
pub fn initial_phi_from_psi<F>(name: &str, psi0: F) -> Result<RadialFunction>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    for r in probe_grid(0.0, 1e6, 4000) {
        let v = psi0(r);
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Parameter(format!("psi0({r}) = {v} must be finite and nonnegative")));
        }
    }
    Ok(RadialFunction { f: Arc::new(psi0), name: name.to_string() })
}

/// Uniform points on `[lo, min(hi, 10)]` followed by geometric points up to `hi`.
pub fn probe_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let split = hi.min(10.0).max(lo);
    let half = points / 2;
    let mut out: Vec<f64> = (0..=half).map(|i| lo + (split - lo) * i as f64 / half as f64).collect();
    if hi > split {
        let ratio = (hi / split.max(1e-300)).ln();
        out.extend((1..=half).map(|i| split * (ratio * i as f64 / half as f64).exp()));
    }
    out
}

/// Min and max of `φ₀(r) (ln r)^γ` over `r ∈ (2, r_max]`, i.e. the best
/// constants `b` and `B` in `b ln^{-γ} r ≤ φ₀(r) ≤ B ln^{-γ} r`.
pub fn log_tail_constants(data: &dyn RadialData, gamma: f64, r_max: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let ratio = (r_max / 2.0).ln();
    for i in 1..=4000 {
        let r = 2.0 * (ratio * i as f64 / 4000.0).exp();
        let q = data.value(r) * r.ln().powf(gamma);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}

/// `sup` of `φ₀` on `[a, b]` over a fine uniform grid.
pub fn sup_on(data: &dyn RadialData, a: f64, b: f64) -> f64 {
    (0..=4000).map(|i| data.value(a + (b - a) * i as f64 / 4000.0)).fold(f64::NEG_INFINITY, f64::max)
}

/// `inf` of `φ₀` on `[a, b]` over a fine uniform grid.
pub fn inf_on(data: &dyn RadialData, a: f64, b: f64) -> f64 {
    (0..=4000).map(|i| data.value(a + (b - a) * i as f64 / 4000.0)).fold(f64::INFINITY, f64::min)
}
