use std::f64::consts::LN_2;

use super::certify::{grid_extreme, CertGrid, CheckResult};
use super::{operator_p, operator_q, ComparisonSolution, Kind, SpaceTimeJet};
use crate::profiles::{probe_grid, sup_on, RadialData};
use crate::special::{sigma0_of, ClosedForm, MatchingFactor, PhiProfile, RhoProfile};
use crate::{Error, ModelParams, Result};

/// Inflation applied to every grid-estimated constant and selected parameter.
const SAFETY: f64 = 1.1;
/// Upper end of the window on which the drift constants are scanned.
const DRIFT_Z_MAX: f64 = 1e3;
const SCAN_POINTS: usize = 8000;

/// Parameters `(ξ₀, t₀, A)` of the supersolution together with every constant
/// used to select them.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SuperParams {
    pub xi0: f64,
    pub t0: f64,
    pub amplitude: f64,
    pub sigma0: f64,
    /// `ρ(σ₀)`.
    pub rho_sigma0: f64,
    /// First zero of `Φ''`; `Φ'' ≤ 0` on `[0, z₀]`.
    pub z0: f64,
    /// `Φ'(z) ≤ -c z^{-γ-1}` for `z > z₀`.
    pub drift_c1: f64,
    /// `Φ''(z) ≤ c z^{-γ-2}` for `z > z₀`.
    pub drift_c2: f64,
    /// Lower bound on `t₀` for the drift sign condition.
    pub t_star: f64,
    /// `ρ'(σ) ≥ -c σ` on `(0, σ₀)`.
    pub corner_c1: f64,
    /// `Φ'(z) ≤ -c z` on `(0, 1)`.
    pub corner_c2: f64,
    /// `C(ξ₀)` in `|f'(t)| ≤ C(ξ₀)/(t+t₀)²`.
    pub c_xi0: f64,
    /// Lower bound on `t₀` for the inner supersolution.
    pub t_upper: f64,
}

impl SuperParams {
    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Replace `t₀` without re-checking admissibility.
    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    /// `t₀ > max{t_*, t^*, ξ₀², σ₀^{-2}}` and `ξ₀ > c₁/(c₂ ρ(σ₀))`.
    pub fn is_admissible(&self) -> bool {
        let floor = self.t_star.max(self.t_upper).max(self.xi0 * self.xi0).max(self.sigma0.powi(-2));
        self.t0 > floor && self.xi0 > self.corner_c1 / (self.corner_c2 * self.rho_sigma0)
    }

    /// `c₂ ξ₀ − c₁/ρ(σ₀)`, the scaled lower bound of the corner gap.
    pub fn corner_margin(&self) -> f64 {
        self.corner_c2 * self.xi0 - self.corner_c1 / self.rho_sigma0
    }

    fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.xi0) && ok(self.t0) && ok(self.amplitude)) {
            return Err(Error::Parameter(format!(
                "supersolution needs xi0, t0, A > 0 (got {}, {}, {})",
                self.xi0, self.t0, self.amplitude
            )));
        }
        Ok(())
    }
}

fn geometric(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let ratio = (hi / lo).ln();
    (0..points).map(move |i| lo * (ratio * i as f64 / (points - 1) as f64).exp())
}

/// Select `ξ₀` and `t₀` constructively; the amplitude is left at 1.
pub fn select_super_params(params: &ModelParams) -> Result<SuperParams> {
    let gamma = params.gamma();
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Parameter(format!("supersolution requires 0 < gamma < 1, got {gamma}")));
    }
    let phi = PhiProfile::new(gamma)?;
    let rho = RhoProfile::new(params.lambda())?;
    let sigma0 = sigma0_of(params.lambda())?;
    let k = params.dim() - 2.0;

    let z0 = first_curvature_zero(&phi)?;

    let tail = phi.tail_constant();
    let mut c1 = gamma * tail;
    let mut c2 = gamma * (gamma + 1.0) * tail;
    for z in geometric(z0 * (1.0 + 1e-9), DRIFT_Z_MAX, SCAN_POINTS) {
        let j = phi.eval(z);
        c1 = c1.min(-j.d1 * z.powf(gamma + 1.0));
        c2 = c2.max(j.d2 * z.powf(gamma + 2.0));
    }
    if !(c1 > 0.0) {
        return Err(Error::Certification(format!("slope constant on (z0, ∞) is not positive: {c1}")));
    }
    let drift_c1 = c1 / SAFETY;
    let drift_c2 = c2.max(0.0) * SAFETY;
    let t_star = (drift_c2 / (k * drift_c1 * z0)).powi(2).max(1.0);

    let mut corner_c1 = 0.5 * rho.lambda();
    let mut corner_c2 = 0.5 * gamma;
    for i in 1..=SCAN_POINTS {
        let frac = i as f64 / SCAN_POINTS as f64;
        let s = sigma0 * frac;
        corner_c1 = corner_c1.max(-rho.eval(s).d1 / s);
        corner_c2 = corner_c2.min(-phi.slope_at(frac) / frac);
    }
    corner_c1 *= SAFETY;
    corner_c2 /= SAFETY;
    if !(corner_c2 > 0.0) {
        return Err(Error::Certification("Φ'(z)/z is not bounded away from zero on (0,1)".into()));
    }
    let rho_sigma0 = rho.value(sigma0);
    let xi0 = SAFETY * corner_c1 / (corner_c2 * rho_sigma0);

    let c_xi0 = MatchingFactor::new_unchecked(params, xi0, 1.0)?.bound().constant;
    let t_upper = sigma0.powi(-2).max(c_xi0 / phi.value_at(xi0));
    let t0 = SAFETY * t_star.max(t_upper).max(xi0 * xi0).max(sigma0.powi(-2));

    Ok(SuperParams {
        xi0,
        t0,
        amplitude: 1.0,
        sigma0,
        rho_sigma0,
        z0,
        drift_c1,
        drift_c2,
        t_star,
        corner_c1,
        corner_c2,
        c_xi0,
        t_upper,
    })
}

fn first_curvature_zero(phi: &PhiProfile) -> Result<f64> {
    let d2 = |z: f64| phi.eval(z).d2;
    let step = 1e-3;
    let mut lo = 0.0;
    while lo < 50.0 {
        let hi = lo + step;
        if d2(hi) > 0.0 {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if d2(m) > 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Ok(a);
        }
        lo = hi;
    }
    Err(Error::Certification("Φ'' has no sign change on [0, 50]".into()))
}

/// Outer supersolution `χ(ξ,t) = A(t+t₀)^{-γ/2} Φ((ξ+ξ₀)(t+t₀)^{-1/2})`, `ξ ≥ 0`.
#[derive(Debug, Clone, Copy)]
pub struct OuterSuper {
    params: ModelParams,
    phi: PhiProfile,
    sp: SuperParams,
}

impl OuterSuper {
    pub fn new(params: &ModelParams, sp: &SuperParams) -> Result<Self> {
        sp.validate()?;
        Ok(Self { params: *params, phi: PhiProfile::new(params.gamma())?, sp: *sp })
    }

    pub fn super_params(&self) -> &SuperParams {
        &self.sp
    }

    fn scaling(&self, xi: f64, t: f64) -> (f64, f64, f64) {
        let tau = t + self.sp.t0;
        let z = (xi + self.sp.xi0) / tau.sqrt();
        (tau, z, self.sp.amplitude * tau.powf(-0.5 * self.params.gamma()))
    }

    /// `χ_t − χ_ξξ` with `χ_ξξ` taken from the Kummer representation.
    pub fn heat_residual(&self, xi: f64, t: f64) -> f64 {
        let (tau, z, amp) = self.scaling(xi, t);
        self.chi(xi, t).d_t - amp / tau * self.phi.curvature_from_kummer(z)
    }

    /// `χ_ξξ + (n−2)χ_ξ`, nonpositive when `t₀ > t_*`.
    pub fn drift(&self, xi: f64, t: f64) -> f64 {
        let j = self.chi(xi, t);
        j.d_xx + (self.params.dim() - 2.0) * j.d_x
    }
}

impl ComparisonSolution for OuterSuper {
    fn kind(&self) -> Kind {
        Kind::OuterSuper
    }

    fn params(&self) -> &ModelParams {
        &self.params
    }

    fn time_shift(&self) -> f64 {
        self.sp.t0
    }

    fn radial_domain(&self) -> (f64, f64) {
        (1.0, f64::INFINITY)
    }

    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet {
        let xi = r.ln();
        self.chi(xi, t).chi_to_phi(xi)
    }

    fn chi(&self, xi: f64, t: f64) -> SpaceTimeJet {
        let (tau, z, amp) = self.scaling(xi, t);
        let j = self.phi.eval(z);
        let g = self.params.gamma();
        SpaceTimeJet {
            value: amp * j.value,
            d_x: amp / tau.sqrt() * j.d1,
            d_xx: amp / tau * j.d2,
            d_t: amp / tau * (-0.5 * z * j.d1 - 0.5 * g * j.value),
        }
    }

    fn residual(&self, r: f64, t: f64) -> Result<f64> {
        let xi = r.ln();
        Ok(operator_q(&self.params, &self.chi(xi, t), xi))
    }
}

/// Inner supersolution `A f(t)(t+t₀)^{-γ/2} ρ(r(t+t₀)^{-1/2})` on `r ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct InnerSuper {
    params: ModelParams,
    rho: RhoProfile,
    factor: MatchingFactor,
    sp: SuperParams,
}

impl InnerSuper {
    /// Requires `ρ` to stay positive on the swept range `σ ≤ t₀^{-1/2}`.
    pub fn new(params: &ModelParams, sp: &SuperParams) -> Result<Self> {
        sp.validate()?;
        let rho = RhoProfile::new(params.lambda())?;
        if !(rho.value(sp.t0.powf(-0.5)) > 0.0 && sp.t0.powf(-0.5) < rho.first_zero()) {
            return Err(Error::Parameter(format!("t0 = {} lets ρ change sign on r ≤ 1", sp.t0)));
        }
        let factor = MatchingFactor::new_unchecked(params, sp.xi0, sp.t0)?;
        Ok(Self { params: *params, rho, factor, sp: *sp })
    }

    pub fn factor(&self) -> &MatchingFactor {
        &self.factor
    }
}

impl ComparisonSolution for InnerSuper {
    fn kind(&self) -> Kind {
        Kind::InnerSuper
    }

    fn params(&self) -> &ModelParams {
        &self.params
    }

    fn time_shift(&self) -> f64 {
        self.sp.t0
    }

    fn radial_domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet {
        let tau = t + self.sp.t0;
        let s = tau.powf(-0.5);
        let sigma = r * s;
        let f = self.factor.eval(t);
        let rj = self.rho.eval(sigma);
        let g = self.params.gamma();
        let amp = self.sp.amplitude * tau.powf(-0.5 * g);
        SpaceTimeJet {
            value: amp * f.value * rj.value,
            d_x: amp * f.value * s * rj.d1,
            d_xx: amp * f.value / tau * rj.d2,
            d_t: amp * f.d1 * rj.value - 0.5 * amp * f.value / tau * (g * rj.value + sigma * rj.d1),
        }
    }
}

/// Inner supersolution on `[0, 1]` glued to the outer one at `r = 1`.
#[derive(Debug, Clone, Copy)]
pub struct MatchedSuper {
    inner: InnerSuper,
    outer: OuterSuper,
}

impl MatchedSuper {
    pub fn new(params: &ModelParams, sp: &SuperParams) -> Result<Self> {
        Ok(Self { inner: InnerSuper::new(params, sp)?, outer: OuterSuper::new(params, sp)? })
    }

    pub fn inner(&self) -> &InnerSuper {
        &self.inner
    }

    pub fn outer(&self) -> &OuterSuper {
        &self.outer
    }

    pub fn super_params(&self) -> &SuperParams {
        &self.outer.sp
    }

    /// One-sided radial slopes `(I₁, I₂)` at `r = 1` from inside and outside.
    pub fn corner_slopes(&self, t: f64) -> (f64, f64) {
        (self.inner.phi(1.0, t).d_x, self.outer.chi(0.0, t).d_x)
    }
}

impl ComparisonSolution for MatchedSuper {
    fn kind(&self) -> Kind {
        Kind::MatchedSuper
    }

    fn params(&self) -> &ModelParams {
        &self.outer.params
    }

    fn time_shift(&self) -> f64 {
        self.outer.sp.t0
    }

    fn matching_radius(&self) -> Option<f64> {
        Some(1.0)
    }

    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet {
        if r <= 1.0 {
            self.inner.phi(r, t)
        } else {
            self.outer.phi(r, t)
        }
    }

    fn chi(&self, xi: f64, t: f64) -> SpaceTimeJet {
        if xi <= 0.0 {
            let r = xi.exp();
            self.inner.phi(r, t).phi_to_chi(r)
        } else {
            self.outer.chi(xi, t)
        }
    }

    fn residual(&self, r: f64, t: f64) -> Result<f64> {
        if r <= 1.0 {
            operator_p(self.params(), &self.inner.phi(r, t), r)
        } else {
            self.outer.residual(r, t)
        }
    }

    fn structural_checks(&self, grid: &CertGrid) -> Vec<CheckResult> {
        let sp = self.outer.sp;
        let g = self.params().gamma();
        let k = self.params().dim() - 2.0;
        let scale = |t: f64| (t + sp.t0).powf(0.5 * g + 1.0);
        let times = grid.times();
        let outer = grid.outer_radii();
        let mut out = Vec::new();

        let window = sp.t0.powf(-0.5);
        out.push(CheckResult::scalar_below("sigma_window", window, sp.sigma0));

        let cont = grid_extreme(times, &[1.0], true, |_, t| {
            let a = self.inner.phi(1.0, t).value;
            let b = self.outer.chi(0.0, t).value;
            (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
        });
        out.push(CheckResult::at_most("continuity", cont, 1e-10));

        let gap = grid_extreme(times, &[1.0], false, |_, t| {
            let (i1, i2) = self.corner_slopes(t);
            (i1 - i2) * scale(t)
        });
        out.push(CheckResult::above("corner_gap", gap, 0.0));

        let floor = sp.amplitude * sp.corner_margin();
        let bound = grid_extreme(times, &[1.0], false, |_, t| {
            let (i1, i2) = self.corner_slopes(t);
            (i1 - i2) * scale(t) - floor
        });
        out.push(CheckResult::at_least("corner_bound", bound, -1e-12 * sp.amplitude));
        out.push(CheckResult::scalar_above("corner_margin", sp.corner_margin(), 0.0));

        let heat = grid_extreme(times, outer, true, |r, t| {
            self.outer.heat_residual(r.ln(), t).abs() * scale(t) / sp.amplitude
        });
        out.push(CheckResult::at_most("heat_identity", heat, 1e-10));

        let drift = grid_extreme(times, outer, false, |r, t| {
            let j = self.outer.chi(r.ln(), t);
            -(j.d_xx + k * j.d_x) * scale(t)
        });
        out.push(CheckResult::at_least("drift_sign", drift, -1e-12 * sp.amplitude));
        out
    }

    fn constants(&self) -> Vec<(&'static str, f64)> {
        let sp = self.outer.sp;
        vec![
            ("xi0", sp.xi0),
            ("t0", sp.t0),
            ("A", sp.amplitude),
            ("sigma0", sp.sigma0),
            ("rho_sigma0", sp.rho_sigma0),
            ("z0", sp.z0),
            ("drift_c1", sp.drift_c1),
            ("drift_c2", sp.drift_c2),
            ("t_star", sp.t_star),
            ("corner_c1", sp.corner_c1),
            ("corner_c2", sp.corner_c2),
            ("C_xi0", sp.c_xi0),
            ("t_upper", sp.t_upper),
        ]
    }
}

/// Outcome of choosing the amplitude `A` so that `φ̄(·,0) > φ₀`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AmplitudeSelection {
    pub amplitude: f64,
    /// The three lower bounds on `A` (inner, intermediate, tail).
    pub terms: [f64; 3],
    /// `sup φ₀` on `[0, 2]`.
    pub cap_sup: f64,
    /// `inf z^γ Φ(z)` for `z ≥ z₀'`, deflated by the safety factor.
    pub tail_floor: f64,
    /// `z₀' = (ln 2 + ξ₀) t₀^{-1/2}`.
    pub z0_prime: f64,
    /// Tail constant `B` in `φ₀(r) ≤ B ln^{-γ} r`, `r > 2`.
    pub tail_bound: f64,
    /// `min (φ̄(r,0) − φ₀(r))` over the probe grid on `[0, 10⁶]`.
    pub margin: f64,
}

/// Choose `A` so the matched supersolution dominates `φ₀` initially, then
/// confirm the ordering on a probe grid.
pub fn select_amplitude(
    phi0: &dyn RadialData,
    params: &ModelParams,
    sp: &SuperParams,
    tail_bound: f64,
) -> Result<AmplitudeSelection> {
    if !(tail_bound > 0.0 && tail_bound.is_finite()) {
        return Err(Error::Parameter(format!("tail constant B = {tail_bound} must be positive")));
    }
    let g = params.gamma();
    let phi = PhiProfile::new(g)?;
    let rho = RhoProfile::new(params.lambda())?;
    let s0 = sp.t0.powf(-0.5);
    let cap_sup = sup_on(phi0, 0.0, 2.0).max(0.0);
    let z0_prime = (LN_2 + sp.xi0) * s0;
    let mut floor = phi.tail_constant();
    for z in geometric(z0_prime, z0_prime.max(1.0) * 1e4, SCAN_POINTS) {
        floor = floor.min(z.powf(g) * phi.value_at(z));
    }
    let tail_floor = floor / SAFETY;
    let f0 = phi.value_at(sp.xi0 * s0) / rho.value(s0);
    let lift = sp.t0.powf(0.5 * g);
    let terms = [
        cap_sup * lift / (f0 * rho.value(s0)),
        cap_sup * lift / phi.value_at(z0_prime),
        tail_bound / tail_floor * (1.0 + sp.xi0 / LN_2).powf(g),
    ];
    let amplitude = SAFETY * terms.iter().copied().fold(0.0, f64::max);
    let sup = MatchedSuper::new(params, &sp.with_amplitude(amplitude))?;
    let margin = domination_margin(&sup, phi0, 1e6);
    if !(margin > 0.0) {
        return Err(Error::Certification(format!(
            "selected A = {amplitude} does not dominate φ₀ (margin {margin})"
        )));
    }
    Ok(AmplitudeSelection { amplitude, terms, cap_sup, tail_floor, z0_prime, tail_bound, margin })
}

/// `min_r (φ̄(r,0) − φ₀(r))` over a probe grid on `[0, r_max]`.
pub fn domination_margin(sup: &dyn ComparisonSolution, phi0: &dyn RadialData, r_max: f64) -> f64 {
    grid_extreme(&[0.0], &probe_grid(0.0, r_max, 20000), false, |r, t| sup.phi(r, t).value - phi0.value(r))
        .value
}
