use super::certify::{grid_extreme, CertGrid, CheckResult};
use super::{operator_p, operator_q, ComparisonSolution, Kind, SpaceTimeJet};
use crate::profiles::{inf_on, RadialData};
use crate::special::{ClosedForm, HatPhiProfile};
use crate::{Error, ModelParams, Result};

/// Fraction of the bound `1/3` each of the three conditions on `ξ₀` may use.
const MARGIN: f64 = 0.9;
/// Shrink factor applied when choosing `a`.
const A_FACTOR: f64 = 0.9;

/// Parameters of the subsolution: the gluing point `ξ₀ = ln r₀` and the
/// amplitude `a ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SubParams {
    pub xi0: f64,
    pub r0: f64,
    pub a: f64,
    /// `min{1/16, 1/(4ξ₀²)}`.
    pub c2_min: f64,
    /// Left-hand sides of the three conditions on `ξ₀`, each below `1/3`.
    pub conditions: [f64; 3],
}

impl SubParams {
    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(Error::Parameter(format!("subsolution amplitude a = {} must lie in (0, 1)", self.a)));
        }
        if !(self.xi0 > 1.0 && self.xi0.is_finite()) {
            return Err(Error::Parameter(format!("xi0 = {} must exceed 1", self.xi0)));
        }
        Ok(())
    }
}

fn conditions(params: &ModelParams, xi0: f64) -> [f64; 3] {
    let g = params.gamma();
    let k = params.dim() - 2.0;
    let d1 = params.d() + 1.0;
    let e = (-2.0 * xi0).exp();
    [
        (g + 1.0) * d1 * e,
        // sup_{s>0} s e^{-2s} = 1/(2e)
        k * d1 * e / (2.0 * std::f64::consts::E),
        0.5 * k * g * e,
    ]
}

/// Smallest `ξ₀ ∈ {1.01, 1.02, …}` meeting the three far-field conditions with
/// slack; the amplitude defaults to `a = 1/2`.
pub fn select_sub_params(params: &ModelParams) -> Result<SubParams> {
    let limit = MARGIN / 3.0;
    for k in 101..100_000u32 {
        let xi0 = k as f64 / 100.0;
        let c = conditions(params, xi0);
        if c.iter().all(|&x| x <= limit) {
            return Ok(SubParams {
                xi0,
                r0: xi0.exp(),
                a: 0.5,
                c2_min: (1.0 / 16.0f64).min(0.25 / (xi0 * xi0)),
                conditions: c,
            });
        }
    }
    Err(Error::Parameter("no admissible xi0 below 1000".into()))
}

/// Choose `a = 0.9·min{inf_{[0,r₀]} φ₀, b c₂^{γ/2}, 0.999}` and confirm the
/// ordering `φ̲(·,0) ≤ φ₀` on a probe grid over `[0, 10⁶]`.
pub fn select_a(phi0: &dyn RadialData, b: f64, params: &ModelParams, sp: &SubParams) -> Result<SubParams> {
    let c1 = inf_on(phi0, 0.0, sp.r0);
    if !(c1 > 0.0) {
        return Err(Error::Parameter(format!("φ₀ vanishes on [0, r0] (min {c1}); no admissible a")));
    }
    if !(b > 0.0) {
        return Err(Error::Parameter(format!("lower tail constant b = {b} must be positive")));
    }
    let a = A_FACTOR * c1.min(b * sp.c2_min.powf(0.5 * params.gamma())).min(0.999);
    let out = sp.with_a(a);
    let margin = super::sub_ordering_margin(phi0, params, &out, 1e6);
    if !(margin > 0.0) {
        return Err(Error::Certification(format!("a = {a} is not below φ₀ (margin {margin})")));
    }
    Ok(out)
}

/// Initial value `φ̲(r, 0)` for any `a`, without the `a < 1` restriction.
pub(crate) fn initial_value(params: &ModelParams, sp: &SubParams, r: f64) -> f64 {
    if r <= sp.r0 {
        sp.a
    } else {
        let z = r.ln() - sp.xi0;
        sp.a * (1.0 + 0.25 * z * z).powf(-0.5 * params.gamma())
    }
}

/// `χ̂(ξ,t) = a(t+1)^{-γ/2} Φ̂((ξ−ξ₀)(t+1)^{-1/2})` for `ξ ≥ ξ₀`.
#[derive(Debug, Clone, Copy)]
pub struct SubOuter {
    params: ModelParams,
    hat: HatPhiProfile,
    sp: SubParams,
}

impl SubOuter {
    pub fn new(params: &ModelParams, sp: &SubParams) -> Result<Self> {
        sp.validate()?;
        Ok(Self { params: *params, hat: HatPhiProfile::new(params.gamma())?, sp: *sp })
    }

    /// `a (t + 1 + (ξ−ξ₀)²/4)^{-γ/2}`.
    pub fn explicit_value(&self, xi: f64, t: f64) -> f64 {
        let d = xi - self.sp.xi0;
        self.sp.a * (t + 1.0 + 0.25 * d * d).powf(-0.5 * self.params.gamma())
    }
}

impl ComparisonSolution for SubOuter {
    fn kind(&self) -> Kind {
        Kind::SubOuter
    }

    fn params(&self) -> &ModelParams {
        &self.params
    }

    fn time_shift(&self) -> f64 {
        1.0
    }

    fn radial_domain(&self) -> (f64, f64) {
        (self.sp.r0, f64::INFINITY)
    }

    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet {
        let xi = r.ln();
        self.chi(xi, t).chi_to_phi(xi)
    }

    fn chi(&self, xi: f64, t: f64) -> SpaceTimeJet {
        let tau = t + 1.0;
        let z = (xi - self.sp.xi0) / tau.sqrt();
        let j = self.hat.eval(z);
        let g = self.params.gamma();
        let amp = self.sp.a * tau.powf(-0.5 * g);
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

/// `a(t+1)^{-γ/2}` on `[0, r₀]` glued to [`SubOuter`] beyond `r₀`.
#[derive(Debug, Clone, Copy)]
pub struct MatchedSub {
    outer: SubOuter,
}

impl MatchedSub {
    pub fn new(params: &ModelParams, sp: &SubParams) -> Result<Self> {
        Ok(Self { outer: SubOuter::new(params, sp)? })
    }

    pub fn outer(&self) -> &SubOuter {
        &self.outer
    }

    pub fn sub_params(&self) -> &SubParams {
        &self.outer.sp
    }

    /// `P φ̲` on the flat inner part, `−(aγ/2)(t+1)^{-γ/2-1}`.
    pub fn inner_residual_closed_form(&self, t: f64) -> f64 {
        let g = self.outer.params.gamma();
        -0.5 * self.outer.sp.a * g * (t + 1.0).powf(-0.5 * g - 1.0)
    }

    fn flat(&self, t: f64) -> SpaceTimeJet {
        let g = self.outer.params.gamma();
        let tau = t + 1.0;
        let value = self.outer.sp.a * tau.powf(-0.5 * g);
        SpaceTimeJet { value, d_x: 0.0, d_xx: 0.0, d_t: -0.5 * g * value / tau }
    }
}

impl ComparisonSolution for MatchedSub {
    fn kind(&self) -> Kind {
        Kind::MatchedSub
    }

    fn params(&self) -> &ModelParams {
        &self.outer.params
    }

    fn time_shift(&self) -> f64 {
        1.0
    }

    fn matching_radius(&self) -> Option<f64> {
        Some(self.outer.sp.r0)
    }

    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet {
        if r <= self.outer.sp.r0 {
            self.flat(t)
        } else {
            self.outer.phi(r, t)
        }
    }

    fn chi(&self, xi: f64, t: f64) -> SpaceTimeJet {
        if xi <= self.outer.sp.xi0 {
            self.flat(t)
        } else {
            self.outer.chi(xi, t)
        }
    }

    fn residual(&self, r: f64, t: f64) -> Result<f64> {
        if r <= self.outer.sp.r0 {
            operator_p(self.params(), &self.flat(t), r)
        } else {
            self.outer.residual(r, t)
        }
    }

    fn structural_checks(&self, grid: &CertGrid) -> Vec<CheckResult> {
        let sp = self.outer.sp;
        let g = self.params().gamma();
        let scale = |t: f64| (t + 1.0).powf(0.5 * g + 1.0);
        let times = grid.times();
        let mut out = Vec::new();

        let cont = grid_extreme(times, &[sp.r0], true, |_, t| {
            (self.flat(t).value - self.outer.chi(sp.xi0, t).value).abs()
        });
        out.push(CheckResult::at_most("continuity", cont, 1e-10));

        let slope = grid_extreme(times, &[sp.r0], true, |r, t| {
            (self.outer.chi(sp.xi0, t).d_x / r - self.flat(t).d_x).abs()
        });
        out.push(CheckResult::at_most("c1_matching", slope, 1e-10));

        let inner = grid.inner_radii();
        let exact = grid_extreme(times, inner, true, |r, t| {
            let p = operator_p(self.params(), &self.flat(t), r).unwrap_or(f64::NAN);
            (p - self.inner_residual_closed_form(t)).abs() * scale(t)
        });
        out.push(CheckResult::at_most("inner_closed_form", exact, 1e-15));
        let neg = grid_extreme(times, inner, true, |r, t| {
            operator_p(self.params(), &self.flat(t), r).unwrap_or(f64::NAN) * scale(t)
        });
        out.push(CheckResult::below("inner_negative", neg, 0.0));

        let explicit = grid_extreme(times, grid.outer_radii(), true, |r, t| {
            let xi = r.ln();
            let v = self.outer.chi(xi, t).value;
            (v - self.outer.explicit_value(xi, t)).abs() / v.abs().max(f64::MIN_POSITIVE)
        });
        out.push(CheckResult::at_most("explicit_form", explicit, 1e-12));
        out
    }

    fn constants(&self) -> Vec<(&'static str, f64)> {
        let sp = self.outer.sp;
        vec![
            ("xi0", sp.xi0),
            ("r0", sp.r0),
            ("a", sp.a),
            ("c2_min", sp.c2_min),
            ("cond_curvature", sp.conditions[0]),
            ("cond_slope", sp.conditions[1]),
            ("cond_square", sp.conditions[2]),
        ]
    }
}
