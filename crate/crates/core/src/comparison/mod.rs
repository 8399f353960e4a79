//! Explicit super- and subsolutions of the perturbation equation, their
//! parameter selection, and grid certification of the inequalities they
//! satisfy.
//!
//! Every comparison function is a [`ComparisonSolution`]: it evaluates its
//! value and analytic partials either at radius `r` (the φ-level) or at
//! `ξ = ln r` (the χ-level). The operators [`operator_p`] and [`operator_q`]
//! act on those partials.

mod certify;
mod sub;
mod sup;

pub use certify::{
    certify, grid_extreme, sub_ordering_margin, CertGrid, CertificationReport, CheckResult, Extreme,
    GridPreset, GridSpec, Relation, ORDERING_R_MAX, RESIDUAL_TOL,
};
pub use sub::{select_a, select_sub_params, MatchedSub, SubOuter, SubParams};
pub use sup::{
    domination_margin, select_amplitude, select_super_params, AmplitudeSelection, InnerSuper, MatchedSuper, OuterSuper,
    SuperParams,
};

use crate::profiles::RadialData;
use crate::{Error, ModelParams, Result};

/// Value and first-order-in-time, second-order-in-space partials at one
/// space-time point. `d_x` and `d_xx` refer to `r` or `ξ` depending on the
/// method that produced the jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeJet {
    pub value: f64,
    pub d_x: f64,
    pub d_xx: f64,
    pub d_t: f64,
}

impl SpaceTimeJet {
    /// Convert φ-level partials at radius `r` to χ-level partials at `ln r`.
    pub fn phi_to_chi(self, r: f64) -> Self {
        Self {
            value: self.value,
            d_x: r * self.d_x,
            d_xx: r * r * self.d_xx + r * self.d_x,
            d_t: self.d_t,
        }
    }

    /// Convert χ-level partials at `ξ` to φ-level partials at `r = e^ξ`.
    pub fn chi_to_phi(self, xi: f64) -> Self {
        let r = xi.exp();
        Self {
            value: self.value,
            d_x: self.d_x / r,
            d_xx: (self.d_xx - self.d_x) / (r * r),
            d_t: self.d_t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    OuterSuper,
    InnerSuper,
    MatchedSuper,
    SubOuter,
    MatchedSub,
}

impl Kind {
    pub fn sense(self) -> Sense {
        match self {
            Kind::OuterSuper | Kind::InnerSuper | Kind::MatchedSuper => Sense::Super,
            Kind::SubOuter | Kind::MatchedSub => Sense::Sub,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::OuterSuper => "outer_super",
            Kind::InnerSuper => "inner_super",
            Kind::MatchedSuper => "matched_super",
            Kind::SubOuter => "sub_outer",
            Kind::MatchedSub => "matched_sub",
        }
    }
}

/// Whether the residual must be nonnegative (`Super`) or nonpositive (`Sub`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Super,
    Sub,
}

/// A space-time comparison function with analytic partials.
pub trait ComparisonSolution: Send + Sync {
    fn kind(&self) -> Kind;

    fn params(&self) -> &ModelParams;

    /// Shift `s` such that residuals are scaled by `(t+s)^{γ/2+1}`.
    fn time_shift(&self) -> f64;

    /// Radius where two pieces are glued, if any.
    fn matching_radius(&self) -> Option<f64> {
        None
    }

    /// Radial interval on which the function is defined.
    fn radial_domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    /// φ-level partials in `r`.
    fn phi(&self, r: f64, t: f64) -> SpaceTimeJet;

    /// χ-level partials in `ξ = ln r`.
    fn chi(&self, xi: f64, t: f64) -> SpaceTimeJet {
        let r = xi.exp();
        self.phi(r, t).phi_to_chi(r)
    }

    /// Residual of the perturbation equation at `(r, t)`. Pieces defined in
    /// logarithmic radius evaluate it through [`operator_q`].
    fn residual(&self, r: f64, t: f64) -> Result<f64> {
        operator_p(self.params(), &self.phi(r, t), r)
    }

    /// Kind-specific certificates (corner, continuity, identities) on `grid`.
    fn structural_checks(&self, _grid: &CertGrid) -> Vec<CheckResult> {
        Vec::new()
    }

    /// Constants consumed by the certificates, for run manifests.
    fn constants(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

/// Matched supersolution for `φ₀` with tail constant `B`: default structural
/// parameters followed by [`select_amplitude`].
pub fn matched_super_for(
    phi0: &dyn RadialData,
    params: &ModelParams,
    tail_bound: f64,
) -> Result<(MatchedSuper, AmplitudeSelection)> {
    let sp = select_super_params(params)?;
    let amp = select_amplitude(phi0, params, &sp, tail_bound)?;
    Ok((MatchedSuper::new(params, &sp.with_amplitude(amp.amplitude))?, amp))
}

/// Matched subsolution for `φ₀` with lower tail constant `b`, using
/// [`select_sub_params`] and [`select_a`].
pub fn matched_sub_for(phi0: &dyn RadialData, params: &ModelParams, b: f64) -> Result<MatchedSub> {
    let sp = select_a(phi0, b, params, &select_sub_params(params)?)?;
    MatchedSub::new(params, &sp)
}

/// `Pφ = φ_t − (r²+D+φ)(φ_rr + (n−1)φ_r/r) + (n−2) r φ_r + ((n−2)/2) φ_r²`.
///
/// Undefined at `r = 0`.
pub fn operator_p(params: &ModelParams, jet: &SpaceTimeJet, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("operator P is singular at r = {r}")));
    }
    let k = params.dim() - 2.0;
    let lap = jet.d_xx + (params.dim() - 1.0) * jet.d_x / r;
    Ok(jet.d_t - (r * r + params.d() + jet.value) * lap + k * r * jet.d_x + 0.5 * k * jet.d_x * jet.d_x)
}

/// `Qχ = χ_t − χ_ξξ − e^{−2ξ}{(D+χ)[χ_ξξ + (n−2)χ_ξ] − ((n−2)/2)χ_ξ²}`.
pub fn operator_q(params: &ModelParams, jet: &SpaceTimeJet, xi: f64) -> f64 {
    let k = params.dim() - 2.0;
    let far = (params.d() + jet.value) * (jet.d_xx + k * jet.d_x) - 0.5 * k * jet.d_x * jet.d_x;
    (jet.d_t - jet.d_xx) - (-2.0 * xi).exp() * far
}
