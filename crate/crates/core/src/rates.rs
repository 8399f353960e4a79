//! Decay series, power-law fits and band checks on solver trajectories.
//!
//! Rates are never compared by slope alone. A run with data `~ (ln r)^{-γ}`
//! should satisfy `c ≤ (t+1)^{γ/2} φ(0,t) ≤ C` on the window, and every
//! nontrivial run should satisfy `(t+1)^{1/2} sup φ ≥ c > 0`. The band
//! checks test those two-sided statements directly; the fitted slope is a
//! secondary diagnostic.

use std::str::FromStr;

use rayon::prelude::*;

use crate::profiles::{InitialData, RadialData};
use crate::solver::{solve, SolverConfig, Trajectory};
use crate::{Error, ModelParams, Result};

/// Fewest window points accepted by [`fit_rate`].
pub const MIN_WINDOW_POINTS: usize = 8;
/// Admissible `|p + γ/2|`.
pub const SLOPE_TOL: f64 = 0.10;
/// Admissible `band_hi / band_lo`.
pub const BAND_RATIO_MAX: f64 = 20.0;
/// Exponent of the universal ceiling.
pub const CEILING_EXPONENT: f64 = 0.5;
/// Exponent that decays too fast to be attained.
pub const FAST_EXPONENT: f64 = 0.6;
/// Required `g(t_a)/g(t_b)` for a band to count as collapsing.
pub const COLLAPSE_FACTOR: f64 = 2.0;
/// Slopes above `-NON_DECAY_SLOPE` count as no decay.
pub const NON_DECAY_SLOPE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `sup_r φ(r, t_k)`.
    Sup,
    /// `φ(0, t_k)`.
    Origin,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DecaySeries {
    pub kind: SeriesKind,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Configuration hash of the source trajectory.
    pub provenance: String,
}

impl DecaySeries {
    /// Series from explicit samples, e.g. synthetic power laws.
    pub fn from_samples(kind: SeriesKind, times: Vec<f64>, values: Vec<f64>, provenance: &str) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::Fit(format!("series needs matching nonempty columns ({} vs {})", times.len(), values.len())));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Fit("series times must be strictly increasing".into()));
        }
        Ok(Self { kind, times, values, provenance: provenance.to_string() })
    }

    /// Indices with `t ∈ [t_a, t_b]`, with a relative slack of `1e-12`.
    fn window_indices(&self, (ta, tb): (f64, f64)) -> Vec<usize> {
        let (lo, hi) = (ta * (1.0 - 1e-12), tb * (1.0 + 1e-12));
        (0..self.times.len()).filter(|&k| self.times[k] >= lo && self.times[k] <= hi).collect()
    }

    /// `(t+1)^q s` on the window.
    pub fn normalized(&self, q: f64, window: (f64, f64)) -> Vec<(f64, f64)> {
        self.window_indices(window)
            .into_iter()
            .map(|k| (self.times[k], (self.times[k] + 1.0).powf(q) * self.values[k]))
            .collect()
    }

    pub fn is_strictly_decreasing(&self, window: (f64, f64)) -> bool {
        let idx = self.window_indices(window);
        idx.windows(2).all(|w| self.values[w[1]] < self.values[w[0]])
    }
}

pub fn extract_series(traj: &Trajectory, kind: SeriesKind) -> Result<DecaySeries> {
    if traj.is_empty() {
        return Err(Error::Fit("trajectory has no recorded times".into()));
    }
    let values = (0..traj.len())
        .map(|k| match kind {
            SeriesKind::Sup => traj.sup_value(k),
            SeriesKind::Origin => traj.origin_value(k),
        })
        .collect();
    DecaySeries::from_samples(kind, traj.times.clone(), values, &traj.config_hash)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub stderr: f64,
    /// Largest `|ln s − (intercept + slope ln(t+1))|`.
    pub max_log_residual: f64,
}

/// Least-squares fit of `ln s` against `ln(t+1)` on the window.
pub fn fit_rate(series: &DecaySeries, window: (f64, f64)) -> Result<RateFit> {
    if !(window.0 >= 0.0 && window.1 > window.0) {
        return Err(Error::Fit(format!("degenerate window [{}, {}]", window.0, window.1)));
    }
    let idx = series.window_indices(window);
    if idx.len() < MIN_WINDOW_POINTS {
        return Err(Error::Fit(format!(
            "window [{}, {}] holds {} samples, need {MIN_WINDOW_POINTS}",
            window.0,
            window.1,
            idx.len()
        )));
    }
    if let Some(&k) = idx.iter().find(|&&k| !(series.values[k] > 0.0)) {
        return Err(Error::Fit(format!("nonpositive sample {} at t = {}", series.values[k], series.times[k])));
    }
    let xs: Vec<f64> = idx.iter().map(|&k| (series.times[k] + 1.0).ln()).collect();
    let ys: Vec<f64> = idx.iter().map(|&k| series.values[k].ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - slope * x).collect();
    let ssr: f64 = res.iter().map(|r| r * r).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let max_log_residual = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if !stderr.is_finite() {
        return Err(Error::Fit("slope standard error is not finite".into()));
    }
    Ok(RateFit { slope, intercept, window, points: idx.len(), stderr, max_log_residual })
}

/// `g_k = (t_k+1)^q s_k` over the window.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BandCheck {
    pub exponent: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// `g` at the first and last window time.
    pub start: f64,
    pub end: f64,
}

impl BandCheck {
    pub fn ratio(&self) -> f64 {
        self.band_hi / self.band_lo
    }

    /// `band_lo > 0` and `band_hi / band_lo ≤ max_ratio`.
    pub fn bounded(&self, max_ratio: f64) -> bool {
        self.band_lo > 0.0 && self.ratio() <= max_ratio
    }

    /// `g(t_a) / g(t_b)`.
    pub fn decrease(&self) -> f64 {
        self.start / self.end
    }

    /// `g` falls by at least `factor` across the window.
    pub fn collapses(&self, factor: f64) -> bool {
        self.decrease() >= factor
    }
}

pub fn band_check(series: &DecaySeries, exponent: f64, window: (f64, f64)) -> Result<BandCheck> {
    let g = series.normalized(exponent, window);
    if g.is_empty() {
        return Err(Error::Fit(format!("window [{}, {}] is empty", window.0, window.1)));
    }
    let band_lo = g.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let band_hi = g.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(BandCheck { exponent, band_lo, band_hi, start: g[0].1, end: g[g.len() - 1].1 })
}

/// Initial data families swept by [`theorem_suite`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `B (ln r)^{-γ}` tails with the γ of each row.
    LogTail { b: f64 },
    /// Compactly supported data.
    Bump { height: f64, r_a: f64, r_b: f64 },
    /// Data tending to a positive constant, the `γ = 0` end of the family.
    ConstantTail { level: f64, r_a: f64, r_b: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::LogTail { .. } => "log-tail",
            Family::Bump { .. } => "bump",
            Family::ConstantTail { .. } => "constant-tail",
        }
    }

    pub fn data(&self, gamma: f64) -> Result<InitialData> {
        match *self {
            Family::LogTail { b } => InitialData::log_tail(b, gamma),
            Family::Bump { height, r_a, r_b } => InitialData::bump(height, r_a, r_b),
            Family::ConstantTail { level, r_a, r_b } => InitialData::constant_tail(level, r_a, r_b),
        }
    }

    /// Whether the data depend on γ.
    pub fn uses_gamma(&self) -> bool {
        matches!(self, Family::LogTail { .. })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log-tail" => Ok(Family::LogTail { b: 1.0 }),
            "bump" => Ok(Family::Bump { height: 1.0, r_a: 0.5, r_b: 2.0 }),
            "constant-tail" => Ok(Family::ConstantTail { level: 0.5, r_a: 1.0, r_b: 2.0 }),
            other => Err(Error::Parameter(format!("unknown family '{other}' (log-tail, bump, constant-tail)"))),
        }
    }
}

/// One line of the rate table.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SuiteRow {
    pub family: &'static str,
    /// NaN when the family does not depend on γ.
    pub gamma: f64,
    /// Exponent of the band: `γ/2` for log tails inside the theorem range,
    /// `1/2` otherwise.
    pub exponent: f64,
    pub p_sup: f64,
    pub p_origin: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// `min (t+1)^{1/2} sup φ` on the window.
    pub ceiling_lo: f64,
    /// `g(t_a)/g(t_b)` for `g = (t+1)^{0.6} sup φ`.
    pub fast_decrease: f64,
    pub decays: bool,
    /// γ outside `(0, 1)`: only the ceiling is asserted.
    pub exploratory: bool,
    pub pass: bool,
    pub error: Option<String>,
}

impl SuiteRow {
    fn failed(family: &'static str, gamma: f64, err: Error) -> Self {
        Self {
            family,
            gamma,
            exponent: f64::NAN,
            p_sup: f64::NAN,
            p_origin: f64::NAN,
            band_lo: f64::NAN,
            band_hi: f64::NAN,
            ceiling_lo: f64::NAN,
            fast_decrease: f64::NAN,
            decays: false,
            exploratory: false,
            pass: false,
            error: Some(err.to_string()),
        }
    }
}

/// Evaluate one trajectory against the rate statements for its family.
pub fn assess(traj: &Trajectory, family: &Family, gamma: f64, window: (f64, f64)) -> Result<SuiteRow> {
    let sup = extract_series(traj, SeriesKind::Sup)?;
    let origin = extract_series(traj, SeriesKind::Origin)?;
    let fit_sup = fit_rate(&sup, window)?;
    let fit_origin = fit_rate(&origin, window)?;
    let ceiling = band_check(&sup, CEILING_EXPONENT, window)?;
    let fast = band_check(&sup, FAST_EXPONENT, window)?;
    let in_range = family.uses_gamma() && gamma > 0.0 && gamma < 1.0;
    let (exponent, band, pass) = if in_range {
        let band = band_check(&origin, 0.5 * gamma, window)?;
        let slope_ok = (fit_origin.slope + 0.5 * gamma).abs() <= SLOPE_TOL;
        (0.5 * gamma, band, band.bounded(BAND_RATIO_MAX) && slope_ok && ceiling.band_lo > 0.0)
    } else {
        (CEILING_EXPONENT, ceiling, ceiling.band_lo > 0.0)
    };
    Ok(SuiteRow {
        family: family.name(),
        gamma: if family.uses_gamma() { gamma } else { f64::NAN },
        exponent,
        p_sup: fit_sup.slope,
        p_origin: fit_origin.slope,
        band_lo: band.band_lo,
        band_hi: band.band_hi,
        ceiling_lo: ceiling.band_lo,
        fast_decrease: fast.decrease(),
        decays: fit_sup.slope < -NON_DECAY_SLOPE,
        exploratory: family.uses_gamma() && !in_range,
        pass,
        error: None,
    })
}

/// Solve and assess one row per γ (one row in total for γ-free families).
/// Rows run in parallel; a failing row is reported, not propagated.
pub fn theorem_suite(
    params: &ModelParams,
    family: &Family,
    gammas: &[f64],
    solver: &SolverConfig,
    window: (f64, f64),
) -> Vec<SuiteRow> {
    let gammas: Vec<f64> = if family.uses_gamma() { gammas.to_vec() } else { vec![params.gamma()] };
    gammas
        .par_iter()
        .map(|&g| {
            let run = || -> Result<SuiteRow> {
                let data = family.data(g)?;
                let p = params.with_gamma(g)?;
                let traj = solve(&data, solver, &p)?;
                assess(&traj, family, g, window)
            };
            run().unwrap_or_else(|e| SuiteRow::failed(family.name(), g, e))
        })
        .collect()
}

/// Fitted origin slopes strictly decrease along increasing γ.
pub fn slopes_monotone(rows: &[SuiteRow]) -> bool {
    let mut pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.error.is_none()).map(|r| (r.gamma, r.p_origin)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).all(|w| w[1].1 < w[0].1)
}

/// Default window and output count of the suite.
pub const DEFAULT_WINDOW: (f64, f64) = (1e2, 1e4);
pub const DEFAULT_OUTPUTS: usize = 16;

/// Solver configuration recording `DEFAULT_OUTPUTS` geometric times on `window`.
pub fn suite_config(window: (f64, f64)) -> SolverConfig {
    SolverConfig::default().with_outputs(window.0, window.1, DEFAULT_OUTPUTS)
}

/// Initial data description for manifests.
pub fn family_descriptor(family: &Family, gamma: f64) -> String {
    family.data(gamma).map(|d| d.descriptor()).unwrap_or_else(|e| e.to_string())
}
