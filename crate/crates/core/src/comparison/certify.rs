use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::sub::initial_value;
use super::{ComparisonSolution, Kind, Sense, SubParams};
use crate::profiles::{probe_grid, RadialData};
use crate::{Error, ModelParams, Result};

/// Tolerance on residuals scaled by `(t+s)^{γ/2+1}`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Upper end of the radial probe grid used for initial ordering.
pub const ORDERING_R_MAX: f64 = 1e6;

/// Grid density presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPreset {
    Fast,
    Full,
}

impl GridPreset {
    pub fn points_per_decade(self) -> usize {
        match self {
            GridPreset::Fast => 16,
            GridPreset::Full => 64,
        }
    }
}

impl FromStr for GridPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(GridPreset::Fast),
            "full" => Ok(GridPreset::Full),
            other => Err(Error::Parameter(format!("unknown grid preset '{other}' (fast|full)"))),
        }
    }
}

impl fmt::Display for GridPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridPreset::Fast => "fast",
            GridPreset::Full => "full",
        })
    }
}

/// Space-time sampling of a certification run.
///
/// Radii are geometric on `[r_min, r_max]`, extended to `r_m e^{log_span}`
/// beyond a matching radius `r_m`; points with `|r/r_m − 1| < exclusion` are
/// dropped. Times are geometric in `t + s` on `[0, t_max]`, starting at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec {
    pub preset: GridPreset,
    pub points_per_decade: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub log_span: f64,
    pub t_max: f64,
    pub exclusion: f64,
}

impl GridSpec {
    pub fn new(preset: GridPreset) -> Self {
        Self {
            preset,
            points_per_decade: preset.points_per_decade(),
            r_min: 1e-3,
            r_max: 1e6,
            log_span: 30.0,
            t_max: 1e4,
            exclusion: 1e-2,
        }
    }
}

fn geometric_decades(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    (0..=n).map(|i| lo * 10f64.powf(decades * i as f64 / n as f64)).collect()
}

/// Concrete sample points for one comparison function.
#[derive(Debug, Clone)]
pub struct CertGrid {
    spec: GridSpec,
    times: Vec<f64>,
    radii: Vec<f64>,
    split: usize,
}

impl CertGrid {
    pub fn build(sol: &dyn ComparisonSolution, spec: &GridSpec) -> Self {
        let shift = sol.time_shift();
        let times: Vec<f64> = geometric_decades(shift, shift + spec.t_max, spec.points_per_decade)
            .into_iter()
            .enumerate()
            .map(|(i, tau)| if i == 0 { 0.0 } else { tau - shift })
            .collect();
        let (lo, hi) = sol.radial_domain();
        let matching = sol.matching_radius();
        let r_max = match matching {
            Some(rm) => spec.r_max.max(rm * spec.log_span.exp()),
            None => spec.r_max,
        };
        let r_lo = spec.r_min.max(lo);
        let r_hi = r_max.min(if hi.is_finite() { hi } else { f64::INFINITY });
        let mut radii: Vec<f64> = geometric_decades(r_lo, r_hi, spec.points_per_decade)
            .into_iter()
            .filter(|&r| r > 0.0)
            .collect();
        if let Some(rm) = matching {
            radii.retain(|&r| (r / rm - 1.0).abs() >= spec.exclusion);
        }
        let split = match matching {
            Some(rm) => radii.partition_point(|&r| r < rm),
            None => radii.len(),
        };
        Self { spec: *spec, times, radii, split }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radii below the matching radius (all radii if there is none).
    pub fn inner_radii(&self) -> &[f64] {
        &self.radii[..self.split]
    }

    /// Radii beyond the matching radius.
    pub fn outer_radii(&self) -> &[f64] {
        &self.radii[self.split..]
    }
}

/// Extreme value of a sampled quantity and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extreme {
    pub value: f64,
    pub r: f64,
    pub t: f64,
    pub samples: usize,
}

/// Minimum (or maximum) of `f(r, t)` over `times × radii`, scanned in
/// parallel over time rows. NaN counts as the worst possible value. Ties are
/// broken by grid order, so the result does not depend on scheduling.
pub fn grid_extreme<F>(times: &[f64], radii: &[f64], maximize: bool, f: F) -> Extreme
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let worst = if maximize { f64::INFINITY } else { f64::NEG_INFINITY };
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let empty = Extreme {
        value: if maximize { f64::NEG_INFINITY } else { f64::INFINITY },
        r: f64::NAN,
        t: f64::NAN,
        samples: 0,
    };
    let rows: Vec<Extreme> = times
        .par_iter()
        .map(|&t| {
            let mut best = empty;
            for &r in radii {
                let mut v = f(r, t);
                if v.is_nan() {
                    v = worst;
                }
                if best.samples == 0 || better(v, best.value) {
                    best = Extreme { value: v, r, t, samples: best.samples };
                }
                best.samples += 1;
            }
            best
        })
        .collect();
    let mut total = 0;
    let mut out = empty;
    for row in rows {
        total += row.samples;
        if row.samples > 0 && (out.samples == 0 || better(row.value, out.value)) {
            out = Extreme { samples: 1, ..row };
        }
    }
    out.samples = total;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtLeast,
    Above,
    AtMost,
    Below,
}

impl Relation {
    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::AtLeast => value >= threshold,
            Relation::Above => value > threshold,
            Relation::AtMost => value <= threshold,
            Relation::Below => value < threshold,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::AtLeast => ">=",
            Relation::Above => ">",
            Relation::AtMost => "<=",
            Relation::Below => "<",
        }
    }
}

/// One recorded margin and whether it has the required sign.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
    pub samples: usize,
    pub at_r: f64,
    pub at_t: f64,
}

impl CheckResult {
    fn from_extreme(id: &'static str, e: Extreme, relation: Relation, threshold: f64) -> Self {
        Self {
            id,
            value: e.value,
            relation,
            threshold,
            pass: e.samples > 0 && relation.holds(e.value, threshold),
            samples: e.samples,
            at_r: e.r,
            at_t: e.t,
        }
    }

    pub fn at_least(id: &'static str, e: Extreme, threshold: f64) -> Self {
        Self::from_extreme(id, e, Relation::AtLeast, threshold)
    }

    pub fn above(id: &'static str, e: Extreme, threshold: f64) -> Self {
        Self::from_extreme(id, e, Relation::Above, threshold)
    }

    pub fn at_most(id: &'static str, e: Extreme, threshold: f64) -> Self {
        Self::from_extreme(id, e, Relation::AtMost, threshold)
    }

    pub fn below(id: &'static str, e: Extreme, threshold: f64) -> Self {
        Self::from_extreme(id, e, Relation::Below, threshold)
    }

    pub fn scalar_above(id: &'static str, value: f64, threshold: f64) -> Self {
        Self::above(id, Extreme { value, r: f64::NAN, t: f64::NAN, samples: 1 }, threshold)
    }

    pub fn scalar_below(id: &'static str, value: f64, threshold: f64) -> Self {
        Self::below(id, Extreme { value, r: f64::NAN, t: f64::NAN, samples: 1 }, threshold)
    }
}

/// Every margin recorded while certifying one comparison function.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CertificationReport {
    pub kind: Kind,
    pub sense: Sense,
    pub grid: GridSpec,
    pub grid_points: (usize, usize),
    pub checks: Vec<CheckResult>,
    pub constants: Vec<(&'static str, f64)>,
    pub pass: bool,
}

impl CertificationReport {
    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// `PASS`, or `FAIL <id>` naming the first failed check.
    pub fn summary_line(&self) -> String {
        match self.failures().next() {
            None => "PASS".to_string(),
            Some(c) => format!("FAIL {}", c.id),
        }
    }

    /// One CSV row per check.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["check", "value", "relation", "threshold", "pass", "samples", "at_r", "at_t"])?;
        for c in &self.checks {
            w.write_record([
                c.id.to_string(),
                format!("{:.16e}", c.value),
                c.relation.symbol().to_string(),
                format!("{:.16e}", c.threshold),
                c.pass.to_string(),
                c.samples.to_string(),
                format!("{:.16e}", c.at_r),
                format!("{:.16e}", c.at_t),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample the residual of `sol` and its structural certificates on the grid
/// described by `spec`; with `phi0`, also the initial ordering against it.
///
/// Residuals are scaled by `(t+s)^{γ/2+1}` and must be `≥ −1e−9` for
/// supersolutions and `≤ 1e−9` for subsolutions.
pub fn certify(
    sol: &dyn ComparisonSolution,
    spec: &GridSpec,
    phi0: Option<&dyn RadialData>,
) -> CertificationReport {
    let grid = CertGrid::build(sol, spec);
    let sense = sol.kind().sense();
    let g = sol.params().gamma();
    let shift = sol.time_shift();
    let scaled = |r: f64, t: f64| {
        sol.residual(r, t).map(|p| p * (t + shift).powf(0.5 * g + 1.0)).unwrap_or(f64::NAN)
    };
    let mut checks = Vec::new();
    let pieces: [(&'static str, &[f64]); 2] = if sol.matching_radius().is_some() {
        [("residual_inner", grid.inner_radii()), ("residual_outer", grid.outer_radii())]
    } else {
        [("residual", grid.radii()), ("residual", &[])]
    };
    for (id, radii) in pieces {
        if radii.is_empty() {
            continue;
        }
        checks.push(match sense {
            Sense::Super => CheckResult::at_least(id, grid_extreme(grid.times(), radii, false, scaled), -RESIDUAL_TOL),
            Sense::Sub => CheckResult::at_most(id, grid_extreme(grid.times(), radii, true, scaled), RESIDUAL_TOL),
        });
    }
    checks.extend(sol.structural_checks(&grid));
    if let Some(data) = phi0 {
        let radii = probe_grid(0.0, ORDERING_R_MAX, 20000);
        checks.push(match sense {
            Sense::Super => CheckResult::above(
                "initial_domination",
                grid_extreme(&[0.0], &radii, false, |r, t| sol.phi(r, t).value - data.value(r)),
                0.0,
            ),
            Sense::Sub => CheckResult::above(
                "initial_ordering",
                grid_extreme(&[0.0], &radii, false, |r, t| data.value(r) - sol.phi(r, t).value),
                0.0,
            ),
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    CertificationReport {
        kind: sol.kind(),
        sense,
        grid: *spec,
        grid_points: (grid.times().len(), grid.radii().len()),
        checks,
        constants: sol.constants(),
        pass,
    }
}

/// `min_r (φ₀(r) − φ̲(r,0))` over a probe grid on `[0, r_max]`. Accepts any
/// amplitude, including `a ≥ 1`, so that oversized choices can be checked.
pub fn sub_ordering_margin(phi0: &dyn RadialData, params: &ModelParams, sp: &SubParams, r_max: f64) -> f64 {
    grid_extreme(&[0.0], &probe_grid(0.0, r_max, 20000), false, |r, _| {
        phi0.value(r) - initial_value(params, sp, r)
    })
    .value
}
