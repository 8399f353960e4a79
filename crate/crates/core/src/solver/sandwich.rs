use super::{solve, MappedGrid, SolverConfig, Trajectory};
use crate::comparison::ComparisonSolution;
use crate::profiles::RadialData;
use crate::{ModelParams, Result};

/// Default slack relative to `sup φ₀`.
pub const SANDWICH_REL_TOL: f64 = 1e-4;

/// One side of the sandwich.
#[derive(Clone, Copy)]
pub enum Barrier<'a> {
    Zero,
    Solution(&'a dyn ComparisonSolution),
}

impl Barrier<'_> {
    pub fn value(&self, r: f64, t: f64) -> f64 {
        match self {
            Barrier::Zero => 0.0,
            Barrier::Solution(s) => s.phi(r, t).value,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Barrier::Zero => "zero",
            Barrier::Solution(s) => s.kind().name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SandwichRow {
    pub t: f64,
    /// `min_r (upper − φ)`.
    pub upper_margin: f64,
    /// `min_r (φ − lower)`.
    pub lower_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SandwichReport {
    pub lower: &'static str,
    pub upper: &'static str,
    pub tol: f64,
    /// Ordering of the barriers against `φ₀` on the solver grid.
    pub precheck: SandwichRow,
    /// One row per recorded time; empty when the precheck failed.
    pub rows: Vec<SandwichRow>,
    pub pass: bool,
}

impl SandwichReport {
    /// Which side failed first, if any.
    pub fn failure(&self) -> Option<String> {
        let side = |row: &SandwichRow| {
            if row.upper_margin < -self.tol {
                "upper"
            } else {
                "lower"
            }
        };
        if !self.precheck.pass {
            return Some(format!("initial ordering violated on the {} side", side(&self.precheck)));
        }
        self.rows.iter().find(|r| !r.pass).map(|r| format!("{} side violated at t = {}", side(r), r.t))
    }

    pub fn worst_margin(&self) -> f64 {
        self.rows
            .iter()
            .chain(std::iter::once(&self.precheck))
            .map(|r| r.upper_margin.min(r.lower_margin))
            .fold(f64::INFINITY, f64::min)
    }
}

fn margins<'v>(
    radii: &[f64],
    values: impl Iterator<Item = &'v f64>,
    t: f64,
    lower: Barrier,
    upper: Barrier,
    tol: f64,
) -> SandwichRow {
    let (mut up, mut lo) = (f64::INFINITY, f64::INFINITY);
    for (&r, &v) in radii.iter().zip(values) {
        let du = upper.value(r, t) - v;
        let dl = v - lower.value(r, t);
        up = if du.is_nan() { f64::NEG_INFINITY } else { up.min(du) };
        lo = if dl.is_nan() { f64::NEG_INFINITY } else { lo.min(dl) };
    }
    SandwichRow { t, upper_margin: up, lower_margin: lo, pass: up >= -tol && lo >= -tol }
}

/// `lower(·,0) ≤ φ₀ ≤ upper(·,0)` at the given radii, within `tol`.
pub fn sandwich_precheck(phi0: &dyn RadialData, radii: &[f64], lower: Barrier, upper: Barrier, tol: f64) -> SandwichRow {
    let values: Vec<f64> = radii.iter().map(|&r| phi0.value(r)).collect();
    margins(radii, values.iter(), 0.0, lower, upper, tol)
}

/// Compare every recorded field of `traj` against both barriers.
///
/// `tol` defaults to `10⁻⁴ · sup φ₀`.
pub fn sandwich_check(traj: &Trajectory, lower: Barrier, upper: Barrier, tol: Option<f64>) -> SandwichReport {
    let sup0 = traj.sup_value(0);
    let tol = tol.unwrap_or(SANDWICH_REL_TOL * sup0);
    let precheck = margins(&traj.radii, traj.fields[0].iter(), 0.0, lower, upper, tol);
    let rows: Vec<SandwichRow> = if precheck.pass {
        traj.times
            .iter()
            .zip(&traj.fields)
            .skip(1)
            .map(|(&t, f)| margins(&traj.radii, f.iter(), t, lower, upper, tol))
            .collect()
    } else {
        Vec::new()
    };
    let pass = precheck.pass && rows.iter().all(|r| r.pass);
    SandwichReport { lower: lower.name(), upper: upper.name(), tol, precheck, rows, pass }
}

/// Precheck on the solver grid, then solve and check. No time stepping
/// happens when the initial ordering fails.
pub fn sandwich_run(
    phi0: &dyn RadialData,
    config: &SolverConfig,
    params: &ModelParams,
    lower: Barrier,
    upper: Barrier,
) -> Result<(SandwichReport, Option<Trajectory>)> {
    config.validate()?;
    let grid = MappedGrid::new(config.xi_min, config.xi_max, config.n_xi)?;
    let sup0 = grid.radii().iter().map(|&r| phi0.value(r)).fold(f64::NEG_INFINITY, f64::max);
    let tol = SANDWICH_REL_TOL * sup0;
    let precheck = sandwich_precheck(phi0, grid.radii(), lower, upper, tol);
    if !precheck.pass {
        let report = SandwichReport { lower: lower.name(), upper: upper.name(), tol, precheck, rows: Vec::new(), pass: false };
        return Ok((report, None));
    }
    let traj = solve(phi0, config, params)?;
    let report = sandwich_check(&traj, lower, upper, Some(tol));
    Ok((report, Some(traj)))
}
