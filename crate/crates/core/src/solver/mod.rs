//! Radial solver for the perturbation equation
//! `φ_t = r(rφ_r)_r + (D+φ) Δ_n φ − ((n−2)/2) φ_r²`, which is the
//! `r`-form of the equation and equals `Qχ = 0` in `ξ = ln r`.
//!
//! Space is discretized on a single sinh-mapped grid (see [`MappedGrid`]).
//! Both diffusion operators are written in flux form, so every backward
//! Euler step solves an M-matrix tridiagonal system whose rows sum to zero:
//! constants are preserved exactly and nonnegative data stay nonnegative.
//! The quadratic gradient term is linearized around the previous iterate and
//! corrected by a fixed number of Picard sweeps.

mod grid;
mod sandwich;

pub use grid::{solve_tridiagonal, MappedGrid, XI_CEILING, XI_STRETCH};
pub use sandwich::{sandwich_check, sandwich_precheck, sandwich_run, Barrier, SandwichReport, SandwichRow, SANDWICH_REL_TOL};

use sha2::{Digest, Sha256};

use crate::profiles::RadialData;
use crate::{Error, ModelParams, Result};

/// Condition at the outer end `ξ = ξ_max` of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FarBoundary {
    /// `χ(ξ_max, t) = φ₀(e^{ξ_max})`.
    PinnedToInitialTail,
    /// `χ_ξξ(ξ_max, t) = 0`, imposed by linear extrapolation in `ξ`.
    HomogeneousSecondDerivative,
}

/// Time step control.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStepping {
    /// Steps sized so that the local error estimate stays below `tol`
    /// (absolute, times `max(1, sup|φ|)`).
    Adaptive { tol: f64, dt0: f64 },
    /// `dt` grows geometrically from `dt0` by `growth` per step, capped at
    /// `max_frac · (1 + t)`. The same schedule is reproduced on any grid.
    Geometric { dt0: f64, growth: f64, max_frac: f64 },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SolverConfig {
    pub xi_min: f64,
    pub xi_max: f64,
    /// Number of grid intervals.
    pub n_xi: usize,
    pub stepping: TimeStepping,
    pub picard_corrections: usize,
    /// Largest admissible step as a fraction of `1 + t`.
    pub max_step_frac: f64,
    pub t_end: f64,
    /// Times at which the field is recorded; `0` is always included.
    pub output_times: Vec<f64>,
    pub boundary: FarBoundary,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            xi_min: -8.0,
            xi_max: 640.0,
            n_xi: 2048,
            stepping: TimeStepping::Adaptive { tol: 1e-7, dt0: 1e-6 },
            picard_corrections: 2,
            max_step_frac: 0.25,
            t_end: 1e3,
            output_times: geometric_times(1.0, 1e3, 16),
            boundary: FarBoundary::PinnedToInitialTail,
        }
    }
}

/// Far field margin: `ξ_max ≥ XI_MARGIN + DIFFUSIVE_REACH·√t_end`.
pub const XI_MARGIN: f64 = 10.0;
pub const DIFFUSIVE_REACH: f64 = 6.0;

/// Smallest admissible `ξ_max` for a run up to `t_end`. The far field evolves
/// by heat flow in `ξ`, so the boundary must sit many `√t` away.
pub fn required_xi_max(t_end: f64) -> f64 {
    XI_MARGIN + DIFFUSIVE_REACH * t_end.max(0.0).sqrt()
}

/// `count` geometrically spaced times on `[lo, hi]`.
pub fn geometric_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let ratio = (hi / lo).ln();
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (ratio * i as f64 / (count - 1) as f64).exp() })
        .collect()
}

impl SolverConfig {
    /// Same configuration with `t_end` and `count` geometric outputs on
    /// `[t_lo, t_end]`.
    pub fn with_outputs(mut self, t_lo: f64, t_end: f64, count: usize) -> Self {
        self.t_end = t_end;
        self.output_times = geometric_times(t_lo, t_end, count);
        self
    }

    pub fn with_resolution(mut self, n_xi: usize) -> Self {
        self.n_xi = n_xi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be positive", self.t_end));
        }
        if self.n_xi < 16 {
            return bad(format!("n_xi = {} is too small", self.n_xi));
        }
        if self.xi_max < required_xi_max(self.t_end) {
            return bad(format!(
                "xi_max = {} does not outrun the diffusive reach of t_end = {}; need xi_max ≥ {}",
                self.xi_max,
                self.t_end,
                required_xi_max(self.t_end)
            ));
        }
        if self.output_times.iter().any(|&t| !(t >= 0.0 && t <= self.t_end)) {
            return bad("output times must lie in [0, t_end]".into());
        }
        if self.output_times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("output times must be strictly increasing".into());
        }
        match self.stepping {
            TimeStepping::Adaptive { tol, dt0 } if !(tol > 0.0 && dt0 > 0.0) => {
                bad("adaptive stepping needs tol > 0 and dt0 > 0".into())
            }
            TimeStepping::Geometric { dt0, growth, max_frac } if !(dt0 > 0.0 && growth >= 1.0 && max_frac > 0.0) => {
                bad("geometric stepping needs dt0 > 0, growth ≥ 1, max_frac > 0".into())
            }
            _ => Ok(()),
        }
    }
}

/// Counters collected while stepping.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    /// Smallest grid value seen at any accepted step.
    pub min_value: f64,
}

/// Recorded solution `φ(r_i, t_k)` together with its provenance.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ModelParams,
    pub config: SolverConfig,
    pub descriptor: String,
    pub config_hash: String,
    pub radii: Vec<f64>,
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn origin_value(&self, k: usize) -> f64 {
        self.fields[k][0]
    }

    pub fn sup_value(&self, k: usize) -> f64 {
        self.fields[k].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self, k: usize) -> f64 {
        self.fields[k].iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Linear interpolation of `φ(·, t_k)` at radius `r`.
    pub fn value_at(&self, k: usize, r: f64) -> f64 {
        let rs = &self.radii;
        let f = &self.fields[k];
        if r <= rs[0] {
            return f[0];
        }
        let j = rs.partition_point(|&x| x < r);
        if j >= rs.len() {
            return f[rs.len() - 1];
        }
        let w = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
        f[j - 1] + w * (f[j] - f[j - 1])
    }

    /// `χ(ξ_i, t_k)` at every positive radius, as `(ξ, χ)` pairs.
    pub fn chi_view(&self, k: usize) -> Vec<(f64, f64)> {
        self.radii.iter().zip(&self.fields[k]).filter(|(r, _)| **r > 0.0).map(|(r, v)| (r.ln(), *v)).collect()
    }

    /// `v = (r² + D + φ)^{-(n−2)/2}` at every node.
    pub fn v_field(&self, k: usize) -> Vec<f64> {
        let e = -0.5 * (self.params.dim() - 2.0);
        self.radii.iter().zip(&self.fields[k]).map(|(r, p)| (r * r + self.params.d() + p).powf(e)).collect()
    }
}

/// Hex SHA-256 of the JSON encoding of `value`.
pub fn stable_hash<T: serde::Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable value");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Static per-node weights of the discrete operators.
struct Stencil {
    /// `r(rφ_r)_r` weights towards `i−1` and `i+1`.
    m_lo: Vec<f64>,
    m_hi: Vec<f64>,
    /// `Δ_n φ = r^{1−n}(r^{n−1}φ_r)_r` weights.
    l_lo: Vec<f64>,
    l_hi: Vec<f64>,
    /// Three-point first derivative weights.
    g_lo: Vec<f64>,
    g_mid: Vec<f64>,
    g_hi: Vec<f64>,
    h_lo: Vec<f64>,
    h_hi: Vec<f64>,
}

impl Stencil {
    fn new(grid: &MappedGrid, dim: f64) -> Self {
        let r = grid.radii();
        let f = grid.faces();
        let n = r.len();
        let mut s = Stencil {
            m_lo: vec![0.0; n],
            m_hi: vec![0.0; n],
            l_lo: vec![0.0; n],
            l_hi: vec![0.0; n],
            g_lo: vec![0.0; n],
            g_mid: vec![0.0; n],
            g_hi: vec![0.0; n],
            h_lo: vec![0.0; n],
            h_hi: vec![0.0; n],
        };
        // Cell [0, r_{1/2}] has volume r_{1/2}^n/n and one face.
        s.l_hi[0] = dim / (f[0] * r[1]);
        for i in 1..n - 1 {
            let hl = r[i] - r[i - 1];
            let hh = r[i + 1] - r[i];
            let (fl, fh) = (f[i - 1], f[i]);
            s.h_lo[i] = hl;
            s.h_hi[i] = hh;
            // ratios to r_i keep the weights finite when r_i² overflows
            let (pl, ph) = (fl / r[i], fh / r[i]);
            let (al, ah) = (r[i - 1] / r[i], r[i + 1] / r[i]);
            s.m_lo[i] = pl / ((1.0 - al) * (ph - pl));
            s.m_hi[i] = ph / ((ah - 1.0) * (ph - pl));
            let vol = r[i] * (ph.powf(dim) - pl.powf(dim)) / dim;
            s.l_lo[i] = pl.powf(dim - 1.0) / (hl * vol);
            s.l_hi[i] = ph.powf(dim - 1.0) / (hh * vol);
            s.g_hi[i] = hl / (hh * (hl + hh));
            s.g_lo[i] = -hh / (hl * (hl + hh));
            s.g_mid[i] = -(s.g_hi[i] + s.g_lo[i]);
        }
        s
    }

    fn gradient(&self, phi: &[f64], i: usize) -> f64 {
        if i == 0 || i + 1 >= phi.len() {
            0.0
        } else {
            self.g_lo[i] * phi[i - 1] + self.g_mid[i] * phi[i] + self.g_hi[i] * phi[i + 1]
        }
    }
}

struct Stepper<'a> {
    params: &'a ModelParams,
    config: &'a SolverConfig,
    stencil: Stencil,
    /// `d ln r` ratio used by the extrapolating boundary.
    extrap_q: f64,
    pinned: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(params: &'a ModelParams, config: &'a SolverConfig, grid: &MappedGrid, pinned: f64) -> Self {
        let x = grid.xi();
        let n = x.len();
        let extrap_q = (x[n - 1] - x[n - 2]) / (x[n - 2] - x[n - 3]);
        Self {
            params,
            config,
            stencil: Stencil::new(grid, params.dim()),
            extrap_q,
            pinned,
            lo: vec![0.0; n],
            hi: vec![0.0; n],
            a: vec![0.0; n - 1],
            b: vec![0.0; n - 1],
            c: vec![0.0; n - 1],
            scratch: Vec::with_capacity(n),
        }
    }

    /// Coupling coefficients of `φ_t,i = lo_i(φ_{i−1}−φ_i) + hi_i(φ_{i+1}−φ_i)`
    /// with coefficients frozen at `psi`.
    fn couplings(&mut self, psi: &[f64]) {
        let s = &self.stencil;
        let k = self.params.dim() - 2.0;
        let d = self.params.d();
        let n = psi.len();
        self.lo[0] = 0.0;
        self.hi[0] = (d + psi[0]).max(0.0) * s.l_hi[0];
        for i in 1..n - 1 {
            let diff = (d + psi[i]).max(0.0);
            let beta = -0.5 * k * s.gradient(psi, i);
            let base_lo = s.m_lo[i] + diff * s.l_lo[i];
            let base_hi = s.m_hi[i] + diff * s.l_hi[i];
            let lo = base_lo - beta * s.g_lo[i];
            let hi = base_hi + beta * s.g_hi[i];
            if lo >= 0.0 && hi >= 0.0 {
                // centered: β(g_lo φ_{i−1} + g_mid φ_i + g_hi φ_{i+1}) = β g_lo (φ_{i−1}−φ_i) + β g_hi (φ_{i+1}−φ_i)
                self.lo[i] = base_lo + beta * s.g_lo[i];
                self.hi[i] = hi;
                if self.lo[i] < 0.0 {
                    self.lo[i] = base_lo + (-beta).max(0.0) / s.h_lo[i];
                    self.hi[i] = base_hi + beta.max(0.0) / s.h_hi[i];
                }
            } else {
                self.lo[i] = base_lo + (-beta).max(0.0) / s.h_lo[i];
                self.hi[i] = base_hi + beta.max(0.0) / s.h_hi[i];
            }
        }
    }

    /// One backward Euler step with lagged coefficients and Picard sweeps.
    fn step(&mut self, old: &[f64], dt: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(old);
        let n = old.len();
        let m = n - 1;
        let mut iterate = old.to_vec();
        for _ in 0..=self.config.picard_corrections {
            self.couplings(&iterate);
            for i in 0..m {
                self.a[i] = -dt * self.lo[i];
                self.c[i] = -dt * self.hi[i];
                self.b[i] = 1.0 + dt * (self.lo[i] + self.hi[i]);
                out[i] = old[i];
            }
            let last = m - 1;
            match self.config.boundary {
                FarBoundary::PinnedToInitialTail => {
                    out[last] += dt * self.hi[last] * self.pinned;
                    self.c[last] = 0.0;
                }
                FarBoundary::HomogeneousSecondDerivative => {
                    let eff = (self.lo[last] - self.extrap_q * self.hi[last]).max(0.0);
                    self.a[last] = -dt * eff;
                    self.b[last] = 1.0 + dt * eff;
                    self.c[last] = 0.0;
                }
            }
            solve_tridiagonal(&self.a, &self.b, &self.c, &mut out[..m], &mut self.scratch);
            out[m] = match self.config.boundary {
                FarBoundary::PinnedToInitialTail => self.pinned,
                FarBoundary::HomogeneousSecondDerivative => {
                    (1.0 + self.extrap_q) * out[m - 1] - self.extrap_q * out[m - 2]
                }
            };
            iterate.copy_from_slice(out);
        }
    }
}

/// Integrate from `φ₀` to `t_end`, recording the field at `t = 0` and at
/// every configured output time.
pub fn solve(phi0: &dyn RadialData, config: &SolverConfig, params: &ModelParams) -> Result<Trajectory> {
    config.validate()?;
    let grid = MappedGrid::new(config.xi_min, config.xi_max, config.n_xi)?;
    let radii = grid.radii().to_vec();
    let mut phi: Vec<f64> = radii.iter().map(|&r| phi0.value(r)).collect();
    if let Some((i, v)) = phi.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Parameter(format!("φ₀({}) = {v} must be finite and nonnegative", radii[i])));
    }
    let pinned = *phi.last().unwrap();
    let mut stepper = Stepper::new(params, config, &grid, pinned);

    let mut targets: Vec<f64> = config.output_times.iter().copied().filter(|&t| t > 0.0).collect();
    if targets.last().map_or(true, |&t| t < config.t_end) {
        targets.push(config.t_end);
    }
    let record_end = config.output_times.last().copied() == Some(config.t_end);

    let mut times = vec![0.0];
    let mut fields = vec![phi.clone()];
    let mut stats = SolverStats {
        min_dt: f64::INFINITY,
        min_value: phi.iter().copied().fold(f64::INFINITY, f64::min),
        ..SolverStats::default()
    };
    let floor = 1e-12 * config.t_end;
    let mut t = 0.0;
    let mut dt = match config.stepping {
        TimeStepping::Adaptive { dt0, .. } | TimeStepping::Geometric { dt0, .. } => dt0,
    };
    let mut prev_increment: Option<(Vec<f64>, f64)> = None;
    let mut next = Vec::with_capacity(phi.len());
    for (ti, &target) in targets.iter().enumerate() {
        while t < target {
            let cap = config.max_step_frac * (1.0 + t);
            let mut h = dt.min(cap);
            let clipped = t + h >= target * (1.0 - 1e-14);
            if clipped {
                h = target - t;
            }
            if !(h >= floor) && !clipped {
                return Err(Error::Solver(format!("step size collapsed to {h:e} at t = {t}")));
            }
            stepper.step(&phi, h, &mut next);
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Solver(format!("non-finite value at t = {t} with dt = {h:e}")));
            }
            match config.stepping {
                TimeStepping::Adaptive { tol, .. } => {
                    let scale = phi.iter().fold(1.0f64, |m, v| m.max(v.abs())) * tol;
                    let est = match &prev_increment {
                        None => 0.0,
                        Some((inc, hp)) => {
                            let q = h / hp;
                            0.5 * next
                                .iter()
                                .zip(&phi)
                                .zip(inc)
                                .map(|((n1, p), d)| ((n1 - p) - q * d).abs())
                                .fold(0.0, f64::max)
                        }
                    };
                    if est > scale {
                        stats.rejected += 1;
                        dt = h * (0.9 * (scale / est).sqrt()).max(0.2);
                        if dt < floor {
                            return Err(Error::Solver(format!("step size collapsed to {dt:e} at t = {t}")));
                        }
                        continue;
                    }
                    let grow = if est == 0.0 { 2.0 } else { (0.9 * (scale / est).sqrt()).clamp(0.2, 2.0) };
                    if !clipped {
                        dt = h * grow;
                    } else {
                        dt = dt.max(h);
                    }
                }
                TimeStepping::Geometric { growth, max_frac, .. } => {
                    if !clipped {
                        dt = (h * growth).min(max_frac * (1.0 + t + h));
                    }
                }
            }
            let inc: Vec<f64> = next.iter().zip(&phi).map(|(a, b)| a - b).collect();
            prev_increment = Some((inc, h));
            std::mem::swap(&mut phi, &mut next);
            t = if clipped { target } else { t + h };
            stats.accepted += 1;
            stats.min_dt = stats.min_dt.min(h);
            stats.max_dt = stats.max_dt.max(h);
            stats.min_value = phi.iter().copied().fold(stats.min_value, f64::min);
        }
        if ti + 1 < targets.len() || record_end {
            times.push(t);
            fields.push(phi.clone());
        }
    }
    let descriptor = phi0.descriptor();
    let config_hash = stable_hash(&(config, params, &descriptor));
    Ok(Trajectory {
        params: *params,
        config: config.clone(),
        descriptor,
        config_hash,
        radii,
        times,
        fields,
        stats,
    })
}
