//! Command line front end.
//!
//! Every subcommand resolves its settings as flag, then `--config` file
//! entry (flat `key=value` lines, `#` comments, keys named like the long
//! flags), then built-in default. Results go to CSV files and a
//! `manifest.json` in the output directory.
//!
//! Exit codes: `0` all verdicts pass, `1` usage or input error, `2` a
//! certificate or acceptance check failed, `3` the solver aborted.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::comparison::{
    certify, matched_sub_for, matched_super_for, select_sub_params, select_super_params, CertificationReport,
    ComparisonSolution, GridPreset, GridSpec, MatchedSub, MatchedSuper,
};
use crate::profiles::{log_tail_constants, sup_on, InitialData, RadialData};
use crate::rates::{slopes_monotone, suite_config, theorem_suite, Family, SuiteRow, DEFAULT_WINDOW};
use crate::solver::{
    geometric_times, sandwich_run, stable_hash, Barrier, FarBoundary, SandwichReport, SolverConfig, Trajectory,
};
use crate::special::{ClosedForm, HatPhiProfile, PhiProfile, RhoProfile};
use crate::{Error, ModelParams};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "BARENBLATT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "barenblatt", version, about = "Comparison functions, radial solver and decay rates for critical fast diffusion")]
pub struct Cli {
    /// Flat key=value settings file; flags take precedence over its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate Φ, ρ or Φ̂ with derivatives and ODE residuals.
    Special(SpecialArgs),
    /// Solve the radial equation and write the trajectory.
    Simulate(SimulateArgs),
    /// Select constants and certify the super- and subsolutions on a grid.
    Verify(VerifyArgs),
    /// Fit decay rates and run band checks over a γ sweep.
    Rates(RatesArgs),
    /// Run a full pipeline: certify, simulate, sandwich, rates.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    /// Space dimension, n ≥ 3.
    #[arg(long)]
    pub n: Option<u32>,
    /// Barenblatt parameter D > 0.
    #[arg(long = "D")]
    pub d: Option<f64>,
    /// Tail exponent γ.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Phi,
    Rho,
    HatPhi,
}

#[derive(Args, Debug)]
pub struct SpecialArgs {
    #[arg(long, value_enum)]
    pub table: Option<Table>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Right end of the abscissa range (ρ tables default to σ₀).
    #[arg(long)]
    pub zmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    LogTail,
    Bump,
    Zero,
    Const,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Pinned,
    SecondDerivative,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub data: Option<DataKind>,
    /// Log-tail amplitude B in B (ln r)^{-γ}.
    #[arg(long = "B")]
    pub big_b: Option<f64>,
    /// Bump height or constant level.
    #[arg(long = "b")]
    pub small_b: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n_xi: Option<usize>,
    #[arg(long)]
    pub xi_max: Option<f64>,
    /// Number of geometric output times.
    #[arg(long)]
    pub outputs: Option<usize>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Super,
    Sub,
    Both,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub kind: Option<VerifyKind>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// fast or full.
    #[arg(long)]
    pub grid_preset: Option<GridPreset>,
    /// Log-tail amplitude of the data the barriers are ordered against.
    #[arg(long = "B")]
    pub big_b: Option<f64>,
    /// Supersolution amplitude; selected from the data when omitted.
    #[arg(long = "A")]
    pub big_a: Option<f64>,
    /// Subsolution amplitude; selected from the data when omitted.
    #[arg(long = "a")]
    pub small_a: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RatesArgs {
    /// `gamma=0.25,0.5,0.75`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// log-tail, bump or constant-tail.
    #[arg(long)]
    pub family: Option<String>,
    /// `t_a:t_b`.
    #[arg(long)]
    pub window: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n_xi: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Thm1,
    Thm2,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub which: Theorem,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub grid_preset: Option<GridPreset>,
    #[arg(long)]
    pub n_xi: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a command did not succeed; maps onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verdict(String),
    Solver(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verdict(_) => 2,
            Failure::Solver(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) => Failure::Solver(e.to_string()),
            Error::Certification(_) => Failure::Verdict(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Entries of a `--config` file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("config line {}: expected key=value, got '{raw}'", i + 1)))?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => Self::parse(
                &std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
            ),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Flag value, else config entry, else `default`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s.parse().map(Some).map_err(|e| Failure::Usage(format!("config key {key} = '{s}': {e}"))),
        }
    }

    pub fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.raw(key) {
            None => Ok(default),
            Some(s) => T::from_str(s, true).map_err(|e| Failure::Usage(format!("config key {key} = '{s}': {e}"))),
        }
    }
}

/// Resolved settings recorded in the manifest.
#[derive(Debug, Default)]
struct Record {
    parameters: BTreeMap<String, Value>,
    constants: BTreeMap<String, f64>,
    summary: Vec<String>,
}

impl Record {
    fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.to_string(), v.into());
    }

    fn constants_of(&mut self, prefix: &str, list: &[(&'static str, f64)]) {
        for (k, v) in list {
            self.constants.insert(format!("{prefix}.{k}"), *v);
        }
    }

    fn say(&mut self, line: String) {
        println!("{line}");
        self.summary.push(line);
    }
}

#[derive(Debug, serde::Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: &'static str,
    pub parameters: BTreeMap<String, Value>,
    pub constants: BTreeMap<String, f64>,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub pass: bool,
    pub summary: Vec<String>,
}

fn write_manifest(dir: &Path, command: &str, rec: Record, start: Instant, pass: bool) -> CliResult<()> {
    let config_hash = stable_hash(&(command, &rec.parameters));
    let manifest = RunManifest {
        command: command.to_string(),
        tool_version: env!("CARGO_PKG_VERSION"),
        parameters: rec.parameters,
        constants: rec.constants,
        config_hash,
        wall_time_s: start.elapsed().as_secs_f64(),
        pass,
        summary: rec.summary,
    };
    let mut f = BufWriter::new(File::create(dir.join("manifest.json"))?);
    serde_json::to_writer_pretty(&mut f, &manifest).map_err(|e| Failure::Usage(e.to_string()))?;
    f.write_all(b"\n")?;
    Ok(())
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn out_dir(cfg: &ConfigFile, flag: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = cfg.pick(flag, "out", PathBuf::from("out"))?;
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn model(cfg: &ConfigFile, m: &ModelArgs, rec: &mut Record) -> CliResult<ModelParams> {
    let n = cfg.pick(m.n, "n", 5u32)?;
    let d = cfg.pick(m.d, "D", 1.0)?;
    let gamma = cfg.pick(m.gamma, "gamma", 0.5)?;
    rec.param("n", n);
    rec.param("D", d);
    rec.param("gamma", gamma);
    Ok(ModelParams::new(n, d, gamma)?)
}

fn grid_spec(cfg: &ConfigFile, flag: Option<GridPreset>, rec: &mut Record) -> CliResult<GridSpec> {
    let preset = cfg.pick(flag, "grid-preset", GridPreset::Fast)?;
    rec.param("grid_preset", preset.to_string());
    Ok(GridSpec::new(preset))
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Verdict(m) | Failure::Solver(m) => eprintln!("error: {m}"),
            }
            f.exit_code()
        }
    }
}

/// Entry point of the binary: applies the thread cap, then [`run`].
pub fn main_entry() -> i32 {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} = '{v}' is not a positive integer");
                return 1;
            }
        }
    }
    run(std::env::args_os())
}

/// Run a parsed command. `Ok(false)` means a verdict failed.
pub fn execute(cli: Cli) -> CliResult<bool> {
    let cfg = ConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Special(a) => special(&cfg, a),
        Command::Simulate(a) => simulate(&cfg, a),
        Command::Verify(a) => verify(&cfg, a),
        Command::Rates(a) => rates(&cfg, a),
        Command::Reproduce(a) => reproduce(&cfg, a),
    }
}

fn special(cfg: &ConfigFile, a: SpecialArgs) -> CliResult<bool> {
    let mut rec = Record::default();
    let table = cfg.pick_enum(a.table, "table", Table::Phi)?;
    let p = model(cfg, &a.model, &mut rec)?;
    let points = cfg.pick(a.points, "points", 401usize)?;
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let (profile, residual): (Box<dyn ClosedForm>, Box<dyn Fn(f64) -> f64>) = match table {
        Table::Phi => {
            let f = PhiProfile::new(p.gamma())?;
            (Box::new(f), Box::new(move |z| f.ode_residual(z)))
        }
        Table::Rho => {
            let f = RhoProfile::new(p.lambda())?;
            (Box::new(f), Box::new(move |s| f.ode_residual(s)))
        }
        Table::HatPhi => {
            let f = HatPhiProfile::new(p.gamma())?;
            (Box::new(f), Box::new(move |z| f.inequality_residual(z)))
        }
    };
    let default_max = match table {
        Table::Rho => profile.domain().1,
        _ => 20.0,
    };
    let zmax = cfg.pick(a.zmax, "zmax", default_max)?;
    if !(zmax > 0.0 && zmax.is_finite()) {
        return Err(Failure::Usage(format!("--zmax = {zmax} must be positive")));
    }
    let sink: Box<dyn Write> = match cfg.pick_opt(a.out, "out")? {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv_writer(sink);
    w.write_record(["z", "value", "d1", "d2", "residual"])?;
    for i in 0..points {
        let z = zmax * i as f64 / (points - 1) as f64;
        let j = profile.eval(z);
        w.write_record([num(z), num(j.value), num(j.d1), num(j.d2), num(residual(z))])?;
    }
    w.flush()?;
    Ok(true)
}

fn initial_data(kind: DataKind, big_b: f64, small_b: Option<f64>, gamma: f64) -> CliResult<InitialData> {
    Ok(match kind {
        DataKind::LogTail => InitialData::log_tail(big_b, gamma)?,
        DataKind::Bump => InitialData::bump(small_b.unwrap_or(1.0), 0.5, 2.0)?,
        DataKind::Zero => InitialData::Zero,
        DataKind::Const => InitialData::constant(small_b.unwrap_or(0.7))?,
    })
}

fn output_schedule(t_end: f64, count: usize) -> Vec<f64> {
    geometric_times((t_end * 1e-3).min(1.0), t_end, count.max(1))
}

fn write_trajectory(path: &Path, traj: &Trajectory) -> CliResult<()> {
    let mut w = csv_writer(BufWriter::new(File::create(path)?));
    w.write_record(["t", "r", "phi", "v"])?;
    for k in 0..traj.len() {
        let v = traj.v_field(k);
        for (i, r) in traj.radii.iter().enumerate() {
            w.write_record([num(traj.times[k]), num(*r), num(traj.fields[k][i]), num(v[i])])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn simulate(cfg: &ConfigFile, a: SimulateArgs) -> CliResult<bool> {
    let start = Instant::now();
    let mut rec = Record::default();
    let p = model(cfg, &a.model, &mut rec)?;
    let kind = cfg.pick_enum(a.data, "data", DataKind::LogTail)?;
    let big_b = cfg.pick(a.big_b, "B", 1.0)?;
    let small_b = cfg.pick_opt(a.small_b, "b")?;
    let data = initial_data(kind, big_b, small_b, p.gamma())?;
    let defaults = SolverConfig::default();
    let t_end = cfg.pick(a.t_end, "t-end", defaults.t_end)?;
    let outputs = cfg.pick(a.outputs, "outputs", 16usize)?;
    let config = SolverConfig {
        n_xi: cfg.pick(a.n_xi, "n-xi", defaults.n_xi)?,
        xi_max: cfg.pick(a.xi_max, "xi-max", defaults.xi_max)?,
        t_end,
        output_times: output_schedule(t_end, outputs),
        boundary: match cfg.pick_enum(a.boundary, "boundary", BoundaryArg::Pinned)? {
            BoundaryArg::Pinned => FarBoundary::PinnedToInitialTail,
            BoundaryArg::SecondDerivative => FarBoundary::HomogeneousSecondDerivative,
        },
        ..defaults
    };
    let dir = out_dir(cfg, a.out)?;
    rec.param("data", data.descriptor());
    rec.param("solver", serde_json::to_value(&config).map_err(|e| Failure::Usage(e.to_string()))?);
    let traj = crate::solver::solve(&data, &config, &p)?;
    write_trajectory(&dir.join("trajectory.csv"), &traj)?;
    rec.param("trajectory_hash", traj.config_hash.clone());
    let last = traj.len() - 1;
    let positive = traj.stats.min_value >= -1e-10;
    rec.say(format!(
        "simulate {}: t_end = {}, phi(0,t_end) = {}, sup phi(t_end) = {}, steps = {} ({} rejected), min phi = {:e}",
        data.descriptor(),
        traj.times[last],
        traj.origin_value(last),
        traj.sup_value(last),
        traj.stats.accepted,
        traj.stats.rejected,
        traj.stats.min_value,
    ));
    write_manifest(&dir, "simulate", rec, start, positive)?;
    Ok(positive)
}

fn write_certificate(dir: &Path, report: &CertificationReport, rec: &mut Record) -> CliResult<()> {
    let name = report.kind.name();
    report.write_csv(BufWriter::new(File::create(dir.join(format!("certify_{name}.csv")))?))?;
    rec.constants_of(name, &report.constants);
    for c in &report.checks {
        rec.constants.insert(format!("{name}.check.{}", c.id), c.value);
    }
    eprintln!("{name}: {} checks on {} times x {} radii", report.checks.len(), report.grid_points.0, report.grid_points.1);
    rec.say(report.summary_line());
    Ok(())
}

fn verify(cfg: &ConfigFile, a: VerifyArgs) -> CliResult<bool> {
    let start = Instant::now();
    let mut rec = Record::default();
    let p = model(cfg, &a.model, &mut rec)?;
    let kind = cfg.pick_enum(a.kind, "kind", VerifyKind::Both)?;
    let spec = grid_spec(cfg, a.grid_preset, &mut rec)?;
    let big_b = cfg.pick(a.big_b, "B", 1.0)?;
    let dir = out_dir(cfg, a.out)?;
    let data = InitialData::log_tail(big_b, p.gamma())?;
    rec.param("data", data.descriptor());
    let (b_lo, b_hi) = log_tail_constants(&data, p.gamma(), 1e6);
    let mut pass = true;
    if matches!(kind, VerifyKind::Super | VerifyKind::Both) {
        let sup = match cfg.pick_opt(a.big_a, "A")? {
            Some(amplitude) => MatchedSuper::new(&p, &select_super_params(&p)?.with_amplitude(amplitude))?,
            None => {
                let (sup, amp) = matched_super_for(&data, &p, b_hi)?;
                rec.constants_of(
                    "amplitude",
                    &[
                        ("A", amp.amplitude),
                        ("term_cap_inner", amp.terms[0]),
                        ("term_cap_outer", amp.terms[1]),
                        ("term_tail", amp.terms[2]),
                        ("cap_sup", amp.cap_sup),
                        ("tail_floor", amp.tail_floor),
                        ("z0_prime", amp.z0_prime),
                        ("B", amp.tail_bound),
                        ("margin", amp.margin),
                    ],
                );
                sup
            }
        };
        let report = certify(&sup, &spec, Some(&data));
        write_certificate(&dir, &report, &mut rec)?;
        pass &= report.pass;
    }
    if matches!(kind, VerifyKind::Sub | VerifyKind::Both) {
        let sub = match cfg.pick_opt(a.small_a, "a")? {
            Some(amp) => MatchedSub::new(&p, &select_sub_params(&p)?.with_a(amp))?,
            None => matched_sub_for(&data, &p, b_lo)?,
        };
        rec.constants.insert("sub.b".into(), b_lo);
        let report = certify(&sub, &spec, Some(&data));
        write_certificate(&dir, &report, &mut rec)?;
        pass &= report.pass;
    }
    write_manifest(&dir, "verify", rec, start, pass)?;
    Ok(pass)
}

fn parse_sweep(s: &str) -> CliResult<Vec<f64>> {
    let list = s.strip_prefix("gamma=").unwrap_or(s);
    list.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("sweep entry '{x}': {e}"))))
        .collect()
}

fn parse_window(s: &str) -> CliResult<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Failure::Usage(format!("window '{s}' must be t_a:t_b")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("window bound '{x}': {e}")));
    Ok((parse(a)?, parse(b)?))
}

fn write_rates(path: &Path, rows: &[SuiteRow]) -> CliResult<()> {
    let mut w = csv_writer(BufWriter::new(File::create(path)?));
    w.write_record([
        "gamma",
        "p_sup",
        "p_origin",
        "band_lo",
        "band_hi",
        "pass",
        "family",
        "exponent",
        "ceiling_lo",
        "fast_decrease",
        "decays",
        "exploratory",
        "error",
    ])?;
    for r in rows {
        w.write_record([
            num(r.gamma),
            num(r.p_sup),
            num(r.p_origin),
            num(r.band_lo),
            num(r.band_hi),
            r.pass.to_string(),
            r.family.to_string(),
            num(r.exponent),
            num(r.ceiling_lo),
            num(r.fast_decrease),
            r.decays.to_string(),
            r.exploratory.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn rate_table(rows: &[SuiteRow], rec: &mut Record) {
    rec.say(format!(
        "{:>8} {:>9} {:>9} {:>10} {:>10} {:>10} {:>6}",
        "gamma", "p_sup", "p_origin", "band_lo", "band_hi", "ceiling", "pass"
    ));
    for r in rows {
        let line = match &r.error {
            Some(e) => format!("{:>8} error: {e}", r.gamma),
            None => format!(
                "{:>8.3} {:>9.4} {:>9.4} {:>10.4e} {:>10.4e} {:>10.4e} {:>6}{}",
                r.gamma,
                r.p_sup,
                r.p_origin,
                r.band_lo,
                r.band_hi,
                r.ceiling_lo,
                r.pass,
                if r.exploratory { " (exploratory)" } else { "" },
            ) + if r.decays { "" } else { " (no decay)" },
        };
        rec.say(line);
    }
}

fn solver_failure(rows: &[SuiteRow]) -> Option<Failure> {
    rows.iter()
        .filter_map(|r| r.error.as_ref())
        .find(|e| e.starts_with("solver failure"))
        .map(|e| Failure::Solver(e.clone()))
}

fn rates(cfg: &ConfigFile, a: RatesArgs) -> CliResult<bool> {
    let start = Instant::now();
    let mut rec = Record::default();
    let p = model(cfg, &a.model, &mut rec)?;
    let family: Family = cfg.pick(a.family, "family", "log-tail".to_string())?.parse()?;
    let gammas = parse_sweep(&cfg.pick(a.sweep, "sweep", "gamma=0.25,0.5,0.75,1.5".to_string())?)?;
    let window = match cfg.pick_opt(a.window, "window")? {
        Some(s) => parse_window(&s)?,
        None => DEFAULT_WINDOW,
    };
    let mut solver = suite_config(window);
    solver.n_xi = cfg.pick(a.n_xi, "n-xi", solver.n_xi)?;
    let dir = out_dir(cfg, a.out)?;
    rec.param("family", family.name());
    rec.param("sweep", gammas.clone());
    rec.param("window", vec![window.0, window.1]);
    rec.param("solver", serde_json::to_value(&solver).map_err(|e| Failure::Usage(e.to_string()))?);
    let rows = theorem_suite(&p, &family, &gammas, &solver, window);
    write_rates(&dir.join("rates.csv"), &rows)?;
    rate_table(&rows, &mut rec);
    let mut pass = rows.iter().all(|r| r.pass);
    if family.uses_gamma() {
        let inside: Vec<SuiteRow> = rows.iter().filter(|r| !r.exploratory).cloned().collect();
        let mono = slopes_monotone(&inside);
        rec.say(format!("slopes monotone in gamma: {mono}"));
        pass &= mono;
    }
    write_manifest(&dir, "rates", rec, start, pass)?;
    if let Some(f) = solver_failure(&rows) {
        return Err(f);
    }
    Ok(pass)
}

fn sandwich_csv(path: &Path, report: &SandwichReport) -> CliResult<()> {
    let mut w = csv_writer(BufWriter::new(File::create(path)?));
    w.write_record(["t", "upper_margin", "lower_margin", "pass"])?;
    for r in std::iter::once(&report.precheck).chain(&report.rows) {
        w.write_record([num(r.t), num(r.upper_margin), num(r.lower_margin), r.pass.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn stage(rec: &mut Record, name: &str, pass: bool, detail: String) -> bool {
    rec.say(format!("stage {name}: {} {detail}", if pass { "PASS" } else { "FAIL" }));
    pass
}

fn reproduce(cfg: &ConfigFile, a: ReproduceArgs) -> CliResult<bool> {
    let start = Instant::now();
    let mut rec = Record::default();
    let p = model(cfg, &a.model, &mut rec)?;
    let spec = grid_spec(cfg, a.grid_preset, &mut rec)?;
    let dir = out_dir(cfg, a.out)?;
    let n_xi = cfg.pick(a.n_xi, "n-xi", SolverConfig::default().n_xi)?;
    let (family, data) = match a.which {
        Theorem::Thm1 => (Family::LogTail { b: 1.0 }, InitialData::log_tail(1.0, p.gamma())?),
        Theorem::Thm2 => {
            let f: Family = "bump".parse()?;
            (f, f.data(p.gamma())?)
        }
    };
    rec.param("data", data.descriptor());
    let mut pass = true;

    let (b_lo, b_hi) = match a.which {
        Theorem::Thm1 => log_tail_constants(&data, p.gamma(), 1e6),
        Theorem::Thm2 => (0.0, sup_on(&data, 0.0, 2.0)),
    };
    let (sup, amp) = matched_super_for(&data, &p, b_hi)?;
    rec.constants.insert("amplitude.A".into(), amp.amplitude);
    rec.constants.insert("amplitude.B".into(), amp.tail_bound);
    let report = certify(&sup, &spec, Some(&data));
    write_certificate(&dir, &report, &mut rec)?;
    pass &= stage(&mut rec, "certify_super", report.pass, String::new());
    let sub = match a.which {
        Theorem::Thm1 => {
            let sub = matched_sub_for(&data, &p, b_lo)?;
            rec.constants.insert("sub.b".into(), b_lo);
            let report = certify(&sub, &spec, Some(&data));
            write_certificate(&dir, &report, &mut rec)?;
            pass &= stage(&mut rec, "certify_sub", report.pass, String::new());
            Some(sub)
        }
        Theorem::Thm2 => None,
    };

    let sandwich_config = SolverConfig::default().with_resolution(n_xi);
    let lower = match &sub {
        Some(s) => Barrier::Solution(s as &dyn ComparisonSolution),
        None => Barrier::Zero,
    };
    let (report, _) = sandwich_run(&data, &sandwich_config, &p, lower, Barrier::Solution(&sup))?;
    sandwich_csv(&dir.join("sandwich.csv"), &report)?;
    let detail = format!("worst margin {:e}, tol {:e}", report.worst_margin(), report.tol);
    pass &= stage(&mut rec, "sandwich", report.pass, detail);

    let mut solver = suite_config(DEFAULT_WINDOW);
    solver.n_xi = n_xi;
    let rows = theorem_suite(&p, &family, &[p.gamma()], &solver, DEFAULT_WINDOW);
    write_rates(&dir.join("rates.csv"), &rows)?;
    rate_table(&rows, &mut rec);
    if let Some(f) = solver_failure(&rows) {
        write_manifest(&dir, "reproduce", rec, start, false)?;
        return Err(f);
    }
    let row = &rows[0];
    let detail = match a.which {
        Theorem::Thm1 => format!(
            "exponent {}: band_lo = {:.6e} band ratio = {:.3} slope = {:.4}",
            row.exponent,
            row.band_lo,
            row.band_hi / row.band_lo,
            row.p_origin
        ),
        Theorem::Thm2 => format!(
            "exponent 1/2: band_lo = {:.6e} > 0; exponent 0.6 band start/end = {:.4}",
            row.band_lo, row.fast_decrease
        ),
    };
    pass &= stage(&mut rec, "rates", row.pass, detail);
    rec.say(format!("verdict: {}", if pass { "PASS" } else { "FAIL" }));
    let name = match a.which {
        Theorem::Thm1 => "reproduce thm1",
        Theorem::Thm2 => "reproduce thm2",
    };
    write_manifest(&dir, name, rec, start, pass)?;
    Ok(pass)
}
