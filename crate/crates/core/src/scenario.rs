//! Scenario runner: figure data, single evolutions, stationary analyses,
//! discord evaluations and parameter sweeps.
//!
//! Grid points run in parallel; rows are always emitted in grid order, so
//! the same configuration produces byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analytic::{f1_correlations, f1_stationary, f2_correlations, f2_stationary, AnalyticError, WernerParams};
use crate::config::{ConfigError, OutputFormat, Scenario, ScenarioConfig, XiSetting};
use crate::discord::{brute_force_discord_on, quantum_discord, DiscordError, X_STATE_TOL};
use crate::dynamics::{integrate, null_space_steady, stationary_from, DynamicsError, IntegratorConfig, StationaryOptions, Trajectory};
use crate::linalg::{DensityMatrix, LinalgError, Matrix4, Subsystem};
use crate::model::{derive_rates, off_x_magnitude, FeedbackSpec, MasterEquation, ModelError, Rates};
use crate::output::{fmt_float, write_row};

/// Trajectory health limits; a breach sets exit code 3.
pub const MAX_TRACE_DRIFT: f64 = 1e-9;
pub const MAX_HERMITICITY_CORRECTION: f64 = 1e-10;
pub const MIN_EIGENVALUE: f64 = -1e-6;
/// Printed-vs-numeric discord tolerance for fig3/fig5 row flags.
pub const FIGURE_Q_TOL: f64 = 0.01;
/// Resolution used when a non-X state forces the brute-force route.
pub const DEFAULT_BRUTE_RESOLUTION: usize = 101;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io { .. } => EXIT_CONFIG,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

fn config_error(key: &str, message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError::InvalidValue {
        key: key.into(),
        message: message.into(),
    })
}

impl From<DynamicsError> for RunError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidConfig(m) => config_error("dt", m),
            DynamicsError::NotXState(_) => config_error("state", e.to_string()),
            other => Self::Numeric(other.to_string()),
        }
    }
}

impl From<ModelError> for RunError {
    fn from(e: ModelError) -> Self {
        config_error("model", e.to_string())
    }
}

impl From<LinalgError> for RunError {
    fn from(e: LinalgError) -> Self {
        Self::Numeric(e.to_string())
    }
}

impl From<DiscordError> for RunError {
    fn from(e: DiscordError) -> Self {
        Self::Numeric(e.to_string())
    }
}

impl From<AnalyticError> for RunError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::InvalidWerner(_) | AnalyticError::InvalidArgument(_) => config_error("a", e.to_string()),
            other => Self::Numeric(other.to_string()),
        }
    }
}

/// One CSV/JSON cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Num(x) => fmt_float(*x),
            Self::Int(n) => n.to_string(),
            Self::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num(x) if x.is_finite() => json!(x),
            Self::Num(x) => json!(x.to_string()),
            Self::Int(n) => json!(n),
            Self::Text(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Num(x) => Some(*x),
            Self::Int(n) => Some(*n as f64),
            Self::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric value of `name` in every row (NaN for text cells).
    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column(name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        write_row(w, &self.columns)?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            write_row(w, &cells)?;
        }
        Ok(())
    }
}

/// A named oracle comparison made during a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Row indices (zero-based, header excluded) that exceed the tolerance.
    pub flagged_rows: Vec<usize>,
    /// Whether a failure changes the exit code.
    pub affects_exit_code: bool,
}

/// Summary written next to every data file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: Scenario,
    pub parameters: BTreeMap<String, String>,
    pub rows: usize,
    pub max_trace_drift: f64,
    /// `max(0, -min eigenvalue)` over every integrated state.
    pub max_positivity_violation: f64,
    pub max_hermiticity_correction: f64,
    pub oracle: Vec<OracleCheck>,
    pub messages: Vec<String>,
    pub exit_code: i32,
}

impl RunReport {
    fn new(cfg: &ScenarioConfig) -> Self {
        Self {
            scenario: cfg.scenario,
            parameters: cfg.echo.clone(),
            rows: 0,
            max_trace_drift: 0.0,
            max_positivity_violation: 0.0,
            max_hermiticity_correction: 0.0,
            oracle: Vec::new(),
            messages: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    fn absorb(&mut self, traj: &Trajectory) {
        let h = &traj.health;
        self.max_trace_drift = self.max_trace_drift.max(h.max_trace_drift);
        if -h.min_eigenvalue > self.max_positivity_violation {
            self.max_positivity_violation = -h.min_eigenvalue;
        }
        self.max_hermiticity_correction = self.max_hermiticity_correction.max(h.max_hermiticity_correction);
    }

    fn health_check(&mut self) {
        let checks = [
            ("trace_drift", self.max_trace_drift, MAX_TRACE_DRIFT),
            ("hermiticity_correction", self.max_hermiticity_correction, MAX_HERMITICITY_CORRECTION),
            ("positivity_violation", self.max_positivity_violation, -MIN_EIGENVALUE),
        ];
        for (name, value, tol) in checks {
            self.oracle.push(OracleCheck {
                name: name.into(),
                max_deviation: value,
                tolerance: tol,
                passed: value <= tol,
                flagged_rows: Vec::new(),
                affects_exit_code: true,
            });
        }
    }

    fn finish(&mut self) {
        if self.oracle.iter().any(|c| c.affects_exit_code && !c.passed) {
            self.exit_code = EXIT_ORACLE;
        }
    }
}

/// Data and report of one run.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub table: Table,
    /// Labelled matrices, included in JSON output.
    pub states: Vec<(String, Matrix4)>,
    pub report: RunReport,
}

impl ScenarioOutput {
    pub fn write_json<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let rows: Vec<Value> = self.table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let states: Vec<Value> = self
            .states
            .iter()
            .map(|(label, m)| json!({ "label": label, "matrix": m }))
            .collect();
        let doc = json!({
            "scenario": self.report.scenario,
            "columns": self.table.columns,
            "rows": rows,
            "states": states,
        });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)
    }

    pub fn write_data<W: Write>(&self, format: OutputFormat, w: &mut W) -> io::Result<()> {
        match format {
            OutputFormat::Csv => self.table.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }
}

fn feedback(mu: Option<f64>) -> Result<FeedbackSpec, RunError> {
    Ok(match mu {
        Some(m) => FeedbackSpec::new(m)?,
        None => FeedbackSpec::disabled(),
    })
}

fn generator(cfg: &ScenarioConfig, mu: Option<f64>, rates: Rates) -> Result<MasterEquation, RunError> {
    Ok(MasterEquation::with_variant(cfg.mode, rates, feedback(mu)?, cfg.variant)?)
}

fn load_state(path: &Path) -> Result<DensityMatrix, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| config_error("state", format!("{}: {e}", path.display())))
}

fn initial_state(cfg: &ScenarioConfig, a: f64) -> Result<DensityMatrix, RunError> {
    match &cfg.state {
        Some(p) => load_state(p),
        None => Ok(WernerParams::new(a)?.state()),
    }
}

fn single_xi(cfg: &ScenarioConfig) -> Result<f64, RunError> {
    match cfg.xi_grid()? {
        [x] => Ok(*x),
        _ => Err(config_error("xi", format!("scenario {} takes a single xi value", cfg.scenario))),
    }
}

fn single_mu(cfg: &ScenarioConfig) -> Result<Option<f64>, RunError> {
    match cfg.mu.values().as_slice() {
        [m] => Ok(*m),
        _ => Err(config_error("mu", format!("scenario {} takes a single mu value", cfg.scenario))),
    }
}

/// `(T, C, Q)` of any state: the X pipeline when possible, otherwise the
/// brute-force oracle.
fn correlations(rho: &Matrix4, brute_resolution: usize) -> Result<(f64, f64, f64), RunError> {
    if off_x_magnitude(rho) <= X_STATE_TOL {
        let c = quantum_discord(rho)?;
        Ok((c.total, c.classical, c.discord))
    } else {
        let res = if brute_resolution > 0 { brute_resolution } else { DEFAULT_BRUTE_RESOLUTION };
        let b = brute_force_discord_on(rho, res, Subsystem::N)?;
        Ok((b.total, b.classical, b.discord))
    }
}

/// Runs a scenario and returns its data and report without touching disk.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    info!("running scenario {}", cfg.scenario);
    let mut out = match cfg.scenario {
        Scenario::Fig1 | Scenario::Fig2 | Scenario::Fig4 => time_series(cfg)?,
        Scenario::Fig3 | Scenario::Fig5 => stationary_correlations(cfg)?,
        Scenario::Fig6 => discord_surface(cfg)?,
        Scenario::Evolve => evolve(cfg)?,
        Scenario::Discord => discord_table(cfg)?,
        Scenario::Steady | Scenario::Sweep => sweep(cfg)?,
    };
    out.report.rows = out.table.rows.len();
    out.report.finish();
    Ok(out)
}

/// `(T, C, Q)`.
type Triple = (f64, f64, f64);

fn time_series(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let mu = single_mu(cfg)?;
    let xi = single_xi(cfg)?;
    let g = generator(cfg, mu, Rates::from_xi(xi))?;
    let steps = (cfg.t_max / cfg.dt).round() as usize;
    let integ = IntegratorConfig {
        dt: cfg.dt,
        t_max: cfg.t_max,
        record_stride: steps / (cfg.samples - 1),
    };
    let runs: Vec<(f64, Trajectory, Vec<Triple>)> = cfg
        .a
        .par_iter()
        .map(|&a| {
            let traj = integrate(&initial_state(cfg, a)?, &g, &integ)?;
            let corr = traj
                .states
                .iter()
                .map(|s| correlations(s.matrix(), cfg.brute_resolution))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((a, traj, corr))
        })
        .collect::<Result<_, RunError>>()?;

    let mut report = RunReport::new(cfg);
    let mut table = Table::new(&["a", "t", "discord", "total", "classical", "trace", "min_eigenvalue"]);
    for (a, traj, corr) in &runs {
        report.absorb(traj);
        for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
            let (tt, cc, qq) = corr[k];
            table.rows.push(vec![
                Cell::Num(*a),
                Cell::Num(*t),
                Cell::Num(qq),
                Cell::Num(tt),
                Cell::Num(cc),
                Cell::Num(s.trace().re),
                Cell::Num(traj.min_eigenvalues[k]),
            ]);
        }
    }
    report.health_check();
    let states = runs
        .iter()
        .filter_map(|(a, traj, _)| traj.last().map(|s| (format!("a={a} t={}", cfg.t_max), *s.matrix())))
        .collect();
    Ok(ScenarioOutput { table, states, report })
}

fn stationary_correlations(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let xi = single_xi(cfg)?;
    let f1 = cfg.scenario == Scenario::Fig3;
    let rows: Vec<(f64, crate::analytic::StationaryCorrelations)> = cfg
        .a
        .par_iter()
        .map(|&a| {
            let w = WernerParams::new(a)?;
            let c = if f1 { f1_correlations(w)? } else { f2_correlations(w, xi)? };
            Ok((a, c))
        })
        .collect::<Result<_, RunError>>()?;

    let mut report = RunReport::new(cfg);
    if f1 && cfg.mu.values() != [Some(-1.0)] || !f1 && cfg.mu.values() != [Some(1.0)] {
        report
            .messages
            .push(format!("{} always uses mu = {}; the mu key is ignored", cfg.scenario, if f1 { -1 } else { 1 }));
    }
    let mut table = Table::new(&[
        "a",
        "total_printed",
        "classical_printed",
        "discord_printed",
        "total_numeric",
        "classical_numeric",
        "discord_numeric",
        "discord_deviation",
        "flagged",
    ]);
    let mut flagged = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, (a, c)) in rows.iter().enumerate() {
        let dev = (c.printed.discord - c.numeric.discord).abs();
        let bad = !(dev <= FIGURE_Q_TOL);
        if bad {
            flagged.push(k);
        }
        worst = if dev.is_nan() { f64::INFINITY } else { worst.max(dev) };
        table.rows.push(vec![
            Cell::Num(*a),
            Cell::Num(c.printed.total),
            Cell::Num(c.printed.classical),
            Cell::Num(c.printed.discord),
            Cell::Num(c.numeric.total),
            Cell::Num(c.numeric.classical),
            Cell::Num(c.numeric.discord),
            Cell::Num(dev),
            Cell::Int(bad as i64),
        ]);
    }
    report.oracle.push(OracleCheck {
        name: "printed_vs_numeric_discord".into(),
        max_deviation: worst,
        tolerance: FIGURE_Q_TOL,
        passed: flagged.is_empty(),
        flagged_rows: flagged,
        affects_exit_code: false,
    });
    let states = rows
        .iter()
        .filter(|(a, _)| *a == 0.0 || *a == 1.0)
        .map(|(a, _)| {
            let w = WernerParams::new(*a)?;
            let s = if f1 { f1_stationary(&w.initial())? } else { f2_stationary(w, xi)? };
            Ok((format!("stationary a={a}"), *s.matrix()))
        })
        .collect::<Result<_, RunError>>()?;
    Ok(ScenarioOutput { table, states, report })
}

fn discord_surface(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let xis = cfg.xi_grid()?;
    let points: Vec<(f64, f64)> = cfg.a.iter().flat_map(|&a| xis.iter().map(move |&x| (a, x))).collect();
    let values: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|&(a, xi)| {
            let c = quantum_discord(f2_stationary(WernerParams::new(a)?, xi)?.matrix())?;
            Ok((c.total, c.classical, c.discord))
        })
        .collect::<Result<_, RunError>>()?;
    let mut table = Table::new(&["a", "xi", "discord", "total", "classical"]);
    for ((a, xi), (t, c, q)) in points.iter().zip(&values) {
        table
            .rows
            .push(vec![Cell::Num(*a), Cell::Num(*xi), Cell::Num(*q), Cell::Num(*t), Cell::Num(*c)]);
    }
    Ok(ScenarioOutput {
        table,
        states: Vec::new(),
        report: RunReport::new(cfg),
    })
}

fn evolve(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let mu = single_mu(cfg)?;
    let xi = single_xi(cfg)?;
    let a = match cfg.a.as_slice() {
        [a] => *a,
        _ => return Err(config_error("a", "evolve takes a single a value")),
    };
    let g = generator(cfg, mu, Rates::from_xi(xi))?;
    let integ = IntegratorConfig {
        dt: cfg.dt,
        t_max: cfg.t_max,
        record_stride: cfg.record_stride,
    };
    let traj = integrate(&initial_state(cfg, a)?, &g, &integ)?;
    let corr = traj
        .states
        .par_iter()
        .map(|s| correlations(s.matrix(), cfg.brute_resolution))
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = Trajectory::csv_header();
    columns.extend(["off_x_magnitude", "discord", "total", "classical"].map(String::from));
    let mut table = Table {
        columns,
        rows: Vec::with_capacity(traj.len()),
    };
    for (k, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![Cell::Num(*t)];
        for &(i, j) in &crate::model::X_ENTRIES {
            row.push(Cell::Num(s.data[i][j].re));
            row.push(Cell::Num(s.data[i][j].im));
        }
        let (tt, cc, qq) = corr[k];
        row.extend([
            Cell::Num(s.trace().re),
            Cell::Num(traj.min_eigenvalues[k]),
            Cell::Num(off_x_magnitude(s.matrix())),
            Cell::Num(qq),
            Cell::Num(tt),
            Cell::Num(cc),
        ]);
        table.rows.push(row);
    }
    let mut report = RunReport::new(cfg);
    report.absorb(&traj);
    report.health_check();
    let states = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| (format!("t={}", fmt_float(*t)), *s.matrix()))
        .collect();
    Ok(ScenarioOutput { table, states, report })
}

fn discord_table(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let inputs: Vec<(f64, DensityMatrix)> = match &cfg.state {
        Some(p) => vec![(f64::NAN, load_state(p)?)],
        None => cfg
            .a
            .iter()
            .map(|&a| Ok((a, WernerParams::new(a)?.state())))
            .collect::<Result<_, RunError>>()?,
    };
    let brute = cfg.brute_resolution;
    let mut columns = vec!["a", "total", "classical", "discord", "theta", "phi"];
    if brute > 0 {
        columns.extend(["brute_force_discord", "brute_force_deviation"]);
    }
    let rows: Vec<Vec<Cell>> = inputs
        .par_iter()
        .map(|(a, rho)| {
            let x = if off_x_magnitude(rho.matrix()) <= X_STATE_TOL {
                Some(quantum_discord(rho.matrix())?)
            } else {
                None
            };
            if x.is_none() && brute == 0 {
                return Err(config_error("brute_resolution", "state is not an X state; set brute_resolution > 0"));
            }
            let nan = f64::NAN;
            let mut row = vec![Cell::Num(*a)];
            match &x {
                Some(c) => row.extend([c.total, c.classical, c.discord, c.argmin.theta, c.argmin.phi].map(Cell::Num)),
                None => row.extend([nan; 5].map(Cell::Num)),
            }
            if brute > 0 {
                let b = brute_force_discord_on(rho.matrix(), brute, Subsystem::N)?;
                let dev = x.map(|c| (c.discord - b.discord).abs()).unwrap_or(nan);
                row.extend([Cell::Num(b.discord), Cell::Num(dev)]);
            }
            Ok(row)
        })
        .collect::<Result<_, RunError>>()?;
    let mut report = RunReport::new(cfg);
    if brute > 0 {
        let k = columns.len() - 1;
        let devs: Vec<f64> = rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect();
        let flagged: Vec<usize> = devs.iter().enumerate().filter(|(_, d)| **d > 1e-3).map(|(i, _)| i).collect();
        report.oracle.push(OracleCheck {
            name: "x_pipeline_vs_brute_force".into(),
            max_deviation: devs.iter().copied().filter(|d| !d.is_nan()).fold(0.0, f64::max),
            tolerance: 1e-3,
            passed: flagged.is_empty(),
            flagged_rows: flagged,
            affects_exit_code: true,
        });
    }
    let states = inputs.iter().map(|(a, rho)| (format!("a={a}"), *rho.matrix())).collect();
    Ok(ScenarioOutput {
        table: Table {
            columns: columns.into_iter().map(String::from).collect(),
            rows,
        },
        states,
        report,
    })
}

/// Parameters of one sweep point.
#[derive(Debug, Clone, Copy)]
struct SweepPoint {
    mu: Option<f64>,
    a: f64,
    /// `(β, d)` when the rates come from the waveguide.
    geometry: Option<(f64, f64)>,
    rates: Rates,
}

fn sweep_points(cfg: &ScenarioConfig) -> Result<Vec<SweepPoint>, RunError> {
    let mut points = Vec::new();
    for mu in cfg.mu.values() {
        for &a in &cfg.a {
            match &cfg.xi {
                XiSetting::Grid(xis) => {
                    for &xi in xis {
                        points.push(SweepPoint {
                            mu,
                            a,
                            geometry: None,
                            rates: Rates::from_xi(xi),
                        });
                    }
                }
                XiSetting::FromWaveguide => {
                    for &beta in &cfg.waveguide.beta {
                        for &d in &cfg.waveguide.separation {
                            let rates = derive_rates(&cfg.waveguide.params(beta, d))?;
                            points.push(SweepPoint {
                                mu,
                                a,
                                geometry: Some((beta, d)),
                                rates,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(points)
}

/// Stationary analysis over the `mu × a × (xi | beta × d)` grid; `steady`
/// is the same computation, usually on a single point.
fn sweep(cfg: &ScenarioConfig) -> Result<ScenarioOutput, RunError> {
    let points = sweep_points(cfg)?;
    let opts = StationaryOptions {
        tol: cfg.tol,
        t_max: cfg.stationary_t_max,
        dt: cfg.dt,
        ..StationaryOptions::default()
    };
    let results: Vec<(Vec<Cell>, Matrix4)> = points
        .par_iter()
        .map(|p| {
            let g = generator(cfg, p.mu, p.rates)?;
            let st = stationary_from(&initial_state(cfg, p.a)?, &g, &opts)?;
            let ns = null_space_steady(&g)?;
            let (t, c, q) = correlations(st.state.matrix(), cfg.brute_resolution)?;
            let mut row = vec![
                p.mu.map(Cell::Num).unwrap_or_else(|| Cell::Text("none".into())),
                Cell::Num(p.a),
            ];
            if let Some((beta, d)) = p.geometry {
                row.extend([Cell::Num(beta), Cell::Num(d)]);
            }
            row.extend([
                Cell::Num(p.rates.xi),
                Cell::Num(p.rates.gamma),
                Cell::Num(p.rates.omega0),
                Cell::Num(q),
                Cell::Num(t),
                Cell::Num(c),
                Cell::Num(st.residual),
                Cell::Int(ns.dimension as i64),
                Cell::Num(st.time.unwrap_or(f64::NAN)),
            ]);
            Ok((row, *st.state.matrix()))
        })
        .collect::<Result<_, RunError>>()?;

    let mut columns = vec!["mu", "a"];
    if cfg.xi == XiSetting::FromWaveguide {
        columns.extend(["beta", "d"]);
    }
    columns.extend([
        "xi",
        "gamma",
        "omega0",
        "discord",
        "total",
        "classical",
        "residual",
        "null_space_dimension",
        "stationary_time",
    ]);
    let mut table = Table::new(&columns);
    let mut states = Vec::with_capacity(results.len());
    for (k, (row, m)) in results.into_iter().enumerate() {
        table.rows.push(row);
        states.push((format!("point {k}"), m));
    }
    Ok(ScenarioOutput {
        table,
        states,
        report: RunReport::new(cfg),
    })
}

/// Where the run report goes when `report` is not set: next to the data
/// file, or nowhere (the caller prints it) when data goes to stdout.
pub fn report_path(cfg: &ScenarioConfig) -> Option<PathBuf> {
    cfg.report.clone().or_else(|| {
        cfg.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".report.json");
            PathBuf::from(s)
        })
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path).map(BufWriter::new).map_err(|e| RunError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes the data file (or stdout) and the report file, if any.
pub fn write_outputs(cfg: &ScenarioConfig, out: &ScenarioOutput) -> Result<(), RunError> {
    let io_err = |path: &str, e: io::Error| RunError::Io {
        path: path.into(),
        message: e.to_string(),
    };
    match &cfg.output {
        Some(p) => {
            let mut w = create(p)?;
            out.write_data(cfg.format, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(&p.display().to_string(), e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            out.write_data(cfg.format, &mut w).map_err(|e| io_err("<stdout>", e))?;
        }
    }
    if let Some(p) = report_path(cfg) {
        let mut w = create(&p)?;
        serde_json::to_writer_pretty(&mut w, &out.report)
            .map_err(io::Error::from)
            .and_then(|_| writeln!(w))
            .and_then(|_| w.flush())
            .map_err(|e| io_err(&p.display().to_string(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: Scenario, kv: &[(&str, &str)]) -> ScenarioConfig {
        ScenarioConfig::for_scenario(s, kv).unwrap()
    }

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["x", "n", "s"]);
        t.rows.push(vec![Cell::Num(0.5), Cell::Int(3), Cell::Text("none".into())]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,n,s\n5.00000000000e-1,3,none\n");
    }

    #[test]
    fn fig4_short_run() {
        let out = run_scenario(&cfg(Scenario::Fig4, &[("a", "1"), ("t_max", "1"), ("samples", "11")])).unwrap();
        assert_eq!(out.table.rows.len(), 11);
        let q = out.table.values("discord").unwrap();
        assert!((q[0] - 1.0).abs() < 1e-6);
        assert_eq!(out.report.exit_code, EXIT_OK);
    }

    #[test]
    fn single_point_sweep_matches_steady() {
        let kv = [("mu", "1"), ("a", "0.5"), ("stationary_t_max", "100")];
        let steady = run_scenario(&cfg(Scenario::Steady, &kv)).unwrap();
        let sweep = run_scenario(&cfg(Scenario::Sweep, &kv)).unwrap();
        assert_eq!(steady.table, sweep.table);
    }

    #[test]
    fn appendix_without_feedback_is_config_error() {
        let err = ScenarioConfig::for_scenario(Scenario::Sweep, &[("mu", "none"), ("mode", "appendix")]).unwrap_err();
        assert_eq!(RunError::from(err).exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn unstable_step_is_numeric_error() {
        let c = cfg(Scenario::Evolve, &[("mu", "1"), ("dt", "1"), ("t_max", "50"), ("record_stride", "1")]);
        let err = run_scenario(&c).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_NUMERIC, "{err}");
    }

    #[test]
    fn report_path_defaults_next_to_output() {
        let c = cfg(Scenario::Fig6, &[("output", "/tmp/x.csv")]);
        assert_eq!(report_path(&c), Some(PathBuf::from("/tmp/x.csv.report.json")));
        assert_eq!(report_path(&cfg(Scenario::Fig6, &[])), None);
    }
}
