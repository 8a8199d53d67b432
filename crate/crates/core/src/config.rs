//! Scenario configuration: flat `key=value` files, command-line overrides and
//! per-scenario defaults.
//!
//! Grids are written either as a comma list (`0.2,0.4,1`) or as an inclusive
//! linear range `start:stop:count` (`0:1:201`). Every grid must be finite and
//! strictly ascending.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::{AppendixVariant, GeneratorMode, WaveguideParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: expected key=value, got {text:?}")]
    Syntax { path: String, line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {key}: {message}")]
    InvalidValue { key: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Every recognised key, in the order used for the parameter echo.
pub const KEYS: &[&str] = &[
    "scenario",
    "mu",
    "a",
    "xi",
    "mode",
    "variant",
    "t_max",
    "dt",
    "samples",
    "record_stride",
    "output",
    "report",
    "format",
    "state",
    "beta",
    "d",
    "l",
    "decay",
    "height",
    "kr",
    "brute_resolution",
    "tol",
    "stationary_t_max",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Evolve,
    Steady,
    Discord,
    Sweep,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "fig1" => Self::Fig1,
            "fig2" => Self::Fig2,
            "fig3" => Self::Fig3,
            "fig4" => Self::Fig4,
            "fig5" => Self::Fig5,
            "fig6" => Self::Fig6,
            "evolve" => Self::Evolve,
            "steady" => Self::Steady,
            "discord" => Self::Discord,
            "sweep" => Self::Sweep,
            other => return Err(format!("unknown scenario {other:?}")),
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::Evolve => "evolve",
            Self::Steady => "steady",
            Self::Discord => "discord",
            Self::Sweep => "sweep",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?} (csv or json)")),
        }
    }
}

/// Parses a grid: a single value, a comma list, or `start:stop:count`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("range {text:?} must be start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| format!("bad number {:?}", parts[0]))?;
        let stop: f64 = parts[1].parse().map_err(|_| format!("bad number {:?}", parts[1]))?;
        let count: usize = parts[2].parse().map_err(|_| format!("bad count {:?}", parts[2]))?;
        match count {
            0 => return Err("range count must be at least 1".into()),
            1 => vec![start],
            n => (0..n)
                .map(|k| if k == n - 1 { stop } else { start + (stop - start) * k as f64 / (n - 1) as f64 })
                .collect(),
        }
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number {:?}", p.trim())))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err("empty grid".into());
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(format!("grid {text:?} has non-finite values"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("grid {text:?} is not strictly ascending"));
    }
    Ok(values)
}

/// Raw `key → value` pairs. Later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::new();
        for (n, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    path: origin.to_string(),
                    line: n + 1,
                    text: line.to_string(),
                });
            };
            raw.set(key.trim(), value.trim())?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        self.entries.insert(key, value.trim().to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Applies every entry of `other` on top of `self`.
    pub fn merge(&mut self, other: &RawConfig) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }
}

/// Feedback setting: disabled, or a grid of μ values.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuSetting {
    None,
    Grid(Vec<f64>),
}

impl MuSetting {
    /// `None` entries stand for "feedback off".
    pub fn values(&self) -> Vec<Option<f64>> {
        match self {
            Self::None => vec![None],
            Self::Grid(g) => g.iter().copied().map(Some).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiSetting {
    Grid(Vec<f64>),
    /// Derive ξ and γ from the waveguide geometry.
    FromWaveguide,
}

/// Waveguide grids used when `xi = from-waveguide`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveguideGrid {
    pub beta: Vec<f64>,
    pub separation: Vec<f64>,
    pub propagation_length: f64,
    pub decay: f64,
    pub height: f64,
    /// When set, `cos(k_r d)` and `sin(k_r d)` follow the separation.
    pub kr: Option<f64>,
}

impl WaveguideGrid {
    pub fn params(&self, beta: f64, separation: f64) -> WaveguideParams {
        let base = WaveguideParams {
            beta,
            separation,
            propagation_length: self.propagation_length,
            decay: self.decay,
            height: self.height,
            ..WaveguideParams::default()
        };
        match self.kr {
            Some(kr) => base.with_wavenumber(kr),
            None => base,
        }
    }
}

/// Fully resolved scenario configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub mu: MuSetting,
    pub a: Vec<f64>,
    pub xi: XiSetting,
    pub waveguide: WaveguideGrid,
    pub mode: GeneratorMode,
    pub variant: AppendixVariant,
    pub t_max: f64,
    pub dt: f64,
    /// Recorded time samples including `t = 0` (fig1/fig2/fig4).
    pub samples: usize,
    pub record_stride: usize,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: OutputFormat,
    /// JSON matrix file used instead of Werner(a) as the initial state.
    pub state: Option<PathBuf>,
    /// Brute-force oracle resolution for the discord scenario (0 = off).
    pub brute_resolution: usize,
    pub tol: f64,
    pub stationary_t_max: f64,
    /// Resolved `key → value` echo for the run report.
    pub echo: BTreeMap<String, String>,
}

/// ξ with the reference geometry: `0.9·e^{-525/3400}·√2/2`.
pub fn reference_xi() -> f64 {
    0.9 * (-525.0_f64 / 3400.0).exp() * std::f64::consts::FRAC_1_SQRT_2
}

fn defaults(scenario: Scenario) -> Vec<(&'static str, String)> {
    let xi = format!("{}", reference_xi());
    let mut d: Vec<(&'static str, String)> = vec![
        ("xi", xi),
        ("mode", "full".into()),
        ("variant", "corrected".into()),
        ("t_max", "10".into()),
        ("dt", "0.001".into()),
        ("samples", "1001".into()),
        ("record_stride", "10".into()),
        ("format", "csv".into()),
        ("brute_resolution", "0".into()),
        ("tol", "1e-12".into()),
        ("stationary_t_max", "200".into()),
    ];
    let wg = WaveguideParams::default();
    d.extend([
        ("beta", format!("{}", wg.beta)),
        ("d", format!("{}", wg.separation)),
        ("l", format!("{}", wg.propagation_length)),
        ("decay", format!("{}", wg.decay)),
        ("height", format!("{}", wg.height)),
    ]);
    let (mu, a) = match scenario {
        Scenario::Fig1 => ("none", "0.2:1:5"),
        Scenario::Fig2 => ("-1", "0.2:1:5"),
        Scenario::Fig4 => ("1", "0.2:1:5"),
        Scenario::Fig3 => ("-1", "0:1:201"),
        Scenario::Fig5 => ("1", "0:1:201"),
        Scenario::Fig6 => ("1", "0:1:101"),
        Scenario::Evolve => ("none", "1"),
        Scenario::Steady => ("1", "1"),
        Scenario::Discord => ("none", "0:1:11"),
        Scenario::Sweep => ("-1,-0.5,0.5,1", "1"),
    };
    d.push(("mu", mu.into()));
    d.push(("a", a.into()));
    if scenario == Scenario::Fig6 {
        d.retain(|(k, _)| *k != "xi");
        d.push(("xi", "0.001:1:101".into()));
    }
    d
}

fn number<T: FromStr>(raw: &BTreeMap<String, String>, key: &str) -> Result<T, ConfigError> {
    let v = &raw[key];
    v.parse::<T>().map_err(|_| invalid(key, format!("cannot parse {v:?}")))
}

fn single(raw: &BTreeMap<String, String>, key: &str) -> Result<f64, ConfigError> {
    let v: f64 = number(raw, key)?;
    if !v.is_finite() {
        return Err(invalid(key, "must be finite"));
    }
    Ok(v)
}

impl ScenarioConfig {
    /// Resolves a raw configuration, filling scenario defaults for missing keys.
    pub fn resolve(raw: &RawConfig) -> Result<Self, ConfigError> {
        let scenario: Scenario = raw
            .get("scenario")
            .ok_or_else(|| invalid("scenario", "missing"))?
            .parse()
            .map_err(|e: String| invalid("scenario", e))?;
        let mut m: BTreeMap<String, String> = defaults(scenario).into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for (k, v) in &raw.entries {
            m.insert(k.clone(), v.clone());
        }

        let mu = match m["mu"].trim().to_ascii_lowercase().as_str() {
            "none" | "off" => MuSetting::None,
            text => {
                let grid = parse_grid(text).map_err(|e| invalid("mu", e))?;
                if grid.iter().any(|&x| !(-1.0..=1.0).contains(&x) || x == 0.0) {
                    return Err(invalid("mu", "values must lie in [-1, 0) ∪ (0, 1]"));
                }
                MuSetting::Grid(grid)
            }
        };
        let a = parse_grid(&m["a"]).map_err(|e| invalid("a", e))?;
        if a.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(invalid("a", "values must lie in [0, 1]"));
        }
        let xi = match m["xi"].trim() {
            "from-waveguide" | "from_waveguide" => XiSetting::FromWaveguide,
            text => {
                let grid = parse_grid(text).map_err(|e| invalid("xi", e))?;
                if grid.iter().any(|&x| x < 0.0) {
                    return Err(invalid("xi", "values must be >= 0"));
                }
                XiSetting::Grid(grid)
            }
        };
        let beta = parse_grid(&m["beta"]).map_err(|e| invalid("beta", e))?;
        let separation = parse_grid(&m["d"]).map_err(|e| invalid("d", e))?;
        let kr = match m.get("kr") {
            Some(v) => Some(v.parse::<f64>().map_err(|_| invalid("kr", format!("cannot parse {v:?}")))?),
            None => None,
        };
        let waveguide = WaveguideGrid {
            beta,
            separation,
            propagation_length: single(&m, "l")?,
            decay: single(&m, "decay")?,
            height: single(&m, "height")?,
            kr,
        };
        for b in &waveguide.beta {
            for d in &waveguide.separation {
                waveguide.params(*b, *d).validate().map_err(|e| invalid("xi", e.to_string()))?;
            }
        }

        let mode: GeneratorMode = m["mode"].parse().map_err(|e: crate::model::ModelError| invalid("mode", e.to_string()))?;
        let variant = match m["variant"].trim().to_ascii_lowercase().as_str() {
            "corrected" => AppendixVariant::Corrected,
            "printed" => AppendixVariant::Printed,
            other => return Err(invalid("variant", format!("unknown variant {other:?} (corrected or printed)"))),
        };
        if mode == GeneratorMode::Appendix && mu == MuSetting::None && scenario_integrates(scenario) {
            return Err(invalid("mode", "the appendix generator needs feedback (set mu)"));
        }

        let t_max = single(&m, "t_max")?;
        let dt = single(&m, "dt")?;
        if !(dt > 0.0 && t_max >= dt) {
            return Err(invalid("dt", format!("need 0 < dt <= t_max (dt = {dt}, t_max = {t_max})")));
        }
        let samples: usize = number(&m, "samples")?;
        let record_stride: usize = number(&m, "record_stride")?;
        if record_stride == 0 {
            return Err(invalid("record_stride", "must be >= 1"));
        }
        if matches!(scenario, Scenario::Fig1 | Scenario::Fig2 | Scenario::Fig4) {
            let steps = (t_max / dt).round() as usize;
            if samples < 2 || !steps.is_multiple_of(samples - 1) {
                return Err(invalid(
                    "samples",
                    format!("{steps} steps cannot be split into {samples} evenly spaced samples"),
                ));
            }
        }
        let format: OutputFormat = m["format"].parse().map_err(|e: String| invalid("format", e))?;
        let path = |key: &str| m.get(key).filter(|v| !v.is_empty() && v.as_str() != "-").map(PathBuf::from);
        let tol = single(&m, "tol")?;
        if tol <= 0.0 {
            return Err(invalid("tol", "must be positive"));
        }
        let stationary_t_max = single(&m, "stationary_t_max")?;
        if stationary_t_max <= 0.0 {
            return Err(invalid("stationary_t_max", "must be positive"));
        }

        let echo = KEYS
            .iter()
            .filter_map(|k| m.get(*k).map(|v| (k.to_string(), v.clone())))
            .collect();
        Ok(Self {
            scenario,
            mu,
            a,
            xi,
            waveguide,
            mode,
            variant,
            t_max,
            dt,
            samples,
            record_stride,
            output: path("output"),
            report: path("report"),
            format,
            state: path("state"),
            brute_resolution: number(&m, "brute_resolution")?,
            tol,
            stationary_t_max,
            echo,
        })
    }

    /// Convenience for library callers: defaults for `scenario` plus overrides.
    pub fn for_scenario(scenario: Scenario, overrides: &[(&str, &str)]) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::new();
        raw.set("scenario", &scenario.to_string())?;
        for (k, v) in overrides {
            raw.set(k, v)?;
        }
        Self::resolve(&raw)
    }

    /// ξ grid, or an error when ξ is tied to the waveguide.
    pub fn xi_grid(&self) -> Result<&[f64], ConfigError> {
        match &self.xi {
            XiSetting::Grid(g) => Ok(g),
            XiSetting::FromWaveguide => Err(invalid("xi", "this scenario needs explicit xi values")),
        }
    }
}

fn scenario_integrates(s: Scenario) -> bool {
    matches!(
        s,
        Scenario::Fig1 | Scenario::Fig2 | Scenario::Fig4 | Scenario::Evolve | Scenario::Steady | Scenario::Sweep
    )
}
