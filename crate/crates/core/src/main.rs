use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plasmon_qd::config::{ConfigError, RawConfig, ScenarioConfig};
use plasmon_qd::scenario::{run_scenario, write_outputs, RunError, EXIT_CONFIG, EXIT_ORACLE};
use plasmon_qd::validate::run_validation;

#[derive(Parser)]
#[command(name = "plasmon-qd", version, about = "Discord dynamics of two waveguide-coupled qubits under homodyne feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario (fig1..fig6, evolve, steady, discord, sweep).
    Run(Keys),
    /// Stationary discord over a parameter grid.
    Sweep(Keys),
    /// Cross-check the closed forms, generators and discord routes.
    Validate {
        /// Also write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Every configuration key as a flag. Flags override `--config`.
#[derive(Args)]
struct Keys {
    /// key=value file; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// `none`, a value, a comma list or start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Werner weight grid.
    #[arg(long)]
    a: Option<String>,
    /// Collective decay rate grid (γ = ω₀ = ξ/2), or `from-waveguide`.
    #[arg(long)]
    xi: Option<String>,
    /// `full` or `appendix`.
    #[arg(long)]
    mode: Option<String>,
    /// Appendix transcription: `corrected` or `printed`.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    record_stride: Option<String>,
    /// Data file; stdout when absent.
    #[arg(long)]
    output: Option<String>,
    /// Report file; defaults to `<output>.report.json`, stderr without output.
    #[arg(long)]
    report: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    /// JSON density matrix replacing the Werner initial state.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Qubit separation grid.
    #[arg(long)]
    d: Option<String>,
    /// Propagation length.
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    decay: Option<String>,
    #[arg(long)]
    height: Option<String>,
    #[arg(long)]
    kr: Option<String>,
    #[arg(long)]
    brute_resolution: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    stationary_t_max: Option<String>,
}

impl Keys {
    fn raw(&self, default_scenario: Option<&str>) -> Result<RawConfig, ConfigError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::from_file(p)?,
            None => RawConfig::new(),
        };
        if let Some(s) = default_scenario {
            if raw.get("scenario").is_none() {
                raw.set("scenario", s)?;
            }
        }
        let flags = [
            ("scenario", &self.scenario),
            ("mu", &self.mu),
            ("a", &self.a),
            ("xi", &self.xi),
            ("mode", &self.mode),
            ("variant", &self.variant),
            ("t_max", &self.t_max),
            ("dt", &self.dt),
            ("samples", &self.samples),
            ("record_stride", &self.record_stride),
            ("output", &self.output),
            ("report", &self.report),
            ("format", &self.format),
            ("state", &self.state),
            ("beta", &self.beta),
            ("d", &self.d),
            ("l", &self.l),
            ("decay", &self.decay),
            ("height", &self.height),
            ("kr", &self.kr),
            ("brute_resolution", &self.brute_resolution),
            ("tol", &self.tol),
            ("stationary_t_max", &self.stationary_t_max),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                raw.set(k, v)?;
            }
        }
        Ok(raw)
    }
}

fn run(keys: &Keys, default_scenario: Option<&str>) -> Result<u8, RunError> {
    let raw = keys.raw(default_scenario)?;
    let cfg = ScenarioConfig::resolve(&raw)?;
    log::info!("running {} ({} key overrides)", cfg.scenario, cfg.echo.len());
    let out = run_scenario(&cfg)?;
    write_outputs(&cfg, &out)?;
    if cfg.report.is_none() && cfg.output.is_none() {
        let json = serde_json::to_string_pretty(&out.report).map_err(|e| RunError::Numeric(e.to_string()))?;
        eprintln!("{json}");
    }
    for m in &out.report.messages {
        log::warn!("{m}");
    }
    Ok(out.report.exit_code as u8)
}

fn validate(report: Option<&PathBuf>) -> Result<u8, RunError> {
    let r = run_validation()?;
    print!("{}", r.table());
    if let Some(p) = report {
        let io = |e: std::io::Error| RunError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        };
        let mut f = std::fs::File::create(p).map_err(io)?;
        serde_json::to_writer_pretty(&mut f, &r).map_err(std::io::Error::from).map_err(io)?;
        writeln!(f).map_err(io)?;
    }
    Ok(if r.all_passed() { 0 } else { EXIT_ORACLE as u8 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Run(k) => run(k, None),
        Command::Sweep(k) => run(k, Some("sweep")),
        Command::Validate { report } => validate(report.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
