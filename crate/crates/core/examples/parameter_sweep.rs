//! Programmatic sweep over μ and a, written as CSV to stdout. Equivalent to
//! `plasmon-qd sweep --mu -1,-0.5,0.5,1 --a 0:1:5`.
//!
//!     cargo run --release --example parameter_sweep

use plasmon_qd::config::{Scenario, ScenarioConfig};
use plasmon_qd::scenario::run_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::for_scenario(Scenario::Sweep, &[("mu", "-1,-0.5,0.5,1"), ("a", "0:1:5")])?;
    let out = run_scenario(&cfg)?;
    out.table.write_csv(&mut std::io::stdout().lock())?;
    eprintln!("exit code {}", out.report.exit_code);
    Ok(())
}
