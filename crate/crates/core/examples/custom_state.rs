//! Evolves a user-supplied density matrix given as `{"re":…, "im":…}` JSON
//! under F2 and prints the discord along the way. Off-X states fall back to
//! the brute-force discord.
//!
//!     cargo run --release --example custom_state

use plasmon_qd::config::{Scenario, ScenarioConfig};
use plasmon_qd::linalg::DensityMatrix;
use plasmon_qd::scenario::run_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bell = DensityMatrix::bell_psi();
    let dir = std::env::temp_dir().join("plasmon-qd-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("state.json");
    std::fs::write(&path, serde_json::to_string(&bell)?)?;
    println!("state file: {}", std::fs::read_to_string(&path)?);

    let cfg = ScenarioConfig::for_scenario(
        Scenario::Evolve,
        &[("mu", "1"), ("t_max", "2"), ("record_stride", "250"), ("state", path.to_str().ok_or("non-UTF-8 path")?)],
    )?;
    let out = run_scenario(&cfg)?;
    let t = out.table.values("t").ok_or("missing t")?;
    let q = out.table.values("discord").ok_or("missing discord")?;
    for (t, q) in t.iter().zip(q) {
        println!("t = {t:.2}  Q = {q:.6}");
    }
    Ok(())
}
