//! Total correlation, classical correlation and discord of Werner states,
//! from the X-state formula and from a brute-force measurement search.
//!
//!     cargo run --release --example werner_discord

use plasmon_qd::discord::{brute_force_discord, quantum_discord};
use plasmon_qd::linalg::DensityMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>5} {:>10} {:>10} {:>10} {:>12}", "a", "T", "C", "Q", "Q brute");
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let rho = DensityMatrix::werner(a)?;
        let c = quantum_discord(rho.matrix())?;
        let b = brute_force_discord(rho.matrix(), 101)?;
        println!("{a:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>12.6}", c.total, c.classical, c.discord, b);
    }
    Ok(())
}
