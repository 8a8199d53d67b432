//! Collective rates from the waveguide geometry, and the steady F2 discord
//! as the qubit separation changes.
//!
//!     cargo run --release --example waveguide_rates

use plasmon_qd::analytic::{f2_stationary, WernerParams};
use plasmon_qd::discord::quantum_discord;
use plasmon_qd::model::{derive_rates, WaveguideParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = WaveguideParams::default();
    let r = derive_rates(&base)?;
    println!("default geometry: xi = {:.7}, gamma = {:.7}", r.xi, r.gamma);
    println!("{:>10} {:>10} {:>10}", "d / nm", "xi", "Q_F2(a=1)");
    for k in 1..=8 {
        let p = WaveguideParams {
            separation: k as f64 * 150e-9,
            ..base
        };
        let xi = derive_rates(&p)?.xi;
        let q = quantum_discord(f2_stationary(WernerParams::new(1.0)?, xi)?.matrix())?.discord;
        println!("{:>10.0} {xi:>10.6} {q:>10.6}", p.separation * 1e9);
    }
    Ok(())
}
