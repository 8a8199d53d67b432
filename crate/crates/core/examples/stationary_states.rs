//! Null space of the generator and the stationary state reached from
//! Werner input, compared with the closed forms.
//!
//!     cargo run --release --example stationary_states

use plasmon_qd::analytic::{f1_stationary, f2_stationary, WernerParams};
use plasmon_qd::config::reference_xi;
use plasmon_qd::discord::quantum_discord;
use plasmon_qd::dynamics::{null_space_steady, stationary_from, StationaryOptions};
use plasmon_qd::model::{AppendixGenerator, FeedbackSpec, FullGenerator, Rates};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let xi = reference_xi();
    let rates = Rates::from_xi(xi);
    for (name, mu) in [("F1", -1.0), ("F2", 1.0)] {
        let full = FullGenerator::new(rates, FeedbackSpec::new(mu)?)?;
        let x_sector = AppendixGenerator::new(xi, mu)?;
        println!(
            "{name}: null space dimension {} (full generator), {} (X sector)",
            null_space_steady(&full)?.dimension,
            null_space_steady(&x_sector)?.dimension
        );
        for a in [0.0, 0.5, 1.0] {
            let w = WernerParams::new(a)?;
            let st = stationary_from(&w.state(), &full, &StationaryOptions::default())?;
            let closed = if mu < 0.0 { f1_stationary(&w.initial())? } else { f2_stationary(w, xi)? };
            println!(
                "  a = {a:.1}: Q = {:.6}, reached at t = {:.1}, max gap to closed form {:.1e}",
                quantum_discord(st.state.matrix())?.discord,
                st.time.unwrap_or(0.0),
                st.state.max_abs_diff(closed.matrix())
            );
        }
    }
    Ok(())
}
