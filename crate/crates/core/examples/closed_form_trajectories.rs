//! Closed-form Werner trajectories against RK4 on the X-sector equations.
//!
//!     cargo run --release --example closed_form_trajectories

use plasmon_qd::analytic::{f1_trajectory, f2_trajectory, WernerParams};
use plasmon_qd::config::reference_xi;
use plasmon_qd::dynamics::evolve_to;
use plasmon_qd::model::AppendixGenerator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let xi = reference_xi();
    let w = WernerParams::new(0.5)?;
    for (name, mu) in [("F1", -1.0), ("F2", 1.0)] {
        let g = AppendixGenerator::new(xi, mu)?;
        println!("{name}, a = 0.5");
        println!("{:>5} {:>10} {:>10} {:>22} {:>10}", "t", "rho11", "rho44", "rho14", "max gap");
        for t in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0] {
            let e = if mu < 0.0 { f1_trajectory(w, xi, t)? } else { f2_trajectory(w, xi, t)? };
            let numeric = evolve_to(&w.state(), &g, t, 1e-3)?;
            println!(
                "{t:>5.2} {:>10.6} {:>10.6} {:>22} {:>10.1e}",
                e.rho11.re,
                e.rho44.re,
                format!("{:.6}{:+.6}i", e.rho14.re, e.rho14.im),
                e.to_matrix().max_abs_diff(numeric.matrix())
            );
        }
    }
    Ok(())
}
