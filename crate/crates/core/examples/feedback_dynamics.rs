//! Discord of the maximally entangled Werner state with no feedback, with
//! F1 (μ = -1) and with F2 (μ = 1).
//!
//!     cargo run --release --example feedback_dynamics

use plasmon_qd::config::reference_xi;
use plasmon_qd::discord::quantum_discord;
use plasmon_qd::dynamics::{integrate, IntegratorConfig};
use plasmon_qd::linalg::DensityMatrix;
use plasmon_qd::model::{FeedbackSpec, FullGenerator, Rates};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rates = Rates::from_xi(reference_xi());
    let cfg = IntegratorConfig {
        dt: 1e-3,
        t_max: 10.0,
        record_stride: 1000,
    };
    let rho0 = DensityMatrix::werner(1.0)?;
    let runs = [("none", FeedbackSpec::disabled()), ("F1", FeedbackSpec::f1()), ("F2", FeedbackSpec::f2())];
    let mut columns = Vec::new();
    for (_, fb) in runs {
        let traj = integrate(&rho0, &FullGenerator::new(rates, fb)?, &cfg)?;
        let q: Result<Vec<f64>, _> = traj.states.iter().map(|s| quantum_discord(s.matrix()).map(|c| c.discord)).collect();
        columns.push((traj.times, q?));
    }
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "none", "F1", "F2");
    for i in 0..columns[0].0.len() {
        println!(
            "{:>5.1} {:>10.6} {:>10.6} {:>10.6}",
            columns[0].0[i], columns[0].1[i], columns[1].1[i], columns[2].1[i]
        );
    }
    Ok(())
}
