//! The X-state discord against the brute-force measurement search on
//! random X states, and the brute force on a state outside the X family.
//!
//!     cargo run --release --example brute_force_oracle

use plasmon_qd::discord::{brute_force_discord, brute_force_discord_on, quantum_discord};
use plasmon_qd::linalg::{DensityMatrix, Matrix4, Subsystem};
use plasmon_qd::validate::{random_x_state, seeded_rng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded_rng();
    println!("{:>3} {:>10} {:>10} {:>9}", "#", "Q", "Q brute", "gap");
    for i in 0..8 {
        let rho = random_x_state(&mut rng);
        let q = quantum_discord(rho.matrix())?.discord;
        let b = brute_force_discord(rho.matrix(), 201)?;
        println!("{i:>3} {q:>10.6} {b:>10.6} {:>9.1e}", (q - b).abs());
    }

    // Half |e>(|e>+|g>)/√2, half I/4: a product state outside the X family.
    let v = 0.5_f64.sqrt();
    let psi = [v.into(), v.into(), 0.0.into(), 0.0.into()];
    let m = Matrix4::outer(&psi).scale_real(0.5) + DensityMatrix::maximally_mixed().matrix().scale_real(0.5);
    let rho = DensityMatrix::new(m)?;
    for side in [Subsystem::M, Subsystem::N] {
        let b = brute_force_discord_on(rho.matrix(), 101, side)?;
        println!("product state, measuring {side:?}: Q = {:.2e}", b.discord);
    }
    Ok(())
}
