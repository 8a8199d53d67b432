//! Every cross-check at once; the same table `plasmon-qd validate` prints.
//!
//!     cargo run --release --example validation

use plasmon_qd::validate::run_validation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_validation()?;
    print!("{}", report.table());
    if !report.all_passed() {
        std::process::exit(3);
    }
    Ok(())
}
