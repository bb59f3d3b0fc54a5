//! Peak count and angular error over a sweep of crossing angles.
//!
//! ```text
//! cargo run --release --example angular_experiment -- [step_deg]
//! ```

use qspace_spf::harness::{run_angular, Config};

fn main() -> qspace_spf::Result<()> {
    let mut config = Config::default();
    if let Some(step) = std::env::args().nth(1) {
        config.experiment.angle_step_deg = step.parse().expect("step must be a number");
    }
    let report = run_angular(&config)?;
    println!("{:>6} {:9} {:>6} {:>10}", "angle", "scheme", "peaks", "error(°)");
    for row in &report.angular {
        println!(
            "{:6.1} {:9} {:6} {:10.2}",
            row.angle_deg, row.scheme, row.detected_count, row.mean_angular_error_deg
        );
    }
    Ok(())
}
