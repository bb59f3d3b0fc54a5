//! Spread of the reconstruction error over random rotations of the
//! single-fiber model.
//!
//! ```text
//! cargo run --release --example rotation_experiment -- [rotations]
//! ```

use qspace_spf::harness::{run_rotation, Config};

fn main() -> qspace_spf::Result<()> {
    let mut config = Config::default();
    if let Some(n) = std::env::args().nth(1) {
        config.experiment.rotations = n.parse().expect("rotations must be an integer");
    }
    let report = run_rotation(&config)?;
    for s in &report.summary {
        println!(
            "{:9} over {} rotations: mean log10(E_mean) {:.4}, std {:.4}",
            s.scheme, s.count, s.mean_log10, s.std_log10
        );
    }
    Ok(())
}
