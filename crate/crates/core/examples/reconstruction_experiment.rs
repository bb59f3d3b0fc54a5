//! Mean reconstruction error of the reference models on both schemes.
//!
//! ```text
//! cargo run --release --example reconstruction_experiment -- [config.json]
//! ```

use qspace_spf::harness::{run_reconstruction, Config};

fn main() -> qspace_spf::Result<()> {
    let config = match std::env::args().nth(1) {
        Some(path) => Config::load(path.as_ref())?,
        None => Config::default(),
    };
    let report = run_reconstruction(&config)?;
    println!("{:18} {:9} {:>12} {:>8}", "model", "scheme", "E_mean", "log10");
    for row in &report.recon {
        println!("{:18} {:9} {:12.4e} {:8.3}", row.model, row.scheme, row.e_mean, row.log10_e_mean);
    }
    for failure in &report.failures {
        eprintln!("case failed: {failure}");
    }
    Ok(())
}
