//! Times the ring-peeling transform against a dense solve that factorizes
//! its system on every call, and fits log-log scaling slopes.
//!
//! ```text
//! cargo run --release --example sht_complexity
//! ```

use qspace_spf::harness::{run_bench, Config};

fn main() -> qspace_spf::Result<()> {
    let report = run_bench(&Config::default())?;
    println!("{:>3} {:13} {:>12}", "L", "method", "seconds");
    for row in &report.rows {
        println!("{:3} {:13} {:12.4e}", row.band_limit, row.method, row.seconds);
    }
    println!("slope ring-peeling {:.2}, dense {:.2}", report.ring_peeling_slope, report.dense_slope);
    Ok(())
}
