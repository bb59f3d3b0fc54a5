//! Designs the four-shell quadrature scheme and optionally writes it to disk.
//!
//! ```text
//! cargo run --example design_scheme -- [b_max] [output_dir]
//! ```

use qspace_spf::sampling::{design_scheme, export_scheme, ExportFormat, ThetaPolicy, DEFAULT_BAND_LIMITS};

fn main() -> qspace_spf::Result<()> {
    let mut args = std::env::args().skip(1);
    let b_max: f64 = args.next().map_or(8000.0, |s| s.parse().expect("b_max must be a number"));
    let scheme = design_scheme(b_max, DEFAULT_BAND_LIMITS.len(), &DEFAULT_BAND_LIMITS, &ThetaPolicy::default())?;

    println!("zeta = {:.4}", scheme.zeta);
    println!("{:>9} {:>9} {:>12} {:>3} {:>6} {:>10}", "b", "q", "weight", "L", "points", "condition");
    for shell in &scheme.shells {
        println!(
            "{:9.1} {:9.4} {:12.5e} {:3} {:6} {:10.3}",
            shell.b_value,
            shell.q_radius,
            shell.weight,
            shell.grid.band_limit(),
            shell.grid.len(),
            shell.grid.condition()
        );
    }
    println!("total samples: {}", scheme.point_counts().iter().sum::<usize>());

    if let Some(dir) = args.next() {
        std::fs::create_dir_all(&dir)?;
        for (format, ext) in [(ExportFormat::Json, "json"), (ExportFormat::Bval, "bval"), (ExportFormat::Bvec, "bvec")] {
            let path = std::path::Path::new(&dir).join(format!("scheme.{ext}"));
            std::fs::write(&path, export_scheme(&scheme, format)?)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
