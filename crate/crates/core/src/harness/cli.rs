//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid arguments or configuration,
//! 2 for numerical failures (partial results are still written).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::config::Config;
use super::experiments::{run_bench, Pipelines};
use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::sampling::{
    design_scheme, evenly_spaced_radii, export_scheme, generate_geem, ExportFormat, GeemConfig, SchemeExport,
};

#[derive(Debug, Parser)]
#[command(name = "qspace", version, about = "Multi-shell q-space sampling and SPF reconstruction experiments")]
struct Cli {
    /// JSON configuration file; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "QSPACE_OUT", default_value = "qspace_out")]
    out: PathBuf,
    /// Seed of the evaluation grid and rotations (of the point optimizer for `geem`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design the quadrature scheme and write JSON and bval/bvec files.
    Design {
        /// Outermost b-value in s/mm².
        #[arg(long)]
        bmax: Option<f64>,
        /// Number of shells (must match the band-limit list).
        #[arg(long)]
        shells: Option<usize>,
        /// Comma-separated odd band-limits per shell, innermost first.
        #[arg(long, value_delimiter = ',')]
        band_limits: Option<Vec<usize>>,
    },
    /// Generate the electrostatic baseline point sets.
    Geem {
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Reconstruction error for the reference models.
    Recon,
    /// Reconstruction error under random rotations of the single-fiber model.
    Rotation {
        #[arg(long)]
        rotations: Option<usize>,
    },
    /// Peak detection and angular error over crossing angles.
    Angular {
        /// Angle step in degrees.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        end: Option<f64>,
    },
    /// Time ring-peeling against dense spherical harmonic transforms.
    BenchSht {
        #[arg(long)]
        repeats: Option<usize>,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(messages) => {
            print!("{}", messages.text);
            if messages.failures.is_empty() {
                0
            } else {
                for f in &messages.failures {
                    eprintln!("case failed: {f}");
                }
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                1
            } else {
                2
            }
        }
    }
}

struct Outcome {
    text: String,
    failures: Vec<String>,
}

fn load_config(cli: &Cli) -> Result<Config> {
    match &cli.config {
        Some(path) => Config::load(path),
        None => Ok(Config::default()),
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8], text: &mut String) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, bytes)?;
    let _ = writeln!(text, "wrote {}", path.display());
    Ok(())
}

fn experiment_outcome(report: ExperimentReport, dir: &Path, mut text: String) -> Result<Outcome> {
    for path in report.write(dir)? {
        let _ = writeln!(text, "wrote {}", path.display());
    }
    Ok(Outcome {
        text,
        failures: report.failures,
    })
}

fn execute(cli: Cli) -> Result<Outcome> {
    let mut config = load_config(&cli)?;
    let dir = cli.out.clone();
    let mut text = String::new();
    match cli.command {
        Command::Design {
            bmax,
            shells,
            band_limits,
        } => {
            if let Some(b) = bmax {
                config.scheme.b_max = b;
            }
            if let Some(l) = band_limits {
                config.scheme.band_limits = l;
            }
            if let Some(n) = shells {
                if n != config.scheme.band_limits.len() {
                    return Err(Error::Config(format!(
                        "--shells {n} does not match {} band-limits; pass --band-limits",
                        config.scheme.band_limits.len()
                    )));
                }
            }
            config.validate()?;
            let s = &config.scheme;
            let scheme = design_scheme(s.b_max, s.band_limits.len(), &s.band_limits, &s.theta_policy)?;
            write_file(&dir, "scheme.json", &export_scheme(&scheme, ExportFormat::Json)?, &mut text)?;
            write_file(&dir, "scheme.bval", &export_scheme(&scheme, ExportFormat::Bval)?, &mut text)?;
            write_file(&dir, "scheme.bvec", &export_scheme(&scheme, ExportFormat::Bvec)?, &mut text)?;
            let file = scheme.to_scheme_file();
            let _ = writeln!(text, "zeta = {:.4}, {} samples", scheme.zeta, file.total_samples());
            for shell in &scheme.shells {
                let _ = writeln!(
                    text,
                    "  b = {:8.1}  q = {:8.4}  L = {:2}  points = {:3}  cond = {:.3}",
                    shell.b_value,
                    shell.q_radius,
                    shell.grid.band_limit(),
                    shell.grid.len(),
                    shell.grid.condition()
                );
            }
            Ok(Outcome {
                text,
                failures: Vec::new(),
            })
        }
        Command::Geem { iterations } => {
            if let Some(i) = iterations {
                config.geem.iterations = i;
            }
            if let Some(seed) = cli.seed {
                config.geem.seed = seed;
            }
            config.validate()?;
            let s = &config.scheme;
            let scheme = design_scheme(s.b_max, s.band_limits.len(), &s.band_limits, &s.theta_policy)?;
            let radii = evenly_spaced_radii(scheme.q_min(), scheme.q_max(), scheme.radial_order());
            let geem = generate_geem(
                &scheme.point_counts(),
                &radii,
                &GeemConfig {
                    alpha: config.geem.alpha,
                    iterations: config.geem.iterations,
                    seed: config.geem.seed,
                },
            )?;
            write_file(&dir, "geem.json", &export_scheme(&geem, ExportFormat::Json)?, &mut text)?;
            write_file(&dir, "geem.bval", &export_scheme(&geem, ExportFormat::Bval)?, &mut text)?;
            write_file(&dir, "geem.bvec", &export_scheme(&geem, ExportFormat::Bvec)?, &mut text)?;
            let mut log = String::from("iteration energy\n");
            for (i, e) in geem.iteration_log.iter().enumerate() {
                let _ = writeln!(log, "{i} {e:?}");
            }
            write_file(&dir, "geem_energy.dat", log.as_bytes(), &mut text)?;
            let _ = writeln!(text, "final energy {:.6}", geem.energy);
            Ok(Outcome {
                text,
                failures: Vec::new(),
            })
        }
        Command::Recon => {
            if let Some(seed) = cli.seed {
                config.experiment.seed = seed;
            }
            let report = Pipelines::new(&config)?.reconstruction();
            for r in &report.recon {
                let _ = writeln!(text, "{:18} {:9} log10(E_mean) = {:.4}", r.model, r.scheme, r.log10_e_mean);
            }
            experiment_outcome(report, &dir, text)
        }
        Command::Rotation { rotations } => {
            if let Some(seed) = cli.seed {
                config.experiment.seed = seed;
            }
            if let Some(r) = rotations {
                config.experiment.rotations = r;
            }
            let report = Pipelines::new(&config)?.rotation();
            for s in &report.summary {
                let _ = writeln!(
                    text,
                    "{:9} mean log10(E_mean) = {:.4}  std = {:.4}",
                    s.scheme, s.mean_log10, s.std_log10
                );
            }
            experiment_outcome(report, &dir, text)
        }
        Command::Angular { step, start, end } => {
            if let Some(seed) = cli.seed {
                config.experiment.seed = seed;
            }
            if let Some(v) = step {
                config.experiment.angle_step_deg = v;
            }
            if let Some(v) = start {
                config.experiment.angle_start_deg = v;
            }
            if let Some(v) = end {
                config.experiment.angle_end_deg = v;
            }
            let report = Pipelines::new(&config)?.angular();
            for r in &report.angular {
                let _ = writeln!(
                    text,
                    "{:5.1}° {:9} peaks = {}  error = {:.2}°",
                    r.angle_deg, r.scheme, r.detected_count, r.mean_angular_error_deg
                );
            }
            experiment_outcome(report, &dir, text)
        }
        Command::BenchSht { repeats } => {
            if let Some(r) = repeats {
                config.experiment.bench_repeats = r;
            }
            config.validate()?;
            let bench = run_bench(&config)?;
            let mut csv = String::from("band_limit,method,seconds\n");
            for r in &bench.rows {
                let _ = writeln!(csv, "{},{},{:?}", r.band_limit, r.method, r.seconds);
            }
            let mut dat = String::new();
            for (b, method) in ["ring_peeling", "dense"].iter().enumerate() {
                if b > 0 {
                    dat.push_str("\n\n");
                }
                let _ = writeln!(dat, "# {method}: band_limit seconds");
                for r in bench.rows.iter().filter(|r| r.method == *method) {
                    let _ = writeln!(dat, "{} {:?}", r.band_limit, r.seconds);
                }
            }
            write_file(&dir, "bench.csv", csv.as_bytes(), &mut text)?;
            write_file(&dir, "bench.dat", dat.as_bytes(), &mut text)?;
            write_file(&dir, "bench_report.json", &serde_json::to_vec_pretty(&bench)?, &mut text)?;
            let _ = writeln!(
                text,
                "log-log slope: ring-peeling {:.2}, dense {:.2}",
                bench.ring_peeling_slope, bench.dense_slope
            );
            Ok(Outcome {
                text,
                failures: Vec::new(),
            })
        }
    }
}
