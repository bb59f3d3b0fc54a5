use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::error::Result;
use crate::odf::PEAKS_CSV_HEADER;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconRow {
    pub model: String,
    pub scheme: String,
    pub e_mean: f64,
    pub log10_e_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationRow {
    pub seed: u64,
    pub scheme: String,
    pub e_mean: f64,
    pub log10_e_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularRow {
    pub angle_deg: f64,
    pub scheme: String,
    pub detected_count: usize,
    pub mean_angular_error_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRow {
    pub model: String,
    pub angle: f64,
    pub direction: [f64; 3],
    pub value: f64,
}

/// Mean and sample standard deviation of `log10(E_mean)` for one scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub scheme: String,
    pub count: usize,
    pub mean_log10: f64,
    pub std_log10: f64,
}

impl SchemeSummary {
    pub fn from_samples(scheme: &str, values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            scheme: scheme.to_string(),
            count: n,
            mean_log10: mean,
            std_log10: var.sqrt(),
        }
    }
}

/// Resolved design settings of both pipelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub zeta: f64,
    pub b_values: Vec<f64>,
    pub q_radii: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub shell_band_limits: Vec<usize>,
    pub grid_conditions: Vec<f64>,
    pub ring_colatitudes: Vec<Vec<f64>>,
    pub geem_q_radii: Vec<f64>,
    pub geem_energy: f64,
    pub lsq_unknowns: usize,
    pub lsq_condition: f64,
    pub lsq_design_condition: f64,
    pub notes: Vec<String>,
}

/// Results of one experiment with the full configuration that produced them.
///
/// Everything except `wall_clock_seconds` is a deterministic function of the
/// configuration; the timing is written to a separate file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: Config,
    pub metadata: ReportMetadata,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recon: Vec<ReconRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rotation: Vec<RotationRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub summary: Vec<SchemeSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub angular: Vec<AngularRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub peaks: Vec<PeakRow>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: Config, metadata: ReportMetadata) -> Self {
        Self {
            experiment: experiment.to_string(),
            config,
            metadata,
            recon: Vec::new(),
            rotation: Vec::new(),
            summary: Vec::new(),
            angular: Vec::new(),
            peaks: Vec::new(),
            failures: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn summary_for(&self, scheme: &str) -> Option<&SchemeSummary> {
        self.summary.iter().find(|s| s.scheme == scheme)
    }

    /// The experiment's main table.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        match self.experiment.as_str() {
            "recon" => {
                out.push_str("model,scheme,E_mean,log10_E_mean\n");
                for r in &self.recon {
                    let _ = writeln!(out, "{},{},{:?},{:?}", r.model, r.scheme, r.e_mean, r.log10_e_mean);
                }
            }
            "rotation" => {
                out.push_str("seed,scheme,E_mean\n");
                for r in &self.rotation {
                    let _ = writeln!(out, "{},{},{:?}", r.seed, r.scheme, r.e_mean);
                }
            }
            "angular" => {
                out.push_str("angle_deg,scheme,detected_count,mean_angular_error_deg\n");
                for r in &self.angular {
                    let _ = writeln!(
                        out,
                        "{},{},{},{:?}",
                        r.angle_deg, r.scheme, r.detected_count, r.mean_angular_error_deg
                    );
                }
            }
            _ => {}
        }
        out
    }

    /// Peak table (angular experiment only).
    pub fn peaks_csv(&self) -> String {
        let mut out = String::from(PEAKS_CSV_HEADER);
        for p in &self.peaks {
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?}",
                p.model, p.angle, p.direction[0], p.direction[1], p.direction[2], p.value
            );
        }
        out
    }

    /// Gnuplot data: one block per scheme, separated by two blank lines.
    pub fn dat(&self) -> String {
        let mut out = String::new();
        let schemes = ["proposed", "geem"];
        for (b, scheme) in schemes.iter().enumerate() {
            if b > 0 {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# scheme {scheme}");
            match self.experiment.as_str() {
                "recon" => {
                    out.push_str("# index model log10_E_mean\n");
                    for (i, r) in self.recon.iter().filter(|r| r.scheme == *scheme).enumerate() {
                        let _ = writeln!(out, "{i} {} {:?}", r.model, r.log10_e_mean);
                    }
                }
                "rotation" => {
                    out.push_str("# index seed log10_E_mean\n");
                    for (i, r) in self.rotation.iter().filter(|r| r.scheme == *scheme).enumerate() {
                        let _ = writeln!(out, "{i} {} {:?}", r.seed, r.log10_e_mean);
                    }
                }
                "angular" => {
                    out.push_str("# angle_deg detected_count mean_angular_error_deg\n");
                    for r in self.angular.iter().filter(|r| r.scheme == *scheme) {
                        let _ = writeln!(out, "{} {} {:?}", r.angle_deg, r.detected_count, r.mean_angular_error_deg);
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Writes `<name>.csv`, `<name>.dat`, `<name>_report.json`,
    /// `<name>_timing.json` (and `peaks.csv` for the angular experiment).
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let name = &self.experiment;
        let mut files = vec![
            (dir.join(format!("{name}.csv")), self.csv().into_bytes()),
            (dir.join(format!("{name}.dat")), self.dat().into_bytes()),
            (dir.join(format!("{name}_report.json")), {
                let mut v = serde_json::to_vec_pretty(self)?;
                v.push(b'\n');
                v
            }),
            (
                dir.join(format!("{name}_timing.json")),
                serde_json::to_vec_pretty(&serde_json::json!({ "wall_clock_seconds": self.wall_clock_seconds }))?,
            ),
        ];
        if name == "angular" {
            files.push((dir.join("peaks.csv"), self.peaks_csv().into_bytes()));
        }
        let mut written = Vec::new();
        for (path, bytes) in files {
            std::fs::write(&path, bytes)?;
            written.push(path);
        }
        Ok(written)
    }
}
