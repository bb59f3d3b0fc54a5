use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GeemScheme, MultiShellScheme, ShellSet};
use crate::error::{Error, Result};

/// On-disk description of one shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellRecord {
    pub b: f64,
    pub q: f64,
    /// Radial quadrature weight; absent for schemes without a quadrature rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    /// Angular band-limit; absent for schemes without a ring grid.
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub band_limit: Option<usize>,
    pub points: Vec<[f64; 3]>,
}

/// On-disk description of a multi-shell scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    pub shells: Vec<ShellRecord>,
}

impl SchemeFile {
    pub fn total_samples(&self) -> usize {
        self.shells.iter().map(|s| s.points.len()).sum()
    }
}

/// Conversion of a scheme into its file description.
pub trait SchemeExport {
    fn to_scheme_file(&self) -> SchemeFile;
}

impl SchemeExport for MultiShellScheme {
    fn to_scheme_file(&self) -> SchemeFile {
        SchemeFile {
            zeta: Some(self.zeta),
            shells: self
                .shells
                .iter()
                .map(|s| ShellRecord {
                    b: s.b_value,
                    q: s.q_radius,
                    weight: Some(s.weight),
                    band_limit: Some(s.grid.band_limit()),
                    points: s.grid.points().to_vec(),
                })
                .collect(),
        }
    }
}

impl SchemeExport for GeemScheme {
    fn to_scheme_file(&self) -> SchemeFile {
        SchemeFile {
            zeta: None,
            shells: (0..self.shell_count())
                .map(|s| ShellRecord {
                    b: self.shells[s].b_value(),
                    q: self.shells[s].q_radius,
                    weight: None,
                    band_limit: None,
                    points: self.shells[s].directions.clone(),
                })
                .collect(),
        }
    }
}

impl SchemeExport for SchemeFile {
    fn to_scheme_file(&self) -> SchemeFile {
        self.clone()
    }
}

/// Output formats for scheme files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// Native JSON with full floating-point precision.
    Json,
    /// FSL b-value file: one b-value per sample on a single line.
    Bval,
    /// FSL gradient file: three rows (x, y, z), one column per sample.
    Bvec,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "bval" => Ok(Self::Bval),
            "bvec" => Ok(Self::Bvec),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Serializes a scheme; samples are ordered shell by shell, innermost first.
pub fn export_scheme(scheme: &impl SchemeExport, format: ExportFormat) -> Result<Vec<u8>> {
    let file = scheme.to_scheme_file();
    match format {
        ExportFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(&file)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        ExportFormat::Bval => {
            let values: Vec<String> = file
                .shells
                .iter()
                .flat_map(|s| std::iter::repeat_n(format!("{:.1}", s.b), s.points.len()))
                .collect();
            Ok(format!("{}\n", values.join(" ")).into_bytes())
        }
        ExportFormat::Bvec => {
            let mut out = String::new();
            for c in 0..3 {
                let row: Vec<String> = file
                    .shells
                    .iter()
                    .flat_map(|s| s.points.iter().map(move |p| format!("{:.10}", p[c])))
                    .collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
            Ok(out.into_bytes())
        }
    }
}

/// Parses a JSON scheme file.
pub fn import_scheme(bytes: &[u8]) -> Result<SchemeFile> {
    Ok(serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{design_scheme, ThetaPolicy, DEFAULT_BAND_LIMITS};

    fn scheme() -> MultiShellScheme {
        design_scheme(8000.0, 4, &DEFAULT_BAND_LIMITS, &ThetaPolicy::default()).unwrap()
    }

    #[test]
    fn bval_has_one_entry_per_sample() {
        let text = String::from_utf8(export_scheme(&scheme(), ExportFormat::Bval).unwrap()).unwrap();
        let values: Vec<&str> = text.split_whitespace().collect();
        assert_eq!(values.len(), 132);
        assert_eq!(values.iter().filter(|v| **v == "411.3").count(), 6);
    }

    #[test]
    fn bvec_columns_are_unit() {
        let text = String::from_utf8(export_scheme(&scheme(), ExportFormat::Bvec).unwrap()).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        for j in 0..rows[0].len() {
            let n = (rows[0][j].powi(2) + rows[1][j].powi(2) + rows[2][j].powi(2)).sqrt();
            assert!((n - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = scheme();
        let bytes = export_scheme(&s, ExportFormat::Json).unwrap();
        let back = import_scheme(&bytes).unwrap();
        assert_eq!(back, s.to_scheme_file());
        assert_eq!(export_scheme(&back, ExportFormat::Json).unwrap(), bytes);
    }

    #[test]
    fn unknown_format_is_rejected() {
        assert!(matches!("nifti".parse::<ExportFormat>(), Err(Error::UnsupportedFormat(_))));
    }
}
