use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::FIBER_DIFFUSIVITIES;
use crate::odf::KernelSettings;
use crate::transforms::DenseFactorization;
use crate::sampling::{ThetaPolicy, DEFAULT_BAND_LIMITS, DEFAULT_B_MAX};

/// Quadrature scheme design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    /// Outermost b-value in s/mm².
    pub b_max: f64,
    /// Angular band-limit per shell, innermost first; the shell count is its length.
    pub band_limits: Vec<usize>,
    pub theta_policy: ThetaPolicy,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            b_max: DEFAULT_B_MAX,
            band_limits: DEFAULT_BAND_LIMITS.to_vec(),
            theta_policy: ThetaPolicy::default(),
        }
    }
}

/// Electrostatic baseline and its regularized least-squares fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeemSection {
    pub alpha: f64,
    pub iterations: usize,
    pub seed: u64,
    pub lambda_l: f64,
    pub lambda_n: f64,
    pub include_odd: bool,
}

impl Default for GeemSection {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            iterations: 10_000,
            seed: 1,
            lambda_l: 1e-7,
            lambda_n: 5e-8,
            include_odd: false,
        }
    }
}

/// Synthetic signal models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelsConfig {
    /// Fiber diffusivities `(λ1, λ2, λ3)` in mm²/s.
    pub diffusivities: [f64; 3],
    /// Adds an isotropic control model whose signal lies in the SPF span.
    pub isotropic_control: bool,
}

impl Default for ModelsConfig {
    fn default() -> Self {
        Self {
            diffusivities: FIBER_DIFFUSIVITIES,
            isotropic_control: true,
        }
    }
}

/// ODF reconstruction and peak search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdfConfig {
    pub rel_threshold: f64,
    pub icosphere_level: usize,
    pub kernel: KernelSettings,
}

impl Default for OdfConfig {
    fn default() -> Self {
        Self {
            rel_threshold: 0.5,
            icosphere_level: 4,
            kernel: KernelSettings::default(),
        }
    }
}

/// Experiment sizes and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seeds the evaluation grid and the rotations.
    pub seed: u64,
    pub eval_points: usize,
    pub rotations: usize,
    pub angle_start_deg: f64,
    pub angle_end_deg: f64,
    pub angle_step_deg: f64,
    pub bench_band_limits: Vec<usize>,
    pub bench_repeats: usize,
    /// Condition bound for benchmark grids, which reach higher band-limits
    /// than the reconstruction scheme.
    pub bench_condition_bound: f64,
    /// Factorization of the dense transform in the benchmark.
    pub bench_dense_factorization: DenseFactorization,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            eval_points: 10_000,
            rotations: 30,
            angle_start_deg: 30.0,
            angle_end_deg: 90.0,
            angle_step_deg: 5.0,
            bench_band_limits: vec![7, 11, 15, 23, 31],
            bench_repeats: 5,
            bench_condition_bound: 1e3,
            bench_dense_factorization: DenseFactorization::Svd,
        }
    }
}

/// Complete experiment configuration; every field has a default.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scheme: SchemeConfig,
    pub geem: GeemSection,
    pub models: ModelsConfig,
    pub odf: OdfConfig,
    pub experiment: ExperimentConfig,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.scheme.band_limits.is_empty() {
            return bad("scheme.band_limits must not be empty".into());
        }
        if self.scheme.band_limits.iter().any(|l| l % 2 == 0 || *l > 31) {
            return bad("scheme.band_limits must be odd and at most 31".into());
        }
        if self.scheme.band_limits.windows(2).any(|w| w[0] > w[1]) {
            return bad("scheme.band_limits must be nondecreasing".into());
        }
        if !(self.scheme.b_max > 0.0) {
            return bad("scheme.b_max must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.geem.alpha) {
            return bad("geem.alpha must lie in [0, 1]".into());
        }
        if self.geem.lambda_l < 0.0 || self.geem.lambda_n < 0.0 {
            return bad("regularization weights must be nonnegative".into());
        }
        if self.models.diffusivities.iter().any(|d| !(*d > 0.0)) {
            return bad("models.diffusivities must be positive".into());
        }
        if !(self.odf.rel_threshold > 0.0 && self.odf.rel_threshold < 1.0) {
            return bad("odf.rel_threshold must lie in (0, 1)".into());
        }
        let e = &self.experiment;
        if e.eval_points == 0 {
            return bad("experiment.eval_points must be positive".into());
        }
        if !(e.angle_step_deg > 0.0) || e.angle_end_deg < e.angle_start_deg {
            return bad("experiment angle range is empty".into());
        }
        if e.bench_band_limits.iter().any(|l| l % 2 == 0 || *l > 31) {
            return bad("experiment.bench_band_limits must be odd and at most 31".into());
        }
        Ok(())
    }

    /// Crossing angles in degrees, inclusive of both ends.
    pub fn crossing_angles(&self) -> Vec<f64> {
        let e = &self.experiment;
        let count = ((e.angle_end_deg - e.angle_start_deg) / e.angle_step_deg + 1e-9).floor() as usize + 1;
        (0..count).map(|i| e.angle_start_deg + i as f64 * e.angle_step_deg).collect()
    }

    /// Rotation seeds, derived from the experiment seed.
    pub fn rotation_seeds(&self) -> Vec<u64> {
        let base = self.experiment.seed.wrapping_mul(1000);
        (0..self.experiment.rotations as u64).map(|k| base.wrapping_add(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_and_partial_files_fill_defaults() {
        let c = Config::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(Config::from_json(&text).unwrap(), c);
        let partial = Config::from_json(r#"{"experiment": {"seed": 3}}"#).unwrap();
        assert_eq!(partial.experiment.seed, 3);
        assert_eq!(partial.scheme, SchemeConfig::default());
    }

    #[test]
    fn invalid_configs_are_config_errors() {
        for text in [
            r#"{"scheme": {"band_limits": [4]}}"#,
            r#"{"odf": {"rel_threshold": 1.5}}"#,
            r#"{"unknown": 1}"#,
            "not json",
        ] {
            let e = Config::from_json(text).unwrap_err();
            assert!(e.is_config_error(), "{text}");
        }
    }

    #[test]
    fn angle_grid() {
        let a = Config::default().crossing_angles();
        assert_eq!(a.len(), 13);
        assert_eq!(a[0], 30.0);
        assert_eq!(a[12], 90.0);
    }
}
