use std::sync::OnceLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::Config;
use super::eval_grid::{model_mean_error, EvaluationGrid};
use super::report::{AngularRow, ExperimentReport, PeakRow, ReconRow, ReportMetadata, RotationRow, SchemeSummary};
use crate::error::Result;
use crate::models::{crossing_fibers, isotropic_model, random_rotation, reference_models, sample_model, GaussianMixtureModel};
use crate::odf::{angular_error, find_peaks, odf_from_spf, Icosphere, OdfKernel, OdfSH};
use crate::sampling::{
    design_scheme, design_shell_grid, evenly_spaced_radii, generate_geem, GeemConfig, GeemScheme, MultiShellScheme,
    ShellSet, ThetaPolicy,
};
use crate::transforms::{DenseSht, LsqSettings, RegularizedLsq, RingPeelingSht, SpfCoefficients, SpfTransform, ShCoefficients, inverse_sht};

/// The two acquisition pipelines being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Quadrature scheme with the exact separable transform.
    Proposed,
    /// Electrostatic baseline with the regularized least-squares fit.
    Geem,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 2] = [SchemeKind::Proposed, SchemeKind::Geem];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Proposed => "proposed",
            SchemeKind::Geem => "geem",
        }
    }
}

/// Everything an experiment needs, built once per configuration: both point
/// sets, their precomputed solvers, and the shared evaluation grid.
pub struct Pipelines {
    pub config: Config,
    pub scheme: MultiShellScheme,
    pub transform: SpfTransform,
    pub geem: GeemScheme,
    pub lsq: RegularizedLsq,
    pub grid: EvaluationGrid,
    kernel: OnceLock<OdfKernel>,
    setup_seconds: f64,
}

impl Pipelines {
    pub fn new(config: &Config) -> Result<Self> {
        config.validate()?;
        let start = Instant::now();
        let n = config.scheme.band_limits.len();
        let scheme = design_scheme(config.scheme.b_max, n, &config.scheme.band_limits, &config.scheme.theta_policy)?;
        let transform = SpfTransform::new(&scheme)?;
        let geem_cfg = GeemConfig {
            alpha: config.geem.alpha,
            iterations: config.geem.iterations,
            seed: config.geem.seed,
        };
        let radii = evenly_spaced_radii(scheme.q_min(), scheme.q_max(), n);
        let geem = generate_geem(&scheme.point_counts(), &radii, &geem_cfg)?;
        let lsq = RegularizedLsq::new(&geem, &Self::lsq_settings_for(config, &scheme))?;
        let grid = EvaluationGrid::new(config.experiment.eval_points, scheme.q_max(), config.experiment.seed);
        Ok(Self {
            config: config.clone(),
            scheme,
            transform,
            geem,
            lsq,
            grid,
            kernel: OnceLock::new(),
            setup_seconds: start.elapsed().as_secs_f64(),
        })
    }

    fn lsq_settings_for(config: &Config, scheme: &MultiShellScheme) -> LsqSettings {
        LsqSettings {
            radial_order: scheme.radial_order(),
            band_limit: scheme.max_band_limit(),
            zeta: scheme.zeta,
            lambda_l: config.geem.lambda_l,
            lambda_n: config.geem.lambda_n,
            include_odd: config.geem.include_odd,
        }
    }

    pub fn setup_seconds(&self) -> f64 {
        self.setup_seconds
    }

    /// Isotropic model whose signal `exp(−q²/2ζ)` lies in the SPF span.
    pub fn isotropic_control(&self) -> GaussianMixtureModel {
        isotropic_model(0.5 / self.scheme.zeta)
    }

    /// SPF coefficients of a model reconstructed through one pipeline.
    pub fn fit(&self, kind: SchemeKind, model: &GaussianMixtureModel) -> Result<SpfCoefficients> {
        match kind {
            SchemeKind::Proposed => self.transform.forward(&sample_model(model, &self.scheme)),
            SchemeKind::Geem => {
                let flat: Vec<f64> = sample_model(model, &self.geem).into_iter().flatten().collect();
                Ok(self.lsq.fit(&flat)?.coefficients)
            }
        }
    }

    /// Mean absolute reconstruction error over the evaluation grid.
    pub fn mean_error(&self, kind: SchemeKind, model: &GaussianMixtureModel) -> Result<f64> {
        let c = self.fit(kind, model)?;
        Ok(model_mean_error(model, &c, &self.grid))
    }

    /// The SPF→ODF kernel for the scheme's basis, computed on first use.
    pub fn kernel(&self) -> Result<&OdfKernel> {
        if let Some(k) = self.kernel.get() {
            return Ok(k);
        }
        let k = OdfKernel::new(
            self.scheme.radial_order(),
            self.scheme.max_band_limit(),
            self.scheme.zeta,
            &self.config.odf.kernel,
        )?;
        Ok(self.kernel.get_or_init(|| k))
    }

    /// ODF of a model reconstructed through one pipeline.
    pub fn odf(&self, kind: SchemeKind, model: &GaussianMixtureModel) -> Result<OdfSH> {
        let c = self.fit(kind, model)?;
        odf_from_spf(&c, self.kernel()?)
    }

    fn metadata(&self) -> ReportMetadata {
        ReportMetadata {
            zeta: self.scheme.zeta,
            b_values: self.scheme.b_values(),
            q_radii: (0..self.scheme.shell_count()).map(|s| self.scheme.q_radius(s)).collect(),
            radial_weights: self.scheme.shells.iter().map(|s| s.weight).collect(),
            shell_band_limits: self.scheme.band_limits(),
            grid_conditions: self.scheme.shells.iter().map(|s| s.grid.condition()).collect(),
            ring_colatitudes: self.scheme.shells.iter().map(|s| s.grid.thetas()).collect(),
            geem_q_radii: (0..self.geem.shell_count()).map(|s| self.geem.q_radius(s)).collect(),
            geem_energy: self.geem.energy,
            lsq_unknowns: self.lsq.unknowns(),
            lsq_condition: self.lsq.condition(),
            lsq_design_condition: self.lsq.design_condition(),
            notes: vec![
                "q^2 = b; zeta in s/mm^2".into(),
                "fiber diffusivities in mm^2/s (1.7e-3, 0.2e-3, 0.2e-3)".into(),
                "two-fiber models: equal fractions, first fiber along x, second rotated about z".into(),
                "gEEM energy: alpha * per-shell + (1 - alpha) * merged-sphere antipodal Coulomb energy".into(),
                "gEEM fit penalty: lambda_l * l^2 (l+1)^2 + lambda_n * n^2 (n+1)^2".into(),
                "ODF: radial marginal of the propagator with r^2 weighting".into(),
                "rotation experiment rotates the signal model".into(),
            ],
        }
    }

    fn report(&self, experiment: &str) -> ExperimentReport {
        ExperimentReport::new(experiment, self.config.clone(), self.metadata())
    }

    /// Reconstruction error of every model through both pipelines.
    pub fn reconstruction(&self) -> ExperimentReport {
        let start = Instant::now();
        let mut report = self.report("recon");
        let mut models = reference_models(self.config.models.diffusivities);
        if self.config.models.isotropic_control {
            models.push(("isotropic_control".into(), self.isotropic_control()));
        }
        for (name, model) in &models {
            for kind in SchemeKind::ALL {
                let e = match self.mean_error(kind, model) {
                    Ok(e) => e,
                    Err(err) => {
                        report.failures.push(format!("{name}/{}: {err}", kind.name()));
                        f64::NAN
                    }
                };
                report.recon.push(ReconRow {
                    model: name.clone(),
                    scheme: kind.name().into(),
                    e_mean: e,
                    log10_e_mean: e.log10(),
                });
            }
        }
        report.wall_clock_seconds = start.elapsed().as_secs_f64();
        report
    }

    /// Reconstruction error of the single-fiber model under seeded rotations.
    pub fn rotation(&self) -> ExperimentReport {
        let start = Instant::now();
        let mut report = self.report("rotation");
        let base = crate::models::single_fiber(self.config.models.diffusivities);
        for seed in self.config.rotation_seeds() {
            let model = base.rotated(&random_rotation(seed));
            for kind in SchemeKind::ALL {
                let e = match self.mean_error(kind, &model) {
                    Ok(e) => e,
                    Err(err) => {
                        report.failures.push(format!("seed {seed}/{}: {err}", kind.name()));
                        f64::NAN
                    }
                };
                report.rotation.push(RotationRow {
                    seed,
                    scheme: kind.name().into(),
                    e_mean: e,
                    log10_e_mean: e.log10(),
                });
            }
        }
        for kind in SchemeKind::ALL {
            let logs: Vec<f64> = report
                .rotation
                .iter()
                .filter(|r| r.scheme == kind.name())
                .map(|r| r.log10_e_mean)
                .collect();
            report.summary.push(SchemeSummary::from_samples(kind.name(), &logs));
        }
        report.wall_clock_seconds = start.elapsed().as_secs_f64();
        report
    }

    /// Peak count and angular error for two-fiber crossings.
    pub fn angular(&self) -> ExperimentReport {
        let start = Instant::now();
        let mut report = self.report("angular");
        let sphere = Icosphere::new(self.config.odf.icosphere_level);
        for angle in self.config.crossing_angles() {
            let model = crossing_fibers(self.config.models.diffusivities, angle);
            let truth = model.fiber_directions();
            for kind in SchemeKind::ALL {
                match self.odf(kind, &model) {
                    Ok(odf) => {
                        let peaks = find_peaks(&odf, &sphere, self.config.odf.rel_threshold);
                        let dirs: Vec<[f64; 3]> = peaks.iter().map(|p| p.direction).collect();
                        let err = angular_error(&dirs, &truth);
                        report.angular.push(AngularRow {
                            angle_deg: angle,
                            scheme: kind.name().into(),
                            detected_count: err.detected_count,
                            mean_angular_error_deg: err.mean_deg,
                        });
                        for p in peaks {
                            report.peaks.push(PeakRow {
                                model: format!("two_fibers/{}", kind.name()),
                                angle,
                                direction: p.direction,
                                value: p.value,
                            });
                        }
                    }
                    Err(err) => {
                        report.failures.push(format!("{angle}°/{}: {err}", kind.name()));
                        report.angular.push(AngularRow {
                            angle_deg: angle,
                            scheme: kind.name().into(),
                            detected_count: 0,
                            mean_angular_error_deg: f64::NAN,
                        });
                    }
                }
            }
        }
        report.wall_clock_seconds = start.elapsed().as_secs_f64();
        report
    }
}

/// Reconstruction experiment for a configuration.
pub fn run_reconstruction(config: &Config) -> Result<ExperimentReport> {
    Ok(Pipelines::new(config)?.reconstruction())
}

/// Rotation experiment for a configuration.
pub fn run_rotation(config: &Config) -> Result<ExperimentReport> {
    Ok(Pipelines::new(config)?.rotation())
}

/// Crossing-angle experiment for a configuration.
pub fn run_angular(config: &Config) -> Result<ExperimentReport> {
    Ok(Pipelines::new(config)?.angular())
}

/// Timing of one transform at one band-limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub band_limit: usize,
    pub method: String,
    pub seconds: f64,
}

/// Timings and fitted log-log slopes of the two forward transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub ring_peeling_slope: f64,
    pub dense_slope: f64,
    pub condition_bound: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Minimum over `repeats` of the mean time per call, where each measurement
/// loops until at least 20 ms have elapsed.
fn time_min(repeats: usize, mut f: impl FnMut()) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let mut calls = 0u32;
        loop {
            f();
            calls += 1;
            if start.elapsed().as_secs_f64() > 2e-2 {
                break;
            }
        }
        best = best.min(start.elapsed().as_secs_f64() / f64::from(calls));
    }
    best
}

/// Times the ring-peeling transform (plan construction plus one forward
/// transform) against the dense solve (matrix assembly, factorization and
/// solve) for each band-limit, and fits the log-log scaling slopes.
pub fn run_bench(config: &Config) -> Result<BenchReport> {
    let policy = ThetaPolicy {
        condition_bound: config.experiment.bench_condition_bound,
        ..config.scheme.theta_policy.clone()
    };
    let mut rows = Vec::new();
    let mut ls = Vec::new();
    let mut ring_times = Vec::new();
    let mut dense_times = Vec::new();
    for &l in &config.experiment.bench_band_limits {
        let grid = design_shell_grid(l, &policy)?;
        let mut coeffs = ShCoefficients::zeros(l);
        for (i, v) in coeffs.values_mut().iter_mut().enumerate() {
            *v = ((i * 7919) % 101) as f64 / 101.0 - 0.5;
        }
        let samples = inverse_sht(&grid, &coeffs)?;
        let ring = time_min(config.experiment.bench_repeats, || {
            let plan = RingPeelingSht::new(&grid).expect("designed grid is invertible");
            std::hint::black_box(plan.forward(&samples).expect("sample count matches"));
        });
        let dense = time_min(config.experiment.bench_repeats, || {
            let solver = DenseSht::with_factorization(&grid, config.experiment.bench_dense_factorization).expect("designed grid is invertible");
            std::hint::black_box(solver.forward(&samples).expect("sample count matches"));
        });
        rows.push(BenchRow {
            band_limit: l,
            method: "ring_peeling".into(),
            seconds: ring,
        });
        rows.push(BenchRow {
            band_limit: l,
            method: "dense".into(),
            seconds: dense,
        });
        ls.push(l as f64);
        ring_times.push(ring);
        dense_times.push(dense);
    }
    Ok(BenchReport {
        ring_peeling_slope: log_log_slope(&ls, &ring_times),
        dense_slope: log_log_slope(&ls, &dense_times),
        rows,
        condition_bound: policy.condition_bound,
    })
}
