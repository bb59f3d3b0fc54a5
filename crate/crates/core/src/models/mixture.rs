use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::rotation::{euler_zyz, rotation_about_z, rotation_to_euler_zyz};
use crate::error::{Error, Result};
use crate::sampling::ShellSet;

/// Fiber diffusivities `(λ1, λ2, λ3)` in mm²/s; the first is along the fiber.
pub const FIBER_DIFFUSIVITIES: [f64; 3] = [1.7e-3, 0.2e-3, 0.2e-3];

/// One Gaussian compartment with tensor `D = R diag(λ) Rᵀ`.
///
/// The first column of `R` is the principal (fiber) direction.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorComponent {
    pub fraction: f64,
    pub eigenvalues: [f64; 3],
    pub rotation: Matrix3<f64>,
}

impl TensorComponent {
    pub fn tensor(&self) -> Matrix3<f64> {
        let d = Matrix3::from_diagonal(&Vector3::from(self.eigenvalues));
        self.rotation * d * self.rotation.transpose()
    }

    pub fn principal_direction(&self) -> [f64; 3] {
        let c = self.rotation.column(0);
        [c[0], c[1], c[2]]
    }
}

/// Mixture of Gaussian diffusion compartments, `E(q) = Σ_j f_j exp(−qᵀ D_j q)`
/// with `q² = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureModel {
    components: Vec<TensorComponent>,
    tensors: Vec<Matrix3<f64>>,
    inverses: Vec<Matrix3<f64>>,
    determinants: Vec<f64>,
}

impl GaussianMixtureModel {
    pub fn new(components: Vec<TensorComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a model needs at least one component".into()));
        }
        if components.iter().any(|c| !(c.fraction > 0.0)) {
            return Err(Error::InvalidArgument("component fractions must be positive".into()));
        }
        let total: f64 = components.iter().map(|c| c.fraction).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("component fractions sum to {total}, not 1")));
        }
        if components.iter().any(|c| c.eigenvalues.iter().any(|l| !(*l > 0.0))) {
            return Err(Error::InvalidArgument("diffusivities must be positive".into()));
        }
        let tensors: Vec<Matrix3<f64>> = components.iter().map(|c| c.tensor()).collect();
        let inverses = components
            .iter()
            .map(|c| {
                let d = Matrix3::from_diagonal(&Vector3::from(c.eigenvalues.map(|l| 1.0 / l)));
                c.rotation * d * c.rotation.transpose()
            })
            .collect();
        let determinants = components.iter().map(|c| c.eigenvalues.iter().product()).collect();
        Ok(Self {
            components,
            tensors,
            inverses,
            determinants,
        })
    }

    pub fn components(&self) -> &[TensorComponent] {
        &self.components
    }

    /// Fiber directions of all components.
    pub fn fiber_directions(&self) -> Vec<[f64; 3]> {
        self.components.iter().map(|c| c.principal_direction()).collect()
    }

    /// Attenuation `Σ f exp(−b uᵀ D u)` for a unit direction `u`.
    pub fn eval_signal(&self, b: f64, direction: &[f64; 3]) -> f64 {
        let u = Vector3::from(*direction);
        self.components
            .iter()
            .zip(&self.tensors)
            .map(|(c, d)| c.fraction * (-b * u.dot(&(d * u))).exp())
            .sum()
    }

    /// Attenuation at the q-space point `q` (`b = |q|²`).
    pub fn signal_at_q(&self, q: &[f64; 3]) -> f64 {
        let v = Vector3::from(*q);
        self.components
            .iter()
            .zip(&self.tensors)
            .map(|(c, d)| c.fraction * (-v.dot(&(d * v))).exp())
            .sum()
    }

    /// Radial marginal of the propagator, `∫ P(r v) r² dr`, in 1/steradian:
    /// `Σ f / (4π |D|^{1/2}) (vᵀ D⁻¹ v)^{−3/2}`.
    pub fn ground_truth_odf(&self, direction: &[f64; 3]) -> f64 {
        let v = Vector3::from(*direction);
        self.components
            .iter()
            .zip(self.inverses.iter().zip(&self.determinants))
            .map(|(c, (inv, det))| {
                let a = v.dot(&(inv * v));
                c.fraction / (4.0 * std::f64::consts::PI * det.sqrt()) * a.powf(-1.5)
            })
            .sum()
    }

    /// The model rotated by `r` (every compartment rotated about the origin).
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| TensorComponent {
                rotation: r * c.rotation,
                ..c.clone()
            })
            .collect();
        Self::new(components).expect("rotation preserves validity")
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            components: self
                .components
                .iter()
                .map(|c| ComponentRecord {
                    fraction: c.fraction,
                    eigenvalues: c.eigenvalues,
                    euler_zyz: rotation_to_euler_zyz(&c.rotation),
                })
                .collect(),
        }
    }
}

/// JSON model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub components: Vec<ComponentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub fraction: f64,
    pub eigenvalues: [f64; 3],
    /// Orientation `R_z(a) R_y(b) R_z(c)` in radians.
    pub euler_zyz: [f64; 3],
}

impl ModelFile {
    pub fn to_model(&self) -> Result<GaussianMixtureModel> {
        GaussianMixtureModel::new(
            self.components
                .iter()
                .map(|c| TensorComponent {
                    fraction: c.fraction,
                    eigenvalues: c.eigenvalues,
                    rotation: euler_zyz(c.euler_zyz[0], c.euler_zyz[1], c.euler_zyz[2]),
                })
                .collect(),
        )
    }
}

/// Single fiber along x.
pub fn single_fiber(diffusivities: [f64; 3]) -> GaussianMixtureModel {
    GaussianMixtureModel::new(vec![TensorComponent {
        fraction: 1.0,
        eigenvalues: diffusivities,
        rotation: Matrix3::identity(),
    }])
    .expect("valid single-fiber model")
}

/// Two equal-fraction fibers: one along x, the other rotated about z by
/// `angle_deg` degrees.
pub fn crossing_fibers(diffusivities: [f64; 3], angle_deg: f64) -> GaussianMixtureModel {
    GaussianMixtureModel::new(vec![
        TensorComponent {
            fraction: 0.5,
            eigenvalues: diffusivities,
            rotation: Matrix3::identity(),
        },
        TensorComponent {
            fraction: 0.5,
            eigenvalues: diffusivities,
            rotation: rotation_about_z(angle_deg.to_radians()),
        },
    ])
    .expect("valid crossing model")
}

/// Isotropic Gaussian with diffusivity `d`.
pub fn isotropic_model(d: f64) -> GaussianMixtureModel {
    GaussianMixtureModel::new(vec![TensorComponent {
        fraction: 1.0,
        eigenvalues: [d; 3],
        rotation: Matrix3::identity(),
    }])
    .expect("valid isotropic model")
}

/// The three reconstruction models: one fiber, two fibers at 90°, two at 45°.
pub fn reference_models(diffusivities: [f64; 3]) -> Vec<(String, GaussianMixtureModel)> {
    vec![
        ("one_fiber".to_string(), single_fiber(diffusivities)),
        ("two_fibers_90".to_string(), crossing_fibers(diffusivities, 90.0)),
        ("two_fibers_45".to_string(), crossing_fibers(diffusivities, 45.0)),
    ]
}

/// Model signal at every sample of a multi-shell point set, per shell.
pub fn sample_model(model: &GaussianMixtureModel, points: &impl ShellSet) -> Vec<Vec<f64>> {
    (0..points.shell_count())
        .map(|s| {
            let q = points.q_radius(s);
            points.directions(s).iter().map(|d| model.eval_signal(q * q, d)).collect()
        })
        .collect()
}
