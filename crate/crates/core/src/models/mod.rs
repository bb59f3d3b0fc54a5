//! Synthetic ground truth: Gaussian mixture signals, rotations and analytic ODFs.

mod mixture;
mod rotation;

pub use mixture::{
    crossing_fibers, isotropic_model, reference_models, sample_model, single_fiber, ComponentRecord,
    GaussianMixtureModel, ModelFile, TensorComponent, FIBER_DIFFUSIVITIES,
};
pub use rotation::{euler_zyz, random_rotation, rotation_about_z, rotation_to_euler_zyz};
