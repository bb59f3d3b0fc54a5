//! Spherical harmonic transforms, the separable SPF transform and the
//! regularized least-squares fit.

mod lsq;
mod sht;
mod spf;

pub use lsq::{regularized_ls_fit, LsqFit, LsqSettings, RegularizedLsq};
pub use sht::{forward_sht, inverse_sht, DenseFactorization, DenseSht, RingPeelingSht, ShCoefficients};
pub use spf::{spf_forward, spf_synthesize, SpfCoefficients, SpfSynthesizer, SpfTransform};
