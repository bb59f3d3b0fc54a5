use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::models::GaussianMixtureModel;
use crate::transforms::{SpfCoefficients, SpfSynthesizer};

/// Points distributed uniformly in the ball `|q| ≤ q_max`.
///
/// A Halton sequence in bases 2, 3, 5 with a seeded Cranley-Patterson shift
/// is mapped to the ball by `r = q_max u^{1/3}`, `cos θ = 1 − 2v`, `φ = 2πw`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationGrid {
    pub seed: u64,
    pub q_max: f64,
    pub points: Vec<[f64; 3]>,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

impl EvaluationGrid {
    pub fn new(count: usize, q_max: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let points = (1..=count as u64)
            .map(|i| {
                let u = (radical_inverse(i, 2) + shift[0]).fract();
                let v = (radical_inverse(i, 3) + shift[1]).fract();
                let w = (radical_inverse(i, 5) + shift[2]).fract();
                let r = q_max * u.cbrt();
                let ct = 1.0 - 2.0 * v;
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                let phi = std::f64::consts::TAU * w;
                [r * st * phi.cos(), r * st * phi.sin(), r * ct]
            })
            .collect();
        Self { seed, q_max, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `E_mean = Σ_i |E_M(q_i) − E_R(q_i)| / n` over the grid.
pub fn mean_error(truth: impl Fn(&[f64; 3]) -> f64, coeffs: &SpfCoefficients, grid: &EvaluationGrid) -> f64 {
    let mut synth = SpfSynthesizer::new(coeffs);
    let total: f64 = grid.points.iter().map(|p| (truth(p) - synth.eval(p)).abs()).sum();
    total / grid.len() as f64
}

/// [`mean_error`] against a mixture model's signal.
pub fn model_mean_error(model: &GaussianMixtureModel, coeffs: &SpfCoefficients, grid: &EvaluationGrid) -> f64 {
    mean_error(|q| model.signal_at_q(q), coeffs, grid)
}
