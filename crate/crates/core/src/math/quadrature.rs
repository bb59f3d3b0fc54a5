use serde::{Deserialize, Serialize};

use super::laguerre::{laguerre, laguerre_half, laguerre_roots};
use crate::error::{Error, Result};

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln Γ(n + 3/2)`, using `Γ(n + 3/2) = sqrt(π) Π_{k=0}^{n} (k + 1/2)`.
pub fn ln_gamma_n_plus_three_halves(n: usize) -> f64 {
    0.5 * std::f64::consts::PI.ln() + (0..=n).map(|k| (k as f64 + 0.5).ln()).sum::<f64>()
}

fn radial_norm(n: usize, zeta: f64) -> f64 {
    let ln = std::f64::consts::LN_2 - 1.5 * zeta.ln() + ln_factorial(n) - ln_gamma_n_plus_three_halves(n);
    (0.5 * ln).exp()
}

/// Gaussian-Laguerre radial function `R_n(q)` with scale `zeta`.
pub fn radial_function(n: usize, q: f64, zeta: f64) -> f64 {
    let x = q * q / zeta;
    radial_norm(n, zeta) * (-0.5 * x).exp() * laguerre_half(n, x)
}

/// Fills `out[n] = R_n(q)` for `n < out.len()` with a single recurrence pass.
pub fn radial_functions(q: f64, zeta: f64, out: &mut [f64]) {
    let x = q * q / zeta;
    let g = (-0.5 * x).exp();
    let mut prev = 0.0;
    let mut cur = 1.0;
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = radial_norm(n, zeta) * g * cur;
        let k = n as f64;
        let next = ((2.0 * k + 1.5 - x) * cur - (k + 0.5) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
}

/// Radial Gauss-Laguerre quadrature for `∫ f(q) q^2 dq` on the shells
/// `q_i = sqrt(zeta x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialQuadrature {
    pub order: usize,
    pub zeta: f64,
    /// Dimensionless roots of `L_N^{1/2}`.
    pub nodes: Vec<f64>,
    pub q_radii: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialQuadrature {
    /// Nodes and weights `w_i = 0.5 ζ^{3/2} Γ(N+3/2) x_i e^{x_i} / (N! (N+1)^2 [L_{N+1}^{1/2}(x_i)]^2)`,
    /// evaluated in log space.
    pub fn new(order: usize, zeta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radial scale must be positive and finite, got {zeta}"
            )));
        }
        let nodes = laguerre_roots(order)?;
        let n = order as f64;
        let ln_const = 0.5f64.ln() + 1.5 * zeta.ln() + ln_gamma_n_plus_three_halves(order)
            - ln_factorial(order)
            - 2.0 * (n + 1.0).ln();
        let weights = nodes
            .iter()
            .map(|&x| {
                let next = laguerre(order + 1, 0.5, x);
                (ln_const + x.ln() + x - 2.0 * next.abs().ln()).exp()
            })
            .collect();
        let q_radii = nodes.iter().map(|&x| (zeta * x).sqrt()).collect();
        Ok(Self {
            order,
            zeta,
            nodes,
            q_radii,
            weights,
        })
    }

    /// `Σ_i w_i f(q_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.q_radii
            .iter()
            .zip(&self.weights)
            .map(|(&q, &w)| w * f(q))
            .sum()
    }

    /// Weights for `∫ p(x) x^{1/2} e^{-x} dx`, i.e. with the `0.5 ζ^{3/2} e^{x_i}` factor removed.
    pub fn standard_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w / (0.5 * self.zeta.powf(1.5) * x.exp()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_is_exact_for_r0() {
        for &zeta in &[0.1, 1.0, 37.0, 785.0] {
            let rq = RadialQuadrature::new(1, zeta).unwrap();
            let r0 = radial_function(0, rq.q_radii[0], zeta);
            assert!((rq.weights[0] * r0 * r0 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_scale_as_zeta_three_halves() {
        let a = RadialQuadrature::new(5, 2.5).unwrap();
        let b = RadialQuadrature::new(5, 10.0).unwrap();
        for (wa, wb) in a.weights.iter().zip(&b.weights) {
            assert!((wb / wa - 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_functions_agree_with_pointwise_evaluation() {
        let mut out = [0.0; 7];
        for &q in &[0.0, 0.4, 3.1, 12.0] {
            radial_functions(q, 2.0, &mut out);
            for (n, v) in out.iter().enumerate() {
                assert!((v - radial_function(n, q, 2.0)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(RadialQuadrature::new(4, 0.0).is_err());
        assert!(RadialQuadrature::new(4, f64::NAN).is_err());
    }

    #[test]
    fn q_radii_are_sqrt_zeta_x() {
        let rq = RadialQuadrature::new(4, 785.0).unwrap();
        for (x, q) in rq.nodes.iter().zip(&rq.q_radii) {
            assert_eq!(*q, (785.0 * x).sqrt());
        }
    }
}
