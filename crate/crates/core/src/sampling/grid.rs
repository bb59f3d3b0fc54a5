use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{even_len, from_spherical, EvenHarmonics};

/// One iso-latitude ring of an antipodal shell grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub theta: f64,
    pub count: usize,
    pub phi_offset: f64,
}

impl Ring {
    pub fn phi(&self, p: usize) -> f64 {
        self.phi_offset + 2.0 * PI * p as f64 / self.count as f64
    }
}

/// Sample directions for one shell at odd angular band-limit `L`.
///
/// Ring `k` holds `4k + 1` points and resolves orders `|m| ≤ 2k`, giving
/// `L(L+1)/2` points in total. All points lie in the upper hemisphere; their
/// antipodes are implied by the symmetry of the signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellGrid {
    band_limit: usize,
    rings: Vec<Ring>,
    points: Vec<[f64; 3]>,
    angles: Vec<(f64, f64)>,
    condition: f64,
}

impl ShellGrid {
    /// Builds the grid for explicit ring colatitudes without any search.
    pub fn from_thetas(band_limit: usize, thetas: &[f64]) -> Result<Self> {
        check_band_limit(band_limit)?;
        let ring_count = band_limit.div_ceil(2);
        if thetas.len() != ring_count {
            return Err(Error::ShapeMismatch {
                expected: ring_count,
                found: thetas.len(),
            });
        }
        if thetas.windows(2).any(|w| w[0] >= w[1]) || thetas[0] < 0.0 || thetas[ring_count - 1] >= 0.5 * PI {
            return Err(Error::InvalidArgument(
                "ring colatitudes must increase strictly within [0, π/2)".into(),
            ));
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let rings: Vec<Ring> = thetas
            .iter()
            .enumerate()
            .map(|(k, &theta)| Ring {
                theta,
                count: 4 * k + 1,
                phi_offset: (k as f64 * golden).rem_euclid(2.0 * PI),
            })
            .collect();
        let mut points = Vec::with_capacity(band_limit * (band_limit + 1) / 2);
        let mut angles = Vec::with_capacity(points.capacity());
        for ring in &rings {
            for p in 0..ring.count {
                let phi = ring.phi(p);
                angles.push((ring.theta, phi));
                points.push(from_spherical(ring.theta, phi));
            }
        }
        let mut grid = Self {
            band_limit,
            rings,
            points,
            angles,
            condition: f64::INFINITY,
        };
        grid.condition = condition_number(&even_system_matrix(&grid));
        Ok(grid)
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// `(θ, φ)` for every point, in point order.
    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// 2-norm condition number of the even-degree harmonic system on the grid.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.rings.iter().map(|r| r.theta).collect()
    }

    /// First point index of each ring.
    pub fn ring_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.rings.len());
        let mut acc = 0;
        for r in &self.rings {
            offsets.push(acc);
            acc += r.count;
        }
        offsets
    }
}

/// Controls the placement search for ring colatitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThetaPolicy {
    /// Largest acceptable condition number of the harmonic system.
    pub condition_bound: f64,
    /// Maximum number of condition-number evaluations spent in the search.
    pub search_budget: usize,
}

impl Default for ThetaPolicy {
    fn default() -> Self {
        Self {
            condition_bound: 100.0,
            search_budget: 400,
        }
    }
}

fn check_band_limit(band_limit: usize) -> Result<()> {
    if band_limit % 2 == 0 || !(1..=31).contains(&band_limit) {
        return Err(Error::InvalidArgument(format!(
            "shell band-limit must be odd and in 1..=31, got {band_limit}"
        )));
    }
    Ok(())
}

/// Square matrix `A[p][j] = Y_j(point p)` over the even degrees `l < L`.
pub fn even_system_matrix(grid: &ShellGrid) -> DMatrix<f64> {
    let basis = EvenHarmonics::new(grid.band_limit);
    let n = even_len(grid.band_limit);
    let mut a = DMatrix::zeros(grid.len(), n);
    let mut row = vec![0.0; n];
    for (p, &(theta, phi)) in grid.angles.iter().enumerate() {
        basis.eval_into(theta, phi, &mut row);
        for (j, v) in row.iter().enumerate() {
            a[(p, j)] = *v;
        }
    }
    a
}

/// Ratio of extreme singular values; infinite for a rank-deficient matrix.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Designs the shell grid for band-limit `L`.
///
/// Ring 0 is a single sample at the pole and the remaining rings start at
/// equal colatitude steps, `θ_k = kπ/L` or `θ_k = kπ/(L+1)`, whichever is
/// better conditioned. If the condition bound is not met, a coordinate search
/// perturbs one colatitude at a time with a shrinking step.
pub fn design_shell_grid(band_limit: usize, policy: &ThetaPolicy) -> Result<ShellGrid> {
    check_band_limit(band_limit)?;
    let ring_count = band_limit.div_ceil(2);
    let candidates = [band_limit as f64, band_limit as f64 + 1.0];
    let mut best: Option<ShellGrid> = None;
    for denom in candidates {
        let thetas: Vec<f64> = (0..ring_count).map(|k| k as f64 * PI / denom).collect();
        let grid = ShellGrid::from_thetas(band_limit, &thetas)?;
        if best.as_ref().is_none_or(|b| grid.condition < b.condition) {
            best = Some(grid);
        }
    }
    let mut best = best.expect("at least one candidate");
    let mut evaluations = candidates.len();
    let mut step = 0.25 * PI / (band_limit as f64 + 1.0);
    while best.condition > policy.condition_bound && evaluations < policy.search_budget && step > 1e-6 {
        let mut improved = false;
        for k in 0..ring_count {
            for dir in [-1.0, 1.0] {
                if evaluations >= policy.search_budget {
                    break;
                }
                let mut thetas = best.thetas();
                thetas[k] += dir * step;
                let lower = if k == 0 { 0.0 } else { thetas[k - 1] + 1e-6 };
                let upper = if k + 1 < ring_count { thetas[k + 1] - 1e-6 } else { 0.5 * PI - 1e-3 };
                if thetas[k] < lower || thetas[k] > upper {
                    continue;
                }
                evaluations += 1;
                let trial = ShellGrid::from_thetas(band_limit, &thetas)?;
                if trial.condition < best.condition {
                    best = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    if best.condition > policy.condition_bound {
        return Err(Error::GridDesign {
            band_limit,
            best: best.condition,
            bound: policy.condition_bound,
        });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_sizes_and_point_counts() {
        let g = design_shell_grid(3, &ThetaPolicy::default()).unwrap();
        assert_eq!(g.len(), 6);
        let sizes: Vec<usize> = g.rings().iter().map(|r| r.count).collect();
        assert_eq!(sizes, vec![1, 5]);
        for l in [1usize, 5, 9, 11, 15] {
            let g = design_shell_grid(l, &ThetaPolicy::default()).unwrap();
            assert_eq!(g.len(), l * (l + 1) / 2);
            assert!(g.condition() <= 100.0);
        }
    }

    #[test]
    fn points_are_distinct_unit_vectors_in_upper_hemisphere() {
        let g = design_shell_grid(11, &ThetaPolicy::default()).unwrap();
        for p in g.points() {
            assert!((crate::math::norm(p) - 1.0).abs() < 1e-14);
            assert!(p[2] > 0.0);
        }
        for i in 0..g.len() {
            for j in 0..i {
                let d = crate::math::dot(&g.points()[i], &g.points()[j]);
                assert!(d.abs() < 1.0 - 1e-9, "points {i} and {j} coincide or are antipodal");
            }
        }
    }

    #[test]
    fn rejects_even_or_large_band_limits() {
        assert!(design_shell_grid(4, &ThetaPolicy::default()).is_err());
        assert!(design_shell_grid(33, &ThetaPolicy::default()).is_err());
    }

    #[test]
    fn equatorial_ring_is_singular() {
        // Odd orders vanish on the equator for even degrees.
        let thetas = [PI / 4.0, PI / 2.0 - 1e-12];
        let g = ShellGrid::from_thetas(3, &thetas).unwrap();
        assert!(g.condition() > 1e8);
    }

    #[test]
    fn impossible_bound_reports_failure() {
        let policy = ThetaPolicy {
            condition_bound: 1.0 - 1e-9,
            search_budget: 20,
        };
        match design_shell_grid(9, &policy) {
            Err(Error::GridDesign { band_limit: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
