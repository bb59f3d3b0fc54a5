use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ShellSet;
use crate::error::{Error, Result};
use crate::math::{dot, from_spherical};

/// Settings of the electrostatic baseline optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeemConfig {
    /// Weight of the per-shell energies; `1 − alpha` weights the energy of all
    /// points projected onto a single sphere.
    pub alpha: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for GeemConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            iterations: 10_000,
            seed: 1,
        }
    }
}

/// One shell of the baseline scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeemShell {
    pub q_radius: f64,
    pub directions: Vec<[f64; 3]>,
}

impl GeemShell {
    /// Diffusion weighting of the shell (`b = q²`).
    pub fn b_value(&self) -> f64 {
        self.q_radius * self.q_radius
    }
}

/// Multi-shell point set from generalized electrostatic energy minimisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeemScheme {
    pub shells: Vec<GeemShell>,
    pub energy: f64,
    /// Energy after every iteration; nonincreasing.
    pub iteration_log: Vec<f64>,
    pub config: GeemConfig,
}

impl ShellSet for GeemScheme {
    fn shell_count(&self) -> usize {
        self.shells.len()
    }

    fn q_radius(&self, shell: usize) -> f64 {
        self.shells[shell].q_radius
    }

    fn directions(&self, shell: usize) -> &[[f64; 3]] {
        &self.shells[shell].directions
    }
}

impl GeemScheme {
    /// Recomputes the combined energy of the current point set.
    pub fn recompute_energy(&self) -> f64 {
        let (points, shell_of) = flatten(&self.shells);
        combined_energy(&points, &shell_of, self.config.alpha, None)
    }
}

fn flatten(shells: &[GeemShell]) -> (Vec<[f64; 3]>, Vec<usize>) {
    let mut points = Vec::new();
    let mut shell_of = Vec::new();
    for (s, shell) in shells.iter().enumerate() {
        points.extend_from_slice(&shell.directions);
        shell_of.extend(std::iter::repeat_n(s, shell.directions.len()));
    }
    (points, shell_of)
}

/// Antipodal Coulomb energy combining per-shell and merged-sphere terms.
///
/// Each unordered pair `(i, j)` contributes `1/|p_i − p_j| + 1/|p_i + p_j|`,
/// weighted by 1 when both points share a shell (the per-shell term plus the
/// merged term) and by `1 − alpha` otherwise. When `gradient` is given it
/// receives the Euclidean gradient with respect to every point.
fn combined_energy(points: &[[f64; 3]], shell_of: &[usize], alpha: f64, mut gradient: Option<&mut [[f64; 3]]>) -> f64 {
    if let Some(g) = gradient.as_deref_mut() {
        g.iter_mut().for_each(|v| *v = [0.0; 3]);
    }
    let mut energy = 0.0;
    for i in 0..points.len() {
        let pi = points[i];
        for j in (i + 1)..points.len() {
            let weight = if shell_of[i] == shell_of[j] {
                alpha + (1.0 - alpha)
            } else {
                1.0 - alpha
            };
            if weight == 0.0 {
                continue;
            }
            let pj = points[j];
            let d = [pi[0] - pj[0], pi[1] - pj[1], pi[2] - pj[2]];
            let s = [pi[0] + pj[0], pi[1] + pj[1], pi[2] + pj[2]];
            let dn = dot(&d, &d).sqrt();
            let sn = dot(&s, &s).sqrt();
            energy += weight * (1.0 / dn + 1.0 / sn);
            if let Some(g) = gradient.as_deref_mut() {
                let cd = weight / (dn * dn * dn);
                let cs = weight / (sn * sn * sn);
                for c in 0..3 {
                    g[i][c] -= cd * d[c] + cs * s[c];
                    g[j][c] += cd * d[c] - cs * s[c];
                }
            }
        }
    }
    energy
}

/// Generates the baseline point sets by projected-gradient descent on the sphere.
///
/// Points start uniformly at random (seeded). Each iteration moves every point
/// against its tangential gradient, renormalizes, and accepts the move only if
/// the energy decreases; the step grows by 1.2 on acceptance and halves on
/// rejection, so the logged energy is nonincreasing.
pub fn generate_geem(point_counts: &[usize], q_radii: &[f64], config: &GeemConfig) -> Result<GeemScheme> {
    if point_counts.len() != q_radii.len() {
        return Err(Error::ShapeMismatch {
            expected: point_counts.len(),
            found: q_radii.len(),
        });
    }
    if !(0.0..=1.0).contains(&config.alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {}", config.alpha)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points = Vec::new();
    let mut shell_of = Vec::new();
    for (s, &count) in point_counts.iter().enumerate() {
        for _ in 0..count {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            points.push(from_spherical(z.acos(), phi));
            shell_of.push(s);
        }
    }
    let n = points.len();
    let mut grad = vec![[0.0; 3]; n];
    let mut energy = combined_energy(&points, &shell_of, config.alpha, Some(&mut grad));
    let mut log = Vec::with_capacity(config.iterations);
    let mut step = 0.05;
    let mut trial = points.clone();
    let mut trial_grad = vec![[0.0; 3]; n];
    for _ in 0..config.iterations {
        let tangent: Vec<[f64; 3]> = points
            .iter()
            .zip(&grad)
            .map(|(p, g)| {
                let r = dot(p, g);
                [g[0] - r * p[0], g[1] - r * p[1], g[2] - r * p[2]]
            })
            .collect();
        let scale = tangent.iter().map(|t| dot(t, t).sqrt()).fold(0.0, f64::max);
        if scale > 0.0 && step > 1e-14 {
            for i in 0..n {
                let mut q = [0.0; 3];
                for c in 0..3 {
                    q[c] = points[i][c] - step * tangent[i][c] / scale;
                }
                let len = dot(&q, &q).sqrt();
                trial[i] = [q[0] / len, q[1] / len, q[2] / len];
            }
            let e = combined_energy(&trial, &shell_of, config.alpha, Some(&mut trial_grad));
            if e < energy {
                energy = e;
                std::mem::swap(&mut points, &mut trial);
                std::mem::swap(&mut grad, &mut trial_grad);
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        log.push(energy);
    }
    let mut shells = Vec::with_capacity(point_counts.len());
    let mut offset = 0;
    for (&count, &q) in point_counts.iter().zip(q_radii) {
        shells.push(GeemShell {
            q_radius: q,
            directions: points[offset..offset + count].to_vec(),
        });
        offset += count;
    }
    Ok(GeemScheme {
        shells,
        energy,
        iteration_log: log,
        config: config.clone(),
    })
}

/// Smallest antipodal-aware angle (radians) between any two directions.
pub fn min_pairwise_angle(directions: &[[f64; 3]]) -> f64 {
    let mut best = std::f64::consts::FRAC_PI_2;
    for i in 0..directions.len() {
        for j in (i + 1)..directions.len() {
            let c = dot(&directions[i], &directions[j]).abs().min(1.0);
            best = best.min(c.acos());
        }
    }
    best
}

/// Evenly spaced radii from `q_min` to `q_max` inclusive.
pub fn evenly_spaced_radii(q_min: f64, q_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![q_max],
        _ => (0..count)
            .map(|i| q_min + (q_max - q_min) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
