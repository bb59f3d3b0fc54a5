use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector, LU};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{even_index, even_len, legendre_table, EvenHarmonics, LegendreTable};
use crate::sampling::{even_system_matrix, ShellGrid};

/// Even-degree real spherical harmonic coefficients `a_lm` for `l < band_limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShCoefficients {
    band_limit: usize,
    values: Vec<f64>,
}

impl ShCoefficients {
    pub fn zeros(band_limit: usize) -> Self {
        Self {
            band_limit,
            values: vec![0.0; even_len(band_limit)],
        }
    }

    pub fn from_values(band_limit: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != even_len(band_limit) {
            return Err(Error::ShapeMismatch {
                expected: even_len(band_limit),
                found: values.len(),
            });
        }
        Ok(Self { band_limit, values })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, l: usize, m: i64) -> f64 {
        self.values[even_index(l, m)]
    }

    pub fn set(&mut self, l: usize, m: i64, value: f64) {
        self.values[even_index(l, m)] = value;
    }

    /// `Σ_m a_lm²` for one degree.
    pub fn degree_energy(&self, l: usize) -> f64 {
        (-(l as i64)..=l as i64).map(|m| self.get(l, m).powi(2)).sum()
    }
}

/// Pointwise synthesis `Σ a_lm Y_lm` at the grid points.
pub fn inverse_sht(grid: &ShellGrid, coeffs: &ShCoefficients) -> Result<Vec<f64>> {
    if coeffs.band_limit > grid.band_limit() {
        return Err(Error::BandLimitMismatch {
            coefficients: coeffs.band_limit,
            target: grid.band_limit(),
        });
    }
    let basis = EvenHarmonics::new(coeffs.band_limit);
    let mut row = vec![0.0; basis.len()];
    Ok(grid
        .angles()
        .iter()
        .map(|&(theta, phi)| {
            basis.eval_into(theta, phi, &mut row);
            row.iter().zip(&coeffs.values).map(|(y, a)| y * a).sum()
        })
        .collect())
}

/// Forward transform with the ring-peeling algorithm.
pub fn forward_sht(grid: &ShellGrid, samples: &[f64]) -> Result<ShCoefficients> {
    RingPeelingSht::new(grid)?.forward(samples)
}

/// Factorization used by [`DenseSht`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseFactorization {
    /// Householder QR.
    #[default]
    Qr,
    /// Singular value decomposition (rank-revealing, reports the condition number).
    Svd,
}

#[derive(Debug, Clone)]
enum DenseSolver {
    Qr(nalgebra::linalg::QR<f64, nalgebra::Dyn, nalgebra::Dyn>),
    Svd(nalgebra::linalg::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

/// Dense forward transform: the harmonic matrix on the grid, factorized once.
#[derive(Debug, Clone)]
pub struct DenseSht {
    band_limit: usize,
    solver: DenseSolver,
    condition: Option<f64>,
}

impl DenseSht {
    pub fn new(grid: &ShellGrid) -> Result<Self> {
        Self::with_factorization(grid, DenseFactorization::Qr)
    }

    pub fn with_factorization(grid: &ShellGrid, factorization: DenseFactorization) -> Result<Self> {
        let a = even_system_matrix(grid);
        let (solver, condition) = match factorization {
            DenseFactorization::Qr => {
                let qr = a.qr();
                let diag = qr.r().diagonal();
                let max = diag.amax();
                if diag.iter().any(|d| d.abs() <= 1e-13 * max) {
                    return Err(Error::SingularSystem {
                        condition: f64::INFINITY,
                    });
                }
                (DenseSolver::Qr(qr), None)
            }
            DenseFactorization::Svd => {
                let svd = a.svd(true, true);
                let max = svd.singular_values.max();
                let min = svd.singular_values.min();
                if !(min > 1e-13 * max) {
                    return Err(Error::SingularSystem {
                        condition: if min > 0.0 { max / min } else { f64::INFINITY },
                    });
                }
                (DenseSolver::Svd(svd), Some(max / min))
            }
        };
        Ok(Self {
            band_limit: grid.band_limit(),
            solver,
            condition,
        })
    }

    /// Condition number, when the factorization reveals it.
    pub fn condition(&self) -> Option<f64> {
        self.condition
    }

    pub fn forward(&self, samples: &[f64]) -> Result<ShCoefficients> {
        let n = even_len(self.band_limit);
        if samples.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: samples.len(),
            });
        }
        let rhs = DVector::from_column_slice(samples);
        let x = match &self.solver {
            DenseSolver::Qr(qr) => qr.solve(&rhs).ok_or(Error::SingularSystem {
                condition: f64::INFINITY,
            })?,
            DenseSolver::Svd(svd) => svd.solve(&rhs, 0.0).map_err(|_| Error::SingularSystem {
                condition: self.condition.unwrap_or(f64::INFINITY),
            })?,
        };
        ShCoefficients::from_values(self.band_limit, x.as_slice().to_vec())
    }
}

/// Per-order linear system of the ring-peeling transform.
#[derive(Debug, Clone)]
struct OrderSystem {
    order: usize,
    first_ring: usize,
    degrees: Vec<usize>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

/// Ring-peeling forward transform.
///
/// Ring `k` resolves longitudinal frequencies up to `2k` exactly with a real
/// DFT. Orders are processed from the highest down: the order-`m` Fourier
/// coefficients of the residual on rings `k ≥ ⌈m/2⌉` form a square system in
/// the even degrees `m ≤ l < L`, and once solved, the order-`m` part is
/// subtracted from the rings that cannot resolve it (`2k < m`), where it would
/// otherwise alias into lower orders. The precomputed systems are of size
/// `O(L)`, giving `O(L^4)` setup and `O(L^3)` per transform.
#[derive(Debug, Clone)]
pub struct RingPeelingSht {
    band_limit: usize,
    rings: Vec<(usize, usize, f64, f64)>,
    legendre: Vec<LegendreTable>,
    systems: Vec<OrderSystem>,
}

impl RingPeelingSht {
    pub fn new(grid: &ShellGrid) -> Result<Self> {
        let band_limit = grid.band_limit();
        let lmax = band_limit - 1;
        let offsets = grid.ring_offsets();
        let rings: Vec<(usize, usize, f64, f64)> = grid
            .rings()
            .iter()
            .zip(offsets)
            .map(|(r, off)| (off, r.count, r.phi_offset, r.theta))
            .collect();
        let legendre: Vec<LegendreTable> = rings.iter().map(|r| legendre_table(lmax, r.3)).collect();
        let mut systems = Vec::with_capacity(band_limit);
        for m in 0..band_limit {
            let first_ring = m.div_ceil(2);
            let degrees: Vec<usize> = (m..band_limit).filter(|l| l % 2 == 0).collect();
            let size = degrees.len();
            debug_assert_eq!(size, rings.len() - first_ring);
            let scale = if m == 0 { 1.0 } else { SQRT_2 };
            let mat = DMatrix::from_fn(size, size, |r, d| scale * legendre[first_ring + r].get(degrees[d], m));
            let lu = mat.lu();
            let u_diag = lu.u().diagonal();
            let max = u_diag.amax();
            if u_diag.iter().any(|d| d.abs() <= 1e-13 * max) {
                return Err(Error::SingularSystem {
                    condition: f64::INFINITY,
                });
            }
            systems.push(OrderSystem {
                order: m,
                first_ring,
                degrees,
                lu,
            });
        }
        Ok(Self {
            band_limit,
            rings,
            legendre,
            systems,
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn forward(&self, samples: &[f64]) -> Result<ShCoefficients> {
        let total: usize = self.rings.iter().map(|r| r.1).sum();
        if samples.len() != total {
            return Err(Error::ShapeMismatch {
                expected: total,
                found: samples.len(),
            });
        }
        let mut residual = samples.to_vec();
        let mut out = ShCoefficients::zeros(self.band_limit);
        for sys in self.systems.iter().rev() {
            let m = sys.order;
            let size = sys.degrees.len();
            let mut rhs_c = DVector::zeros(size);
            let mut rhs_s = DVector::zeros(size);
            for r in 0..size {
                let (off, count, phi0, _) = self.rings[sys.first_ring + r];
                let ring = &residual[off..off + count];
                let step = std::f64::consts::TAU / count as f64;
                if m == 0 {
                    rhs_c[r] = ring.iter().sum::<f64>() / count as f64;
                } else {
                    let (mut c, mut s) = (0.0, 0.0);
                    for (p, v) in ring.iter().enumerate() {
                        let (sn, cs) = (m as f64 * (phi0 + step * p as f64)).sin_cos();
                        c += v * cs;
                        s += v * sn;
                    }
                    rhs_c[r] = 2.0 * c / count as f64;
                    rhs_s[r] = 2.0 * s / count as f64;
                }
            }
            let cos_part = sys.lu.solve(&rhs_c).ok_or(Error::SingularSystem {
                condition: f64::INFINITY,
            })?;
            let sin_part = if m == 0 {
                DVector::zeros(size)
            } else {
                sys.lu.solve(&rhs_s).ok_or(Error::SingularSystem {
                    condition: f64::INFINITY,
                })?
            };
            for (d, &l) in sys.degrees.iter().enumerate() {
                out.set(l, m as i64, cos_part[d]);
                if m > 0 {
                    out.set(l, -(m as i64), sin_part[d]);
                }
            }
            if m == 0 {
                continue;
            }
            // Remove the order-m part from rings too coarse to resolve it.
            let scale = SQRT_2;
            for k in 0..sys.first_ring {
                let (off, count, phi0, _) = self.rings[k];
                let table = &self.legendre[k];
                let (mut ac, mut as_) = (0.0, 0.0);
                for (d, &l) in sys.degrees.iter().enumerate() {
                    let p = scale * table.get(l, m);
                    ac += cos_part[d] * p;
                    as_ += sin_part[d] * p;
                }
                let step = std::f64::consts::TAU / count as f64;
                for p in 0..count {
                    let (sn, cs) = (m as f64 * (phi0 + step * p as f64)).sin_cos();
                    residual[off + p] -= ac * cs + as_ * sn;
                }
            }
        }
        Ok(out)
    }
}
