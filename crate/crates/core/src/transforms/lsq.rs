use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::spf::SpfCoefficients;
use crate::error::{Error, Result};
use crate::math::{even_index, even_len, legendre_table, radial_functions, to_spherical};
use crate::sampling::ShellSet;

/// Settings of the regularized least-squares SPF fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LsqSettings {
    pub radial_order: usize,
    pub band_limit: usize,
    pub zeta: f64,
    /// Weight of the angular penalty `l²(l+1)²`.
    pub lambda_l: f64,
    /// Weight of the radial penalty `n²(n+1)²`.
    pub lambda_n: f64,
    /// Adds odd-degree columns to the design matrix.
    pub include_odd: bool,
}

impl Default for LsqSettings {
    fn default() -> Self {
        Self {
            radial_order: 4,
            band_limit: 11,
            zeta: 1.0,
            lambda_l: 1e-7,
            lambda_n: 5e-8,
            include_odd: false,
        }
    }
}

/// Result of a regularized fit.
#[derive(Debug, Clone, PartialEq)]
pub struct LsqFit {
    /// Even-degree coefficients.
    pub coefficients: SpfCoefficients,
    /// Norm of the odd-degree coefficients (zero for an even-only basis).
    pub odd_norm: f64,
    /// `‖A c − s‖`.
    pub residual_norm: f64,
}

/// Column descriptor `(n, l, m)` of the design matrix.
type Column = (usize, usize, i64);

/// Regularized least-squares SPF fit with the factorization precomputed for
/// one point set.
///
/// Minimizes `‖A c − s‖² + cᵀ Λ c` with the diagonal
/// `Λ = λ_l l²(l+1)² + λ_n n²(n+1)²` by a singular value decomposition of the
/// stacked matrix `[A; Λ^{1/2}]`, which exposes the conditioning of the
/// problem.
#[derive(Debug, Clone)]
pub struct RegularizedLsq {
    settings: LsqSettings,
    columns: Vec<Column>,
    design: DMatrix<f64>,
    solver: DMatrix<f64>,
    condition: f64,
    design_condition: f64,
}

impl RegularizedLsq {
    pub fn new(points: &impl ShellSet, settings: &LsqSettings) -> Result<Self> {
        if settings.radial_order == 0 || settings.band_limit == 0 {
            return Err(Error::InvalidArgument("empty SPF basis".into()));
        }
        if !(settings.zeta > 0.0) || settings.lambda_l < 0.0 || settings.lambda_n < 0.0 {
            return Err(Error::InvalidArgument(
                "zeta must be positive and regularization weights nonnegative".into(),
            ));
        }
        let mut columns = Vec::new();
        for n in 0..settings.radial_order {
            for l in 0..settings.band_limit {
                if l % 2 == 1 && !settings.include_odd {
                    continue;
                }
                for m in -(l as i64)..=l as i64 {
                    columns.push((n, l, m));
                }
            }
        }
        let rows = points.total_samples();
        let cols = columns.len();
        let lmax = settings.band_limit - 1;
        let mut design = DMatrix::zeros(rows, cols);
        let mut radial = vec![0.0; settings.radial_order];
        let mut row = 0;
        for s in 0..points.shell_count() {
            radial_functions(points.q_radius(s), settings.zeta, &mut radial);
            for dir in points.directions(s) {
                let (theta, phi) = to_spherical(dir);
                let table = legendre_table(lmax, theta);
                for (j, &(n, l, m)) in columns.iter().enumerate() {
                    let p = table.get(l, m.unsigned_abs() as usize);
                    let y = match m {
                        0 => p,
                        m if m > 0 => std::f64::consts::SQRT_2 * p * (m as f64 * phi).cos(),
                        m => std::f64::consts::SQRT_2 * p * ((-m) as f64 * phi).sin(),
                    };
                    design[(row, j)] = radial[n] * y;
                }
                row += 1;
            }
        }
        let penalty: Vec<f64> = columns
            .iter()
            .map(|&(n, l, _)| {
                let (nf, lf) = (n as f64, l as f64);
                settings.lambda_l * (lf * (lf + 1.0)).powi(2) + settings.lambda_n * (nf * (nf + 1.0)).powi(2)
            })
            .collect();
        let mut stacked = DMatrix::zeros(rows + cols, cols);
        stacked.view_mut((0, 0), (rows, cols)).copy_from(&design);
        for (j, p) in penalty.iter().enumerate() {
            stacked[(rows + j, j)] = p.sqrt();
        }
        let svd = stacked.svd(true, true);
        let sv = &svd.singular_values;
        let max = sv.max();
        let min = sv.min();
        if !(min > 1e-14 * max) {
            return Err(Error::SingularSystem {
                condition: if min > 0.0 { max / min } else { f64::INFINITY },
            });
        }
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        // Only the data rows of the stacked right-hand side are nonzero.
        let u_top = u.view((0, 0), (rows, sv.len()));
        let mut scaled = u_top.transpose();
        for (i, s) in sv.iter().enumerate() {
            scaled.row_mut(i).scale_mut(1.0 / s);
        }
        let solver = v_t.transpose() * scaled;
        let design_sv = design.clone().svd(false, false).singular_values;
        let design_condition = match design_sv.min() {
            m if m > 0.0 => design_sv.max() / m,
            _ => f64::INFINITY,
        };
        Ok(Self {
            settings: settings.clone(),
            columns,
            design,
            solver,
            condition: max / min,
            design_condition,
        })
    }

    pub fn settings(&self) -> &LsqSettings {
        &self.settings
    }

    /// Condition number of the regularized (stacked) system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Condition number of the unregularized design matrix over its nonzero
    /// rank; infinite when a singular value vanishes.
    pub fn design_condition(&self) -> f64 {
        self.design_condition
    }

    pub fn design_matrix(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn unknowns(&self) -> usize {
        self.columns.len()
    }

    /// Fits flattened samples (shell by shell, innermost first).
    pub fn fit(&self, samples: &[f64]) -> Result<LsqFit> {
        if samples.len() != self.design.nrows() {
            return Err(Error::ShapeMismatch {
                expected: self.design.nrows(),
                found: samples.len(),
            });
        }
        let s = DVector::from_column_slice(samples);
        let c = &self.solver * &s;
        let residual_norm = (&self.design * &c - &s).norm();
        let mut coefficients = SpfCoefficients::zeros(self.settings.radial_order, self.settings.band_limit, self.settings.zeta);
        let stride = even_len(self.settings.band_limit);
        let mut odd = 0.0;
        for (&(n, l, m), v) in self.columns.iter().zip(c.iter()) {
            if l % 2 == 0 {
                coefficients.values_mut()[n * stride + even_index(l, m)] = *v;
            } else {
                odd += v * v;
            }
        }
        Ok(LsqFit {
            coefficients,
            odd_norm: odd.sqrt(),
            residual_norm,
        })
    }
}

/// One-shot regularized fit on a point set; samples are per-shell lists.
pub fn regularized_ls_fit(points: &impl ShellSet, samples: &[Vec<f64>], settings: &LsqSettings) -> Result<LsqFit> {
    let flat: Vec<f64> = samples.iter().flatten().copied().collect();
    RegularizedLsq::new(points, settings)?.fit(&flat)
}
