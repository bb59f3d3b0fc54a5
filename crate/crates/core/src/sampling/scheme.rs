use serde::{Deserialize, Serialize};

use super::grid::{design_shell_grid, ShellGrid, ThetaPolicy};
use super::ShellSet;
use crate::error::{Error, Result};
use crate::math::RadialQuadrature;

/// Largest b-value of the reference acquisition, in s/mm².
pub const DEFAULT_B_MAX: f64 = 8000.0;
/// Per-shell angular band-limits of the reference acquisition, innermost first.
pub const DEFAULT_BAND_LIMITS: [usize; 4] = [3, 5, 9, 11];

/// One q-shell: radius, diffusion weighting, radial quadrature weight and angular grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub b_value: f64,
    pub q_radius: f64,
    pub weight: f64,
    pub grid: ShellGrid,
}

/// Quadrature-based multi-shell acquisition scheme.
///
/// Shell radii are the nodes of the radial Gauss-Laguerre rule, so the radial
/// part of the spherical polar Fourier transform is exact for the band-limit
/// `N = shells.len()`. Throughout the crate `q² = b`, so `ζ` carries units of
/// s/mm².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiShellScheme {
    pub zeta: f64,
    pub shells: Vec<Shell>,
}

impl MultiShellScheme {
    pub fn radial_order(&self) -> usize {
        self.shells.len()
    }

    /// Largest shell band-limit.
    pub fn max_band_limit(&self) -> usize {
        self.shells.iter().map(|s| s.grid.band_limit()).max().unwrap_or(0)
    }

    pub fn band_limits(&self) -> Vec<usize> {
        self.shells.iter().map(|s| s.grid.band_limit()).collect()
    }

    pub fn q_min(&self) -> f64 {
        self.shells.first().map_or(0.0, |s| s.q_radius)
    }

    pub fn q_max(&self) -> f64 {
        self.shells.last().map_or(0.0, |s| s.q_radius)
    }

    pub fn b_values(&self) -> Vec<f64> {
        self.shells.iter().map(|s| s.b_value).collect()
    }

    pub fn point_counts(&self) -> Vec<usize> {
        self.shells.iter().map(|s| s.grid.len()).collect()
    }
}

impl ShellSet for MultiShellScheme {
    fn shell_count(&self) -> usize {
        self.shells.len()
    }

    fn q_radius(&self, shell: usize) -> f64 {
        self.shells[shell].q_radius
    }

    fn directions(&self, shell: usize) -> &[[f64; 3]] {
        self.shells[shell].grid.points()
    }
}

/// Designs the quadrature scheme with the outermost shell at `b_max`.
///
/// Shell `i` sits at `b_i = b_max · x_i / x_N` where `x_i` are the roots of
/// the generalized Laguerre polynomial `L_N^{1/2}`, and carries an angular
/// grid of band-limit `per_shell_band_limits[i]`.
pub fn design_scheme(
    b_max: f64,
    radial_order: usize,
    per_shell_band_limits: &[usize],
    policy: &ThetaPolicy,
) -> Result<MultiShellScheme> {
    if !(b_max > 0.0 && b_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("b_max must be positive, got {b_max}")));
    }
    if per_shell_band_limits.len() != radial_order {
        return Err(Error::ShapeMismatch {
            expected: radial_order,
            found: per_shell_band_limits.len(),
        });
    }
    if per_shell_band_limits.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "per-shell band-limits must be nondecreasing".into(),
        ));
    }
    let unit = RadialQuadrature::new(radial_order, 1.0)?;
    let x_max = unit.nodes[radial_order - 1];
    let zeta = b_max / x_max;
    let radial = RadialQuadrature::new(radial_order, zeta)?;
    let mut grids: Vec<(usize, ShellGrid)> = Vec::new();
    let mut shells = Vec::with_capacity(radial_order);
    for (i, &band_limit) in per_shell_band_limits.iter().enumerate() {
        let grid = match grids.iter().find(|(l, _)| *l == band_limit) {
            Some((_, g)) => g.clone(),
            None => {
                let g = design_shell_grid(band_limit, policy)?;
                grids.push((band_limit, g.clone()));
                g
            }
        };
        shells.push(Shell {
            b_value: b_max * radial.nodes[i] / x_max,
            q_radius: radial.q_radii[i],
            weight: radial.weights[i],
            grid,
        });
    }
    Ok(MultiShellScheme { zeta, shells })
}
