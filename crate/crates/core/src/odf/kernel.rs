use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{composite_gauss_legendre, radial_function};

/// Quadrature settings for the kernel's radial integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelSettings {
    /// The integration range ends where the integrand stays below this
    /// fraction of its peak.
    pub tail_tolerance: f64,
    /// Multiplier applied to the automatically chosen truncation radius.
    pub truncation_scale: f64,
    /// Initial number of Gauss-Legendre panels.
    pub panels: usize,
    /// Nodes per panel.
    pub order: usize,
    /// Acceptable step-doubling error estimate, relative to `max(1, |I|)`.
    pub tolerance: f64,
    /// Maximum number of panel doublings.
    pub max_doublings: usize,
}

impl Default for KernelSettings {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-10,
            truncation_scale: 1.0,
            panels: 16,
            order: 16,
            tolerance: 1e-12,
            max_doublings: 8,
        }
    }
}

/// Linear map from SPF coefficients to ODF harmonic coefficients:
/// `ODF_lm = Σ_n (E)_nlm · o_nl`.
///
/// The ODF is the radial marginal `∫ P(r v) r² dr` of the propagator. For a
/// signal expanded in the Gaussian-Laguerre basis, the Funk-Hecke theorem gives
///
/// `o_n0 = R_n(0) / 4π` and
/// `o_nl = P_l(0)/4π · [R_n(0) + l(l+1) I_n]` for `l > 0`,
///
/// with `I_n = ∫_0^∞ (R_n(q) − R_n(0) e^{−q²/2ζ}) / q dq`. For `l > 0` the
/// basis term `R_n(0)` is singular at the origin (an anisotropic function
/// cannot be smooth there), and its contribution depends on the finite-part
/// convention. A physically consistent signal has an isotropic value at the
/// origin, i.e. `Σ_n (E)_nlm R_n(0) = 0` for `l > 0`; the kernel therefore
/// projects each `l > 0` column onto the complement of `(R_0(0), …, R_{N−1}(0))`,
/// which removes the convention dependence and keeps the map linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdfKernel {
    radial_order: usize,
    band_limit: usize,
    zeta: f64,
    settings: KernelSettings,
    /// `I_n` and the corresponding step-doubling error estimates.
    finite_part: Vec<f64>,
    error_estimates: Vec<f64>,
    /// Unprojected kernel values, `n`-major over even degrees.
    raw: Vec<f64>,
    /// Projected kernel values, `n`-major over even degrees.
    values: Vec<f64>,
}

/// `P_l(0)` for even `l`.
pub fn legendre_at_zero(l: usize) -> f64 {
    debug_assert!(l % 2 == 0);
    let mut v = 1.0;
    for k in (2..=l).step_by(2) {
        v *= -((k - 1) as f64) / k as f64;
    }
    v
}

fn even_degree_count(band_limit: usize) -> usize {
    band_limit.div_ceil(2)
}

/// `∫_0^∞ (R_n(q) − R_n(0) e^{−q²/2ζ}) / q dq` with composite Gauss-Legendre
/// and step-doubling; returns the value and its error estimate.
fn finite_part_integral(n: usize, zeta: f64, settings: &KernelSettings) -> Result<(f64, f64)> {
    let r0 = radial_function(n, 0.0, zeta);
    let f = |q: f64| (radial_function(n, q, zeta) - r0 * (-0.5 * q * q / zeta).exp()) / q;
    // Locate the tail: scan far enough that the Gaussian factor is negligible.
    let far = (zeta * (8.0 * n as f64 + 160.0)).sqrt();
    let scan = 4000;
    let samples: Vec<(f64, f64)> = (1..=scan)
        .map(|i| {
            let q = far * i as f64 / scan as f64;
            (q, f(q).abs())
        })
        .collect();
    let peak = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let mut cutoff = far;
    for &(q, v) in samples.iter().rev() {
        if v >= settings.tail_tolerance * peak {
            cutoff = q;
            break;
        }
    }
    let cutoff = cutoff * settings.truncation_scale;
    let integrate = |panels: usize| {
        let (x, w) = composite_gauss_legendre(0.0, cutoff, panels, settings.order);
        x.iter().zip(&w).map(|(&q, &w)| w * f(q)).sum::<f64>()
    };
    let mut panels = settings.panels.max(1);
    let mut coarse = integrate(panels);
    let mut estimate = f64::INFINITY;
    for _ in 0..=settings.max_doublings {
        panels *= 2;
        let fine = integrate(panels);
        estimate = (fine - coarse).abs();
        coarse = fine;
        if estimate <= settings.tolerance * fine.abs().max(1.0) {
            return Ok((fine, estimate));
        }
    }
    Err(Error::KernelNotConverged {
        estimate,
        tolerance: settings.tolerance,
    })
}

impl OdfKernel {
    pub fn new(radial_order: usize, band_limit: usize, zeta: f64, settings: &KernelSettings) -> Result<Self> {
        if radial_order == 0 || band_limit == 0 || !(zeta > 0.0) {
            return Err(Error::InvalidArgument(
                "kernel needs a nonempty basis and a positive scale".into(),
            ));
        }
        let mut finite_part = Vec::with_capacity(radial_order);
        let mut error_estimates = Vec::with_capacity(radial_order);
        for n in 0..radial_order {
            let (v, e) = finite_part_integral(n, zeta, settings)?;
            finite_part.push(v);
            error_estimates.push(e);
        }
        let origin: Vec<f64> = (0..radial_order).map(|n| radial_function(n, 0.0, zeta)).collect();
        let degrees = even_degree_count(band_limit);
        let mut raw = vec![0.0; radial_order * degrees];
        for n in 0..radial_order {
            for d in 0..degrees {
                let l = 2 * d;
                let lf = l as f64;
                raw[n * degrees + d] = legendre_at_zero(l) / (4.0 * PI) * (origin[n] + lf * (lf + 1.0) * finite_part[n]);
            }
        }
        let origin_norm2: f64 = origin.iter().map(|r| r * r).sum();
        let mut values = raw.clone();
        for d in 1..degrees {
            let overlap: f64 = (0..radial_order).map(|k| origin[k] * raw[k * degrees + d]).sum::<f64>() / origin_norm2;
            for n in 0..radial_order {
                values[n * degrees + d] -= origin[n] * overlap;
            }
        }
        Ok(Self {
            radial_order,
            band_limit,
            zeta,
            settings: settings.clone(),
            finite_part,
            error_estimates,
            raw,
            values,
        })
    }

    /// Loads the kernel from `dir` if a file for the same basis and settings
    /// exists, otherwise computes it and writes the file.
    pub fn cached(dir: &Path, radial_order: usize, band_limit: usize, zeta: f64, settings: &KernelSettings) -> Result<Self> {
        let path = Self::cache_path(dir, radial_order, band_limit, zeta, settings)?;
        if let Ok(bytes) = std::fs::read(&path) {
            if let Ok(k) = serde_json::from_slice::<Self>(&bytes) {
                if k.radial_order == radial_order
                    && k.band_limit == band_limit
                    && k.zeta.to_bits() == zeta.to_bits()
                    && &k.settings == settings
                {
                    return Ok(k);
                }
            }
        }
        let kernel = Self::new(radial_order, band_limit, zeta, settings)?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, serde_json::to_vec(&kernel)?)?;
        Ok(kernel)
    }

    /// Cache file name, keyed by the basis and a hash of the settings.
    pub fn cache_path(dir: &Path, radial_order: usize, band_limit: usize, zeta: f64, settings: &KernelSettings) -> Result<PathBuf> {
        let key = serde_json::to_string(&(radial_order, band_limit, zeta.to_bits(), settings))?;
        Ok(dir.join(format!("odf_kernel_N{radial_order}_L{band_limit}_{:016x}.json", fnv1a(key.as_bytes()))))
    }

    pub fn radial_order(&self) -> usize {
        self.radial_order
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn settings(&self) -> &KernelSettings {
        &self.settings
    }

    /// Kernel value `o_nl` (even `l`).
    pub fn get(&self, n: usize, l: usize) -> f64 {
        self.values[n * even_degree_count(self.band_limit) + l / 2]
    }

    /// Kernel value before the origin-consistency projection.
    pub fn raw(&self, n: usize, l: usize) -> f64 {
        self.raw[n * even_degree_count(self.band_limit) + l / 2]
    }

    /// `I_n = ∫_0^∞ (R_n(q) − R_n(0) e^{−q²/2ζ}) / q dq`.
    pub fn finite_part(&self, n: usize) -> f64 {
        self.finite_part[n]
    }

    /// Largest step-doubling error estimate of the radial integrals.
    pub fn max_error_estimate(&self) -> f64 {
        self.error_estimates.iter().copied().fold(0.0, f64::max)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
