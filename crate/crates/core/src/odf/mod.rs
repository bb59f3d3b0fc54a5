//! Orientation distribution functions: the SPF→ODF kernel, icosphere peak
//! search and angular error scoring.

mod icosphere;
mod kernel;
mod peaks;

pub use icosphere::Icosphere;
pub use kernel::{legendre_at_zero, KernelSettings, OdfKernel};
pub use peaks::{
    angular_error, axis_angle_deg, find_peaks, find_peaks_in_values, peaks_csv_rows, AngularError, Peak,
    SphericalFunction, PEAKS_CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::math::{even_len, to_spherical, EvenHarmonics};
use crate::transforms::{ShCoefficients, SpfCoefficients};

/// ODF as even-degree real spherical harmonic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OdfSH {
    coefficients: ShCoefficients,
    normalized: bool,
    basis: EvenHarmonics,
}

impl OdfSH {
    pub fn new(coefficients: ShCoefficients) -> Self {
        let basis = EvenHarmonics::new(coefficients.band_limit());
        Self {
            coefficients,
            normalized: false,
            basis,
        }
    }

    pub fn coefficients(&self) -> &ShCoefficients {
        &self.coefficients
    }

    /// Whether the coefficients were rescaled to unit integral.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `∫ ODF dΩ = √(4π) · a_00`.
    pub fn integral(&self) -> f64 {
        (4.0 * std::f64::consts::PI).sqrt() * self.coefficients.get(0, 0)
    }

    /// Copy rescaled to unit integral.
    pub fn normalized(&self) -> Self {
        let scale = 1.0 / self.integral();
        let mut c = self.coefficients.clone();
        c.values_mut().iter_mut().for_each(|v| *v *= scale);
        Self {
            coefficients: c,
            normalized: true,
            basis: self.basis.clone(),
        }
    }

    pub fn eval(&self, direction: &[f64; 3]) -> f64 {
        let (theta, phi) = to_spherical(direction);
        let y = self.basis.eval(theta, phi);
        y.iter().zip(self.coefficients.values()).map(|(a, b)| a * b).sum()
    }
}

impl SphericalFunction for OdfSH {
    fn value(&self, direction: &[f64; 3]) -> f64 {
        self.eval(direction)
    }
}

/// Contracts SPF coefficients with the kernel: `ODF_lm = Σ_n (E)_nlm o_nl`.
pub fn odf_from_spf(coeffs: &SpfCoefficients, kernel: &OdfKernel) -> Result<OdfSH> {
    if coeffs.radial_order() != kernel.radial_order() {
        return Err(Error::ShapeMismatch {
            expected: kernel.radial_order(),
            found: coeffs.radial_order(),
        });
    }
    if coeffs.band_limit() != kernel.band_limit() {
        return Err(Error::BandLimitMismatch {
            coefficients: coeffs.band_limit(),
            target: kernel.band_limit(),
        });
    }
    if (coeffs.zeta() - kernel.zeta()).abs() > 1e-12 * kernel.zeta() {
        return Err(Error::InvalidArgument(format!(
            "kernel scale {} does not match coefficient scale {}",
            kernel.zeta(),
            coeffs.zeta()
        )));
    }
    let l_limit = coeffs.band_limit();
    let mut out = ShCoefficients::zeros(l_limit);
    let len = even_len(l_limit);
    for n in 0..coeffs.radial_order() {
        let slice = coeffs.radial_slice(n);
        for (idx, (l, _)) in crate::math::even_degrees(l_limit).enumerate() {
            out.values_mut()[idx] += slice[idx] * kernel.get(n, l);
        }
        debug_assert_eq!(slice.len(), len);
    }
    Ok(OdfSH::new(out))
}
