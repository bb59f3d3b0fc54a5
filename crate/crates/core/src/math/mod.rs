//! Special functions and quadrature primitives.

mod bessel;
mod gauss;
mod harmonics;
mod laguerre;
mod quadrature;

pub use bessel::sph_bessel;
pub use gauss::{composite_gauss_legendre, gauss_legendre};
pub use harmonics::{
    even_degrees, even_index, even_len, legendre_table, real_sph_harm, EvenHarmonics, LegendreTable,
};
pub use laguerre::{laguerre, laguerre_half, laguerre_half_derivative, laguerre_roots};
pub use quadrature::{ln_factorial, ln_gamma_n_plus_three_halves, radial_function, radial_functions, RadialQuadrature};

/// Spherical angles (colatitude, longitude) of a direction.
pub fn to_spherical(v: &[f64; 3]) -> (f64, f64) {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]);
    (theta, phi)
}

/// Unit vector for spherical angles.
pub fn from_spherical(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Dot product of two 3-vectors.
pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Euclidean length of a 3-vector.
pub fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
