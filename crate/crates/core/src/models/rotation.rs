use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rotation drawn uniformly from SO(3), deterministic per seed.
///
/// Uses the unit-quaternion construction from three uniform variates.
pub fn random_rotation(seed: u64) -> Matrix3<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let u3: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let q = nalgebra::Quaternion::new(b * u3.cos(), a * u2.sin(), a * u2.cos(), b * u3.sin());
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// Rotation by `angle` radians about the z axis.
pub fn rotation_about_z(angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), angle).into_inner()
}

/// `R_z(a) · R_y(b) · R_z(c)`.
pub fn euler_zyz(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    let z = Vector3::z_axis();
    let y = Vector3::y_axis();
    (Rotation3::from_axis_angle(&z, a) * Rotation3::from_axis_angle(&y, b) * Rotation3::from_axis_angle(&z, c))
        .into_inner()
}

/// Angles `(a, b, c)` with `euler_zyz(a, b, c) == r`, choosing `c = 0` at the
/// gimbal-lock poles.
pub fn rotation_to_euler_zyz(r: &Matrix3<f64>) -> [f64; 3] {
    let b = r[(2, 2)].clamp(-1.0, 1.0).acos();
    if b.sin().abs() < 1e-12 {
        // Only a combination of a and c is determined.
        let a = if r[(2, 2)] > 0.0 {
            r[(1, 0)].atan2(r[(0, 0)])
        } else {
            (-r[(1, 0)]).atan2(-r[(0, 0)])
        };
        return [a, b, 0.0];
    }
    let a = r[(1, 2)].atan2(r[(0, 2)]);
    let c = r[(2, 1)].atan2(-r[(2, 0)]);
    [a, b, c]
}
