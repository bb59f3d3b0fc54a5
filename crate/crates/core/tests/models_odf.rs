//! Integration and property tests for the signal models, the ODF kernel and
//! peak detection.

use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use qspace_spf::harness::{Config, Pipelines, SchemeKind};
use qspace_spf::math::{composite_gauss_legendre, from_spherical};
use qspace_spf::models::{
    crossing_fibers, euler_zyz, isotropic_model, random_rotation, reference_models, rotation_to_euler_zyz,
    sample_model, single_fiber, FIBER_DIFFUSIVITIES,
};
use qspace_spf::odf::{angular_error, axis_angle_deg, find_peaks, odf_from_spf, Icosphere, OdfSH};
use qspace_spf::sampling::{design_scheme, ThetaPolicy, DEFAULT_BAND_LIMITS};
use qspace_spf::transforms::{ShCoefficients, SpfCoefficients};

fn rotate(r: &Matrix3<f64>, v: &[f64; 3]) -> [f64; 3] {
    let w = r * Vector3::from(*v);
    [w.x, w.y, w.z]
}

/// Dense product-rule integration over the sphere.
fn sphere_integral(f: impl Fn(&[f64; 3]) -> f64) -> f64 {
    let (z, wz) = composite_gauss_legendre(-1.0, 1.0, 16, 16);
    let nphi = 256;
    let mut s = 0.0;
    for (zi, wi) in z.iter().zip(&wz) {
        for k in 0..nphi {
            let phi = std::f64::consts::TAU * (k as f64 + 0.5) / nphi as f64;
            s += wi * std::f64::consts::TAU / nphi as f64 * f(&from_spherical(zi.acos(), phi));
        }
    }
    s
}

fn pipelines() -> Pipelines {
    Pipelines::new(&Config::default()).unwrap()
}

#[test]
fn signal_regression_pins() {
    let m = single_fiber(FIBER_DIFFUSIVITIES);
    let axis = m.fiber_directions()[0];
    assert!((m.eval_signal(8000.0, &axis) - (-13.6f64).exp()).abs() < 1e-18);
    assert!((m.eval_signal(8000.0, &axis) - 1.2404e-6).abs() < 1e-9);
    assert_eq!(m.eval_signal(0.0, &[0.0, 0.6, 0.8]), 1.0);
    let iso = isotropic_model(0.7e-3);
    for v in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]] {
        assert!((iso.eval_signal(1000.0, &v) - (-0.7f64).exp()).abs() < 1e-15);
    }
}

#[test]
fn ground_truth_odfs_integrate_to_one() {
    for (name, model) in reference_models(FIBER_DIFFUSIVITIES) {
        let s = sphere_integral(|v| model.ground_truth_odf(v));
        assert!((s - 1.0).abs() < 1e-6, "{name}: {s}");
    }
    let iso = isotropic_model(1e-3);
    assert!((iso.ground_truth_odf(&[0.0, 0.0, 1.0]) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
}

#[test]
fn sampled_signals_are_bounded_and_isotropic_shells_constant() {
    let scheme = design_scheme(8000.0, 4, &DEFAULT_BAND_LIMITS, &ThetaPolicy::default()).unwrap();
    for (_, model) in reference_models(FIBER_DIFFUSIVITIES) {
        for shell in sample_model(&model, &scheme) {
            assert!(shell.iter().all(|&e| e > 0.0 && e <= 1.0));
        }
    }
    for shell in sample_model(&isotropic_model(0.7e-3), &scheme) {
        assert!(shell.iter().all(|&e| (e - shell[0]).abs() < 1e-15));
    }
}

#[test]
fn crossing_model_is_symmetric_under_axis_swap() {
    let m = crossing_fibers(FIBER_DIFFUSIVITIES, 90.0);
    let swap = Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    for k in 0..20 {
        let v = from_spherical(0.3 + 0.1 * k as f64, 0.7 * k as f64);
        let a = m.eval_signal(3000.0, &v);
        let b = m.eval_signal(3000.0, &rotate(&swap, &v));
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn random_rotations_are_proper_deterministic_and_uniform() {
    let r = random_rotation(17);
    assert!((r.determinant() - 1.0).abs() < 1e-12);
    assert!((r.transpose() * r - Matrix3::identity()).norm() < 1e-12);
    assert_eq!(r, random_rotation(17));
    let mut mean = Vector3::zeros();
    for seed in 0..10_000 {
        mean += random_rotation(seed) * Vector3::new(0.0, 0.0, 1.0);
    }
    assert!((mean / 10_000.0).norm() < 0.05);
    let angles = rotation_to_euler_zyz(&r);
    assert!((euler_zyz(angles[0], angles[1], angles[2]) - r).norm() < 1e-12);
}

#[test]
fn icosphere_covering_radius_matches_brute_force() {
    let sphere = Icosphere::new(4);
    assert_eq!(sphere.len(), 2562);
    // Brute-force covering radius over a dense set of probe directions.
    let mut worst: f64 = 0.0;
    for i in 0..20_000 {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / 20_000.0;
        let v = from_spherical(z.acos(), i as f64 * 2.399_963_229_728_653);
        let nearest = sphere.vertices().iter().map(|u| axis_angle_deg(u, &v)).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    // Every direction lies within 2.72° of a vertex; most peak errors are far
    // smaller because the analytic maxima land near vertices.
    assert!(worst > 2.6 && worst < 2.72, "covering radius {worst}°");
}

#[test]
fn analytic_single_fiber_has_one_peak_on_axis() {
    let sphere = Icosphere::new(4);
    for seed in 0..10 {
        let m = single_fiber(FIBER_DIFFUSIVITIES).rotated(&random_rotation(seed));
        let peaks = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &sphere, 0.5);
        assert_eq!(peaks.len(), 1);
        assert!(axis_angle_deg(&peaks[0].direction, &m.fiber_directions()[0]) < 2.5);
    }
}

#[test]
fn analytic_crossings_from_forty_degrees_resolve_two_peaks() {
    let sphere = Icosphere::new(4);
    for angle in (40..=90).step_by(5) {
        let m = crossing_fibers(FIBER_DIFFUSIVITIES, angle as f64);
        let peaks = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &sphere, 0.5);
        assert_eq!(peaks.len(), 2, "{angle}°");
        let dirs: Vec<[f64; 3]> = peaks.iter().map(|p| p.direction).collect();
        let truth = m.fiber_directions();
        for d in &dirs {
            let best = truth.iter().map(|t| axis_angle_deg(d, t)).fold(f64::INFINITY, f64::min);
            assert!(best < 2.5, "{angle}°: {best}°");
        }
    }
}

#[test]
fn angular_error_geometry() {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    let e = angular_error(&[[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]], &[x, y]);
    assert!(e.mean_deg.abs() < 1e-12 && e.detected_count == 2);
    let t = 5f64.to_radians();
    let e = angular_error(&[[t.cos(), t.sin(), 0.0]], &[x, y]);
    assert!((e.mean_deg - 5.0).abs() < 1e-9 && e.detected_count == 1);
}

#[test]
fn isotropic_control_gives_uniform_kernel_odf() {
    let p = pipelines();
    let odf = p.odf(SchemeKind::Proposed, &p.isotropic_control()).unwrap();
    for k in 0..50 {
        let v = from_spherical(0.06 * k as f64, 1.3 * k as f64);
        assert!((odf.eval(&v) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-3);
    }
}

#[test]
fn kernel_map_is_linear_and_zero_preserving() {
    let p = pipelines();
    let kernel = p.kernel().unwrap();
    let (n, l, zeta) = (kernel.radial_order(), kernel.band_limit(), kernel.zeta());
    let zero = odf_from_spf(&SpfCoefficients::zeros(n, l, zeta), kernel).unwrap();
    assert!(zero.coefficients().values().iter().all(|&x| x == 0.0));
    let make = |shift: usize| {
        let mut c = SpfCoefficients::zeros(n, l, zeta);
        for (k, v) in c.values_mut().iter_mut().enumerate() {
            *v = (((k + shift) * 29 % 17) as f64 - 8.0) / 9.0;
        }
        c
    };
    let (c1, c2) = (make(0), make(5));
    let sum = SpfCoefficients::from_values(
        n,
        l,
        zeta,
        c1.values().iter().zip(c2.values()).map(|(a, b)| a + b).collect(),
    )
    .unwrap();
    let (o1, o2, o12) = (
        odf_from_spf(&c1, kernel).unwrap(),
        odf_from_spf(&c2, kernel).unwrap(),
        odf_from_spf(&sum, kernel).unwrap(),
    );
    for ((a, b), c) in o1.coefficients().values().iter().zip(o2.coefficients().values()).zip(o12.coefficients().values()) {
        assert!((a + b - c).abs() < 1e-12 * (1.0 + c.abs()));
    }
    assert!(odf_from_spf(&SpfCoefficients::zeros(n, l, zeta * 2.0), kernel).is_err());
}

#[test]
fn fitted_ninety_degree_crossing_resolves_both_axes() {
    let p = pipelines();
    let m = crossing_fibers(FIBER_DIFFUSIVITIES, 90.0);
    let odf = p.odf(SchemeKind::Proposed, &m).unwrap();
    let peaks = find_peaks(&odf, &Icosphere::new(4), 0.5);
    assert_eq!(peaks.len(), 2);
    let dirs: Vec<[f64; 3]> = peaks.iter().map(|pk| pk.direction).collect();
    let e = angular_error(&dirs, &m.fiber_directions());
    assert_eq!(e.detected_count, 2);
    assert!(e.mean_deg < 2.5, "{}", e.mean_deg);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signal_invariant_under_joint_rotation(seed in 0u64..100_000, b in 0.0f64..8000.0, theta in 0.0f64..3.14, phi in 0.0f64..6.28) {
        let r = random_rotation(seed);
        let v = from_spherical(theta, phi);
        for (_, m) in reference_models(FIBER_DIFFUSIVITIES) {
            let a = m.eval_signal(b, &v);
            let c = m.rotated(&r).eval_signal(b, &rotate(&r, &v));
            prop_assert!((a - c).abs() < 1e-12);
            prop_assert!((a - m.eval_signal(b, &[-v[0], -v[1], -v[2]])).abs() < 1e-15);
        }
    }

    #[test]
    fn peak_detection_is_scale_invariant(scale in 1e-3f64..1e3, seed in 0u64..1000) {
        let sphere = Icosphere::new(3);
        let m = crossing_fibers(FIBER_DIFFUSIVITIES, 70.0).rotated(&random_rotation(seed));
        let a = find_peaks(&|v: &[f64; 3]| m.ground_truth_odf(v), &sphere, 0.5);
        let b = find_peaks(&|v: &[f64; 3]| scale * m.ground_truth_odf(v), &sphere, 0.5);
        prop_assert_eq!(a.iter().map(|p| p.vertex).collect::<Vec<_>>(), b.iter().map(|p| p.vertex).collect::<Vec<_>>());
    }

    #[test]
    fn odf_normalization_yields_unit_integral(raw in prop::collection::vec(-0.05f64..0.05, 15)) {
        let mut c = ShCoefficients::zeros(5);
        c.values_mut().copy_from_slice(&raw);
        c.set(0, 0, 1.0);
        let odf = OdfSH::new(c).normalized();
        prop_assert!(odf.is_normalized());
        prop_assert!((sphere_integral(|v| odf.eval(v)) - 1.0).abs() < 1e-9);
    }
}
