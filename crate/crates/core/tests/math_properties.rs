//! Property and oracle tests for the numerical foundations.

use proptest::prelude::*;
use qspace_spf::math::{
    composite_gauss_legendre, even_index, laguerre_half, laguerre_roots, radial_function, real_sph_harm,
    sph_bessel, RadialQuadrature,
};

/// Roots of the Hermite polynomial H_{2N+1} located by bisection on the
/// three-term recurrence. The squared positive roots coincide with the
/// roots of the generalized Laguerre polynomial with α = 1/2.
fn hermite_oracle_roots(n: usize) -> Vec<f64> {
    let deg = 2 * n + 1;
    let h = |x: f64| {
        let (mut h0, mut h1) = (1.0, 2.0 * x);
        for k in 1..deg {
            let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    };
    let upper = (2.0f64 * deg as f64 + 1.0).sqrt() + 1.0;
    let steps = 200_000;
    let mut roots = Vec::new();
    let mut prev = (1e-9, h(1e-9));
    for i in 1..=steps {
        let x = upper * i as f64 / steps as f64;
        let hx = h(x);
        if prev.1.signum() != hx.signum() {
            let (mut a, mut b) = (prev.0, x);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if h(a).signum() == h(mid).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push((0.5 * (a + b)).powi(2));
        }
        prev = (x, hx);
    }
    roots
}

/// Explicit power-series form of L_n^{(1/2)}(x).
fn laguerre_half_series(n: usize, x: f64) -> f64 {
    // Σ_k (-1)^k C(n + 1/2, n - k) x^k / k!
    let binom = |top: f64, k: usize| (0..k).fold(1.0, |acc, j| acc * (top - j as f64) / (j as f64 + 1.0));
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            sign * binom(n as f64 + 0.5, n - k) * x.powi(k as i32) / fact
        })
        .sum()
}

#[test]
fn laguerre_roots_match_hermite_oracle() {
    for n in 1..=8 {
        let ours = laguerre_roots(n).unwrap();
        let oracle = hermite_oracle_roots(n);
        assert_eq!(ours.len(), oracle.len());
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9 * b.max(1.0), "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn smallest_fourth_order_root_is_a_zero() {
    let roots = laguerre_roots(4).unwrap();
    assert!(laguerre_half(4, roots[0]).abs() < 1e-9);
    assert!((roots[0] - 0.523_529).abs() < 1e-5);
    let oracle = hermite_oracle_roots(4);
    for (a, b) in roots.iter().zip(oracle) {
        assert!((a - b).abs() < 1e-5);
    }
}

#[test]
fn laguerre_rejects_zero_order() {
    assert!(laguerre_roots(0).is_err());
}

#[test]
fn radial_orthonormality_against_dense_integration() {
    // Independent composite Gauss–Legendre integration of ∫ R_n R_m q² dq.
    let zeta: f64 = 785.6665;
    let q_end = (80.0f64 * zeta).sqrt();
    let (x, w) = composite_gauss_legendre(0.0, q_end, 400, 20);
    for n in 0..4 {
        for m in 0..4 {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(q, wi)| wi * q * q * radial_function(n, *q, zeta) * radial_function(m, *q, zeta))
                .sum();
            let target = if n == m { 1.0 } else { 0.0 };
            assert!((s - target).abs() < 1e-8, "n={n} m={m}: {s}");
        }
    }
}

#[test]
fn spherical_harmonics_orthonormal_by_dense_quadrature() {
    let lmax = 6;
    let (ct, wt) = composite_gauss_legendre(-1.0, 1.0, 4, 16);
    let nphi = 64;
    let mut basis = Vec::new();
    for l in (0..=lmax).step_by(2) {
        for m in -(l as i64)..=(l as i64) {
            basis.push((l, m));
        }
    }
    for (i, &(l1, m1)) in basis.iter().enumerate() {
        for &(l2, m2) in &basis[i..] {
            let mut s = 0.0;
            for (z, w) in ct.iter().zip(&wt) {
                let theta = z.acos();
                for k in 0..nphi {
                    let phi = std::f64::consts::TAU * k as f64 / nphi as f64;
                    s += w * std::f64::consts::TAU / nphi as f64
                        * real_sph_harm(l1, m1, theta, phi)
                        * real_sph_harm(l2, m2, theta, phi);
                }
            }
            let target = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!((s - target).abs() < 1e-10, "({l1},{m1}) vs ({l2},{m2}): {s}");
        }
    }
}

#[test]
fn bessel_matches_power_series() {
    // j_l(x) = Σ_k (-1)^k x^{2k+l} / (2^k k! (2l+2k+1)!!)
    let series = |l: usize, x: f64| {
        let mut sum = 0.0;
        let mut term = x.powi(l as i32) / (1..=l).map(|j| (2 * j + 1) as f64).product::<f64>();
        for k in 0..80 {
            sum += term;
            term *= -x * x / (2.0 * (k + 1) as f64 * (2 * l + 2 * k + 3) as f64);
        }
        sum
    };
    for &(l, x) in &[(0usize, 0.5), (2, 3.0), (4, 10.0), (6, 7.5), (10, 12.0)] {
        let a = sph_bessel(l, x);
        let b = series(l, x);
        assert!((a - b).abs() < 1e-10, "l={l} x={x}: {a} vs {b}");
    }
}

#[test]
fn even_index_is_dense_and_ordered() {
    let mut expected = 0;
    for l in (0..=12usize).step_by(2) {
        for m in -(l as i64)..=(l as i64) {
            assert_eq!(even_index(l, m), expected);
            expected += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn laguerre_matches_closed_forms(x in 0.0f64..40.0) {
        for n in 0..=6 {
            let a = laguerre_half(n, x);
            let b = laguerre_half_series(n, x);
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "n={} x={}: {} vs {}", n, x, a, b);
        }
    }

    #[test]
    fn quadrature_integrates_polynomial_moments_exactly(n_order in 1usize..=8, zeta_index in 0usize..3, degree_frac in 0.0f64..1.0) {
        // ∫_0^∞ x^k e^{-x} x^{1/2} dx = Γ(k + 3/2) for every k ≤ 2N − 1.
        let zeta = [0.1, 1.0, 37.0][zeta_index];
        let rq = RadialQuadrature::new(n_order, zeta).unwrap();
        let k = ((2 * n_order - 1) as f64 * degree_frac).round() as i32;
        let weights = rq.standard_weights();
        let nodes = laguerre_roots(n_order).unwrap();
        let s: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(k)).sum();
        let gamma = (0..k).fold(std::f64::consts::PI.sqrt() / 2.0, |acc, j| acc * (j as f64 + 1.5));
        prop_assert!((s - gamma).abs() <= 1e-10 * gamma, "N={} k={}: {} vs {}", n_order, k, s, gamma);
    }

    #[test]
    fn radial_functions_orthonormal_under_quadrature(n_order in 1usize..=8, zeta_index in 0usize..3) {
        let zeta = [0.1, 1.0, 37.0][zeta_index];
        let rq = RadialQuadrature::new(n_order, zeta).unwrap();
        for n in 0..n_order {
            for m in 0..n_order {
                let s = rq.integrate(|q| radial_function(n, q, zeta) * radial_function(m, q, zeta));
                let target = if n == m { 1.0 } else { 0.0 };
                prop_assert!((s - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn even_harmonics_are_antipodally_symmetric(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU) {
        for l in (0..=10usize).step_by(2) {
            for m in -(l as i64)..=(l as i64) {
                let a = real_sph_harm(l, m, theta, phi);
                let b = real_sph_harm(l, m, std::f64::consts::PI - theta, phi + std::f64::consts::PI);
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
