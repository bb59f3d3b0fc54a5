//! Samples a two-fiber signal on the quadrature scheme, transforms it to SPF
//! coefficients and measures the reconstruction error over q-space.
//!
//! ```text
//! cargo run --release --example spf_roundtrip
//! ```

use qspace_spf::harness::{model_mean_error, EvaluationGrid};
use qspace_spf::math::even_degrees;
use qspace_spf::models::{crossing_fibers, sample_model, FIBER_DIFFUSIVITIES};
use qspace_spf::sampling::{design_scheme, ThetaPolicy, DEFAULT_BAND_LIMITS};
use qspace_spf::transforms::{spf_synthesize, SpfCoefficients, SpfTransform};

fn main() -> qspace_spf::Result<()> {
    let scheme = design_scheme(8000.0, 4, &DEFAULT_BAND_LIMITS, &ThetaPolicy::default())?;
    let transform = SpfTransform::new(&scheme)?;

    // Exact round trip for a signal inside the band-limit of every shell.
    let mut exact = SpfCoefficients::zeros(4, scheme.max_band_limit(), scheme.zeta);
    for n in 0..4 {
        for (l, m) in even_degrees(3) {
            exact.set(n, l, m, 1.0 / (1 + n + l + m.unsigned_abs() as usize) as f64);
        }
    }
    let samples: Vec<Vec<f64>> = scheme
        .shells
        .iter()
        .map(|s| {
            let pts: Vec<[f64; 3]> = s.grid.points().iter().map(|p| p.map(|x| x * s.q_radius)).collect();
            spf_synthesize(&exact, &pts)
        })
        .collect();
    let back = transform.forward(&samples)?;
    let diff: f64 = back.values().iter().zip(exact.values()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    println!("band-limited round trip: relative error {:.2e}", diff / exact.norm());

    // A physical signal is not band-limited; measure the error on a q-space grid.
    let model = crossing_fibers(FIBER_DIFFUSIVITIES, 60.0);
    let coeffs = transform.forward(&sample_model(&model, &scheme))?;
    let grid = EvaluationGrid::new(10_000, scheme.q_max(), 7);
    let e = model_mean_error(&model, &coeffs, &grid);
    println!("60° crossing: E_mean = {e:.4e} (log10 {:.3})", e.log10());
    for n in 0..4 {
        let energy: f64 = coeffs.radial_slice(n).iter().map(|c| c * c).sum();
        println!("  radial order {n}: coefficient energy {energy:.4e}");
    }
    Ok(())
}
