//! Generates the electrostatic-energy baseline scheme and fits a signal to
//! it with regularized least squares.
//!
//! ```text
//! cargo run --release --example geem_baseline -- [iterations]
//! ```

use qspace_spf::harness::{model_mean_error, EvaluationGrid};
use qspace_spf::models::{sample_model, single_fiber, FIBER_DIFFUSIVITIES};
use qspace_spf::sampling::{
    design_scheme, evenly_spaced_radii, generate_geem, min_pairwise_angle, GeemConfig, ThetaPolicy,
    DEFAULT_BAND_LIMITS,
};
use qspace_spf::transforms::{regularized_ls_fit, LsqSettings};

fn main() -> qspace_spf::Result<()> {
    let iterations = std::env::args().nth(1).map_or(10_000, |s| s.parse().expect("iterations must be an integer"));
    let proposed = design_scheme(8000.0, 4, &DEFAULT_BAND_LIMITS, &ThetaPolicy::default())?;
    let radii = evenly_spaced_radii(proposed.q_min(), proposed.q_max(), 4);
    let config = GeemConfig { iterations, ..GeemConfig::default() };
    let geem = generate_geem(&proposed.point_counts(), &radii, &config)?;

    println!("energy {:.6} after {} iterations", geem.energy, geem.iteration_log.len());
    for shell in &geem.shells {
        println!(
            "  b = {:8.1}  points = {:3}  min angle = {:6.2}°",
            shell.b_value(),
            shell.directions.len(),
            min_pairwise_angle(&shell.directions).to_degrees()
        );
    }

    let settings = LsqSettings { zeta: proposed.zeta, ..LsqSettings::default() };
    let model = single_fiber(FIBER_DIFFUSIVITIES);
    let fit = regularized_ls_fit(&geem, &sample_model(&model, &geem), &settings)?;
    let grid = EvaluationGrid::new(10_000, proposed.q_max(), 7);
    let e = model_mean_error(&model, &fit.coefficients, &grid);
    println!("single fiber: residual {:.3e}, E_mean {e:.4e} (log10 {:.3})", fit.residual_norm, e.log10());
    Ok(())
}
