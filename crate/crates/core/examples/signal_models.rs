//! Builds Gaussian mixture models, evaluates their signals and analytic
//! ODFs, and round-trips a model through its JSON description.
//!
//! ```text
//! cargo run --example signal_models
//! ```

use qspace_spf::models::{random_rotation, reference_models, ModelFile, FIBER_DIFFUSIVITIES};

fn main() -> qspace_spf::Result<()> {
    for (name, model) in reference_models(FIBER_DIFFUSIVITIES) {
        let axis = model.fiber_directions()[0];
        let across = [-axis[1], axis[0], 0.0];
        println!(
            "{name:14} E(b=3000, along) = {:.4}  E(b=3000, across) = {:.4}  ODF(axis) = {:.4}",
            model.eval_signal(3000.0, &axis),
            model.eval_signal(3000.0, &across),
            model.ground_truth_odf(&axis)
        );
    }

    let (_, model) = reference_models(FIBER_DIFFUSIVITIES).remove(1);
    let rotated = model.rotated(&random_rotation(42));
    let json = serde_json::to_string_pretty(&rotated.to_file())?;
    println!("{json}");
    let restored = serde_json::from_str::<ModelFile>(&json)?.to_model()?;
    let v = [0.6, 0.0, 0.8];
    println!(
        "restored model signal matches: {:.3e}",
        (restored.eval_signal(2000.0, &v) - rotated.eval_signal(2000.0, &v)).abs()
    );
    Ok(())
}
