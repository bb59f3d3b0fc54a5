//! Experiment harness and command-line tests.

use std::path::Path;

use qspace_spf::harness::cli::run;
use qspace_spf::harness::{mean_error, Config, EvaluationGrid, Pipelines, SchemeKind};
use qspace_spf::math::{even_degrees, radial_function, real_sph_harm, to_spherical};
use qspace_spf::models::{isotropic_model, random_rotation};
use qspace_spf::transforms::SpfCoefficients;

fn cli(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["qspace".to_string(), "--out".into(), out.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn sample_coefficients() -> SpfCoefficients {
    let mut c = SpfCoefficients::zeros(3, 5, 0.5);
    for (k, v) in c.values_mut().iter_mut().enumerate() {
        *v = ((k * 7 % 5) as f64 - 2.0) / 10.0;
    }
    c
}

#[test]
fn evaluation_grid_is_uniform_in_the_ball_and_seeded() {
    let g = EvaluationGrid::new(10_000, 3.0, 7);
    assert_eq!(g.points.len(), 10_000);
    assert_eq!(g.points, EvaluationGrid::new(10_000, 3.0, 7).points);
    assert_ne!(g.points, EvaluationGrid::new(10_000, 3.0, 8).points);
    let radii: Vec<f64> = g.points.iter().map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()).collect();
    assert!(radii.iter().all(|&r| r <= 3.0));
    // Uniform density: the inner half-radius ball holds one eighth of the points.
    let inner = radii.iter().filter(|&&r| r <= 1.5).count() as f64 / 10_000.0;
    assert!((inner - 0.125).abs() < 0.01, "{inner}");
    let upper = g.points.iter().filter(|p| p[2] > 0.0).count() as f64 / 10_000.0;
    assert!((upper - 0.5).abs() < 0.01);
}

#[test]
fn mean_error_examples() {
    let c = sample_coefficients();
    let grid = EvaluationGrid::new(10_000, 2.0, 3);
    let synth = |p: &[f64; 3]| {
        let q = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let (theta, phi) = to_spherical(p);
        let mut s = 0.0;
        for n in 0..3 {
            for (l, m) in even_degrees(5) {
                s += c.get(n, l, m) * radial_function(n, q, 0.5) * real_sph_harm(l, m, theta, phi);
            }
        }
        s
    };
    assert!(mean_error(synth, &c, &grid) < 1e-14);
    assert!((mean_error(|p| synth(p) + 0.01, &c, &grid) - 0.01).abs() < 1e-12);
    // Naive two-loop recomputation on a 100-point subgrid.
    let sub = EvaluationGrid { points: grid.points[..100].to_vec(), ..grid.clone() };
    let truth = |p: &[f64; 3]| (-(p[0] * p[0] + 2.0 * p[1] * p[1] + 0.5 * p[2] * p[2])).exp();
    let mut naive = 0.0;
    for p in &sub.points {
        naive += (truth(p) - synth(p)).abs();
    }
    naive /= 100.0;
    assert!((mean_error(truth, &c, &sub) - naive).abs() < 1e-14);
}

#[test]
fn isotropic_control_is_reconstructed_and_rotation_blind() {
    let config = Config::default();
    let p = Pipelines::new(&config).unwrap();
    let report = p.reconstruction();
    let iso: Vec<_> = report.recon.iter().filter(|r| r.model == "isotropic_control").collect();
    assert_eq!(iso.len(), 2);
    assert!(iso.iter().all(|r| r.e_mean < 1e-4), "{iso:?}");
    let control = p.isotropic_control();
    for kind in SchemeKind::ALL {
        let errors: Vec<f64> = config
            .rotation_seeds()
            .iter()
            .map(|&s| p.mean_error(kind, &control.rotated(&random_rotation(s))).unwrap())
            .collect();
        assert_eq!(errors.len(), 30);
        assert!(errors.iter().all(|e| (e - errors[0]).abs() < 1e-12), "{}", kind.name());
    }
    // A generic isotropic model is also rotation-blind.
    let generic = isotropic_model(0.7e-3);
    let a = p.mean_error(SchemeKind::Geem, &generic).unwrap();
    let b = p.mean_error(SchemeKind::Geem, &generic.rotated(&random_rotation(5))).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn rotation_experiment_shares_seeds_across_schemes() {
    let mut config = Config::default();
    config.experiment.rotations = 6;
    let p = Pipelines::new(&config).unwrap();
    let report = p.rotation();
    let seeds = |scheme: &str| report.rotation.iter().filter(|r| r.scheme == scheme).map(|r| r.seed).collect::<Vec<_>>();
    assert_eq!(seeds("proposed"), seeds("geem"));
    assert_eq!(seeds("proposed"), config.rotation_seeds());
    assert_eq!(report.summary.len(), 2);
}

#[test]
fn angular_experiment_resolves_right_angle_crossing() {
    let mut config = Config::default();
    config.experiment.angle_start_deg = 90.0;
    let report = Pipelines::new(&config).unwrap().angular();
    let row = report.angular.iter().find(|r| r.scheme == "proposed").unwrap();
    assert_eq!(row.angle_deg, 90.0);
    assert_eq!(row.detected_count, 2);
    assert!(row.mean_angular_error_deg <= 2.5, "{}", row.mean_angular_error_deg);
}

#[test]
fn reports_embed_the_resolved_configuration() {
    let config = Config::default();
    let report = Pipelines::new(&config).unwrap().reconstruction();
    let dir = tempfile::tempdir().unwrap();
    report.write(dir.path()).unwrap();
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("recon_report.json")).unwrap()).unwrap();
    let embedded: Config = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&embedded).unwrap(), serde_json::to_value(&config).unwrap());
    assert!(json["config"]["geem"]["lambda_l"].is_number());
    assert!(json.get("wall_clock_seconds").is_none());
}

#[test]
fn design_command_writes_all_132_samples() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(dir.path(), &["design", "--bmax", "8000", "--shells", "4"]), 0);
    let bval = std::fs::read_to_string(dir.path().join("scheme.bval")).unwrap();
    assert_eq!(bval.split_whitespace().count(), 132);
    let bvec = std::fs::read_to_string(dir.path().join("scheme.bvec")).unwrap();
    assert!(bvec.lines().all(|l| l.split_whitespace().count() == 132));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("scheme.json")).unwrap()).unwrap();
    let total: usize = json["shells"].as_array().unwrap().iter().map(|s| s["points"].as_array().unwrap().len()).sum();
    assert_eq!(total, 132);
}

#[test]
fn recon_command_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(cli(a.path(), &["recon", "--seed", "7"]), 0);
    assert_eq!(cli(b.path(), &["recon", "--seed", "7"]), 0);
    for name in ["recon.csv", "recon.dat", "recon_report.json"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn angular_command_writes_thirteen_angles_per_scheme() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(dir.path(), &["angular", "--step", "5"]), 0);
    let csv = std::fs::read_to_string(dir.path().join("angular.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "angle_deg,scheme,detected_count,mean_angular_error_deg");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 26);
    assert_eq!(rows.iter().filter(|r| r.contains(",proposed,")).count(), 13);
    assert!(dir.path().join("peaks.csv").exists());
}

#[test]
fn geem_command_writes_baseline_and_energy_log() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(dir.path(), &["geem", "--iterations", "50", "--seed", "3"]), 0);
    let bval = std::fs::read_to_string(dir.path().join("geem.bval")).unwrap();
    assert_eq!(bval.split_whitespace().count(), 132);
    let log = std::fs::read_to_string(dir.path().join("geem_energy.dat")).unwrap();
    let mut lines = log.lines();
    assert_eq!(lines.next(), Some("iteration energy"));
    let energies: Vec<f64> = lines.map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    assert!(energies.len() >= 50);
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn configuration_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(dir.path(), &["design", "--shells", "3"]), 1);
    assert_eq!(cli(dir.path(), &["design", "--bmax", "-5"]), 1);
    assert_eq!(cli(dir.path(), &["design", "--bmax=-5"]), 1);
    assert_eq!(cli(dir.path(), &["no-such-command"]), 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"scheme": {"b_max": 8000, "unknown_key": 1}}"#).unwrap();
    assert_eq!(cli(dir.path(), &["--config", bad.to_str().unwrap(), "recon"]), 1);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(cli(dir.path(), &["--config", bad.to_str().unwrap(), "recon"]), 1);
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_qspace");
    let ok = std::process::Command::new(exe).args(["design", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(ok.code(), Some(0));
    let bad = std::process::Command::new(exe).args(["design", "--shells", "2", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(bad.code(), Some(1));
}
