//! Exit gate. Prints one line per criterion and fails if any of them fails.

use mscps::experiment::{run_experiment, ExperimentConfig, ExperimentOutput};
use mscps::generate::{full_factorial, GenParams, Grid};
use mscps::verify::{
    check_gamma_transform, check_independent_sets, check_label_quality, check_monte_carlo, check_offline_bound,
    check_zero_horizon, CheckResult,
};
use mscps_core::stats::{mean, sign_test_one_sided};
use mscps_core::Setting;

const SEED: u64 = 20_240_601;
const SIGN_TEST_LEVEL: f64 = 0.05;

fn coordination_config() -> ExperimentConfig {
    ExperimentConfig {
        name: "acceptance".into(),
        seed: SEED,
        runs: 100,
        settings: vec!["DEC".into(), "DEC-I-c".into(), "DEC-N".into(), "CEN-RO".into()],
        base: GenParams {
            agents: 5,
            start_radius: 300.0,
            search_radius: 2000.0,
            start_horizon: 0.0,
            mean_availability: 0.25,
            ..GenParams::default()
        },
        replicates: 20,
        ..ExperimentConfig::default()
    }
}

fn alphas(out: &ExperimentOutput, setting: Setting) -> Vec<f64> {
    out.cells
        .iter()
        .filter(|c| c.setting == setting)
        .map(|c| c.metrics.alpha_hat)
        .collect()
}

fn directional(name: &'static str, out: &ExperimentOutput, better: Setting, base: Setting) -> CheckResult {
    let x = alphas(out, better);
    let y = alphas(out, base);
    let t = sign_test_one_sided(&x, &y);
    let (mx, my) = (mean(&x), mean(&y));
    CheckResult {
        name,
        passed: x.len() == 20 && mx <= my && t.p_value < SIGN_TEST_LEVEL,
        detail: format!(
            "mean {better} {mx:.2} vs {base} {my:.2}, {}/{}/{} wins/losses/ties, p = {:.2e}",
            t.wins, t.losses, t.ties, t.p_value
        ),
    }
}

#[test]
fn acceptance() {
    let mut results = vec![
        check_independent_sets(200, SEED),
        check_gamma_transform(500, SEED),
        check_label_quality(100, SEED),
        check_monte_carlo(10_000, SEED),
        check_offline_bound(20, 100, SEED),
    ];

    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let cfg = coordination_config();
    let out = run_experiment(&cfg, first.path()).unwrap();
    results.push(directional(
        "collaborative intentions beat selfish planning",
        &out,
        Setting::DecI { collaborative: true },
        Setting::Dec,
    ));
    results.push(directional(
        "rollout beats greedy",
        &out,
        Setting::CenRo,
        Setting::Greedy,
    ));
    results.push(check_zero_horizon(1000, SEED));

    let configs = full_factorial(&GenParams::default(), &Grid::standard()).len();
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(first.path().join("metadata.json")).unwrap()).unwrap();
    let (beta, budget) = (meta["beta_global"].as_f64(), meta["budget"].as_f64());
    results.push(CheckResult {
        name: "experimental protocol",
        passed: configs == 216 && beta == Some(700.0) && budget == Some(5.0),
        detail: format!("{configs} configurations, metadata beta_global {beta:?}, budget {budget:?}"),
    });

    run_experiment(&cfg, second.path()).unwrap();
    let mut differing = Vec::new();
    for f in ["runs.csv", "summary.csv", "positions.csv", "comparison.csv"] {
        let a = std::fs::read(first.path().join(f)).unwrap();
        let b = std::fs::read(second.path().join(f)).unwrap();
        if a != b {
            differing.push(f);
        }
    }
    results.push(CheckResult {
        name: "determinism",
        passed: differing.is_empty(),
        detail: if differing.is_empty() {
            "4 CSV files byte-identical across two runs".into()
        } else {
            format!("differing: {differing:?}")
        },
    });

    for (k, r) in results.iter().enumerate() {
        println!("criterion {:>2} {r}", k + 1);
    }
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.passed)
        .map(|(k, _)| k + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
