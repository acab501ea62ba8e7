use std::path::Path;
use std::process::Command;

use prcurve::{estimate_curves, CurveKind, DistributionSpec, EstimatorConfig, Method, SampleSet};
use prcurve_cli::io::{read_curve, read_matrix, write_matrix_binary, write_matrix_csv};
use prcurve_cli::{run_experiment, sample, ExperimentConfig, Preset};

fn prcurve(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_prcurve")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn small_pair(dir: &Path) -> (SampleSet, SampleSet) {
    let x = DistributionSpec::standard(3).sample(120, 1, 0).unwrap();
    let y = DistributionSpec::shifted(3, 0.5).sample(100, 1, 1).unwrap();
    write_matrix_csv(&dir.join("x.csv"), &x).unwrap();
    write_matrix_binary(&dir.join("y.bin"), &y).unwrap();
    (x, y)
}

#[test]
fn matrices_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = small_pair(dir.path());
    assert_eq!(read_matrix(&dir.path().join("x.csv")).unwrap().data(), x.data());
    assert_eq!(read_matrix(&dir.path().join("y.bin")).unwrap().data(), y.data());
    let raw = std::fs::read(dir.path().join("y.bin")).unwrap();
    assert_eq!(&raw[..8], b"PRCMATF8");
    assert_eq!(u64::from_le_bytes(raw[8..16].try_into().unwrap()), 100);
    assert_eq!(u64::from_le_bytes(raw[16..24].try_into().unwrap()), 3);
    std::fs::write(dir.path().join("bad.bin"), &raw[..raw.len() - 8]).unwrap();
    assert!(read_matrix(&dir.path().join("bad.bin")).is_err());
    std::fs::write(dir.path().join("ragged.csv"), "1,2\n3\n").unwrap();
    assert!(read_matrix(&dir.path().join("ragged.csv")).is_err());
}

#[test]
fn estimate_command_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = small_pair(dir.path());
    let out = dir.path().join("curves");
    prcurve(&[
        "estimate",
        dir.path().join("x.csv").to_str().unwrap(),
        dir.path().join("y.bin").to_str().unwrap(),
        "--method",
        "knn,coverage",
        "--k",
        "5",
        "--lambda-points",
        "51",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    let cfg = EstimatorConfig {
        k_rule: prcurve::KRule::Fixed(5),
        lambda_grid_size: 51,
        gamma_search: prcurve::GammaSearch::Grid(51),
        seed: 3,
        ..Default::default()
    };
    let want = estimate_curves(&x, &y, &[Method::Knn, Method::Coverage], &cfg).unwrap();
    for (m, c) in ["knn", "coverage"].iter().zip(&want) {
        let got = read_curve(&out.join(format!("{m}.csv")), CurveKind::Empirical).unwrap();
        assert_eq!(got.alphas(), c.alphas());
    }
}

#[test]
fn sampling_examples() {
    let gmm = DistributionSpec::gmm_diagonal(4, &[1.0, 0.0, 0.0, 0.0], &[2.0, -5.0, 3.0, 5.0]);
    let s = sample(&gmm, 4000, 2, 0, None).unwrap();
    for j in 0..4 {
        let mean = s.rows().map(|r| r[j]).sum::<f64>() / 4000.0;
        assert!((mean - 2.0).abs() < 4.0 / 4000f64.sqrt());
    }
    let shifted = DistributionSpec::shifted(64, 3.0 / 8.0);
    let s = sample(&shifted, 10_000, 3, 0, None).unwrap();
    for j in 0..64 {
        let mean = s.rows().map(|r| r[j]).sum::<f64>() / 10_000.0;
        assert!((mean - 0.375).abs() < 4.0 / 100.0, "coordinate {j}");
    }
    let o = vec![4.0; 64];
    let s = sample(&shifted, 50, 3, 0, Some(&o)).unwrap();
    assert_eq!(s.n(), 50);
    assert_eq!(s.row(49), &o[..]);
    let plain = sample(&shifted, 50, 3, 0, None).unwrap();
    assert_eq!(s.row(48), plain.row(48));
}

fn tiny_config(preset: Preset) -> ExperimentConfig {
    ExperimentConfig {
        n: 150,
        n_seeds: 3,
        n_gt: 5000,
        lambda_points: 41,
        gamma_points: 41,
        ..ExperimentConfig::preset(preset).with_dim(4)
    }
}

#[test]
fn experiment_outputs_are_complete_and_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = tiny_config(Preset::Shift);
    let run = run_experiment(&cfg, Some(a.path())).unwrap();
    run_experiment(&cfg, Some(b.path())).unwrap();
    let mut files = Vec::new();
    for seed in &run.seeds {
        for m in Method::ALL {
            files.push(format!("curves/{m}_{seed}.csv"));
        }
    }
    for m in Method::ALL {
        for part in ["mean", "lo", "hi"] {
            files.push(format!("aggregate/{m}_{part}.csv"));
        }
    }
    files.push("gt.csv".into());
    files.push("summary.json".into());
    for f in &files {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between identical runs");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "complete");
    assert_eq!(manifest["completed_seeds"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["ground_truth"], "monte_carlo");
    assert_eq!(manifest["config"]["n"], 150);
    assert!(manifest["methods"][0]["iou_mean"].as_f64().unwrap() > 0.0);
    for r in &run.methods {
        let agg = &r.aggregate;
        for ((lo, m), hi) in agg.lo.alphas().iter().zip(agg.mean.alphas()).zip(agg.hi.alphas()) {
            assert!(*lo <= m && m <= hi);
        }
    }
}

#[test]
fn failed_runs_leave_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig { n: 3, ..tiny_config(Preset::PqEqual) };
    assert!(run_experiment(&cfg, Some(dir.path())).is_err());
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "failed");
    assert!(manifest["error"].as_str().unwrap().contains("seed"));
}

#[test]
fn experiment_command_accepts_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"preset": "custom", "dim": 2, "n": 100, "n_seeds": 2, "lambda_points": 21, "gamma_points": 21,
            "p_spec": {"variant": "shifted_gaussian", "d": 2, "mu": [0.0, 0.0]},
            "q_spec": {"variant": "scaled_gaussian", "d": 2, "psi": 0.5}}"#,
    )
    .unwrap();
    let out = dir.path().join("run");
    let stdout = prcurve(&[
        "experiment",
        "--config",
        cfg_path.to_str().unwrap(),
        "--method",
        "knn",
        "--no-split",
        "--out",
        out.to_str().unwrap(),
    ])
    .stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert!(text.contains("Analytic"), "{text}");
    assert!(out.join("aggregate/knn_mean.csv").exists());
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["split_ratio"], 1.0);
}

#[test]
fn gt_and_summarize_commands() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("gt.csv");
    prcurve(&["gt", "--preset", "scale", "--psi", "0.5", "--dim", "4", "--lambda-points", "101", "--out", gt.to_str().unwrap()]);
    let curve = read_curve(&gt, CurveKind::Analytic).unwrap();
    assert_eq!(curve.len(), 101);
    let stdout = prcurve(&["summarize", gt.to_str().unwrap(), "--reference", gt.to_str().unwrap()]).stdout;
    let report: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(report["iou_vs_reference"], 1.0);
    assert_eq!(report["b"], 8.0);
}

#[test]
fn table_commands() {
    let stdout = prcurve(&["consistency", "--p", "0.3", "--k", "10,100", "--lambda", "1"]).stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(text.lines().next(), Some("p,k,lambda,mu,limit,gap,bound"));
    assert_eq!(text.lines().count(), 3);

    let stdout = prcurve(&["chernoff", "--psi", "2", "--dim", "3", "--lambda-points", "11"]).stdout;
    let text = String::from_utf8(stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(f[1] <= f[2], "{line}");
    }
}

#[test]
fn scalars_command() {
    let dir = tempfile::tempdir().unwrap();
    small_pair(dir.path());
    let x = dir.path().join("x.csv");
    let stdout = prcurve(&["scalars", x.to_str().unwrap(), x.to_str().unwrap(), "--k", "3"]).stdout;
    let v: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert_eq!(v["ipr"]["precision"], 1.0);
    assert_eq!(v["coverage"]["recall"], 1.0);
    let stdout = prcurve(&[
        "scalars",
        x.to_str().unwrap(),
        dir.path().join("y.bin").to_str().unwrap(),
        "--ppr-form",
        "as-written",
    ])
    .stdout;
    let v: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert!(v["ppr"]["precision"].as_f64().unwrap() >= 0.0);
}
