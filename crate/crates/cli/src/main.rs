use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use prcurve::consistency::{consistency_sweep, write_sweep_csv};
use prcurve::oracles::{analytic_alpha_scale, chernoff_bound, chernoff_coefficient};
use prcurve::{
    estimate_curves, extreme_scalar, summarize, CurveKind, EstimatorConfig, ExtremeMethod, ExtremeParams,
    GammaSearch, KRule, LambdaGrid, Method, PprForm, PrCurve,
};
use prcurve_cli::experiment::ground_truth;
use prcurve_cli::io::{read_curve, read_matrix, write_atomic, write_curve};
use prcurve_cli::{run_experiment, ExperimentConfig, Preset};

#[derive(Parser)]
#[command(name = "prcurve", version, about = "Precision-recall curves between two samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-truth curve of a preset distribution pair.
    Gt(GtArgs),
    /// Curve between two sample matrices.
    Estimate(EstimateArgs),
    /// Multi-seed experiment with aggregation and IoU against ground truth.
    Experiment(ExperimentArgs),
    /// Scalar summary of a curve file, as JSON.
    Summarize(SummarizeArgs),
    /// Sweep of the binomial risk μ_λ(p) and its limit.
    Consistency(ConsistencyArgs),
    /// Chernoff bound against the closed-form curve of the scale pair.
    Chernoff(ChernoffArgs),
    /// Extreme-value scalars between two sample matrices, as JSON.
    Scalars(ScalarsArgs),
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: prcurve::Error| e.to_string())
}

fn parse_k_rule(s: &str) -> Result<KRule, String> {
    match s {
        "sqrt_n" | "sqrt-n" => Ok(KRule::SqrtN),
        _ => Err(format!("unknown k rule {s:?}; use sqrt_n or --k <int>")),
    }
}

fn parse_ppr_form(s: &str) -> Result<PprForm, String> {
    s.parse().map_err(|e: prcurve::Error| e.to_string())
}

#[derive(Args, Clone)]
struct EstimatorArgs {
    /// Classifier families (repeat or comma-separate).
    #[arg(long = "method", value_delimiter = ',', value_parser = parse_method)]
    methods: Vec<Method>,
    /// Fixed neighbor rank.
    #[arg(long, conflicts_with = "k_rule")]
    k: Option<usize>,
    #[arg(long, value_parser = parse_k_rule)]
    k_rule: Option<KRule>,
    /// Neighbor rank behind the Parzen bandwidth; defaults to k.
    #[arg(long)]
    parzen_k: Option<usize>,
    /// Fraction of each sample used to fit the classifiers.
    #[arg(long, conflicts_with = "no_split")]
    split: Option<f64>,
    #[arg(long)]
    no_split: bool,
    #[arg(long)]
    lambda_points: Option<usize>,
    #[arg(long)]
    gamma_points: Option<usize>,
}

impl EstimatorArgs {
    fn k_rule(&self) -> Option<KRule> {
        self.k.map(KRule::Fixed).or(self.k_rule)
    }

    fn split_ratio(&self) -> Option<f64> {
        if self.no_split {
            Some(1.0)
        } else {
            self.split
        }
    }
}

#[derive(Args)]
struct SettingArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// JSON experiment config; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    shift: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
}

impl SettingArgs {
    fn config(&self, default: Preset) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => ExperimentConfig::preset(self.preset.unwrap_or(default)),
        };
        if let (Some(p), Some(_)) = (self.preset, &self.config) {
            if p != cfg.preset {
                bail!("--preset {p:?} disagrees with the config file");
            }
        }
        if let Some(d) = self.dim {
            cfg = cfg.with_dim(d);
        }
        if let Some(s) = self.shift {
            cfg.shift = s;
        }
        if let Some(psi) = self.psi {
            cfg.psi = psi;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct GtArgs {
    #[command(flatten)]
    setting: SettingArgs,
    #[arg(long)]
    lambda_points: Option<usize>,
    /// Monte-Carlo sample size per distribution when no closed form exists.
    #[arg(long)]
    n_gt: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Sample of P (CSV or binary matrix).
    x: PathBuf,
    /// Sample of Q.
    y: PathBuf,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Search every realizable classifier instead of the γ grid.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for `<method>.csv`; with a single method and no directory
    /// the curve goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    setting: SettingArgs,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Points per sample.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    /// Master seed; run i uses seed + i·stride.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_gt: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    curve: PathBuf,
    /// Reference curve for the IoU.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = 8.0)]
    b: f64,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long = "p", value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5, 0.7, 0.9])]
    ps: Vec<f64>,
    #[arg(long = "k", value_delimiter = ',', default_values_t = [10, 100, 1000, 10000])]
    ks: Vec<u64>,
    #[arg(long = "lambda", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    lambdas: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChernoffArgs {
    #[arg(long, default_value_t = 0.5)]
    psi: f64,
    #[arg(long, default_value_t = 8)]
    dim: usize,
    #[arg(long, default_value_t = 201)]
    lambda_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalarsArgs {
    x: PathBuf,
    y: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    k_prime: usize,
    #[arg(long, value_parser = parse_ppr_form, default_value = "complement")]
    ppr_form: PprForm,
}

fn main() -> Result<()> {
    let result = match Cli::parse().command {
        Command::Gt(a) => gt(a),
        Command::Estimate(a) => estimate(a),
        Command::Experiment(a) => experiment(a),
        Command::Summarize(a) => summarize_cmd(a),
        Command::Consistency(a) => consistency(a),
        Command::Chernoff(a) => chernoff(a),
        Command::Scalars(a) => scalars(a),
    };
    // a closed downstream pipe (`| head`) is not an error
    match result {
        Err(e) if e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)) => Ok(()),
        other => other,
    }
}

/// Runs `body` against the file at `out`, or standard output.
fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn gt(a: GtArgs) -> Result<()> {
    let mut cfg = a.setting.config(Preset::Scale)?;
    if let Some(n) = a.n_gt {
        cfg.n_gt = n;
    }
    let (p, q) = cfg.specs()?;
    let grid = LambdaGrid::new(a.lambda_points.unwrap_or(cfg.lambda_points))?;
    let (curve, source) = ground_truth(&p, &q, &grid, cfg.n_gt, a.seed)?;
    eprintln!("ground truth: {source:?}");
    emit(a.out.as_deref(), |w| Ok(curve.write_csv(w)?))
}

fn estimate(a: EstimateArgs) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let y = read_matrix(&a.y)?;
    let methods = if a.est.methods.is_empty() { vec![Method::Knn] } else { a.est.methods.clone() };
    let defaults = EstimatorConfig::default();
    let lambda_points = a.est.lambda_points.unwrap_or(defaults.lambda_grid_size);
    let cfg = EstimatorConfig {
        method: methods[0],
        k_rule: a.est.k_rule().unwrap_or(defaults.k_rule),
        parzen_k: a.est.parzen_k,
        split_ratio: a.est.split_ratio().unwrap_or(defaults.split_ratio),
        lambda_grid_size: lambda_points,
        gamma_search: if a.exact {
            GammaSearch::Exact
        } else {
            GammaSearch::Grid(a.est.gamma_points.unwrap_or(lambda_points))
        },
        seed: a.seed,
    };
    let curves = estimate_curves(&x, &y, &methods, &cfg)?;
    match &a.out {
        Some(dir) => {
            for (m, c) in methods.iter().zip(&curves) {
                write_curve(&dir.join(format!("{m}.csv")), c)?;
            }
            Ok(())
        }
        None if curves.len() == 1 => emit(None, |w| Ok(curves[0].write_csv(w)?)),
        None => bail!("several methods need --out <dir>"),
    }
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let mut cfg = a.setting.config(Preset::Shift)?;
    if !a.est.methods.is_empty() {
        cfg.methods = a.est.methods.clone();
    }
    if let Some(k) = a.est.k_rule() {
        cfg.k_rule = k;
    }
    if a.est.parzen_k.is_some() {
        cfg.parzen_k = a.est.parzen_k;
    }
    if let Some(s) = a.est.split_ratio() {
        cfg.split_ratio = s;
    }
    if let Some(n) = a.est.lambda_points {
        cfg.lambda_points = n;
    }
    if let Some(n) = a.est.gamma_points {
        cfg.gamma_points = n;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(n) = a.seeds {
        cfg.n_seeds = n;
    }
    if let Some(s) = a.seed {
        cfg.master_seed = s;
    }
    if let Some(n) = a.n_gt {
        cfg.n_gt = n;
    }
    let run = run_experiment(&cfg, Some(&a.out))?;
    emit(None, |w| {
        writeln!(w, "ground truth: {:?}", run.gt_source)?;
        writeln!(w, "{:<10} {:>9} {:>9} {:>10} {:>9} {:>9} {:>9}", "method", "iou", "iou_sd", "iou(mean)", "max_sd", "F_b", "F_1/b")?;
        for r in &run.methods {
            writeln!(
                w,
                "{:<10} {:>9.4} {:>9.4} {:>10.4} {:>9.4} {:>9.4} {:>9.4}",
                r.method.as_str(),
                r.iou_mean,
                r.iou_sd,
                r.iou_of_mean_curve,
                r.max_sigma,
                r.summary.f_b,
                r.summary.f_inv_b
            )?;
        }
        Ok(())
    })
}

fn summarize_cmd(a: SummarizeArgs) -> Result<()> {
    let curve = read_curve(&a.curve, CurveKind::MonteCarlo)?;
    let reference = a.reference.as_deref().map(|p| read_curve(p, CurveKind::MonteCarlo)).transpose()?;
    let report = summarize(&curve.clamped(), a.b, reference.as_ref().map(PrCurve::clamped).as_ref())?;
    emit(None, |w| Ok(writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?))
}

fn consistency(a: ConsistencyArgs) -> Result<()> {
    let rows = consistency_sweep(&a.ps, &a.ks, &a.lambdas)?;
    emit(a.out.as_deref(), |w| Ok(write_sweep_csv(&rows, w)?))
}

fn chernoff(a: ChernoffArgs) -> Result<()> {
    let c = chernoff_coefficient(a.psi)?;
    let grid = LambdaGrid::new(a.lambda_points)?;
    eprintln!("C = {:.12}, argmin gamma = {:.9}, D_C = {:.12}", c.coefficient, c.argmin_gamma, c.divergence);
    let gamma = c.argmin_gamma.clamp(1e-12, 1.0 - 1e-12);
    emit(a.out.as_deref(), |w| {
        writeln!(w, "lambda,alpha,bound")?;
        for &l in grid.lambdas() {
            let alpha = analytic_alpha_scale(a.psi, l, a.dim)?;
            let bound = chernoff_bound(a.psi, l, a.dim, gamma)?;
            writeln!(w, "{l:.16e},{alpha:.16e},{bound:.16e}")?;
        }
        Ok(())
    })
}

fn scalars(a: ScalarsArgs) -> Result<()> {
    let x = read_matrix(&a.x)?;
    let y = read_matrix(&a.y)?;
    let params = ExtremeParams { k: a.k, k_prime: a.k_prime, ppr_form: a.ppr_form };
    let mut out = serde_json::Map::new();
    for m in ExtremeMethod::ALL {
        let precision = extreme_scalar(m, &x, &y, &params)?;
        let recall = extreme_scalar(m, &y, &x, &params)?;
        out.insert(m.as_str().to_owned(), serde_json::json!({ "precision": precision, "recall": recall }));
    }
    emit(None, |w| Ok(writeln!(w, "{}", serde_json::to_string_pretty(&out)?)?))
}
