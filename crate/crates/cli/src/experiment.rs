//! Multi-seed experiment runs, aggregation and output files.
//!
//! Layout of an output directory:
//!
//! ```text
//! curves/<method>_<seed>.csv
//! aggregate/<method>_{mean,lo,hi}.csv
//! gt.csv
//! summary.json
//! ```

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use prcurve::oracles::{analytic_curve_scale, gt_curve_mc};
use prcurve::summary::IOU_GRID;
use prcurve::{
    curve_iou, estimate_curves, summarize, CurveKind, DistributionSpec, EstimatorConfig, GammaSearch,
    LambdaGrid, Method, PrCurve, SampleSet, SummaryReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{write_atomic, write_curve};
use crate::presets::ExperimentConfig;

/// Random streams of the two samples within a seed.
pub const STREAM_X: u64 = 0;
pub const STREAM_Y: u64 = 1;

/// `n` draws from `spec`; with `outlier`, the last row is replaced by it.
pub fn sample(spec: &DistributionSpec, n: usize, seed: u64, stream: u64, outlier: Option<&[f64]>) -> Result<SampleSet> {
    let mut s = spec.sample(n, seed, stream)?;
    if let Some(o) = outlier {
        s.set_row(n - 1, o)?;
    }
    Ok(s)
}

/// Mean curve and the `mean ± σ` band of curves on one λ grid.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub mean: PrCurve,
    pub lo: PrCurve,
    pub hi: PrCurve,
    /// Population standard deviation of α at each λ.
    pub sigma: Vec<f64>,
}

pub fn aggregate(curves: &[PrCurve]) -> Result<Aggregate> {
    let Some(first) = curves.first() else {
        bail!("no curves to aggregate");
    };
    let lambdas = first.lambdas();
    for c in curves {
        if c.lambdas() != lambdas {
            bail!("curves are on different lambda grids");
        }
    }
    let n = curves.len() as f64;
    let mut mean = vec![0.0; lambdas.len()];
    for c in curves {
        for (m, p) in mean.iter_mut().zip(c.points()) {
            *m += p.alpha;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut sigma = vec![0.0; lambdas.len()];
    for c in curves {
        for ((s, m), p) in sigma.iter_mut().zip(&mean).zip(c.points()) {
            *s += (p.alpha - m) * (p.alpha - m);
        }
    }
    sigma.iter_mut().for_each(|s| *s = (*s / n).sqrt());
    let shifted = |sign: f64| -> Vec<f64> { mean.iter().zip(&sigma).map(|(m, s)| m + sign * s).collect() };
    Ok(Aggregate {
        mean: PrCurve::from_alphas(&lambdas, &mean, CurveKind::MonteCarlo)?,
        lo: PrCurve::from_alphas(&lambdas, &shifted(-1.0), CurveKind::Band)?,
        hi: PrCurve::from_alphas(&lambdas, &shifted(1.0), CurveKind::Band)?,
        sigma,
    })
}

/// How the reference curve of a run was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundTruthSource {
    /// `P = Q`: `α_λ = min(λ, 1)`.
    Ideal,
    /// Closed form for the centered scale pair.
    Analytic,
    MonteCarlo,
}

/// Closed form when one exists, Monte Carlo otherwise.
pub fn ground_truth(
    p: &DistributionSpec,
    q: &DistributionSpec,
    grid: &LambdaGrid,
    n_gt: usize,
    seed: u64,
) -> Result<(PrCurve, GroundTruthSource)> {
    if p == q {
        return Ok((PrCurve::ideal(grid), GroundTruthSource::Ideal));
    }
    if let (DistributionSpec::ShiftedGaussian { mu, d }, DistributionSpec::ScaledGaussian { psi, .. }) = (p, q) {
        if mu.iter().all(|&m| m == 0.0) && *psi != 1.0 {
            return Ok((analytic_curve_scale(*psi, *d, grid)?, GroundTruthSource::Analytic));
        }
    }
    Ok((gt_curve_mc(p, q, n_gt, grid, seed)?, GroundTruthSource::MonteCarlo))
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodResult {
    pub method: Method,
    /// Mean over seeds of the per-seed IoU against the reference.
    pub iou_mean: f64,
    /// Population standard deviation of the per-seed IoU.
    pub iou_sd: f64,
    pub iou_of_mean_curve: f64,
    pub max_sigma: f64,
    /// Summary of the mean curve.
    pub summary: SummaryReport,
    #[serde(skip)]
    pub curves: Vec<PrCurve>,
    #[serde(skip)]
    pub iou_per_seed: Vec<f64>,
    #[serde(skip)]
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub gt: PrCurve,
    pub gt_source: GroundTruthSource,
    pub methods: Vec<MethodResult>,
}

impl RunResult {
    pub fn method(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    config: &'a ExperimentConfig,
    seeds: &'a [u64],
    completed_seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<GroundTruthSource>,
    iou_grid: usize,
    methods: &'a [MethodResult],
}

fn write_manifest(out: &Path, manifest: &Manifest<'_>) -> Result<()> {
    write_atomic(&out.join("summary.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, manifest)?;
        writeln!(w)?;
        Ok(())
    })
}

fn curve_path(out: &Path, m: Method, seed: u64) -> std::path::PathBuf {
    out.join("curves").join(format!("{m}_{seed}.csv"))
}

/// Runs every seed, aggregates per method and compares with the reference.
/// With `out`, all files are written there; a failed run still leaves a
/// manifest listing the seeds that completed.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunResult> {
    cfg.validate()?;
    let (p, q) = cfg.specs()?;
    let grid = LambdaGrid::new(cfg.lambda_points)?;
    let seeds = cfg.seeds();
    if let Some(out) = out {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    }

    let per_seed: Vec<Result<Vec<PrCurve>>> = seeds
        .par_iter()
        .map(|&seed| {
            let x = sample(&p, cfg.n, seed, STREAM_X, cfg.outlier.as_deref())?;
            let y = sample(&q, cfg.n, seed, STREAM_Y, None)?;
            let est = EstimatorConfig {
                method: cfg.methods[0],
                k_rule: cfg.k_rule,
                parzen_k: cfg.parzen_k,
                split_ratio: cfg.split_ratio,
                lambda_grid_size: cfg.lambda_points,
                gamma_search: GammaSearch::Grid(cfg.gamma_points),
                seed,
            };
            let curves = estimate_curves(&x, &y, &cfg.methods, &est)?;
            if let Some(out) = out {
                for (m, c) in cfg.methods.iter().zip(&curves) {
                    write_curve(&curve_path(out, *m, seed), c)?;
                }
            }
            Ok(curves)
        })
        .collect();

    let completed: Vec<u64> = seeds.iter().zip(&per_seed).filter(|(_, r)| r.is_ok()).map(|(s, _)| *s).collect();
    if let Some((seed, Err(e))) = seeds.iter().zip(&per_seed).find(|(_, r)| r.is_err()) {
        let msg = format!("seed {seed}: {e:#}");
        if let Some(out) = out {
            write_manifest(
                out,
                &Manifest {
                    tool: env!("CARGO_PKG_NAME"),
                    version: env!("CARGO_PKG_VERSION"),
                    status: "failed",
                    error: Some(msg.clone()),
                    config: cfg,
                    seeds: &seeds,
                    completed_seeds: completed,
                    ground_truth: None,
                    iou_grid: IOU_GRID,
                    methods: &[],
                },
            )?;
        }
        bail!(msg);
    }
    let per_seed: Vec<Vec<PrCurve>> = per_seed.into_iter().map(|r| r.unwrap()).collect();

    let (gt, gt_source) = ground_truth(&p, &q, &grid, cfg.n_gt, cfg.master_seed)?;
    let methods = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(i, &method)| {
            let curves: Vec<PrCurve> = per_seed.iter().map(|c| c[i].clone()).collect();
            let agg = aggregate(&curves)?;
            let iou_per_seed = curves.iter().map(|c| curve_iou(c, &gt)).collect::<prcurve::Result<Vec<_>>>()?;
            let n = iou_per_seed.len() as f64;
            let iou_mean = iou_per_seed.iter().sum::<f64>() / n;
            let iou_sd = (iou_per_seed.iter().map(|v| (v - iou_mean).powi(2)).sum::<f64>() / n).sqrt();
            Ok(MethodResult {
                method,
                iou_mean,
                iou_sd,
                iou_of_mean_curve: curve_iou(&agg.mean, &gt)?,
                max_sigma: agg.sigma.iter().copied().fold(0.0, f64::max),
                summary: summarize(&agg.mean, cfg.f_b, Some(&gt))?,
                curves,
                iou_per_seed,
                aggregate: agg,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(out) = out {
        write_curve(&out.join("gt.csv"), &gt)?;
        for r in &methods {
            let dir = out.join("aggregate");
            write_curve(&dir.join(format!("{}_mean.csv", r.method)), &r.aggregate.mean)?;
            write_curve(&dir.join(format!("{}_lo.csv", r.method)), &r.aggregate.lo)?;
            write_curve(&dir.join(format!("{}_hi.csv", r.method)), &r.aggregate.hi)?;
        }
        write_manifest(
            out,
            &Manifest {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                status: "complete",
                error: None,
                config: cfg,
                seeds: &seeds,
                completed_seeds: completed,
                ground_truth: Some(gt_source),
                iou_grid: IOU_GRID,
                methods: &methods,
            },
        )?;
    }
    Ok(RunResult { config: cfg.clone(), seeds, gt, gt_source, methods })
}
