use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::rates::RatePair;
use crate::classifiers::{count_queries, make_families, predict, Counts, Method, Side};
use crate::curve::{CurveKind, PrCurve};
use crate::error::{invalid, Result};
use crate::grid::{GammaGrid, LambdaGrid};
use crate::sample::{SampleSet, SplitPool};

pub const MIN_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KRule {
    Fixed(usize),
    /// `round(√n)` with `n` the smaller sample size before splitting, capped
    /// so that at least one other training point remains.
    SqrtN,
}

/// How the minimum over the family is searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaSearch {
    /// `γ` on the λ-grid construction of this size, plus `0` and `+∞`.
    Grid(usize),
    /// Every classifier the family realizes on the validation points.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub method: Method,
    pub k_rule: KRule,
    /// Rank for the Parzen bandwidth; defaults to the resolved `k`.
    pub parzen_k: Option<usize>,
    /// Training fraction; `1` disables the split.
    pub split_ratio: f64,
    pub lambda_grid_size: usize,
    pub gamma_search: GammaSearch,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            method: Method::Knn,
            k_rule: KRule::SqrtN,
            parzen_k: None,
            split_ratio: 0.5,
            lambda_grid_size: 201,
            gamma_search: GammaSearch::Grid(201),
            seed: 0,
        }
    }
}

/// Neighbor rank for samples of sizes `n_x`, `n_y` whose training parts have
/// `n_train` points in the smaller one.
pub fn resolve_k(rule: KRule, n_x: usize, n_y: usize, n_train: usize) -> Result<usize> {
    let k = match rule {
        KRule::Fixed(k) => k,
        KRule::SqrtN => {
            let n = n_x.min(n_y) as f64;
            (n.sqrt().round() as usize).clamp(1, n_train.saturating_sub(1).max(1))
        }
    };
    if k == 0 || k >= n_train {
        return Err(invalid(format!("k={k} needs at least {} training points per side", k + 1)));
    }
    Ok(k)
}

/// `α̂_λ = min_γ λ·fpr̂(f_γ) + fnr̂(f_γ)` over the family and the two trivial
/// classifiers.
pub fn estimate_curve(x: &SampleSet, y: &SampleSet, cfg: &EstimatorConfig) -> Result<PrCurve> {
    Ok(estimate_curves(x, y, &[cfg.method], cfg)?.remove(0))
}

/// Curves for several methods on one split; distances are computed once.
/// `cfg.method` is ignored.
pub fn estimate_curves(
    x: &SampleSet,
    y: &SampleSet,
    methods: &[Method],
    cfg: &EstimatorConfig,
) -> Result<Vec<PrCurve>> {
    if x.n() < MIN_SAMPLES || y.n() < MIN_SAMPLES {
        return Err(invalid(format!("need at least {MIN_SAMPLES} points per sample")));
    }
    let pool = SplitPool::new(x, y, cfg.split_ratio, cfg.seed)?;
    let n_train = pool.train_x.n().min(pool.train_y.n());
    let k = resolve_k(cfg.k_rule, x.n(), y.n(), n_train)?;
    estimate_curves_on_pool(&pool, methods, k, cfg)
}

/// As [`estimate_curves`] on an existing split with a resolved `k`.
pub fn estimate_curves_on_pool(
    pool: &SplitPool,
    methods: &[Method],
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<Vec<PrCurve>> {
    let lambdas = LambdaGrid::new(cfg.lambda_grid_size)?;
    let gammas = match cfg.gamma_search {
        GammaSearch::Grid(n) => Some(GammaGrid::new(n)?),
        GammaSearch::Exact => None,
    };
    let parzen_k = cfg.parzen_k.unwrap_or(k);
    let families = make_families(methods, &pool.train_x, &pool.train_y, k, parzen_k)?;
    let (mx, my) = if pool.split_applied { (None, None) } else { (Some(Side::X), Some(Side::Y)) };
    let cx = count_queries(&families, &pool.val_x, mx)?;
    let cy = count_queries(&families, &pool.val_y, my)?;
    let (nx, ny) = (pool.train_x.n(), pool.train_y.n());
    methods
        .iter()
        .enumerate()
        .map(|(m, _)| {
            let rates = match &gammas {
                Some(g) => grid_rates(&cx[m], &cy[m], nx, ny, g.values()),
                None => realizable_rates(&cx[m], &cy[m]),
            };
            erm_curve(&lambdas, &rates)
        })
        .collect()
}

fn grid_rates(cx: &[Counts], cy: &[Counts], nx: usize, ny: usize, gammas: &[f64]) -> Vec<RatePair> {
    let mut rates = vec![RatePair::always_q(), RatePair::always_p()];
    rates.extend(gammas.iter().map(|&g| {
        let fp = cx.iter().filter(|&&c| !predict(c, g, nx, ny)).count();
        let fnc = cy.iter().filter(|&&c| predict(c, g, nx, ny)).count();
        RatePair::from_counts(fp, cx.len(), fnc, cy.len())
    }));
    rates
}

/// Rates of every classifier the family realizes on the validation points,
/// plus the two constant classifiers.
///
/// A point is predicted `1` at γ exactly when `a > 0` and its ratio
/// `c = (b/n_Y)/(a/n_X)` lies below γ (or equals it, for γ ≥ 1). Sweeping γ
/// therefore accepts points in increasing order of `c`, whole ties at once,
/// and every prefix of that order is realized by some γ in an open interval.
/// The `n_X, n_Y` factors do not change the order, which is decided on the
/// integer products `b·a'` versus `b'·a`.
pub fn realizable_rates(cx: &[Counts], cy: &[Counts]) -> Vec<RatePair> {
    let (nvx, nvy) = (cx.len(), cy.len());
    // (a, b, is_x)
    let mut pts: Vec<(usize, usize, bool)> = cx
        .iter()
        .map(|c| (c.a, c.b, true))
        .chain(cy.iter().map(|c| (c.a, c.b, false)))
        .filter(|p| p.0 > 0)
        .collect();
    let ratio_cmp = |p: &(usize, usize, bool), q: &(usize, usize, bool)| -> Ordering {
        (p.1 as u128 * q.0 as u128).cmp(&(q.1 as u128 * p.0 as u128))
    };
    pts.sort_by(ratio_cmp);
    let mut rates = vec![RatePair::always_q(), RatePair::always_p()];
    let (mut fp, mut fnc) = (nvx, 0usize);
    let mut i = 0;
    while i < pts.len() {
        let mut j = i;
        while j < pts.len() && ratio_cmp(&pts[i], &pts[j]) == Ordering::Equal {
            if pts[j].2 {
                fp -= 1;
            } else {
                fnc += 1;
            }
            j += 1;
        }
        rates.push(RatePair::from_counts(fp, nvx, fnc, nvy));
        i = j;
    }
    rates
}

fn erm_curve(lambdas: &LambdaGrid, rates: &[RatePair]) -> Result<PrCurve> {
    let alphas: Vec<f64> = lambdas
        .lambdas()
        .iter()
        .map(|&l| rates.iter().map(|r| r.risk(l)).fold(f64::INFINITY, f64::min))
        .collect();
    PrCurve::from_alphas(lambdas.lambdas(), &alphas, CurveKind::Empirical)
}
