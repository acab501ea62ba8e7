//! Ground-truth curves from the likelihood-ratio classifier on large samples.

use rayon::prelude::*;

use crate::curve::{CurveKind, PrCurve};
use crate::error::{invalid, Result};
use crate::grid::LambdaGrid;
use crate::oracles::distribution::{log_density_ratio, DistributionSpec};

pub const MIN_GT_SAMPLES: usize = 1000;

/// Points drawn per random stream; streams are independent so chunks can be
/// generated in parallel without changing the result.
const CHUNK: usize = 2048;
const STREAM_P: u64 = 0x6774_0000_0000;
const STREAM_Q: u64 = 0x6774_8000_0000;

/// Sorted log-likelihood ratios `log dP/dQ` of samples from `P` and from `Q`.
#[derive(Debug, Clone)]
pub struct LikelihoodRatioSample {
    under_p: Vec<f64>,
    under_q: Vec<f64>,
}

impl LikelihoodRatioSample {
    /// Draws `n` points from each of `p` and `q`. Only the ratios are kept.
    pub fn draw(p: &DistributionSpec, q: &DistributionSpec, n: usize, seed: u64) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(invalid("p and q have different dimensions"));
        }
        p.validate()?;
        q.validate()?;
        let under_p = ratios_of(p, p, q, n, seed, STREAM_P)?;
        let under_q = ratios_of(q, p, q, n, seed, STREAM_Q)?;
        Ok(Self { under_p, under_q })
    }

    /// Ascending log ratios of the `P` sample.
    pub fn under_p(&self) -> &[f64] {
        &self.under_p
    }

    pub fn under_q(&self) -> &[f64] {
        &self.under_q
    }

    /// `(fpr, fnr)` of `f(z) = 1{log dP/dQ(z) ≥ −log λ}`.
    pub fn rates(&self, lambda: f64) -> (f64, f64) {
        let cut = -lambda.ln();
        let rejected_p = self.under_p.partition_point(|&v| v < cut);
        let accepted_q = self.under_q.len() - self.under_q.partition_point(|&v| v < cut);
        (
            rejected_p as f64 / self.under_p.len() as f64,
            accepted_q as f64 / self.under_q.len() as f64,
        )
    }
}

fn ratios_of(
    source: &DistributionSpec,
    p: &DistributionSpec,
    q: &DistributionSpec,
    n: usize,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<f64>> {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let m = CHUNK.min(n - c * CHUNK);
            let s = source.sample(m, seed, stream_base + c as u64)?;
            s.rows().map(|z| log_density_ratio(p, q, z)).collect()
        })
        .collect::<Result<_>>()?;
    let mut all = parts.concat();
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// `α̂_λ = λ·fpr̂ + fnr̂` of the Bayes classifier at each grid λ.
///
/// The estimate is capped at `min(λ, 1)`, the risk of the better constant
/// classifier, which the true α never exceeds.
pub fn gt_curve_mc(
    p: &DistributionSpec,
    q: &DistributionSpec,
    n_gt: usize,
    grid: &LambdaGrid,
    seed: u64,
) -> Result<PrCurve> {
    if n_gt < MIN_GT_SAMPLES {
        return Err(invalid(format!("n_gt={n_gt} is below {MIN_GT_SAMPLES}")));
    }
    let lr = LikelihoodRatioSample::draw(p, q, n_gt, seed)?;
    let alphas: Vec<f64> = grid
        .lambdas()
        .iter()
        .map(|&l| {
            let (fpr, fnr) = lr.rates(l);
            (l * fpr + fnr).min(l.min(1.0))
        })
        .collect();
    PrCurve::from_alphas(grid.lambdas(), &alphas, CurveKind::MonteCarlo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_specs_give_the_ideal_curve() {
        let s = DistributionSpec::standard(3);
        let grid = LambdaGrid::new(21).unwrap();
        let c = gt_curve_mc(&s, &s, 2000, &grid, 1).unwrap();
        for p in c.points() {
            // every ratio is exactly zero, so the classifier is constant
            assert_eq!(p.alpha, p.lambda.min(1.0));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = DistributionSpec::standard(2);
        let q = DistributionSpec::shifted(2, 0.5);
        let grid = LambdaGrid::new(11).unwrap();
        let a = gt_curve_mc(&p, &q, 5000, &grid, 4).unwrap();
        let b = gt_curve_mc(&p, &q, 5000, &grid, 4).unwrap();
        assert_eq!(a, b);
        assert!(gt_curve_mc(&p, &q, 999, &grid, 4).is_err());
    }
}
