//! The binomial risk `μ_λ(p)` behind the consistency of the kNN curve.
//!
//! With `k` neighbors and posterior `η(z) = dP/d(P+Q)(z)`, the asymptotic
//! weighted risk of the kNN classifier at weight λ is `2·E[μ_λ(η(Z))]` for
//! `Z ~ (P+Q)/2`, where
//! `μ_λ(p) = λp·P{B < t} + (1 − p)·P{B > t}`, `B ~ Binom(k, p)`,
//! `t = k/(λ+1)`. As `k → ∞`, `μ_λ(p) → min(λp, 1 − p)` and the risk tends
//! to `α_λ`.

use std::io::Write;

use crate::binomial::beta_reg_int;
use crate::error::{invalid, Result};
use crate::oracles::{DistributionSpec, LikelihoodRatioSample};

/// Which binomial distribution function backs [`mu_lambda_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialMethod {
    /// Probability-mass recurrence summed outward from the mode and
    /// normalized by the total, so no factorials are formed.
    Summation,
    /// `P{B ≤ m} = I_{1−p}(k − m, m + 1)`.
    IncompleteBeta,
}

fn check(k: u64, p: f64) -> Result<()> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p={p} is not in [0, 1]")));
    }
    Ok(())
}

/// `(P{B ≤ m}, P{B > m})`, each accurate in absolute terms.
pub fn binomial_cdf_sf(k: u64, p: f64, m: i64, method: BinomialMethod) -> Result<(f64, f64)> {
    check(k, p)?;
    if m < 0 {
        return Ok((0.0, 1.0));
    }
    if m as u64 >= k {
        return Ok((1.0, 0.0));
    }
    let m = m as u64;
    if p == 0.0 {
        return Ok((1.0, 0.0));
    }
    if p == 1.0 {
        return Ok((0.0, 1.0));
    }
    Ok(match method {
        BinomialMethod::Summation => summed(k, p, m),
        BinomialMethod::IncompleteBeta => {
            (beta_reg_int(k - m, m + 1, 1.0 - p), beta_reg_int(m + 1, k - m, p))
        }
    })
}

fn summed(k: u64, p: f64, m: u64) -> (f64, f64) {
    let odds = p / (1.0 - p);
    let mode = (((k + 1) as f64 * p).floor() as u64).min(k);
    // weights relative to the mode
    let (mut lower, mut upper) = (0.0f64, 0.0f64);
    let mut add = |j: u64, w: f64| {
        if j <= m {
            lower += w;
        } else {
            upper += w;
        }
    };
    add(mode, 1.0);
    let mut w = 1.0f64;
    for j in mode..k {
        // pmf(j+1)/pmf(j)
        w *= (k - j) as f64 / (j + 1) as f64 * odds;
        if w == 0.0 {
            break;
        }
        add(j + 1, w);
    }
    let mut w = 1.0f64;
    for j in (1..=mode).rev() {
        // pmf(j-1)/pmf(j)
        w *= j as f64 / (k - j + 1) as f64 / odds;
        if w == 0.0 {
            break;
        }
        add(j - 1, w);
    }
    let total = lower + upper;
    (lower / total, upper / total)
}

/// `μ_λ(p)` with the summation route.
pub fn mu_lambda(p: f64, k: u64, lambda: f64) -> Result<f64> {
    mu_lambda_with(p, k, lambda, BinomialMethod::Summation)
}

pub fn mu_lambda_with(p: f64, k: u64, lambda: f64, method: BinomialMethod) -> Result<f64> {
    check(k, p)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid(format!("lambda={lambda} must be positive")));
    }
    let t = k as f64 / (lambda + 1.0);
    // P{B < t} = P{B ≤ ⌈t⌉ − 1}; P{B > t} = P{B > ⌊t⌋}
    let below = binomial_cdf_sf(k, p, t.ceil() as i64 - 1, method)?.0;
    let above = binomial_cdf_sf(k, p, t.floor() as i64, method)?.1;
    Ok(lambda * p * below + (1.0 - p) * above)
}

/// The pointwise limit `min(λp, 1 − p)`.
pub fn mu_limit(p: f64, lambda: f64) -> f64 {
    (lambda * p).min(1.0 - p)
}

/// `(λ + 1)·exp(−2k(1/(λ+1) − p)²)`, a bound on `|μ_λ(p) − min(λp, 1 − p)|`
/// from Hoeffding's inequality on the binomial tail beyond `t`.
pub fn hoeffding_bound(p: f64, k: u64, lambda: f64) -> f64 {
    let delta = 1.0 / (lambda + 1.0) - p;
    (lambda + 1.0) * (-2.0 * k as f64 * delta * delta).exp()
}

/// One row of a `(p, k, λ)` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialRiskPoint {
    pub p: f64,
    pub k: u64,
    pub lambda: f64,
    pub mu_value: f64,
}

impl BinomialRiskPoint {
    pub fn limit(&self) -> f64 {
        mu_limit(self.p, self.lambda)
    }

    pub fn gap(&self) -> f64 {
        (self.mu_value - self.limit()).abs()
    }

    pub fn bound(&self) -> f64 {
        hoeffding_bound(self.p, self.k, self.lambda)
    }
}

/// `μ_λ(p)` over the product of the three lists, `p` varying slowest.
pub fn consistency_sweep(ps: &[f64], ks: &[u64], lambdas: &[f64]) -> Result<Vec<BinomialRiskPoint>> {
    let mut rows = Vec::with_capacity(ps.len() * ks.len() * lambdas.len());
    for &p in ps {
        for &k in ks {
            for &lambda in lambdas {
                rows.push(BinomialRiskPoint { p, k, lambda, mu_value: mu_lambda(p, k, lambda)? });
            }
        }
    }
    Ok(rows)
}

/// CSV with header `p,k,lambda,mu,limit,gap,bound`.
pub fn write_sweep_csv<W: Write>(rows: &[BinomialRiskPoint], mut w: W) -> Result<()> {
    writeln!(w, "p,k,lambda,mu,limit,gap,bound")?;
    for r in rows {
        writeln!(
            w,
            "{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.p,
            r.k,
            r.lambda,
            r.mu_value,
            r.limit(),
            r.gap(),
            r.bound()
        )?;
    }
    Ok(())
}

/// Monte-Carlo estimate of the limiting kNN risk `2·E[μ_λ(η(Z))]`.
///
/// `n_mc` points are drawn from each of `P` and `Q`, which estimates the
/// mixture expectation as `E_P[μ_λ(η)] + E_Q[μ_λ(η)]`. The posterior is
/// `η = σ(log dP/dQ)` with σ the logistic function.
pub fn asymptotic_knn_risk(
    p: &DistributionSpec,
    q: &DistributionSpec,
    k: u64,
    lambda: f64,
    n_mc: usize,
    seed: u64,
) -> Result<f64> {
    Ok(asymptotic_knn_risk_with_error(p, q, k, lambda, n_mc, seed)?.0)
}

/// As [`asymptotic_knn_risk`], with the standard error of the estimate.
pub fn asymptotic_knn_risk_with_error(
    p: &DistributionSpec,
    q: &DistributionSpec,
    k: u64,
    lambda: f64,
    n_mc: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_mc < 1000 {
        return Err(invalid(format!("n_mc={n_mc} is below 1000")));
    }
    let lr = LikelihoodRatioSample::draw(p, q, n_mc, seed)?;
    let moments = |values: &[f64]| -> Result<(f64, f64)> {
        let mut s = 0.0;
        let mut s2 = 0.0;
        for &v in values {
            let mu = mu_lambda(logistic(v), k, lambda)?;
            s += mu;
            s2 += mu * mu;
        }
        let n = values.len() as f64;
        let mean = s / n;
        Ok((mean, (s2 / n - mean * mean).max(0.0) / n))
    };
    let (mp, vp) = moments(lr.under_p())?;
    let (mq, vq) = moments(lr.under_q())?;
    Ok((mp + mq, (vp + vq).sqrt()))
}

fn logistic(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}
