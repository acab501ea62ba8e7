//! Analytic distributions: shifted and scaled isotropic Gaussians and
//! Gaussian mixtures with identity covariance.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::stream_rng;
use crate::sample::SampleSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmComponent {
    pub weight: f64,
    pub center: Vec<f64>,
}

/// Serialized as a tagged block, e.g.
/// `{"variant": "scaled_gaussian", "d": 8, "psi": 0.5}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// `N(μ, I_d)`.
    ShiftedGaussian { d: usize, mu: Vec<f64> },
    /// `N(0, ψ² I_d)`.
    ScaledGaussian { d: usize, psi: f64 },
    /// `Σ_ℓ w_ℓ N(c_ℓ, I_d)`.
    Gmm { d: usize, components: Vec<GmmComponent> },
}

impl DistributionSpec {
    pub fn standard(d: usize) -> Self {
        Self::ShiftedGaussian { d, mu: vec![0.0; d] }
    }

    /// `N(shift·1, I_d)`.
    pub fn shifted(d: usize, shift: f64) -> Self {
        Self::ShiftedGaussian { d, mu: vec![shift; d] }
    }

    pub fn scaled(d: usize, psi: f64) -> Self {
        Self::ScaledGaussian { d, psi }
    }

    /// Mixture with centers `offset_ℓ·1`.
    pub fn gmm_diagonal(d: usize, weights: &[f64], offsets: &[f64]) -> Self {
        let components = weights
            .iter()
            .zip(offsets)
            .map(|(&weight, &o)| GmmComponent { weight, center: vec![o; d] })
            .collect();
        Self::Gmm { d, components }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::ShiftedGaussian { d, .. } | Self::ScaledGaussian { d, .. } | Self::Gmm { d, .. } => *d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(invalid("distribution dimension must be at least 1"));
        }
        match self {
            Self::ShiftedGaussian { mu, .. } => {
                if mu.len() != d {
                    return Err(invalid(format!("mean has {} entries, expected {d}", mu.len())));
                }
                if mu.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("mean must be finite"));
                }
            }
            Self::ScaledGaussian { psi, .. } => {
                if !(psi.is_finite() && *psi > 0.0) {
                    return Err(invalid(format!("scale psi={psi} must be positive")));
                }
            }
            Self::Gmm { components, .. } => {
                if components.is_empty() {
                    return Err(invalid("mixture needs at least one component"));
                }
                let mut total = 0.0;
                for c in components {
                    if !(c.weight.is_finite() && c.weight >= 0.0) {
                        return Err(invalid("mixture weights must be nonnegative"));
                    }
                    if c.center.len() != d || c.center.iter().any(|v| !v.is_finite()) {
                        return Err(invalid("mixture center has wrong dimension"));
                    }
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(invalid(format!("mixture weights sum to {total}, not 1")));
                }
            }
        }
        Ok(())
    }

    /// Short human-readable identifier, used as sample provenance.
    pub fn label(&self) -> String {
        match self {
            Self::ShiftedGaussian { d, mu } => {
                if mu.iter().all(|m| *m == mu[0]) {
                    format!("shifted_gaussian(d={d},shift={})", mu[0])
                } else {
                    format!("shifted_gaussian(d={d})")
                }
            }
            Self::ScaledGaussian { d, psi } => format!("scaled_gaussian(d={d},psi={psi})"),
            Self::Gmm { d, components } => format!("gmm(d={d},k={})", components.len()),
        }
    }

    /// Log-density up to the shared constant `−(d/2)·log 2π`.
    pub fn log_density(&self, z: &[f64]) -> f64 {
        match self {
            Self::ShiftedGaussian { mu, .. } => -0.5 * sq_diff(z, mu),
            Self::ScaledGaussian { d, psi } => {
                let s: f64 = z.iter().map(|v| v * v).sum();
                -(*d as f64) * psi.ln() - 0.5 * s / (psi * psi)
            }
            Self::Gmm { components, .. } => {
                let terms: Vec<f64> = components
                    .iter()
                    .filter(|c| c.weight > 0.0)
                    .map(|c| c.weight.ln() - 0.5 * sq_diff(z, &c.center))
                    .collect();
                log_sum_exp(&terms)
            }
        }
    }

    /// `n` i.i.d. draws from stream `stream` of `seed`.
    pub fn sample(&self, n: usize, seed: u64, stream: u64) -> Result<SampleSet> {
        self.validate()?;
        if n == 0 {
            return Err(invalid("sample size must be at least 1"));
        }
        let d = self.dim();
        let mut rng = stream_rng(seed, stream);
        let mut data = Vec::with_capacity(n * d);
        match self {
            Self::ShiftedGaussian { mu, .. } => {
                for _ in 0..n {
                    data.extend(mu.iter().map(|m| m + rng.sample::<f64, _>(StandardNormal)));
                }
            }
            Self::ScaledGaussian { psi, .. } => {
                for _ in 0..n * d {
                    data.push(psi * rng.sample::<f64, _>(StandardNormal));
                }
            }
            Self::Gmm { components, .. } => {
                let mut cumulative = Vec::with_capacity(components.len());
                let mut acc = 0.0;
                for c in components {
                    acc += c.weight;
                    cumulative.push(acc);
                }
                for _ in 0..n {
                    let u: f64 = rng.random::<f64>() * acc;
                    // first component whose cumulative weight exceeds u; zero
                    // weight components are never selected
                    let ell = cumulative
                        .partition_point(|&c| c <= u)
                        .min(components.len() - 1);
                    let center = &components[ell].center;
                    data.extend(center.iter().map(|m| m + rng.sample::<f64, _>(StandardNormal)));
                }
            }
        }
        Ok(SampleSet::new(data, d)?.with_provenance(seed, Some(self.label())))
    }
}

/// `log(dP/dQ)(z)`.
pub fn log_density_ratio(p: &DistributionSpec, q: &DistributionSpec, z: &[f64]) -> Result<f64> {
    if p.dim() != q.dim() || z.len() != p.dim() {
        return Err(invalid(format!(
            "dimension mismatch: p has {}, q has {}, point has {}",
            p.dim(),
            q.dim(),
            z.len()
        )));
    }
    Ok(p.log_density(z) - q.log_density(z))
}

fn sq_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_specs_have_zero_log_ratio() {
        let p = DistributionSpec::gmm_diagonal(3, &[0.3, 0.7], &[0.0, 2.0]);
        for z in [[0.0, 0.0, 0.0], [1.0, -2.0, 3.5]] {
            assert_eq!(log_density_ratio(&p, &p, &z).unwrap(), 0.0);
        }
    }

    #[test]
    fn shifted_log_ratio_is_linear() {
        let mu = vec![0.5, -1.0, 2.0];
        let p = DistributionSpec::ShiftedGaussian { d: 3, mu: mu.clone() };
        let q = DistributionSpec::standard(3);
        let z = [0.3, 0.7, -1.1];
        let dot: f64 = mu.iter().zip(&z).map(|(a, b)| a * b).sum();
        let norm2: f64 = mu.iter().map(|a| a * a).sum();
        let got = log_density_ratio(&p, &q, &z).unwrap();
        assert!((got - (dot - 0.5 * norm2)).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = DistributionSpec::standard(2);
        let q = DistributionSpec::standard(3);
        assert!(log_density_ratio(&p, &q, &[0.0, 0.0]).is_err());
        assert!(log_density_ratio(&p, &p, &[0.0]).is_err());
    }

    #[test]
    fn gmm_weights_must_sum_to_one() {
        let bad = DistributionSpec::gmm_diagonal(2, &[0.5, 0.4], &[0.0, 1.0]);
        assert!(bad.validate().is_err());
        assert!(bad.sample(3, 0, 0).is_err());
    }

    #[test]
    fn degenerate_mixture_draws_from_first_component() {
        let spec = DistributionSpec::gmm_diagonal(4, &[1.0, 0.0, 0.0, 0.0], &[2.0, -5.0, 3.0, 5.0]);
        let n = 4000;
        let s = spec.sample(n, 1, 0).unwrap();
        for j in 0..4 {
            let mean: f64 = s.rows().map(|r| r[j]).sum::<f64>() / n as f64;
            assert!((mean - 2.0).abs() < 4.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed_and_stream() {
        let spec = DistributionSpec::scaled(3, 0.5);
        let a = spec.sample(10, 7, 1).unwrap();
        let b = spec.sample(10, 7, 1).unwrap();
        let c = spec.sample(10, 7, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.data(), c.data());
        assert_eq!(a.seed(), Some(7));
    }

    #[test]
    fn spec_serializes_as_tagged_block() {
        let spec = DistributionSpec::scaled(8, 0.5);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"variant":"scaled_gaussian","d":8,"psi":0.5}"#);
        let gmm = DistributionSpec::gmm_diagonal(2, &[1.0], &[3.0]);
        let text = serde_json::to_string(&gmm).unwrap();
        assert!(text.contains(r#""components":[{"weight":1.0,"center":[3.0,3.0]}]"#));
        let back: DistributionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, gmm);
    }
}
