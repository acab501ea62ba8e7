//! Experiment configurations for the Gaussian toy settings.

use anyhow::{bail, Result};
use prcurve::{DistributionSpec, KRule, Method};
use serde::{Deserialize, Serialize};

/// Per-coordinate shifts of the Gaussian-shift IoU table.
pub const TABLE_SHIFTS: [f64; 4] = [0.12, 0.21, 0.29, 0.38];

pub const GMM_CENTERS: [f64; 4] = [0.0, -5.0, 3.0, 5.0];
pub const GMM_P_WEIGHTS: [f64; 4] = [0.3, 0.2, 0.5, 0.0];
pub const GMM_Q_WEIGHTS: [f64; 4] = [0.0, 0.5, 0.2, 0.3];

/// Coordinate value of the injected outlier `4·1`.
pub const OUTLIER_VALUE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Preset {
    /// `N(0, I)` against `N(shift·1, I)`, d = 64.
    Shift,
    /// Four-component mixtures with dropped, invented and reweighted modes.
    Gmm,
    /// Shift `3/√d` with one point of X replaced by `4·1`; k = 4, no split.
    Outlier,
    /// Shift `1/√d` in d = 2048.
    Highdim,
    /// `P = Q = N(0, I)`, d = 64.
    PqEqual,
    /// `N(0, I)` against `N(0, ψ² I)`, ψ = 0.5, d = 8.
    Scale,
    /// Distributions given explicitly.
    Custom,
}

/// Everything needed to run and reproduce an experiment.
///
/// Serialized as the config-file format and echoed into the run manifest.
/// Config files may give any subset of the fields; see
/// [`ExperimentConfig::from_json`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub dim: usize,
    /// Per-coordinate mean of Q for the shift presets.
    pub shift: f64,
    pub psi: f64,
    /// Only read by the `custom` preset.
    pub p_spec: Option<DistributionSpec>,
    pub q_spec: Option<DistributionSpec>,
    /// Points per side.
    pub n: usize,
    pub methods: Vec<Method>,
    pub k_rule: KRule,
    pub parzen_k: Option<usize>,
    pub split_ratio: f64,
    pub lambda_points: usize,
    pub gamma_points: usize,
    pub n_seeds: usize,
    pub master_seed: u64,
    pub seed_stride: u64,
    pub n_gt: usize,
    /// Replaces the last point of X.
    pub outlier: Option<Vec<f64>>,
    /// `b` of the reported `F_b` / `F_{1/b}`.
    pub f_b: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::preset(Preset::Shift)
    }
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        let mut cfg = Self {
            preset,
            dim: 64,
            shift: TABLE_SHIFTS[0],
            psi: 0.5,
            p_spec: None,
            q_spec: None,
            n: 10_000,
            methods: Method::ALL.to_vec(),
            k_rule: KRule::SqrtN,
            parzen_k: None,
            split_ratio: 0.5,
            lambda_points: 201,
            gamma_points: 201,
            n_seeds: 10,
            master_seed: 0,
            seed_stride: 1_000_003,
            n_gt: 100_000,
            outlier: None,
            f_b: 8.0,
        };
        match preset {
            Preset::Shift | Preset::PqEqual | Preset::Custom => {}
            Preset::Gmm => cfg.n = 1000,
            Preset::Outlier => {
                cfg.shift = 3.0 / (cfg.dim as f64).sqrt();
                cfg.outlier = Some(vec![OUTLIER_VALUE; cfg.dim]);
                cfg.k_rule = KRule::Fixed(4);
                cfg.split_ratio = 1.0;
                cfg.n_seeds = 1;
            }
            Preset::Highdim => {
                cfg.dim = 2048;
                cfg.shift = 1.0 / (cfg.dim as f64).sqrt();
            }
            Preset::Scale => cfg.dim = 8,
        }
        cfg
    }

    /// Changes the dimension, rescaling the dimension-dependent defaults of
    /// the outlier and high-dimensional presets.
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        match self.preset {
            Preset::Outlier => {
                self.shift = 3.0 / (dim as f64).sqrt();
                self.outlier = self.outlier.map(|_| vec![OUTLIER_VALUE; dim]);
            }
            Preset::Highdim => self.shift = 1.0 / (dim as f64).sqrt(),
            _ => {}
        }
        self
    }

    /// Parses a config file: the preset's defaults (at the given `dim`, if
    /// any) overridden by the fields present.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let Some(fields) = value.as_object() else {
            bail!("config must be a JSON object");
        };
        let preset = match fields.get("preset") {
            Some(p) => serde_json::from_value(p.clone())?,
            None => Preset::Shift,
        };
        let mut base = Self::preset(preset);
        if let Some(d) = fields.get("dim") {
            base = base.with_dim(serde_json::from_value(d.clone())?);
        }
        let mut merged = serde_json::to_value(&base)?;
        let obj = merged.as_object_mut().expect("config serializes as an object");
        for (k, v) in fields {
            obj.insert(k.clone(), v.clone());
        }
        Ok(serde_json::from_value(merged)?)
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.n_seeds as u64)
            .map(|i| self.master_seed.wrapping_add(i.wrapping_mul(self.seed_stride)))
            .collect()
    }

    /// `(P, Q)` of the configured setting.
    pub fn specs(&self) -> Result<(DistributionSpec, DistributionSpec)> {
        let d = self.dim;
        let (p, q) = match self.preset {
            Preset::Shift | Preset::Outlier | Preset::Highdim => {
                (DistributionSpec::standard(d), DistributionSpec::shifted(d, self.shift))
            }
            Preset::PqEqual => (DistributionSpec::standard(d), DistributionSpec::standard(d)),
            Preset::Scale => (DistributionSpec::standard(d), DistributionSpec::scaled(d, self.psi)),
            Preset::Gmm => (
                DistributionSpec::gmm_diagonal(d, &GMM_P_WEIGHTS, &GMM_CENTERS),
                DistributionSpec::gmm_diagonal(d, &GMM_Q_WEIGHTS, &GMM_CENTERS),
            ),
            Preset::Custom => match (&self.p_spec, &self.q_spec) {
                (Some(p), Some(q)) => (p.clone(), q.clone()),
                _ => bail!("the custom preset needs both p_spec and q_spec"),
            },
        };
        p.validate()?;
        q.validate()?;
        if p.dim() != q.dim() {
            bail!("p_spec has dimension {} but q_spec has {}", p.dim(), q.dim());
        }
        Ok((p, q))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_seeds == 0 {
            bail!("n_seeds must be at least 1");
        }
        if self.methods.is_empty() {
            bail!("no methods selected");
        }
        if !(self.split_ratio > 0.0 && self.split_ratio <= 1.0) {
            bail!("split ratio {} is not in (0, 1]", self.split_ratio);
        }
        if !(self.f_b.is_finite() && self.f_b > 0.0) {
            bail!("F_b weight must be positive");
        }
        let (p, _) = self.specs()?;
        if let Some(o) = &self.outlier {
            if o.len() != p.dim() {
                bail!("outlier has {} coordinates, samples have {}", o.len(), p.dim());
            }
        }
        Ok(())
    }
}
