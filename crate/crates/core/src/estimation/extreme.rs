//! Extreme precision `α̂_∞` estimators from the literature, evaluated on the
//! full samples without splitting. Swapping `x` and `y` gives `β̂_0`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{build_neighbor_index, NeighborIndex};
use crate::distance::sq_dist;
use crate::error::{invalid, Error, Result};
use crate::sample::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremeMethod {
    /// Fraction of `y` inside some `B_k^X(x)`.
    Ipr,
    /// Fraction of `y` whose `B_k^Y(y)` contains some `x`.
    Coverage,
    /// `min(ipr, coverage)`.
    Eas,
    /// Fraction of `y` whose `B_k^Y(y)` contains at least `k'` points of `x`.
    Prc,
    /// Tent-kernel aggregation with bandwidth `R`, the mean kNN radius of `x`.
    Ppr,
}

impl ExtremeMethod {
    pub const ALL: [ExtremeMethod; 5] = [
        ExtremeMethod::Ipr,
        ExtremeMethod::Coverage,
        ExtremeMethod::Eas,
        ExtremeMethod::Prc,
        ExtremeMethod::Ppr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExtremeMethod::Ipr => "ipr",
            ExtremeMethod::Coverage => "coverage",
            ExtremeMethod::Eas => "eas",
            ExtremeMethod::Prc => "prc",
            ExtremeMethod::Ppr => "ppr",
        }
    }
}

impl fmt::Display for ExtremeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExtremeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExtremeMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown extreme estimator {s:?}")))
    }
}

/// How the tent-kernel values `τ(‖y − x‖)` are aggregated per `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PprForm {
    /// `1 − ∏(1 − τ)`: the chance that at least one `x` claims `y`.
    #[default]
    Complement,
    /// `1 − ∏ τ`, literally. A `y` far from every `x` scores 1.
    AsWritten,
}

impl FromStr for PprForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complement" => Ok(PprForm::Complement),
            "as-written" => Ok(PprForm::AsWritten),
            _ => Err(invalid(format!("unknown ppr form {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremeParams {
    pub k: usize,
    /// Minimum count for `prc`.
    pub k_prime: usize,
    pub ppr_form: PprForm,
}

impl Default for ExtremeParams {
    fn default() -> Self {
        Self { k: 3, k_prime: 1, ppr_form: PprForm::Complement }
    }
}

pub fn extreme_scalar(
    method: ExtremeMethod,
    x: &SampleSet,
    y: &SampleSet,
    params: &ExtremeParams,
) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(invalid("sample dimensions differ"));
    }
    let k = params.k;
    if k == 0 || k >= x.n().min(y.n()) {
        return Err(invalid(format!("k={k} must be in [1, min(n_x, n_y) - 1]")));
    }
    match method {
        ExtremeMethod::Ipr => Ok(ipr(x, y, &build_neighbor_index(x, k)?)),
        ExtremeMethod::Coverage => Ok(prc(x, y, &build_neighbor_index(y, k)?, 1)),
        ExtremeMethod::Eas => {
            let a = ipr(x, y, &build_neighbor_index(x, k)?);
            let b = prc(x, y, &build_neighbor_index(y, k)?, 1);
            Ok(a.min(b))
        }
        ExtremeMethod::Prc => {
            if params.k_prime == 0 {
                return Err(invalid("k' must be at least 1"));
            }
            Ok(prc(x, y, &build_neighbor_index(y, k)?, params.k_prime))
        }
        ExtremeMethod::Ppr => {
            let r = build_neighbor_index(x, k)?.mean_radius();
            Ok(ppr(x, y, r, params.ppr_form))
        }
    }
}

fn fraction(hits: usize, n: usize) -> f64 {
    hits as f64 / n as f64
}

fn ipr(x: &SampleSet, y: &SampleSet, index_x: &NeighborIndex) -> f64 {
    let r2 = index_x.sq_radii();
    let hits = (0..y.n())
        .into_par_iter()
        .filter(|&j| {
            let q = y.row(j);
            x.rows().zip(r2).any(|(p, &r)| sq_dist(q, p) <= r)
        })
        .count();
    fraction(hits, y.n())
}

fn prc(x: &SampleSet, y: &SampleSet, index_y: &NeighborIndex, k_prime: usize) -> f64 {
    let r2 = index_y.sq_radii();
    let hits = (0..y.n())
        .into_par_iter()
        .filter(|&j| {
            let q = y.row(j);
            let inside = x.rows().filter(|p| sq_dist(q, p) <= r2[j]).take(k_prime).count();
            inside >= k_prime
        })
        .count();
    fraction(hits, y.n())
}

/// `τ(t) = max(0, 1 − t/R)`; with `R = 0` only exact matches score 1.
fn tent(t: f64, r: f64) -> f64 {
    if r == 0.0 {
        return if t == 0.0 { 1.0 } else { 0.0 };
    }
    (1.0 - t / r).max(0.0)
}

fn ppr(x: &SampleSet, y: &SampleSet, r: f64, form: PprForm) -> f64 {
    let total: f64 = (0..y.n())
        .into_par_iter()
        .map(|j| {
            let q = y.row(j);
            let mut log_prod = 0.0f64;
            for p in x.rows() {
                let tau = tent(sq_dist(q, p).sqrt(), r);
                let factor = match form {
                    PprForm::Complement => 1.0 - tau,
                    PprForm::AsWritten => tau,
                };
                if factor == 0.0 {
                    return 1.0;
                }
                log_prod += factor.ln();
            }
            1.0 - log_prod.exp()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    total / y.n() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[f64]) -> SampleSet {
        SampleSet::new(v.to_vec(), 1).unwrap()
    }

    #[test]
    fn identical_samples_score_one() {
        let x = line(&[0.0, 0.5, 2.0, 3.5, 7.0]);
        let p = ExtremeParams { k: 2, ..Default::default() };
        for m in [ExtremeMethod::Ipr, ExtremeMethod::Coverage, ExtremeMethod::Eas] {
            assert_eq!(extreme_scalar(m, &x, &x, &p).unwrap(), 1.0, "{m}");
        }
    }

    #[test]
    fn ppr_forms_disagree_far_away() {
        let x = line(&[0.0, 0.1, 0.2, 0.3]);
        let y = line(&[100.0, 101.0, 102.0, 103.0]);
        let mut p = ExtremeParams { k: 1, ..Default::default() };
        assert_eq!(extreme_scalar(ExtremeMethod::Ppr, &x, &y, &p).unwrap(), 0.0);
        p.ppr_form = PprForm::AsWritten;
        assert_eq!(extreme_scalar(ExtremeMethod::Ppr, &x, &y, &p).unwrap(), 1.0);
    }

    #[test]
    fn parameters_are_checked() {
        let x = line(&[0.0, 1.0, 2.0]);
        let p = ExtremeParams { k: 3, ..Default::default() };
        assert!(extreme_scalar(ExtremeMethod::Ipr, &x, &x, &p).is_err());
        let p = ExtremeParams { k: 1, k_prime: 0, ..Default::default() };
        assert!(extreme_scalar(ExtremeMethod::Prc, &x, &x, &p).is_err());
        assert!("as-written".parse::<PprForm>().is_ok());
    }
}
