use crate::classifiers::{count_queries, predict, ClassifierFamily, Side};
use crate::error::{invalid, Result};
use crate::sample::SampleSet;

/// Empirical false positive and false negative rates of one classifier.
///
/// `fpr` is the fraction of P-samples assigned to Q, `fnr` the fraction of
/// Q-samples assigned to P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub fpr: f64,
    pub fnr: f64,
}

impl RatePair {
    /// From error counts over validation samples of sizes `n_x` and `n_y`.
    pub fn from_counts(false_pos: usize, n_x: usize, false_neg: usize, n_y: usize) -> Self {
        Self { fpr: false_pos as f64 / n_x as f64, fnr: false_neg as f64 / n_y as f64 }
    }

    /// `f ≡ 1`.
    pub fn always_p() -> Self {
        Self { fpr: 0.0, fnr: 1.0 }
    }

    /// `f ≡ 0`.
    pub fn always_q() -> Self {
        Self { fpr: 1.0, fnr: 0.0 }
    }

    /// `λ·fpr + fnr`.
    pub fn risk(&self, lambda: f64) -> f64 {
        lambda * self.fpr + self.fnr
    }
}

/// Rates of `f_γ` on validation samples.
///
/// A validation sample that is the training sample itself (no split) is
/// evaluated point by point as training members.
pub fn empirical_rates(
    family: &ClassifierFamily,
    gamma: f64,
    val_x: &SampleSet,
    val_y: &SampleSet,
) -> Result<RatePair> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(invalid(format!("gamma={gamma} must be in [0, +inf]")));
    }
    let fam = std::slice::from_ref(family);
    let mx = (val_x.data() == family.train_x().data()).then_some(Side::X);
    let my = (val_y.data() == family.train_y().data()).then_some(Side::Y);
    let cx = count_queries(fam, val_x, mx)?.remove(0);
    let cy = count_queries(fam, val_y, my)?.remove(0);
    let (nx, ny) = (family.n_x(), family.n_y());
    let fp = cx.iter().filter(|&&c| !predict(c, gamma, nx, ny)).count();
    let fnc = cy.iter().filter(|&&c| predict(c, gamma, nx, ny)).count();
    Ok(RatePair::from_counts(fp, val_x.n(), fnc, val_y.n()))
}
