//! Precision-recall curves between two samples.
//!
//! The curve `α_λ = min_f λ·fpr(f) + fnr(f)` is estimated by empirical risk
//! minimization over one-parameter classifier families ([`classifiers`],
//! [`estimation`]) and checked against closed-form and Monte-Carlo ground
//! truth for Gaussian pairs ([`oracles`]).

mod binomial;
pub mod classifiers;
pub mod consistency;
pub mod curve;
pub mod distance;
pub mod error;
pub mod estimation;
pub mod grid;
pub mod oracles;
pub mod rng;
pub mod sample;
pub mod summary;

pub use classifiers::{make_family, ClassifierFamily, Counts, Method, NeighborIndex, Side};
pub use curve::{curve_area, CurveKind, Envelope, PrCurve, PrPoint};
pub use error::{Error, Result};
pub use estimation::{
    estimate_curve, estimate_curves, extreme_scalar, EstimatorConfig, ExtremeMethod, ExtremeParams,
    GammaSearch, KRule, PprForm, RatePair,
};
pub use grid::{GammaGrid, LambdaGrid};
pub use oracles::DistributionSpec;
pub use sample::{SampleSet, SplitPool};
pub use summary::{curve_iou, f_score, pr_median, summarize, PrMedian, SummaryReport};
