//! Empirical rates, the ERM curve over a classifier family, and the
//! published extreme-value estimators.

mod erm;
mod extreme;
mod rates;

pub use erm::{
    estimate_curve, estimate_curves, estimate_curves_on_pool, realizable_rates, resolve_k,
    EstimatorConfig, GammaSearch, KRule,
};
pub use extreme::{extreme_scalar, ExtremeMethod, ExtremeParams, PprForm};
pub use rates::{empirical_rates, RatePair};
