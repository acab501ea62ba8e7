//! Ground-truth curves for analytically known distribution pairs.
//!
//! * [`truncation`]: `P = N(0, I_d)` against `Q_ψ = N(0, ψ² I_d)`, whose
//!   Bayes regions are balls, giving α_λ in closed form through chi tails.
//! * [`chernoff`]: the Chernoff upper bound `α_λ ≤ λ^γ m(γ)^d` for the same
//!   pair.
//! * [`ground_truth`]: likelihood-ratio classifier rates on a large sample,
//!   for pairs without a closed form (shifts, mixtures).

pub mod chernoff;
pub mod distribution;
pub mod ground_truth;
pub mod truncation;

pub use chernoff::{chernoff_bound, chernoff_coefficient, chernoff_moment, ChernoffResult};
pub use distribution::{log_density_ratio, DistributionSpec, GmmComponent};
pub use ground_truth::{gt_curve_mc, LikelihoodRatioSample};
pub use truncation::{
    analytic_alpha_scale, analytic_curve_scale, chi_cdf, chi_tail, chi_tail_recurrence,
    log_likelihood_ratio_scale, scale_threshold, DecisionRegion, Orientation,
};
