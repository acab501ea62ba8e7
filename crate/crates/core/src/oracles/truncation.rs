//! Closed-form curve for `P = N(0, I_d)` against `Q_ψ = N(0, ψ² I_d)`.
//!
//! The likelihood ratio `r_ψ(x) = ψ^d exp(−‖x‖²(1 − 1/ψ²)/2)` is radial, so
//! the Bayes region `{λ dP ≥ dQ_ψ}` is a ball (ψ > 1) or a ball complement
//! (ψ < 1) and both error rates are chi tails.

use std::f64::consts::SQRT_2;

use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::curve::{CurveKind, PrCurve};
use crate::error::{invalid, Result};
use crate::grid::LambdaGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Predict `P` on `‖x‖ ≤ T`.
    AcceptInside,
    /// Predict `P` on `‖x‖ ≥ T`.
    AcceptOutside,
    AcceptAll,
    AcceptNone,
}

/// Radial decision region of the likelihood-ratio classifier at one λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRegion {
    /// `+∞` for `AcceptAll` / `AcceptNone`.
    pub threshold: f64,
    pub orientation: Orientation,
}

/// `log r_ψ` at radius `radius`.
pub fn log_likelihood_ratio_scale(psi: f64, d: usize, radius: f64) -> f64 {
    d as f64 * psi.ln() - 0.5 * radius * radius * (1.0 - 1.0 / (psi * psi))
}

/// Region `{x : λ·dP(x) ≥ dQ_ψ(x)}`, i.e. `r_ψ(x) ≥ 1/λ`.
///
/// Solving `d·log ψ − ‖x‖²(1 − 1/ψ²)/2 ≥ −log λ` gives
/// `T² = 2ψ²/(1 − ψ²) · (−log λ − d·log ψ)`, so `λ·r_ψ(T) = 1` whenever `T`
/// is finite.
pub fn scale_threshold(psi: f64, lambda: f64, d: usize) -> Result<DecisionRegion> {
    if !(psi.is_finite() && psi > 0.0) {
        return Err(invalid(format!("psi={psi} must be positive")));
    }
    if psi == 1.0 {
        return Err(invalid("psi = 1 has no decision boundary"));
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(invalid(format!("lambda={lambda} must be positive")));
    }
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    // log(λ ψ^d)
    let log_level = lambda.ln() + d as f64 * psi.ln();
    let psi2 = psi * psi;
    let region = if psi < 1.0 {
        if log_level > 0.0 {
            DecisionRegion { threshold: f64::INFINITY, orientation: Orientation::AcceptAll }
        } else {
            let t2 = 2.0 * psi2 / (1.0 - psi2) * -log_level;
            DecisionRegion { threshold: t2.sqrt(), orientation: Orientation::AcceptOutside }
        }
    } else if log_level < 0.0 {
        DecisionRegion { threshold: f64::INFINITY, orientation: Orientation::AcceptNone }
    } else {
        let t2 = 2.0 * psi2 / (psi2 - 1.0) * log_level;
        DecisionRegion { threshold: t2.sqrt(), orientation: Orientation::AcceptInside }
    };
    Ok(region)
}

/// `P(‖Z‖ ≥ t)` for `Z ~ N(0, I_d)`, via the regularized upper incomplete
/// gamma function `Q(d/2, t²/2)`.
pub fn chi_tail(d: usize, t: f64) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    if t <= 0.0 {
        return 1.0;
    }
    if t == f64::INFINITY {
        return 0.0;
    }
    gamma_ur(d as f64 / 2.0, 0.5 * t * t)
}

/// `P(‖Z‖ < t)`; the complement of [`chi_tail`] without cancellation.
pub fn chi_cdf(d: usize, t: f64) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    if t <= 0.0 {
        return 0.0;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    gamma_lr(d as f64 / 2.0, 0.5 * t * t)
}

/// Same quantity as [`chi_tail`] through the moment recurrence
/// `J_m(t) = t^{m−1} e^{−t²/2} + (m − 1) J_{m−2}(t)` for
/// `J_m(t) = ∫_t^∞ r^m e^{−r²/2} dr`.
///
/// Normalized by the sphere area and the Gaussian constant, each step adds
/// `2^{1−m/2} t^{m−2} e^{−t²/2} / Γ(m/2)` to the tail of dimension `m − 2`,
/// starting from `erfc(t/√2)` (d = 1) or `e^{−t²/2}` (d = 2). All terms are
/// positive and evaluated in log space.
pub fn chi_tail_recurrence(d: usize, t: f64) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    if t <= 0.0 {
        return 1.0;
    }
    let half_t2 = 0.5 * t * t;
    let (mut tail, mut m) = if d % 2 == 1 {
        (libm::erfc(t / SQRT_2), 1)
    } else {
        ((-half_t2).exp(), 2)
    };
    let ln_t = t.ln();
    let ln2 = std::f64::consts::LN_2;
    while m < d {
        m += 2;
        let mh = m as f64 / 2.0;
        let log_term = (1.0 - mh) * ln2 - ln_gamma(mh) + (m as f64 - 2.0) * ln_t - half_t2;
        tail += log_term.exp();
    }
    tail
}

/// Exact `α_λ(P, Q_ψ) = λ·fpr + fnr` of the Bayes region.
pub fn analytic_alpha_scale(psi: f64, lambda: f64, d: usize) -> Result<f64> {
    if psi == 1.0 {
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(invalid(format!("lambda={lambda} must be positive")));
        }
        return Ok(lambda.min(1.0));
    }
    let region = scale_threshold(psi, lambda, d)?;
    let t = region.threshold;
    let alpha = match region.orientation {
        Orientation::AcceptAll => 1.0,
        Orientation::AcceptNone => lambda,
        // fpr = P(‖x‖ < T), fnr = Q_ψ(‖x‖ ≥ T) = P(‖z‖ ≥ T/ψ)
        Orientation::AcceptOutside => lambda * chi_cdf(d, t) + chi_tail(d, t / psi),
        // fpr = P(‖x‖ > T), fnr = P(‖z‖ ≤ T/ψ)
        Orientation::AcceptInside => lambda * chi_tail(d, t) + chi_cdf(d, t / psi),
    };
    Ok(alpha.min(lambda.min(1.0)))
}

/// [`analytic_alpha_scale`] over a grid.
pub fn analytic_curve_scale(psi: f64, d: usize, grid: &LambdaGrid) -> Result<PrCurve> {
    let alphas = grid
        .lambdas()
        .iter()
        .map(|&l| analytic_alpha_scale(psi, l, d))
        .collect::<Result<Vec<_>>>()?;
    PrCurve::from_alphas(grid.lambdas(), &alphas, CurveKind::Analytic)
}
