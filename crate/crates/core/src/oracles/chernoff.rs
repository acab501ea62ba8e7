//! Chernoff bound on the curve of `N(0, I_d)` against `N(0, ψ² I_d)`.
//!
//! Since `min(λp, q) ≤ (λp)^γ q^{1−γ}` for `γ ∈ [0, 1]`, integrating gives
//! `α_λ ≤ λ^γ m(γ)^d` where `m(γ) = E_Q[(dP/dQ)^γ]` is the one-dimensional
//! moment. For the scaled pair `m(γ) = ψ^γ (1 + γ(ψ² − 1))^{−1/2}`.

use crate::error::{invalid, Result};

/// Golden-section stopping width on γ.
const GAMMA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffResult {
    /// `C = min_γ m(γ)`.
    pub coefficient: f64,
    pub argmin_gamma: f64,
    /// `D_C = −log C`.
    pub divergence: f64,
}

fn check_psi(psi: f64) -> Result<()> {
    if psi.is_finite() && psi > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("psi={psi} must be positive and finite")))
    }
}

fn ln_moment(psi: f64, gamma: f64) -> f64 {
    gamma * psi.ln() - 0.5 * (gamma * (psi * psi - 1.0)).ln_1p()
}

/// `m(γ) = ∫ q (p/q)^γ` for `p = N(0, 1)`, `q = N(0, ψ²)`.
pub fn chernoff_moment(psi: f64, gamma: f64) -> Result<f64> {
    check_psi(psi)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("gamma={gamma} is not in [0, 1]")));
    }
    Ok(ln_moment(psi, gamma).exp())
}

/// Minimizes `m` over `[0, 1]` by golden-section search on `log m`, which is
/// convex in γ.
pub fn chernoff_coefficient(psi: f64) -> Result<ChernoffResult> {
    check_psi(psi)?;
    let f = |g: f64| ln_moment(psi, g);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GAMMA_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let gamma = 0.5 * (a + b);
    let ln_c = f(gamma).min(0.0);
    Ok(ChernoffResult { coefficient: ln_c.exp(), argmin_gamma: gamma, divergence: -ln_c })
}

/// `λ^γ m(γ)^d`, an upper bound on `α_λ` for every `γ ∈ (0, 1)`.
pub fn chernoff_bound(psi: f64, lambda: f64, d: usize, gamma: f64) -> Result<f64> {
    check_psi(psi)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("gamma={gamma} is not in (0, 1)")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid(format!("lambda={lambda} must be positive")));
    }
    Ok((gamma * lambda.ln() + d as f64 * ln_moment(psi, gamma)).exp())
}
