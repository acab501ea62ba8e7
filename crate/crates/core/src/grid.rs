//! Trade-off grids.
//!
//! Angles are sampled at the midpoints of `n` equal bins of `(0, π/2)` and
//! mapped through `tan`, so the grid never touches `0` or `∞` and is closed
//! under `λ ↦ 1/λ`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};

/// Strictly increasing positive trade-off values `λ_i = tan(θ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    thetas: Vec<f64>,
    lambdas: Vec<f64>,
}

impl LambdaGrid {
    pub const MIN_POINTS: usize = 3;

    /// Midpoint grid with `n_points` nodes.
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(invalid(format!(
                "lambda grid needs at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        let step = FRAC_PI_2 / n_points as f64;
        let thetas: Vec<f64> = (0..n_points).map(|i| (i as f64 + 0.5) * step).collect();
        // Upper half is the reciprocal of the mirrored lower half, which keeps
        // the grid symmetric to rounding instead of to `tan` accuracy near π/2.
        let lambdas = (0..n_points)
            .map(|i| {
                let mirror = n_points - 1 - i;
                match (2 * i + 1).cmp(&n_points) {
                    std::cmp::Ordering::Less => thetas[i].tan(),
                    std::cmp::Ordering::Equal => 1.0,
                    std::cmp::Ordering::Greater => 1.0 / thetas[mirror].tan(),
                }
            })
            .collect();
        Ok(Self { thetas, lambdas })
    }

    /// Builds a grid from explicit values. Used for dense oracle grids and
    /// for reading curves back from disk.
    pub fn from_lambdas(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < Self::MIN_POINTS {
            return Err(invalid(format!(
                "lambda grid needs at least {} points, got {}",
                Self::MIN_POINTS,
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(invalid("lambda values must be positive and finite"));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("lambda values must be strictly increasing"));
        }
        let thetas = lambdas.iter().map(|l| l.atan()).collect();
        Ok(Self { thetas, lambdas })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn max(&self) -> f64 {
        self.lambdas[self.lambdas.len() - 1]
    }
}

/// Search space for the classifier parameter: a [`LambdaGrid`] plus the two
/// extreme classifiers at `γ = 0` and `γ = +∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaGrid {
    values: Vec<f64>,
}

impl GammaGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        let inner = LambdaGrid::new(n_points)?;
        let mut values = Vec::with_capacity(n_points + 2);
        values.push(0.0);
        values.extend_from_slice(inner.lambdas());
        values.push(f64::INFINITY);
        Ok(Self { values })
    }

    /// All values in increasing order, `0` first and `+∞` last.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
