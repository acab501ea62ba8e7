//! Precision-recall curves and their geometry in the `(β, α)` unit square.

use std::io::{BufRead, Write};

use crate::error::{invalid, Error, Result};
use crate::grid::LambdaGrid;

/// Relative tolerance for `β·λ = α`.
pub const RATIO_TOL: f64 = 1e-12;
/// Slack allowed on monotonicity and on the `[0, 1]` range of α and β.
pub const SHAPE_TOL: f64 = 1e-9;

/// One frontier point: precision `alpha` and recall `beta` at trade-off `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Where a curve came from; decides which invariants are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// Empirical risk minimizer over a classifier family.
    Empirical,
    /// Closed form.
    Analytic,
    /// Likelihood-ratio classifier rates on a large sample. Sampling noise
    /// can break exact monotonicity, so only the pointwise checks apply.
    MonteCarlo,
    /// Mean ± deviation band from aggregation; only `β·λ = α` is checked.
    Band,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Empirical => "empirical",
            CurveKind::Analytic => "analytic",
            CurveKind::MonteCarlo => "mc_ground_truth",
            CurveKind::Band => "band",
        }
    }
}

/// Ordered `(λ, α, β)` triples, λ ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    points: Vec<PrPoint>,
    kind: CurveKind,
}

impl PrCurve {
    /// Validates and wraps `points`.
    pub fn new(points: Vec<PrPoint>, kind: CurveKind) -> Result<Self> {
        validate(&points, kind)?;
        Ok(Self { points, kind })
    }

    /// Builds the curve from precision values; recall is `α/λ`.
    pub fn from_alphas(lambdas: &[f64], alphas: &[f64], kind: CurveKind) -> Result<Self> {
        if lambdas.len() != alphas.len() {
            return Err(invalid(format!(
                "{} lambdas but {} alphas",
                lambdas.len(),
                alphas.len()
            )));
        }
        let points = lambdas
            .iter()
            .zip(alphas)
            .map(|(&lambda, &alpha)| PrPoint { lambda, alpha, beta: alpha / lambda })
            .collect();
        Self::new(points, kind)
    }

    /// The curve of `P = Q`: `α_λ = min(λ, 1)`.
    pub fn ideal(grid: &LambdaGrid) -> Self {
        let alphas: Vec<f64> = grid.lambdas().iter().map(|l| l.min(1.0)).collect();
        Self::from_alphas(grid.lambdas(), &alphas, CurveKind::Analytic)
            .expect("min(λ, 1) is a valid curve")
    }

    pub fn points(&self) -> &[PrPoint] {
        &self.points
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.alpha).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    /// Copy with α and β clipped into `[0, 1]`.
    pub fn clamped(&self) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| PrPoint {
                lambda: p.lambda,
                alpha: p.alpha.clamp(0.0, 1.0),
                beta: p.beta.clamp(0.0, 1.0),
            })
            .collect();
        Self { points, kind: self.kind }
    }

    /// CSV with header `lambda,alpha,beta`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "lambda,alpha,beta")?;
        for p in &self.points {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", p.lambda, p.alpha, p.beta)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses the format written by [`PrCurve::write_csv`].
    pub fn read_csv<R: BufRead>(r: R, kind: CurveKind) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim() != "lambda,alpha,beta" {
            return Err(invalid(format!("unexpected curve header {header:?}")));
        }
        let mut points = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(invalid(format!("line {}: expected 3 fields", lineno + 2)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| invalid(format!("line {}: {e}", lineno + 2)))
            };
            points.push(PrPoint {
                lambda: parse(fields[0])?,
                alpha: parse(fields[1])?,
                beta: parse(fields[2])?,
            });
        }
        Self::new(points, kind)
    }
}

fn validate(points: &[PrPoint], kind: CurveKind) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCurve(msg));
    if points.is_empty() {
        return bad("curve has no points".into());
    }
    for (i, p) in points.iter().enumerate() {
        if !(p.lambda.is_finite() && p.lambda > 0.0) {
            return bad(format!("point {i}: lambda {} is not positive and finite", p.lambda));
        }
        if !(p.alpha.is_finite() && p.beta.is_finite()) {
            return bad(format!("point {i}: non-finite alpha/beta"));
        }
        if (p.beta * p.lambda - p.alpha).abs() > RATIO_TOL * p.alpha.abs() + f64::MIN_POSITIVE {
            return bad(format!(
                "point {i}: beta*lambda = {} differs from alpha = {}",
                p.beta * p.lambda,
                p.alpha
            ));
        }
        if kind != CurveKind::Band {
            let in_range = |v: f64| (-SHAPE_TOL..=1.0 + SHAPE_TOL).contains(&v);
            if !in_range(p.alpha) || !in_range(p.beta) {
                return bad(format!(
                    "point {i}: (alpha, beta) = ({}, {}) outside [0, 1]",
                    p.alpha, p.beta
                ));
            }
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[1].lambda <= w[0].lambda {
            return bad(format!("lambdas not strictly increasing at {}", i + 1));
        }
    }
    if matches!(kind, CurveKind::Empirical | CurveKind::Analytic) {
        for (i, w) in points.windows(2).enumerate() {
            if w[1].alpha < w[0].alpha - SHAPE_TOL {
                return bad(format!("alpha decreases at index {}", i + 1));
            }
            if w[1].beta > w[0].beta + SHAPE_TOL {
                return bad(format!("beta increases at index {}", i + 1));
            }
        }
    }
    Ok(())
}

/// Upper boundary `α = A(β)` of the region under a curve.
///
/// The region is the down-left closure of the frontier polyline: the first
/// vertex is extended horizontally to `β = 0` and the last one drops
/// vertically to `α = 0`. Vertices are sorted by β and α is made
/// nonincreasing by a running maximum from the right, which is a no-op for
/// monotone curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    /// `(β, α)` with β strictly increasing and α nonincreasing.
    vertices: Vec<(f64, f64)>,
}

impl Envelope {
    pub fn from_curve(curve: &PrCurve) -> Result<Self> {
        if curve.is_empty() {
            return Err(invalid("empty curve"));
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(curve.len());
        for p in curve.points() {
            if p.alpha > 1.0 + SHAPE_TOL || p.beta > 1.0 + SHAPE_TOL {
                return Err(invalid("curve must be clamped to the unit square"));
            }
            pts.push((p.beta.clamp(0.0, 1.0), p.alpha.clamp(0.0, 1.0)));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        pts.dedup_by(|later, earlier| later.0 == earlier.0);
        let mut running = 0.0f64;
        for v in pts.iter_mut().rev() {
            running = running.max(v.1);
            v.1 = running;
        }
        Ok(Self { vertices: pts })
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// `A(β)`.
    pub fn eval(&self, beta: f64) -> f64 {
        let v = &self.vertices;
        let first = v[0];
        let last = v[v.len() - 1];
        if beta <= first.0 {
            return first.1;
        }
        if beta > last.0 {
            return 0.0;
        }
        // first index with vertex β >= beta; >= 1 here
        let j = v.partition_point(|p| p.0 < beta);
        let (b0, a0) = v[j - 1];
        let (b1, a1) = v[j];
        let t = (beta - b0) / (b1 - b0);
        a0 + t * (a1 - a0)
    }

    /// Exact area of the region.
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        let mut area = v[0].0 * v[0].1;
        for w in v.windows(2) {
            area += 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1);
        }
        area
    }

    /// Counter-clockwise boundary polygon of the region.
    pub fn polygon(&self) -> Vec<(f64, f64)> {
        let v = &self.vertices;
        let mut poly = Vec::with_capacity(v.len() + 3);
        let last = v[v.len() - 1];
        poly.push((0.0, 0.0));
        poly.push((last.0, 0.0));
        poly.extend(v.iter().rev().copied());
        poly.push((0.0, v[0].1));
        poly
    }
}

/// Area under the curve in the `(β, α)` unit square.
pub fn curve_area(curve: &PrCurve) -> Result<f64> {
    Ok(Envelope::from_curve(curve)?.area())
}
