//! Scalar summaries of a curve: `F_b` scores, the PR median, IoU against a
//! reference and the extreme values.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::curve::{Envelope, PrCurve};
use crate::error::{invalid, Result};

/// Number of β nodes used by [`curve_iou`].
pub const IOU_GRID: usize = 10_000;

/// `max_λ (1 + b²) / (b²/α_λ + 1/β_λ)` over the curve points. Points with
/// `α = 0` or `β = 0` score 0.
pub fn f_score(curve: &PrCurve, b: f64) -> Result<f64> {
    if curve.is_empty() {
        return Err(invalid("empty curve"));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(invalid(format!("b={b} must be positive")));
    }
    let b2 = b * b;
    Ok(curve
        .points()
        .iter()
        .map(|p| {
            if p.alpha <= 0.0 || p.beta <= 0.0 {
                0.0
            } else {
                (1.0 + b2) / (b2 / p.alpha + 1.0 / p.beta)
            }
        })
        .fold(0.0, f64::max))
}

/// `(α̂_∞, β̂_0)`: α at the largest λ and β at the smallest.
pub fn extremes(curve: &PrCurve) -> Result<(f64, f64)> {
    let pts = curve.points();
    match (pts.first(), pts.last()) {
        (Some(first), Some(last)) => Ok((last.alpha, first.beta)),
        _ => Err(invalid("empty curve")),
    }
}

/// Intersection over union of the regions under two curves, integrated with
/// the trapezoid rule on [`IOU_GRID`] uniform β nodes.
pub fn curve_iou(a: &PrCurve, b: &PrCurve) -> Result<f64> {
    curve_iou_with(a, b, IOU_GRID)
}

pub fn curve_iou_with(a: &PrCurve, b: &PrCurve, nodes: usize) -> Result<f64> {
    if nodes < 2 {
        return Err(invalid("IoU grid needs at least two nodes"));
    }
    let ea = Envelope::from_curve(a)?;
    let eb = Envelope::from_curve(b)?;
    let h = 1.0 / (nodes - 1) as f64;
    let (mut inter, mut union) = (0.0, 0.0);
    for i in 0..nodes {
        let beta = i as f64 * h;
        let w = if i == 0 || i == nodes - 1 { 0.5 } else { 1.0 };
        let (va, vb) = (ea.eval(beta), eb.eval(beta));
        inter += w * va.min(vb);
        union += w * va.max(vb);
    }
    if union == 0.0 {
        return Ok(1.0);
    }
    Ok(inter / union)
}

/// The point where the ray `α = λ̄β` splits the region under the curve into
/// two parts of equal area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrMedian {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Bisection on the ray angle; the area above the ray is computed exactly by
/// clipping the region polygon with the half-plane `α ≥ λβ`.
pub fn pr_median(curve: &PrCurve) -> Result<PrMedian> {
    let env = Envelope::from_curve(curve)?;
    let total = env.area();
    if total <= 0.0 {
        return Err(invalid("curve encloses no area"));
    }
    let poly = env.polygon();
    let half = 0.5 * total;
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    loop {
        let mid = 0.5 * (lo + hi);
        let above = area_above(&poly, mid.tan());
        if hi - lo < 1e-14 {
            break;
        }
        // the area above the ray shrinks as the ray steepens
        if above > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let (beta, alpha) = ray_hit(&env, theta);
    Ok(PrMedian { lambda: theta.tan(), alpha, beta })
}

/// Area of `poly ∩ {α ≥ λβ}`.
fn area_above(poly: &[(f64, f64)], lambda: f64) -> f64 {
    let side = |p: (f64, f64)| p.1 - lambda * p.0;
    let mut clipped = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(cur), side(next));
        if sc >= 0.0 {
            clipped.push(cur);
        }
        if (sc >= 0.0) != (sn >= 0.0) {
            let t = sc / (sc - sn);
            clipped.push((cur.0 + t * (next.0 - cur.0), cur.1 + t * (next.1 - cur.1)));
        }
    }
    shoelace(&clipped)
}

fn shoelace(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| {
            let (x0, y0) = poly[i];
            let (x1, y1) = poly[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    0.5 * twice.abs()
}

/// Where the ray at angle `theta` leaves the region, as `(β, α)`.
fn ray_hit(env: &Envelope, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let v = env.vertices();
    let last = v[v.len() - 1];
    let mut path = Vec::with_capacity(v.len() + 2);
    path.push((0.0, v[0].1));
    path.extend_from_slice(v);
    path.push((last.0, 0.0));
    // first segment crossed by the ray, walking the frontier from the α axis
    for w in path.windows(2) {
        let (p, q) = (w[0], w[1]);
        let cross = |u: (f64, f64)| u.1 * c - u.0 * s;
        let (cp, cq) = (cross(p), cross(q));
        if cp >= 0.0 && cq <= 0.0 && cp != cq {
            let t = cp / (cp - cq);
            return (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
        }
    }
    (last.0, 0.0)
}

/// Scalar summary of one curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryReport {
    pub b: f64,
    pub f_b: f64,
    pub f_inv_b: f64,
    pub pr_median_lambda: f64,
    pub pr_median_alpha: f64,
    pub pr_median_beta: f64,
    pub alpha_inf_hat: f64,
    pub beta_0_hat: f64,
    pub area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iou_vs_reference: Option<f64>,
}

pub fn summarize(curve: &PrCurve, b: f64, reference: Option<&PrCurve>) -> Result<SummaryReport> {
    let (alpha_inf_hat, beta_0_hat) = extremes(curve)?;
    let area = crate::curve::curve_area(curve)?;
    let median = if area > 0.0 {
        pr_median(curve)?
    } else {
        PrMedian { lambda: f64::NAN, alpha: 0.0, beta: 0.0 }
    };
    Ok(SummaryReport {
        b,
        f_b: f_score(curve, b)?,
        f_inv_b: f_score(curve, 1.0 / b)?,
        pr_median_lambda: median.lambda,
        pr_median_alpha: median.alpha,
        pr_median_beta: median.beta,
        alpha_inf_hat,
        beta_0_hat,
        area,
        iou_vs_reference: reference.map(|r| curve_iou(curve, r)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveKind, PrPoint};
    use crate::grid::LambdaGrid;

    fn rectangle(beta: f64, alpha: f64) -> PrCurve {
        PrCurve::new(vec![PrPoint { lambda: alpha / beta, alpha, beta }], CurveKind::Empirical)
            .unwrap()
    }

    fn ideal() -> PrCurve {
        PrCurve::ideal(&LambdaGrid::new(201).unwrap())
    }

    #[test]
    fn f_scores() {
        for b in [0.125, 1.0, 8.0] {
            assert!((f_score(&ideal(), b).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((f_score(&rectangle(0.5, 0.5), 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn iou_examples() {
        assert_eq!(curve_iou(&ideal(), &ideal()).unwrap(), 1.0);
        let v = curve_iou(&ideal(), &rectangle(0.5, 0.5)).unwrap();
        assert!((v - 0.25).abs() < 1e-3, "{v}");
    }

    #[test]
    fn median_of_symmetric_regions() {
        let m = pr_median(&ideal()).unwrap();
        assert!((m.lambda - 1.0).abs() < 1e-9);
        assert!((m.alpha - 1.0).abs() < 1e-9 && (m.beta - 1.0).abs() < 1e-9);
        let m = pr_median(&rectangle(0.5, 0.5)).unwrap();
        assert!((m.lambda - 1.0).abs() < 1e-9);
        assert!((m.alpha - 0.5).abs() < 1e-9);
    }

    #[test]
    fn extremes_of_ideal() {
        assert_eq!(extremes(&ideal()).unwrap(), (1.0, 1.0));
    }
}
