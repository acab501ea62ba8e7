use prcurve::oracles::analytic_alpha_scale;
use prcurve::summary::{curve_iou_with, extremes};
use prcurve::*;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

fn analytic(psi: f64, d: usize, n: usize) -> PrCurve {
    prcurve::oracles::analytic_curve_scale(psi, d, &LambdaGrid::new(n).unwrap()).unwrap()
}

/// Frontier point `(β, α)` in the direction `φ` from the origin.
fn frontier(psi: f64, d: usize, phi: f64) -> (f64, f64) {
    let l = phi.tan();
    let a = analytic_alpha_scale(psi, l, d).unwrap();
    (a / l, a)
}

/// `½ ∫ r(φ)² dφ` over `[from, π/2]` with a midpoint rule on `n` cells.
fn polar_area(psi: f64, d: usize, from: f64, n: usize) -> f64 {
    let h = (FRAC_PI_2 - from) / n as f64;
    (0..n)
        .map(|i| {
            let (b, a) = frontier(psi, d, from + (i as f64 + 0.5) * h);
            0.5 * (a * a + b * b) * h
        })
        .sum()
}

#[test]
fn area_matches_polar_riemann_sum() {
    let c = analytic(0.5, 2, 1001);
    let want = polar_area(0.5, 2, 0.0, 1_000_000);
    let got = curve_area(&c).unwrap();
    assert!((got - want).abs() < 1e-3, "{got} vs {want}");
}

#[test]
fn trivial_areas() {
    let grid = LambdaGrid::new(101).unwrap();
    assert!((curve_area(&PrCurve::ideal(&grid)).unwrap() - 1.0).abs() < 1e-12);
    // single frontier point (0.5, 0.5) at λ = 1
    let c = PrCurve::from_alphas(&[1.0], &[0.5], CurveKind::Empirical).unwrap();
    assert_eq!(curve_area(&c).unwrap(), 0.25);
    assert_eq!(f_score(&c, 1.0).unwrap(), 0.5);
    for b in [0.125, 1.0, 8.0] {
        assert!((f_score(&PrCurve::ideal(&grid), b).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn f8_matches_dense_maximization() {
    let (psi, d, b) = (0.5, 8, 8.0);
    let c = analytic(psi, d, 1001);
    let n = 100_000;
    let want = (0..n)
        .map(|i| {
            let (beta, alpha) = frontier(psi, d, (i as f64 + 0.5) * FRAC_PI_2 / n as f64);
            if alpha <= 0.0 || beta <= 0.0 {
                0.0
            } else {
                (1.0 + b * b) * alpha * beta / (b * b * beta + alpha)
            }
        })
        .fold(0.0, f64::max);
    let got = f_score(&c, b).unwrap();
    assert!(got <= want + 1e-12);
    assert!(want - got < 1e-3, "{got} vs {want}");
}

#[test]
fn pr_median_matches_polar_bisection() {
    let (psi, d) = (0.5, 4);
    let c = analytic(psi, d, 2001);
    let total = polar_area(psi, d, 0.0, 200_000);
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if polar_area(psi, d, mid, 20_000) > 0.5 * total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let want = (0.5 * (lo + hi)).tan();
    let m = pr_median(&c).unwrap();
    assert!((m.lambda - want).abs() < 1e-4, "{} vs {want}", m.lambda);
    assert!((m.alpha - m.lambda * m.beta).abs() < 1e-12);
}

#[test]
fn symmetric_curve_has_unit_median() {
    // the ψ and 1/ψ curves are mirror images under (α, β) swap, so their
    // average is symmetric on a reciprocal-symmetric grid
    let grid = LambdaGrid::new(401).unwrap();
    let alphas: Vec<f64> = grid
        .lambdas()
        .iter()
        .map(|&l| {
            let a = analytic_alpha_scale(0.5, l, 3).unwrap();
            let b = analytic_alpha_scale(2.0, l, 3).unwrap();
            0.5 * (a + b)
        })
        .collect();
    let c = PrCurve::from_alphas(grid.lambdas(), &alphas, CurveKind::Analytic).unwrap();
    let m = pr_median(&c).unwrap();
    assert!((m.lambda - 1.0).abs() < 1e-12, "{}", m.lambda);
}

#[test]
fn iou_basics() {
    let a = analytic(0.5, 4, 501);
    let b = analytic(0.7, 4, 501);
    let ab = curve_iou(&a, &b).unwrap();
    assert_eq!(ab, curve_iou(&b, &a).unwrap());
    assert_eq!(curve_iou(&a, &a).unwrap(), 1.0);
    assert!(ab > 0.0 && ab < 1.0);
    let fine = curve_iou_with(&a, &b, 20_000).unwrap();
    assert!((ab - fine).abs() < 1e-3);
    let zero = PrCurve::from_alphas(&[0.5, 2.0], &[0.0, 0.0], CurveKind::Empirical).unwrap();
    assert_eq!(curve_iou(&zero, &zero).unwrap(), 1.0);
    assert_eq!(curve_iou(&zero, &a).unwrap(), 0.0);
}

#[test]
fn f_score_approaches_the_extremes() {
    for (psi, d) in [(0.5, 4), (2.0, 4), (0.8, 16)] {
        let c = analytic(psi, d, 1001);
        let (a_inf, b_0) = extremes(&c).unwrap();
        let mut last = (f64::INFINITY, f64::INFINITY);
        for b in [1.0, 8.0, 64.0, 512.0] {
            let up = (f_score(&c, b).unwrap() - a_inf).abs();
            let down = (f_score(&c, 1.0 / b).unwrap() - b_0).abs();
            assert!(up <= last.0 && down <= last.1, "psi={psi} b={b}");
            last = (up, down);
        }
    }
}

#[test]
fn summary_report_is_consistent() {
    let c = analytic(0.5, 4, 201);
    let r = summarize(&c, 8.0, Some(&c)).unwrap();
    assert_eq!(r.iou_vs_reference, Some(1.0));
    assert_eq!(r.f_b, f_score(&c, 8.0).unwrap());
    assert_eq!(r.area, curve_area(&c).unwrap());
    let json = serde_json::to_value(&r).unwrap();
    assert!(json.get("pr_median_lambda").is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn area_and_iou_respect_dominance(
        u in prop::collection::vec(0.0f64..1.0, 25),
        v in prop::collection::vec(0.0f64..1.0, 25),
    ) {
        let grid = LambdaGrid::new(25).unwrap();
        let cap: Vec<f64> = grid.lambdas().iter().map(|l| l.min(1.0)).collect();
        let lo: Vec<f64> = cap.iter().zip(&u).map(|(c, s)| c * s * 0.5).collect();
        let hi: Vec<f64> = cap.iter().zip(lo.iter().zip(&v)).map(|(c, (l, s))| l + (c - l) * s).collect();
        let a = PrCurve::from_alphas(grid.lambdas(), &lo, CurveKind::MonteCarlo).unwrap();
        let b = PrCurve::from_alphas(grid.lambdas(), &hi, CurveKind::MonteCarlo).unwrap();
        prop_assert!(curve_area(&a).unwrap() <= curve_area(&b).unwrap() + 1e-15);
        let iou = curve_iou(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&iou));
        prop_assert_eq!(iou, curve_iou(&b, &a).unwrap());
    }
}
