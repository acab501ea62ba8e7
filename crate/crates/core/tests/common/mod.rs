//! Brute-force references written straight from the definitions, sharing no
//! code with the library beyond the sample container.
#![allow(dead_code)]

use prcurve::{Method, SampleSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_set(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: f64, hi: f64) -> SampleSet {
    let data = (0..n * d).map(|_| rng.random_range(lo..hi)).collect();
    SampleSet::new(data, d).unwrap()
}

/// Points on a coarse lattice so that distance ties are common.
pub fn lattice_set(rng: &mut ChaCha8Rng, n: usize, d: usize, levels: i32) -> SampleSet {
    let data = (0..n * d).map(|_| rng.random_range(0..levels) as f64 * 0.5).collect();
    SampleSet::new(data, d).unwrap()
}

pub fn d2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared distance from `z` to its k-th nearest row of `s`, skipping `skip`.
pub fn kth_d2(s: &SampleSet, z: &[f64], k: usize, skip: Option<usize>) -> f64 {
    let mut v: Vec<f64> = (0..s.n()).filter(|&i| Some(i) != skip).map(|i| d2(z, s.row(i))).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[k - 1]
}

pub fn radii2(s: &SampleSet, k: usize) -> Vec<f64> {
    (0..s.n()).map(|i| kth_d2(s, s.row(i), k, Some(i))).collect()
}

/// `(a, b)` at `z`; `member` is `(0 | 1, index)` when `z` is a training point
/// of X or Y.
pub fn naive_counts(
    method: Method,
    x: &SampleSet,
    y: &SampleSet,
    k: usize,
    z: &[f64],
    member: Option<(usize, usize)>,
) -> (usize, usize) {
    let skip_x = member.filter(|m| m.0 == 0).map(|m| m.1);
    let skip_y = member.filter(|m| m.0 == 1).map(|m| m.1);
    let count = |s: &SampleSet, r2: f64| (0..s.n()).filter(|&i| d2(z, s.row(i)) <= r2).count();
    match method {
        Method::Ipr => {
            let rx = radii2(x, k);
            let ry = radii2(y, k);
            let a = (0..x.n()).filter(|&i| d2(z, x.row(i)) <= rx[i]).count();
            let b = (0..y.n()).filter(|&i| d2(z, y.row(i)) <= ry[i]).count();
            (a, b)
        }
        Method::Parzen => {
            let mean = |s: &SampleSet| radii2(s, k).iter().map(|r| r.sqrt()).sum::<f64>() / s.n() as f64;
            let (rx, ry) = (mean(x), mean(y));
            (count(x, rx * rx), count(y, ry * ry))
        }
        Method::Knn => {
            let mut all: Vec<f64> = Vec::new();
            for i in 0..x.n() {
                if Some(i) != skip_x {
                    all.push(d2(z, x.row(i)));
                }
            }
            for i in 0..y.n() {
                if Some(i) != skip_y {
                    all.push(d2(z, y.row(i)));
                }
            }
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let r2 = all[k - 1];
            (count(x, r2), count(y, r2))
        }
        Method::Coverage => {
            let ry = kth_d2(y, z, k, skip_y);
            let rx = kth_d2(x, z, k, skip_x);
            (count(x, ry), count(y, rx))
        }
    }
}

/// Nonnegative rational `num/den`, or `+∞` when `den = 0`.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn ge_one(&self) -> bool {
        self.den == 0 || self.num >= self.den
    }
}

/// `f_γ` per definition with exact rational γ: `γ·a/n_x` against `b/n_y`,
/// loose for `γ ≥ 1`, strict below; `γ = ∞` gives `1{a>0}`, `γ = 0` gives
/// `1{a>0, b=0}`; no evidence for P gives 0.
pub fn naive_predict(a: usize, b: usize, g: Ratio, nx: usize, ny: usize) -> bool {
    if a == 0 {
        return false;
    }
    if g.den == 0 {
        return true;
    }
    if g.num == 0 {
        return b == 0;
    }
    let lhs = g.num * a as u128 * ny as u128;
    let rhs = g.den * b as u128 * nx as u128;
    if g.ge_one() {
        lhs >= rhs
    } else {
        lhs > rhs
    }
}

/// Every γ at which the family can change, the midpoints between them and
/// the two ends.
pub fn breakpoint_gammas(counts: &[(usize, usize)], nx: usize, ny: usize) -> Vec<Ratio> {
    let mut ratios: Vec<Ratio> = counts
        .iter()
        .filter(|c| c.0 > 0)
        .map(|&(a, b)| Ratio { num: (b * nx) as u128, den: (a * ny) as u128 })
        .collect();
    ratios.sort_by(|p, q| (p.num * q.den).cmp(&(q.num * p.den)));
    let mut out = vec![Ratio { num: 0, den: 1 }, Ratio { num: 1, den: 0 }];
    for w in ratios.windows(2) {
        out.push(Ratio { num: w[0].num * w[1].den + w[1].num * w[0].den, den: 2 * w[0].den * w[1].den });
    }
    if let (Some(first), Some(last)) = (ratios.first(), ratios.last()) {
        out.push(Ratio { num: first.num, den: 2 * first.den });
        out.push(Ratio { num: last.num + last.den, den: last.den });
    }
    out.extend(ratios);
    out
}

/// Exhaustive `α̂_λ` over every classifier of the family and both constant
/// classifiers, on explicit train/validation sets.
#[allow(clippy::too_many_arguments)]
pub fn exhaustive_alphas(
    method: Method,
    train_x: &SampleSet,
    train_y: &SampleSet,
    val_x: &SampleSet,
    val_y: &SampleSet,
    members: bool,
    k: usize,
    lambdas: &[f64],
) -> Vec<f64> {
    let cx: Vec<(usize, usize)> = (0..val_x.n())
        .map(|i| naive_counts(method, train_x, train_y, k, val_x.row(i), members.then_some((0, i))))
        .collect();
    let cy: Vec<(usize, usize)> = (0..val_y.n())
        .map(|i| naive_counts(method, train_x, train_y, k, val_y.row(i), members.then_some((1, i))))
        .collect();
    let (nx, ny) = (train_x.n(), train_y.n());
    let all: Vec<(usize, usize)> = cx.iter().chain(&cy).copied().collect();
    let mut rates: Vec<(usize, usize)> = vec![(val_x.n(), 0), (0, val_y.n())];
    for g in breakpoint_gammas(&all, nx, ny) {
        let fp = cx.iter().filter(|c| !naive_predict(c.0, c.1, g, nx, ny)).count();
        let fnc = cy.iter().filter(|c| naive_predict(c.0, c.1, g, nx, ny)).count();
        rates.push((fp, fnc));
    }
    lambdas
        .iter()
        .map(|&l| {
            rates
                .iter()
                .map(|&(fp, fnc)| l * (fp as f64 / val_x.n() as f64) + fnc as f64 / val_y.n() as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}
