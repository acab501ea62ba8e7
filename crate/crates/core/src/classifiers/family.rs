use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::index::{build_neighbor_index, kth_smallest, NeighborIndex};
use crate::distance::sq_dist_row;
use crate::error::{invalid, Error, Result};
use crate::sample::SampleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ipr,
    Knn,
    Parzen,
    Coverage,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ipr, Method::Knn, Method::Parzen, Method::Coverage];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ipr => "ipr",
            Method::Knn => "knn",
            Method::Parzen => "parzen",
            Method::Coverage => "coverage",
        }
    }

    fn needs_index(self) -> bool {
        matches!(self, Method::Ipr | Method::Parzen)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown method {s:?}")))
    }
}

/// Which training sample a query point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

/// Raw evidence counts for P (`a`) and Q (`b`) at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Counts {
    pub a: usize,
    pub b: usize,
}

/// Decision of `f_γ` from counts normalized by the training sizes.
///
/// * `γ = +∞`: `1{a > 0}`.
/// * `γ = 0`: `1{a > 0 ∧ b = 0}`, the limit of the strict rule as `γ → 0⁺`.
/// * `γ ≥ 1`: `1{γ·a/n_X ≥ b/n_Y}`; `0 < γ < 1`: the same with `>`.
///
/// A point without evidence for P (`a = 0`) is always assigned to Q, which
/// keeps every prediction nondecreasing in γ. The comparison is evaluated
/// exactly: `γ·(a·n_Y)` is split into its rounded value and rounding error
/// with a fused multiply-add before subtracting `b·n_X`.
pub fn predict(counts: Counts, gamma: f64, n_x: usize, n_y: usize) -> bool {
    let Counts { a, b } = counts;
    if a == 0 {
        return false;
    }
    if gamma == f64::INFINITY {
        return true;
    }
    if gamma == 0.0 {
        return b == 0;
    }
    let lhs = (a as u128 * n_y as u128) as f64;
    let rhs = (b as u128 * n_x as u128) as f64;
    let p = gamma * lhs;
    let err = gamma.mul_add(lhs, -p);
    let diff = (p - rhs) + err;
    if gamma >= 1.0 {
        diff >= 0.0
    } else {
        diff > 0.0
    }
}

/// State shared by the families fitted on one pair of training samples.
#[derive(Debug)]
struct Fitted {
    train_x: SampleSet,
    train_y: SampleSet,
    k: usize,
    parzen_k: usize,
    index_x: Option<NeighborIndex>,
    index_y: Option<NeighborIndex>,
    rho_x: f64,
    rho_y: f64,
}

/// A fitted family `{f_γ : γ ∈ [0, +∞]}`.
#[derive(Debug, Clone)]
pub struct ClassifierFamily {
    method: Method,
    fitted: Arc<Fitted>,
}

/// Fits one family. `parzen_k` sets the neighbor rank whose mean radius is
/// the Parzen bandwidth.
pub fn make_family(
    method: Method,
    train_x: &SampleSet,
    train_y: &SampleSet,
    k: usize,
    parzen_k: usize,
) -> Result<ClassifierFamily> {
    Ok(make_families(&[method], train_x, train_y, k, parzen_k)?.remove(0))
}

/// Fits several families on the same training samples, sharing indices.
pub fn make_families(
    methods: &[Method],
    train_x: &SampleSet,
    train_y: &SampleSet,
    k: usize,
    parzen_k: usize,
) -> Result<Vec<ClassifierFamily>> {
    if methods.is_empty() {
        return Err(invalid("no methods requested"));
    }
    if train_x.dim() != train_y.dim() {
        return Err(invalid(format!(
            "training dimensions differ: {} vs {}",
            train_x.dim(),
            train_y.dim()
        )));
    }
    let n_min = train_x.n().min(train_y.n());
    if k == 0 || k >= n_min {
        return Err(invalid(format!("k={k} must be in [1, {}]", n_min.saturating_sub(1))));
    }
    let need_parzen = methods.contains(&Method::Parzen);
    if need_parzen && (parzen_k == 0 || parzen_k >= n_min) {
        return Err(invalid(format!("parzen_k={parzen_k} must be in [1, {}]", n_min - 1)));
    }
    let need_index = methods.iter().any(|m| m.needs_index());
    let (index_x, index_y) = if need_index {
        (Some(build_neighbor_index(train_x, k)?), Some(build_neighbor_index(train_y, k)?))
    } else {
        (None, None)
    };
    let (rho_x, rho_y) = if !need_parzen {
        (f64::NAN, f64::NAN)
    } else if parzen_k == k {
        let ix = index_x.as_ref().expect("built above");
        let iy = index_y.as_ref().expect("built above");
        (ix.mean_radius(), iy.mean_radius())
    } else {
        (
            build_neighbor_index(train_x, parzen_k)?.mean_radius(),
            build_neighbor_index(train_y, parzen_k)?.mean_radius(),
        )
    };
    let fitted = Arc::new(Fitted {
        train_x: train_x.clone(),
        train_y: train_y.clone(),
        k,
        parzen_k,
        index_x,
        index_y,
        rho_x,
        rho_y,
    });
    Ok(methods
        .iter()
        .map(|&method| ClassifierFamily { method, fitted: Arc::clone(&fitted) })
        .collect())
}

#[derive(Default)]
struct Scratch {
    dx: Vec<f64>,
    dy: Vec<f64>,
    tmp: Vec<f64>,
}

impl Fitted {
    fn check_member(&self, member: Option<(Side, usize)>) -> Result<()> {
        match member {
            Some((Side::X, i)) if i >= self.train_x.n() => Err(invalid("member index out of range")),
            Some((Side::Y, i)) if i >= self.train_y.n() => Err(invalid("member index out of range")),
            _ => Ok(()),
        }
    }

    /// Counts for every method in `methods`, from one pass of distances.
    fn counts(
        &self,
        z: &[f64],
        member: Option<(Side, usize)>,
        methods: &[Method],
        s: &mut Scratch,
        out: &mut Vec<Counts>,
    ) {
        sq_dist_row(z, self.train_x.data(), &mut s.dx);
        sq_dist_row(z, self.train_y.data(), &mut s.dy);
        let (ex_x, ex_y) = match member {
            Some((Side::X, i)) => (Some(i), None),
            Some((Side::Y, i)) => (None, Some(i)),
            None => (None, None),
        };
        let within = |d: &[f64], r2: f64| d.iter().filter(|&&v| v <= r2).count();
        out.clear();
        for &m in methods {
            let c = match m {
                Method::Ipr => {
                    let rx = self.index_x.as_ref().expect("ipr fits indices").sq_radii();
                    let ry = self.index_y.as_ref().expect("ipr fits indices").sq_radii();
                    Counts {
                        a: s.dx.iter().zip(rx).filter(|(d, r)| d <= r).count(),
                        b: s.dy.iter().zip(ry).filter(|(d, r)| d <= r).count(),
                    }
                }
                Method::Parzen => Counts {
                    a: within(&s.dx, self.rho_x * self.rho_x),
                    b: within(&s.dy, self.rho_y * self.rho_y),
                },
                Method::Knn => {
                    s.tmp.clear();
                    s.tmp.extend(
                        s.dx.iter()
                            .enumerate()
                            .filter(|(i, _)| Some(*i) != ex_x)
                            .map(|(_, v)| *v),
                    );
                    s.tmp.extend(
                        s.dy.iter()
                            .enumerate()
                            .filter(|(i, _)| Some(*i) != ex_y)
                            .map(|(_, v)| *v),
                    );
                    let r2 = *s.tmp.select_nth_unstable_by(self.k - 1, f64::total_cmp).1;
                    Counts { a: within(&s.dx, r2), b: within(&s.dy, r2) }
                }
                Method::Coverage => {
                    let ry2 = kth_smallest(&s.dy, ex_y, self.k, &mut s.tmp);
                    let rx2 = kth_smallest(&s.dx, ex_x, self.k, &mut s.tmp);
                    Counts { a: within(&s.dx, ry2), b: within(&s.dy, rx2) }
                }
            };
            out.push(c);
        }
    }
}

impl ClassifierFamily {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn k(&self) -> usize {
        self.fitted.k
    }

    pub fn parzen_k(&self) -> usize {
        self.fitted.parzen_k
    }

    pub fn train_x(&self) -> &SampleSet {
        &self.fitted.train_x
    }

    pub fn train_y(&self) -> &SampleSet {
        &self.fitted.train_y
    }

    pub fn n_x(&self) -> usize {
        self.fitted.train_x.n()
    }

    pub fn n_y(&self) -> usize {
        self.fitted.train_y.n()
    }

    /// Parzen bandwidths `(ρ_X, ρ_Y)`; NaN unless a Parzen family was fitted
    /// alongside.
    pub fn bandwidths(&self) -> (f64, f64) {
        (self.fitted.rho_x, self.fitted.rho_y)
    }

    /// Per-point kNN radii of the training samples, when fitted.
    pub fn index(&self, side: Side) -> Option<&NeighborIndex> {
        match side {
            Side::X => self.fitted.index_x.as_ref(),
            Side::Y => self.fitted.index_y.as_ref(),
        }
    }

    /// Counts at `z`. `member` names the training point `z` is, if any; it is
    /// left out of the neighbor ranking around `z` but still counted.
    pub fn counts(&self, z: &[f64], member: Option<(Side, usize)>) -> Result<Counts> {
        if z.len() != self.fitted.train_x.dim() {
            return Err(invalid(format!(
                "point has dimension {}, family expects {}",
                z.len(),
                self.fitted.train_x.dim()
            )));
        }
        self.fitted.check_member(member)?;
        let mut out = Vec::with_capacity(1);
        self.fitted
            .counts(z, member, &[self.method], &mut Scratch::default(), &mut out);
        Ok(out[0])
    }

    /// `f_γ(z)` for a point outside the training samples.
    pub fn evaluate(&self, gamma: f64, z: &[f64]) -> Result<bool> {
        self.evaluate_member(gamma, z, None)
    }

    pub fn evaluate_member(&self, gamma: f64, z: &[f64], member: Option<(Side, usize)>) -> Result<bool> {
        if gamma.is_nan() || gamma < 0.0 {
            return Err(invalid(format!("gamma={gamma} must be in [0, +inf]")));
        }
        let c = self.counts(z, member)?;
        Ok(predict(c, gamma, self.n_x(), self.n_y()))
    }
}

/// Counts of every query row for each family, `result[family][query]`.
///
/// The families must come from one [`make_families`] call. With
/// `members = Some(side)`, query `i` is training point `i` of that side.
pub fn count_queries(
    families: &[ClassifierFamily],
    queries: &SampleSet,
    members: Option<Side>,
) -> Result<Vec<Vec<Counts>>> {
    let first = families.first().ok_or_else(|| invalid("no families"))?;
    if families.iter().any(|f| !Arc::ptr_eq(&f.fitted, &first.fitted)) {
        return Err(invalid("families were fitted separately"));
    }
    let fitted = &first.fitted;
    if queries.dim() != fitted.train_x.dim() {
        return Err(invalid("query dimension does not match the families"));
    }
    if let Some(side) = members {
        let n = match side {
            Side::X => fitted.train_x.n(),
            Side::Y => fitted.train_y.n(),
        };
        if n != queries.n() {
            return Err(invalid("member queries must be the whole training sample"));
        }
    }
    let methods: Vec<Method> = families.iter().map(|f| f.method).collect();
    let per_query: Vec<Vec<Counts>> = (0..queries.n())
        .into_par_iter()
        .map_init(Scratch::default, |s, i| {
            let mut out = Vec::with_capacity(methods.len());
            fitted.counts(queries.row(i), members.map(|side| (side, i)), &methods, s, &mut out);
            out
        })
        .collect();
    Ok((0..methods.len())
        .map(|m| per_query.iter().map(|c| c[m]).collect())
        .collect())
}
