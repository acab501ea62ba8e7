use rayon::prelude::*;

use super::kdtree::KdTree;
use crate::distance::sq_dist_row;
use crate::error::{invalid, Result};
use crate::sample::SampleSet;

/// Dimensions up to this use the k-d tree; above it a linear scan is faster.
const KD_MAX_DIM: usize = 8;
const KD_MIN_POINTS: usize = 64;

/// k-th nearest neighbor radii of a reference set.
pub struct NeighborIndex {
    points: SampleSet,
    k: usize,
    sq_radii: Vec<f64>,
    radii: Vec<f64>,
    tree: Option<KdTree>,
}

impl std::fmt::Debug for NeighborIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NeighborIndex")
            .field("n", &self.points.n())
            .field("d", &self.points.dim())
            .field("k", &self.k)
            .field("tree", &self.tree.is_some())
            .finish()
    }
}

/// Radius of every point's ball `B_k(x)`: the distance to its k-th nearest
/// other point. Radii are unaffected by how equidistant neighbors are
/// ordered; duplicates give zero radii.
pub fn build_neighbor_index(points: &SampleSet, k: usize) -> Result<NeighborIndex> {
    let use_tree = points.dim() <= KD_MAX_DIM && points.n() >= KD_MIN_POINTS;
    build(points, k, use_tree)
}

/// Same as [`build_neighbor_index`] with a quadratic scan and no tree.
pub fn build_neighbor_index_brute(points: &SampleSet, k: usize) -> Result<NeighborIndex> {
    build(points, k, false)
}

fn build(points: &SampleSet, k: usize, use_tree: bool) -> Result<NeighborIndex> {
    let n = points.n();
    if k == 0 || k >= n {
        return Err(invalid(format!("k={k} must be in [1, n-1] for n={n}")));
    }
    let tree = use_tree.then(|| KdTree::build(points.data(), points.dim()));
    let mut index = NeighborIndex {
        points: points.clone(),
        k,
        sq_radii: Vec::new(),
        radii: Vec::new(),
        tree,
    };
    let sq_radii: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(row, tmp), i| index.kth_sq_dist_with(points.row(i), Some(i), row, tmp),
        )
        .collect();
    index.radii = sq_radii.iter().map(|r| r.sqrt()).collect();
    index.sq_radii = sq_radii;
    Ok(index)
}

impl NeighborIndex {
    pub fn points(&self) -> &SampleSet {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn sq_radii(&self) -> &[f64] {
        &self.sq_radii
    }

    pub fn mean_radius(&self) -> f64 {
        self.radii.iter().sum::<f64>() / self.radii.len() as f64
    }

    /// Squared distance from `q` to its k-th nearest reference point,
    /// skipping the point at `exclude`.
    pub fn kth_sq_dist(&self, q: &[f64], exclude: Option<usize>) -> Result<f64> {
        if q.len() != self.points.dim() {
            return Err(invalid("query dimension does not match the index"));
        }
        Ok(self.kth_sq_dist_with(q, exclude, &mut Vec::new(), &mut Vec::new()))
    }

    fn kth_sq_dist_with(
        &self,
        q: &[f64],
        exclude: Option<usize>,
        row: &mut Vec<f64>,
        tmp: &mut Vec<f64>,
    ) -> f64 {
        if let Some(tree) = &self.tree {
            return tree.kth_sq_dist(self.points.data(), q, self.k, exclude);
        }
        sq_dist_row(q, self.points.data(), row);
        kth_smallest(row, exclude, self.k, tmp)
    }
}

/// k-th smallest (1-based) of `values` without the entry at `exclude`.
pub(crate) fn kth_smallest(values: &[f64], exclude: Option<usize>, k: usize, tmp: &mut Vec<f64>) -> f64 {
    tmp.clear();
    tmp.extend_from_slice(values);
    if let Some(i) = exclude {
        tmp.swap_remove(i);
    }
    *tmp.select_nth_unstable_by(k - 1, f64::total_cmp).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points() {
        let s = SampleSet::new(vec![0.0, 1.0, 3.0], 1).unwrap();
        let idx = build_neighbor_index(&s, 1).unwrap();
        assert_eq!(idx.radii(), &[1.0, 1.0, 2.0]);
        let idx = build_neighbor_index(&s, 2).unwrap();
        assert_eq!(idx.radii(), &[3.0, 2.0, 3.0]);
    }

    #[test]
    fn k_must_leave_a_neighbor() {
        let s = SampleSet::new(vec![0.0, 1.0, 3.0], 1).unwrap();
        assert!(build_neighbor_index(&s, 3).is_err());
        assert!(build_neighbor_index(&s, 0).is_err());
    }

    #[test]
    fn duplicates_have_zero_radius() {
        let s = SampleSet::new(vec![2.0, 2.0, 5.0], 1).unwrap();
        let idx = build_neighbor_index(&s, 1).unwrap();
        assert_eq!(idx.radii(), &[0.0, 0.0, 3.0]);
    }
}
