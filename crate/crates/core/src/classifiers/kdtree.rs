//! Exact k-d tree for k-th nearest neighbor distances in low dimension.
//!
//! Pruning compares a single coordinate term against the current k-th
//! squared distance. Because [`sq_dist`] sums nonnegative terms with
//! monotone rounding, the pruned bound never exceeds a true distance, so the
//! tree returns exactly what a linear scan returns.

use std::collections::BinaryHeap;

use crate::distance::sq_dist;

const LEAF_SIZE: usize = 16;

enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

pub(crate) struct KdTree {
    d: usize,
    perm: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl KdTree {
    pub(crate) fn build(data: &[f64], d: usize) -> Self {
        let n = data.len() / d;
        let mut tree = Self { d, perm: (0..n).collect(), nodes: Vec::new() };
        tree.build_node(data, 0, n);
        tree
    }

    fn build_node(&mut self, data: &[f64], start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let d = self.d;
        let dim = (0..d)
            .map(|j| {
                let (lo, hi) = self.perm[start..end].iter().fold(
                    (f64::INFINITY, f64::NEG_INFINITY),
                    |(lo, hi), &i| (lo.min(data[i * d + j]), hi.max(data[i * d + j])),
                );
                (j, hi - lo)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(j, _)| j)
            .unwrap_or(0);
        let mid = start + (end - start) / 2;
        self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            data[a * d + dim].total_cmp(&data[b * d + dim]).then(a.cmp(&b))
        });
        let value = data[self.perm[mid] * d + dim];
        self.nodes.push(Node::Split { dim, value, left: 0, right: 0 });
        let left = self.build_node(data, start, mid);
        let right = self.build_node(data, mid, end);
        if let Node::Split { left: l, right: r, .. } = &mut self.nodes[id] {
            *l = left;
            *r = right;
        }
        id
    }

    /// Squared distance from `q` to its k-th nearest point, skipping index
    /// `exclude`.
    pub(crate) fn kth_sq_dist(&self, data: &[f64], q: &[f64], k: usize, exclude: Option<usize>) -> f64 {
        let mut heap: BinaryHeap<Dist> = BinaryHeap::with_capacity(k + 1);
        self.search(0, data, q, k, exclude, &mut heap);
        heap.peek().map(|t| t.0).unwrap_or(f64::INFINITY)
    }

    fn search(
        &self,
        node: usize,
        data: &[f64],
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Dist>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.perm[start..end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let dist = sq_dist(q, &data[i * self.d..(i + 1) * self.d]);
                    if heap.len() < k {
                        heap.push(Dist(dist));
                    } else if dist < heap.peek().expect("heap is full").0 {
                        heap.pop();
                        heap.push(Dist(dist));
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let t = q[dim] - value;
                let (near, far) = if t <= 0.0 { (left, right) } else { (right, left) };
                self.search(near, data, q, k, exclude, heap);
                if heap.len() < k || t * t <= heap.peek().expect("heap is full").0 {
                    self.search(far, data, q, k, exclude, heap);
                }
            }
        }
    }
}
