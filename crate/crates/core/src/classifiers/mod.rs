//! Neighbor indices and the one-parameter classifier families `f_γ`.
//!
//! Every family predicts `1` ("from P") by comparing two counts `a` (evidence
//! for P, from the training sample `X`) and `b` (evidence for Q, from `Y`):
//!
//! | method     | `a`                                   | `b`                                   |
//! |------------|---------------------------------------|---------------------------------------|
//! | `ipr`      | `#{x : z ∈ B_k^X(x)}`                 | `#{y : z ∈ B_k^Y(y)}`                 |
//! | `knn`      | `#{x ∈ B_k^{X∪Y}(z)}`                 | `#{y ∈ B_k^{X∪Y}(z)}`                 |
//! | `parzen`   | `#{x : ‖z − x‖ ≤ ρ_X}`                | `#{y : ‖z − y‖ ≤ ρ_Y}`                |
//! | `coverage` | `#{x ∈ B_k^Y(z)}`                     | `#{y ∈ B_k^X(z)}`                     |
//!
//! `B_k^S(u)` is the closed ball around `u` whose radius is the distance to
//! the k-th nearest point of `S` other than `u` itself, and `ρ_S` is the mean
//! of those radii over `S`. See [`predict`] for the decision rule.

mod family;
mod index;
mod kdtree;

pub use family::{
    count_queries, make_families, make_family, predict, ClassifierFamily, Counts, Method, Side,
};
pub use index::{build_neighbor_index, build_neighbor_index_brute, NeighborIndex};
