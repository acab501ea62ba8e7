//! Fixtures shared by the benchmarks.

use prcurve::{DistributionSpec, SampleSet};

/// `n` points from `N(0, I_d)` and `n` from the same Gaussian shifted by
/// `shift` in every coordinate.
pub fn shifted_pair(n: usize, d: usize, shift: f64, seed: u64) -> (SampleSet, SampleSet) {
    let x = DistributionSpec::standard(d).sample(n, seed, 0).expect("valid spec");
    let y = DistributionSpec::shifted(d, shift).sample(n, seed, 1).expect("valid spec");
    (x, y)
}
