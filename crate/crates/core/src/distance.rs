//! Squared Euclidean distance.
//!
//! Every comparison in the crate goes through [`sq_dist`], so a point is at
//! exactly zero distance from itself and `sq_dist(a, b) == sq_dist(b, a)`
//! bit for bit.

/// `‖a − b‖²` with four independent accumulators.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for j in 0..4 {
            let t = x[j] - y[j];
            acc[j] += t * t;
        }
    }
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        let t = x - y;
        acc[0] += t * t;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

/// Squared distances from `q` to every row of the row-major `rows`.
pub fn sq_dist_row(q: &[f64], rows: &[f64], out: &mut Vec<f64>) {
    let d = q.len();
    out.clear();
    out.extend(rows.chunks_exact(d).map(|r| sq_dist(q, r)));
}
