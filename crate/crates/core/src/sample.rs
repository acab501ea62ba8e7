//! Sample matrices and train/validation pools.

use rand::seq::SliceRandom;

use crate::error::{invalid, Result};
use crate::rng::stream_rng;

/// `n` points in `d` dimensions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    data: Vec<f64>,
    n: usize,
    d: usize,
    seed: Option<u64>,
    spec_id: Option<String>,
}

impl SampleSet {
    pub fn new(data: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("sample dimension must be at least 1"));
        }
        if data.is_empty() || !data.len().is_multiple_of(d) {
            return Err(invalid(format!(
                "{} values do not form a nonempty matrix with {d} columns",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(invalid("sample entries must be finite"));
        }
        let n = data.len() / d;
        Ok(Self { data, n, d, seed: None, spec_id: None })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(invalid("rows have different lengths"));
        }
        Self::new(rows.concat(), d)
    }

    /// Attaches the sampling seed and the distribution it came from.
    pub fn with_provenance(mut self, seed: u64, spec_id: Option<String>) -> Self {
        self.seed = Some(seed);
        self.spec_id = spec_id;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn spec_id(&self) -> Option<&str> {
        self.spec_id.as_deref()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.d)
    }

    /// Rows at `indices`, in that order. Provenance is kept.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid("subset must be nonempty"));
        }
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            if i >= self.n {
                return Err(invalid(format!("row index {i} out of range for n={}", self.n)));
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(Self {
            data,
            n: indices.len(),
            d: self.d,
            seed: self.seed,
            spec_id: self.spec_id.clone(),
        })
    }

    /// Replaces row `i` in place.
    pub fn set_row(&mut self, i: usize, values: &[f64]) -> Result<()> {
        if values.len() != self.d || i >= self.n {
            return Err(invalid("row replacement has wrong shape"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("sample entries must be finite"));
        }
        self.data[i * self.d..(i + 1) * self.d].copy_from_slice(values);
        Ok(())
    }
}

/// Train/validation subsets of the two samples.
///
/// Without a split the validation sets are the training sets themselves and
/// validation points are members of the reference sets of the classifier.
#[derive(Debug, Clone)]
pub struct SplitPool {
    pub train_x: SampleSet,
    pub val_x: SampleSet,
    pub train_y: SampleSet,
    pub val_y: SampleSet,
    pub split_ratio: f64,
    pub split_applied: bool,
    train_idx: [Vec<usize>; 2],
    val_idx: [Vec<usize>; 2],
}

const SPLIT_STREAM_X: u64 = 0x5150_0001;
const SPLIT_STREAM_Y: u64 = 0x5150_0002;

impl SplitPool {
    /// `split_ratio` is the training fraction; `1` disables the split.
    pub fn new(x: &SampleSet, y: &SampleSet, split_ratio: f64, seed: u64) -> Result<Self> {
        if !(split_ratio > 0.0 && split_ratio <= 1.0) {
            return Err(invalid(format!("split ratio {split_ratio} is not in (0, 1]")));
        }
        if x.dim() != y.dim() {
            return Err(invalid(format!(
                "sample dimensions differ: {} vs {}",
                x.dim(),
                y.dim()
            )));
        }
        if split_ratio == 1.0 {
            let all = |n: usize| (0..n).collect::<Vec<_>>();
            return Ok(Self {
                train_x: x.clone(),
                val_x: x.clone(),
                train_y: y.clone(),
                val_y: y.clone(),
                split_ratio,
                split_applied: false,
                train_idx: [all(x.n()), all(y.n())],
                val_idx: [all(x.n()), all(y.n())],
            });
        }
        if x.n() < 2 || y.n() < 2 {
            return Err(invalid("splitting needs at least two points per sample"));
        }
        let (tx, vx) = split_indices(x.n(), split_ratio, seed, SPLIT_STREAM_X);
        let (ty, vy) = split_indices(y.n(), split_ratio, seed, SPLIT_STREAM_Y);
        Ok(Self {
            train_x: x.subset(&tx)?,
            val_x: x.subset(&vx)?,
            train_y: y.subset(&ty)?,
            val_y: y.subset(&vy)?,
            split_ratio,
            split_applied: true,
            train_idx: [tx, ty],
            val_idx: [vx, vy],
        })
    }

    /// Same partition with the roles of the two samples exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            train_x: self.train_y.clone(),
            val_x: self.val_y.clone(),
            train_y: self.train_x.clone(),
            val_y: self.val_x.clone(),
            split_ratio: self.split_ratio,
            split_applied: self.split_applied,
            train_idx: [self.train_idx[1].clone(), self.train_idx[0].clone()],
            val_idx: [self.val_idx[1].clone(), self.val_idx[0].clone()],
        }
    }

    /// Parent-row indices of the training part of x (`0`) or y (`1`).
    pub fn train_indices(&self, side: usize) -> &[usize] {
        &self.train_idx[side]
    }

    pub fn val_indices(&self, side: usize) -> &[usize] {
        &self.val_idx[side]
    }
}

fn split_indices(n: usize, ratio: f64, seed: u64, stream: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stream_rng(seed, stream));
    let n_train = ((ratio * n as f64).round() as usize).clamp(1, n - 1);
    let val = idx.split_off(n_train);
    (idx, val)
}
