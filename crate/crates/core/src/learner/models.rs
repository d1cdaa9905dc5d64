use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean, DenseMatrix, Hyperparams, LearnerError};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A fitted regressor. Serializes to a self-describing JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    format_version: u32,
    hyperparams: Hyperparams,
    width: usize,
    /// Predictions are clamped into this interval when present.
    range: Option<(f64, f64)>,
    state: State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum State {
    Knn { train_x: DenseMatrix, train_y: Vec<f64> },
    Ridge { weights: Vec<f64> },
    TreeEnsemble { trees: Vec<Tree> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

pub fn fit(
    x: &DenseMatrix,
    y: &[f64],
    hyperparams: Hyperparams,
    range: Option<(f64, f64)>,
) -> Result<RegressionModel, LearnerError> {
    hyperparams.validate()?;
    if x.rows() != y.len() {
        return Err(LearnerError::LengthMismatch {
            rows: x.rows(),
            targets: y.len(),
        });
    }
    if y.is_empty() {
        return Err(LearnerError::EmptyTraining);
    }
    if !x.data().iter().chain(y).all(|v| v.is_finite()) {
        return Err(LearnerError::NonFinite("training data"));
    }
    let state = match hyperparams {
        Hyperparams::Knn { .. } => State::Knn {
            train_x: x.clone(),
            train_y: y.to_vec(),
        },
        Hyperparams::Ridge { lambda } => State::Ridge {
            weights: ridge_weights(x, y, lambda)?,
        },
        Hyperparams::TreeEnsemble { trees, max_depth, seed } => State::TreeEnsemble {
            trees: (0..trees)
                .into_par_iter()
                .map(|t| Tree::grow(x, y, max_depth, seed, t as u64))
                .collect(),
        },
    };
    Ok(RegressionModel {
        format_version: MODEL_FORMAT_VERSION,
        hyperparams,
        width: x.cols(),
        range,
        state,
    })
}

/// Solves `(XᵀX + λI) w = Xᵀy` by Cholesky factorization.
fn ridge_weights(x: &DenseMatrix, y: &[f64], lambda: f64) -> Result<Vec<f64>, LearnerError> {
    let xm = DMatrix::from_row_slice(x.rows(), x.cols(), x.data());
    let xt = xm.transpose();
    let mut gram = &xt * &xm;
    for i in 0..x.cols() {
        gram[(i, i)] += lambda;
    }
    let rhs = &xt * DVector::from_column_slice(y);
    let chol = gram.cholesky().ok_or(if lambda == 0.0 {
        LearnerError::Singular
    } else {
        LearnerError::NonFinite("ridge normal equations")
    })?;
    let w = chol.solve(&rhs);
    if !w.iter().all(|v| v.is_finite()) {
        return Err(LearnerError::NonFinite("ridge weights"));
    }
    if lambda == 0.0 {
        // Cholesky can succeed on a numerically singular Gram matrix; check the
        // smallest pivot against the largest to catch rank deficiency.
        let l = chol.l();
        let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)]).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        if min.partial_cmp(&(max * 1e-7)) != Some(std::cmp::Ordering::Greater) {
            return Err(LearnerError::Singular);
        }
    }
    Ok(w.iter().copied().collect())
}

impl RegressionModel {
    pub fn hyperparams(&self) -> Hyperparams {
        self.hyperparams
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        self.range
    }

    pub fn check_version(&self) -> Result<(), LearnerError> {
        if self.format_version == MODEL_FORMAT_VERSION {
            Ok(())
        } else {
            Err(LearnerError::ModelVersion(self.format_version))
        }
    }

    pub fn predict_raw(&self, v: &[f64]) -> Result<f64, LearnerError> {
        if v.len() != self.width {
            return Err(LearnerError::DimensionMismatch {
                expected: self.width,
                found: v.len(),
            });
        }
        let out = match &self.state {
            State::Knn { train_x, train_y } => {
                let Hyperparams::Knn { k } = self.hyperparams else {
                    unreachable!("state and hyperparams agree")
                };
                knn_predict(train_x, train_y, k, v)
            }
            State::Ridge { weights } => weights.iter().zip(v).map(|(w, x)| w * x).sum(),
            State::TreeEnsemble { trees } => trees.iter().map(|t| t.predict(v)).sum::<f64>() / trees.len() as f64,
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(LearnerError::NonFinite("prediction"))
        }
    }

    pub fn predict(&self, v: &[f64]) -> Result<Prediction, LearnerError> {
        let raw = self.predict_raw(v)?;
        let value = match self.range {
            Some((lo, hi)) => raw.clamp(lo, hi),
            None => raw,
        };
        Ok(Prediction {
            value,
            raw,
            clamped: value != raw,
        })
    }

    pub fn predict_rows(&self, x: &DenseMatrix) -> Result<Vec<Prediction>, LearnerError> {
        (0..x.rows()).map(|i| self.predict(x.row(i))).collect()
    }
}

/// Mean target of the `k` nearest rows by Euclidean distance; equal distances
/// are resolved by row order.
fn knn_predict(x: &DenseMatrix, y: &[f64], k: usize, v: &[f64]) -> f64 {
    let mut dist: Vec<(f64, usize)> = (0..x.rows())
        .map(|i| {
            let d: f64 = x.row(i).iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
            (d, i)
        })
        .collect();
    let k = k.min(dist.len());
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < dist.len() {
        dist.select_nth_unstable_by(k - 1, cmp);
    }
    let mut nearest = dist[..k].to_vec();
    nearest.sort_by(cmp);
    nearest.iter().map(|&(_, i)| y[i]).sum::<f64>() / k as f64
}

/// Regression tree in flattened form. Node 0 is the root; a node is a leaf
/// when its `left` child index is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    feature: Vec<u32>,
    threshold: Vec<f64>,
    left: Vec<u32>,
    right: Vec<u32>,
    value: Vec<f64>,
}

impl Tree {
    /// Grows tree number `index` on a bootstrap sample. The random stream
    /// depends only on `(seed, index)`, so trees can be grown in any order.
    fn grow(x: &DenseMatrix, y: &[f64], max_depth: usize, seed: u64, index: u64) -> Tree {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let n = y.len();
        let mut rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let max_features = x.cols().div_ceil(3).max(1);
        let mut tree = Tree {
            feature: Vec::new(),
            threshold: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
            value: Vec::new(),
        };
        let mut builder = Builder {
            x,
            y,
            max_depth,
            max_features,
            rng,
        };
        builder.node(&mut tree, &mut rows, 0);
        tree
    }

    fn predict(&self, v: &[f64]) -> f64 {
        let mut i = 0;
        while self.left[i] != 0 {
            i = if v[self.feature[i] as usize] <= self.threshold[i] {
                self.left[i]
            } else {
                self.right[i]
            } as usize;
        }
        self.value[i]
    }
}

struct Builder<'a> {
    x: &'a DenseMatrix,
    y: &'a [f64],
    max_depth: usize,
    max_features: usize,
    rng: ChaCha8Rng,
}

impl Builder<'_> {
    fn node(&mut self, tree: &mut Tree, rows: &mut [usize], depth: usize) -> u32 {
        let id = tree.value.len();
        let targets: Vec<f64> = rows.iter().map(|&r| self.y[r]).collect();
        tree.feature.push(0);
        tree.threshold.push(0.0);
        tree.left.push(0);
        tree.right.push(0);
        tree.value.push(mean(&targets));
        if depth >= self.max_depth || rows.len() < 2 {
            return id as u32;
        }
        let Some((feature, threshold)) = self.best_split(rows) else {
            return id as u32;
        };
        let mut cut = 0;
        for i in 0..rows.len() {
            if self.x.get(rows[i], feature) <= threshold {
                rows.swap(i, cut);
                cut += 1;
            }
        }
        let (l, r) = rows.split_at_mut(cut);
        let left = self.node(tree, l, depth + 1);
        let right = self.node(tree, r, depth + 1);
        tree.feature[id] = feature as u32;
        tree.threshold[id] = threshold;
        tree.left[id] = left;
        tree.right[id] = right;
        id as u32
    }

    /// Best variance-reducing split over a random feature subset, or `None`
    /// when no split strictly reduces the squared error.
    fn best_split(&mut self, rows: &[usize]) -> Option<(usize, f64)> {
        let n = rows.len() as f64;
        let total: f64 = rows.iter().map(|&r| self.y[r]).sum();
        let parent = total * total / n;
        let mut best: Option<(f64, usize, f64)> = None;
        let features = sample(&mut self.rng, self.x.cols(), self.max_features);
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(rows.len());
        for f in features.iter() {
            pairs.clear();
            pairs.extend(rows.iter().map(|&r| (self.x.get(r, f), self.y[r])));
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_sum = 0.0;
            for k in 1..pairs.len() {
                left_sum += pairs[k - 1].1;
                let (lo, hi) = (pairs[k - 1].0, pairs[k].0);
                if lo >= hi {
                    continue;
                }
                let nl = k as f64;
                let right_sum = total - left_sum;
                let score = left_sum * left_sum / nl + right_sum * right_sum / (n - nl);
                if best.is_none_or(|(s, _, _)| score > s) {
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((score, f, threshold));
                }
            }
        }
        let (score, f, threshold) = best?;
        (score > parent + 1e-12 * parent.abs().max(1.0)).then_some((f, threshold))
    }
}
