//! Regression from axiom similarity vectors to axiom scores.
//!
//! Three deterministic backends are provided: k-nearest neighbours, ridge
//! regression and a seeded bagged regression-tree ensemble. Training and
//! evaluation on a similarity matrix never let a held-out axiom appear as a
//! feature column: rows are held out together with their columns.

mod cv;
mod models;
mod report;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axiom_similarity::AxiomSimilarityMatrix;

pub use cv::{cross_validate, cross_validate_similarity, fold_plans, CvConfig};
pub use models::{fit, Prediction, RegressionModel, MODEL_FORMAT_VERSION};
pub use report::{EvalReport, FoldMetrics, GridResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnerError {
    #[error("feature vector has length {found}, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} feature rows but {targets} targets")]
    LengthMismatch { rows: usize, targets: usize },
    #[error("no training samples")]
    EmptyTraining,
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("normal equations are singular with lambda = 0; use lambda > 0")]
    Singular,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("hyperparameter grid is empty")]
    EmptyGrid,
    #[error("{samples} samples cannot be split into {folds} folds")]
    TooFewSamples { samples: usize, folds: usize },
    #[error("unknown backend '{0}' (expected knn, ridge or tree_ensemble)")]
    UnknownBackend(String),
    #[error("unsupported model format version {0}")]
    ModelVersion(u32),
}

impl LearnerError {
    pub fn is_numeric(&self) -> bool {
        matches!(self, LearnerError::Singular | LearnerError::NonFinite(_))
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            LearnerError::InvalidHyperparams(_)
                | LearnerError::DegenerateSplit(_)
                | LearnerError::EmptyGrid
                | LearnerError::UnknownBackend(_)
        )
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LearnerError> {
        if data.len() != rows * cols {
            return Err(LearnerError::LengthMismatch {
                rows: rows * cols,
                targets: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LearnerError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LearnerError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        DenseMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Sub-matrix of the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        DenseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix {
        let all: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Knn,
    Ridge,
    TreeEnsemble,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Knn, Backend::Ridge, Backend::TreeEnsemble];
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Knn => "knn",
            Backend::Ridge => "ridge",
            Backend::TreeEnsemble => "tree_ensemble",
        })
    }
}

impl FromStr for Backend {
    type Err = LearnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "knn" => Ok(Backend::Knn),
            "ridge" => Ok(Backend::Ridge),
            "tree_ensemble" | "trees" | "forest" => Ok(Backend::TreeEnsemble),
            _ => Err(LearnerError::UnknownBackend(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum Hyperparams {
    Knn { k: usize },
    Ridge { lambda: f64 },
    TreeEnsemble { trees: usize, max_depth: usize, seed: u64 },
}

impl Hyperparams {
    pub fn backend(&self) -> Backend {
        match self {
            Hyperparams::Knn { .. } => Backend::Knn,
            Hyperparams::Ridge { .. } => Backend::Ridge,
            Hyperparams::TreeEnsemble { .. } => Backend::TreeEnsemble,
        }
    }

    pub fn validate(&self) -> Result<(), LearnerError> {
        let bad = |m: String| Err(LearnerError::InvalidHyperparams(m));
        match *self {
            Hyperparams::Knn { k: 0 } => bad("knn needs k >= 1".into()),
            Hyperparams::Ridge { lambda } if !(lambda >= 0.0 && lambda.is_finite()) => {
                bad(format!("ridge needs a finite lambda >= 0, got {lambda}"))
            }
            Hyperparams::TreeEnsemble { trees, max_depth, .. } if trees == 0 || max_depth == 0 => {
                bad("tree_ensemble needs trees >= 1 and max_depth >= 1".into())
            }
            _ => Ok(()),
        }
    }

    /// Lexicographic key, smaller meaning simpler: fewer neighbours averaged
    /// count as simpler, as do stronger ridge penalties and smaller forests.
    fn simplicity(&self) -> (f64, f64) {
        match *self {
            Hyperparams::Knn { k } => (k as f64, 0.0),
            Hyperparams::Ridge { lambda } => (-lambda, 0.0),
            Hyperparams::TreeEnsemble { trees, max_depth, .. } => (trees as f64, max_depth as f64),
        }
    }
}

impl fmt::Display for Hyperparams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperparams::Knn { k } => write!(f, "k={k}"),
            Hyperparams::Ridge { lambda } => write!(f, "lambda={lambda}"),
            Hyperparams::TreeEnsemble { trees, max_depth, .. } => write!(f, "trees={trees} depth={max_depth}"),
        }
    }
}

/// Hyperparameter lattice searched by cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub knn_k: Vec<usize>,
    pub ridge_lambda: Vec<f64>,
    pub trees: Vec<usize>,
    pub max_depth: Vec<usize>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            knn_k: vec![1, 3, 5, 9],
            ridge_lambda: vec![1e-4, 1e-2, 1.0, 10.0],
            trees: vec![32, 128],
            max_depth: vec![4, 8],
        }
    }
}

impl Grid {
    /// Candidates for one backend, ordered from simplest to most complex.
    pub fn candidates(&self, backend: Backend, seed: u64) -> Vec<Hyperparams> {
        let mut out: Vec<Hyperparams> = match backend {
            Backend::Knn => self.knn_k.iter().map(|&k| Hyperparams::Knn { k }).collect(),
            Backend::Ridge => self
                .ridge_lambda
                .iter()
                .map(|&lambda| Hyperparams::Ridge { lambda })
                .collect(),
            Backend::TreeEnsemble => self
                .trees
                .iter()
                .flat_map(|&trees| {
                    self.max_depth
                        .iter()
                        .map(move |&max_depth| Hyperparams::TreeEnsemble { trees, max_depth, seed })
                })
                .collect(),
        };
        out.sort_by(|a, b| a.simplicity().partial_cmp(&b.simplicity()).expect("finite grid values"));
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplainedVariance {
    pub value: f64,
    /// Set when the truth has zero variance; `value` is then 1 for a perfect
    /// prediction and 0 otherwise.
    pub degenerate: bool,
}

fn check_lengths(pred: &[f64], truth: &[f64]) -> Result<(), LearnerError> {
    if pred.len() != truth.len() {
        return Err(LearnerError::LengthMismatch {
            rows: pred.len(),
            targets: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(LearnerError::EmptyTraining);
    }
    Ok(())
}

pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64, LearnerError> {
    check_lengths(pred, truth)?;
    let sse: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((sse / truth.len() as f64).sqrt())
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

pub fn explained_variance(pred: &[f64], truth: &[f64]) -> Result<ExplainedVariance, LearnerError> {
    check_lengths(pred, truth)?;
    let residual: Vec<f64> = truth.iter().zip(pred).map(|(t, p)| t - p).collect();
    let var_res = variance(&residual);
    if truth.iter().all(|&t| t == truth[0]) {
        return Ok(ExplainedVariance {
            value: if var_res == 0.0 { 1.0 } else { 0.0 },
            degenerate: true,
        });
    }
    Ok(ExplainedVariance {
        value: 1.0 - var_res / variance(truth),
        degenerate: false,
    })
}

/// Train and test index sets; the test rows only ever see training columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub plan: SplitPlan,
    pub train_x: DenseMatrix,
    pub train_y: Vec<f64>,
    pub test_x: DenseMatrix,
    pub test_y: Vec<f64>,
}

/// Accepts training fractions strictly between 0 and 1.
pub fn check_train_frac(train_frac: f64) -> Result<(), LearnerError> {
    if train_frac > 0.0 && train_frac < 1.0 {
        Ok(())
    } else {
        Err(LearnerError::DegenerateSplit(format!("train fraction {train_frac} not in (0, 1)")))
    }
}

impl SplitPlan {
    /// Shuffle `n` indices with `seed` and keep `round(train_frac * n)` for training.
    pub fn new(n: usize, train_frac: f64, seed: u64) -> Result<Self, LearnerError> {
        check_train_frac(train_frac)?;
        let m = (train_frac * n as f64).round() as usize;
        if m < 2 || m >= n {
            return Err(LearnerError::DegenerateSplit(format!(
                "{n} axioms with train fraction {train_frac} give {m} training and {} test rows",
                n.saturating_sub(m)
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut train_indices = order[..m].to_vec();
        let mut test_indices = order[m..].to_vec();
        train_indices.sort_unstable();
        test_indices.sort_unstable();
        Ok(SplitPlan {
            train_indices,
            test_indices,
            seed,
        })
    }

    /// Apply to a square similarity matrix: train is `m x m`, test `z x m`.
    pub fn apply(&self, x: &DenseMatrix, y: &[f64]) -> Split {
        Split {
            plan: self.clone(),
            train_x: x.select(&self.train_indices, &self.train_indices),
            train_y: self.train_indices.iter().map(|&i| y[i]).collect(),
            test_x: x.select(&self.test_indices, &self.train_indices),
            test_y: self.test_indices.iter().map(|&i| y[i]).collect(),
        }
    }
}

pub(crate) fn similarity_features(ma: &AxiomSimilarityMatrix) -> DenseMatrix {
    DenseMatrix {
        rows: ma.len(),
        cols: ma.len(),
        data: ma.values().to_vec(),
    }
}

pub fn split_no_leakage(ma: &AxiomSimilarityMatrix, train_frac: f64, seed: u64) -> Result<Split, LearnerError> {
    let plan = SplitPlan::new(ma.len(), train_frac, seed)?;
    Ok(plan.apply(&similarity_features(ma), ma.basis().scores()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmse_hand_values() {
        assert_eq!(rmse(&[0.3, 0.4], &[0.3, 0.4]).unwrap(), 0.0);
        assert!((rmse(&[1.0, 0.0], &[0.0, 0.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(rmse(&[1.0], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[]).is_err());
    }

    #[test]
    fn explained_variance_cases() {
        let t = [0.1, 0.5, -0.2];
        assert_eq!(explained_variance(&t, &t).unwrap(), ExplainedVariance { value: 1.0, degenerate: false });
        // A constant shift leaves residual variance at zero.
        let shifted: Vec<f64> = t.iter().map(|x| x + 1.0).collect();
        assert_eq!(explained_variance(&shifted, &t).unwrap().value, 1.0);
        let c = [0.3, 0.3, 0.3];
        assert_eq!(explained_variance(&c, &c).unwrap(), ExplainedVariance { value: 1.0, degenerate: true });
        let ev = explained_variance(&[0.0, 0.3, 0.6], &c).unwrap();
        assert!(ev.degenerate && ev.value == 0.0);
    }

    #[test]
    fn split_shapes_and_determinism() {
        let plan = SplitPlan::new(10, 0.8, 3).unwrap();
        assert_eq!(plan.train_indices.len(), 8);
        assert_eq!(plan.test_indices.len(), 2);
        assert_eq!(plan, SplitPlan::new(10, 0.8, 3).unwrap());
        let x = DenseMatrix::identity(10);
        let y: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let s = plan.apply(&x, &y);
        assert_eq!((s.train_x.rows(), s.train_x.cols()), (8, 8));
        assert_eq!((s.test_x.rows(), s.test_x.cols()), (2, 8));
        // Test rows of an identity matrix have no overlap with training columns.
        assert!(s.test_x.data().iter().all(|&v| v == 0.0));
        let mut all: Vec<usize> = plan.train_indices.iter().chain(&plan.test_indices).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_splits_rejected() {
        assert!(SplitPlan::new(10, 0.0, 1).is_err());
        assert!(SplitPlan::new(10, 1.0, 1).is_err());
        assert!(SplitPlan::new(2, 0.5, 1).is_err());
        assert!(SplitPlan::new(10, 0.99, 1).is_err());
    }

    #[test]
    fn grid_order_is_simplest_first() {
        let g = Grid::default();
        assert_eq!(g.candidates(Backend::Knn, 0)[0], Hyperparams::Knn { k: 1 });
        assert_eq!(g.candidates(Backend::Ridge, 0)[0], Hyperparams::Ridge { lambda: 10.0 });
        let t = g.candidates(Backend::TreeEnsemble, 5);
        assert_eq!(t.len(), 4);
        assert_eq!(t[0], Hyperparams::TreeEnsemble { trees: 32, max_depth: 4, seed: 5 });
    }

    #[test]
    fn backend_names() {
        for b in Backend::ALL {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
        assert!("svm".parse::<Backend>().is_err());
    }
}
