use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{EvalReport, FoldMetrics, GridResult};
use super::{
    explained_variance, fit, mean, rmse, similarity_features, Backend, DenseMatrix, Grid, LearnerError,
    SplitPlan,
};
use crate::axiom_similarity::AxiomSimilarityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    /// Clamp interval for predictions, normally the axiom kind's score range.
    pub range: Option<(f64, f64)>,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 5,
            seed: 0,
            range: None,
        }
    }
}

/// Partition `n` shuffled indices into `folds` near-equal test blocks.
pub fn fold_plans(n: usize, folds: usize, seed: u64) -> Result<Vec<SplitPlan>, LearnerError> {
    if folds < 2 {
        return Err(LearnerError::InvalidHyperparams(format!("need at least 2 folds, got {folds}")));
    }
    if n < folds {
        return Err(LearnerError::TooFewSamples { samples: n, folds });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((0..folds)
        .map(|f| {
            let (start, end) = (f * n / folds, (f + 1) * n / folds);
            let mut test_indices = order[start..end].to_vec();
            let mut train_indices: Vec<usize> = order[..start].iter().chain(&order[end..]).copied().collect();
            test_indices.sort_unstable();
            train_indices.sort_unstable();
            SplitPlan {
                train_indices,
                test_indices,
                seed,
            }
        })
        .collect())
}

/// Cross-validation over plain feature rows: folds hold out rows only.
pub fn cross_validate(
    backend: Backend,
    x: &DenseMatrix,
    y: &[f64],
    grid: &Grid,
    config: CvConfig,
) -> Result<EvalReport, LearnerError> {
    run(backend, x, y, false, grid, config)
}

/// Cross-validation over a square axiom similarity matrix: each fold keeps
/// only the columns of its training axioms, for training and test rows alike.
pub fn cross_validate_similarity(
    backend: Backend,
    ma: &AxiomSimilarityMatrix,
    grid: &Grid,
    config: CvConfig,
) -> Result<EvalReport, LearnerError> {
    run(backend, &similarity_features(ma), ma.basis().scores(), true, grid, config)
}

struct FoldData {
    train_x: DenseMatrix,
    train_y: Vec<f64>,
    test_x: DenseMatrix,
    test_y: Vec<f64>,
}

struct FoldOutcome {
    predictions: Vec<f64>,
    clamped: usize,
}

fn run(
    backend: Backend,
    x: &DenseMatrix,
    y: &[f64],
    restrict_columns: bool,
    grid: &Grid,
    config: CvConfig,
) -> Result<EvalReport, LearnerError> {
    if x.rows() != y.len() {
        return Err(LearnerError::LengthMismatch {
            rows: x.rows(),
            targets: y.len(),
        });
    }
    let candidates = grid.candidates(backend, config.seed);
    if candidates.is_empty() {
        return Err(LearnerError::EmptyGrid);
    }
    let plans = fold_plans(y.len(), config.folds, config.seed)?;
    let folds: Vec<FoldData> = plans
        .iter()
        .map(|p| {
            if restrict_columns {
                let s = p.apply(x, y);
                FoldData {
                    train_x: s.train_x,
                    train_y: s.train_y,
                    test_x: s.test_x,
                    test_y: s.test_y,
                }
            } else {
                FoldData {
                    train_x: x.select_rows(&p.train_indices),
                    train_y: p.train_indices.iter().map(|&i| y[i]).collect(),
                    test_x: x.select_rows(&p.test_indices),
                    test_y: p.test_indices.iter().map(|&i| y[i]).collect(),
                }
            }
        })
        .collect();

    // Every (candidate, fold) job is independent; results are gathered in job
    // order so the outcome does not depend on scheduling.
    let jobs: Vec<(usize, usize)> = (0..candidates.len())
        .flat_map(|c| (0..folds.len()).map(move |f| (c, f)))
        .collect();
    let outcomes: Vec<Result<FoldOutcome, LearnerError>> = jobs
        .par_iter()
        .map(|&(c, f)| {
            let fold = &folds[f];
            let model = fit(&fold.train_x, &fold.train_y, candidates[c], config.range)?;
            let preds = model.predict_rows(&fold.test_x)?;
            Ok(FoldOutcome {
                predictions: preds.iter().map(|p| p.value).collect(),
                clamped: preds.iter().filter(|p| p.clamped).count(),
            })
        })
        .collect();

    let mut grid_results = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    let mut first_error = None;
    for (c, hp) in candidates.iter().enumerate() {
        let per = &outcomes[c * folds.len()..(c + 1) * folds.len()];
        match per.iter().find_map(|o| o.as_ref().err()) {
            Some(e) => {
                first_error.get_or_insert_with(|| e.clone());
                grid_results.push(GridResult {
                    hyperparams: *hp,
                    mean_rmse: None,
                    error: Some(e.to_string()),
                });
            }
            None => {
                let fold_rmse: Vec<f64> = per
                    .iter()
                    .zip(&folds)
                    .map(|(o, fd)| rmse(&o.as_ref().expect("checked").predictions, &fd.test_y))
                    .collect::<Result<_, _>>()?;
                let m = mean(&fold_rmse);
                // Candidates run simplest first, so only a clear improvement
                // displaces the incumbent.
                if best.is_none_or(|(_, b)| m < b - 1e-12 * b.max(1.0)) {
                    best = Some((c, m));
                }
                grid_results.push(GridResult {
                    hyperparams: *hp,
                    mean_rmse: Some(m),
                    error: None,
                });
            }
        }
    }
    let Some((best_c, _)) = best else {
        return Err(first_error.expect("every candidate failed"));
    };

    let mut per_fold = Vec::with_capacity(folds.len());
    let mut baseline = Vec::with_capacity(folds.len());
    let mut clamped = 0;
    for (o, fd) in outcomes[best_c * folds.len()..(best_c + 1) * folds.len()].iter().zip(&folds) {
        let o = o.as_ref().expect("best candidate succeeded");
        let ev = explained_variance(&o.predictions, &fd.test_y)?;
        per_fold.push(FoldMetrics {
            rmse: rmse(&o.predictions, &fd.test_y)?,
            explained_variance: ev.value,
            degenerate: ev.degenerate,
            test_size: fd.test_y.len(),
        });
        let constant = vec![mean(&fd.train_y); fd.test_y.len()];
        baseline.push(rmse(&constant, &fd.test_y)?);
        clamped += o.clamped;
    }
    let rmse_mean = mean(&per_fold.iter().map(|f| f.rmse).collect::<Vec<_>>());
    let ev_mean = mean(&per_fold.iter().map(|f| f.explained_variance).collect::<Vec<_>>());
    Ok(EvalReport {
        backend,
        best_hyperparams: candidates[best_c],
        rmse: rmse_mean,
        explained_variance: ev_mean,
        degenerate_variance: per_fold.iter().any(|f| f.degenerate),
        baseline_rmse: mean(&baseline),
        per_fold,
        grid: grid_results,
        folds: folds.len(),
        seed: config.seed,
        samples: y.len(),
        clamped_predictions: clamped,
    })
}
