use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Backend, Hyperparams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub rmse: f64,
    pub explained_variance: f64,
    pub degenerate: bool,
    pub test_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub hyperparams: Hyperparams,
    pub mean_rmse: Option<f64>,
    pub error: Option<String>,
}

/// Cross-validated metrics of the best grid point, with the constant
/// mean-predictor RMSE over the same folds for reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub backend: Backend,
    pub best_hyperparams: Hyperparams,
    pub rmse: f64,
    pub explained_variance: f64,
    /// True when some test fold had constant truth.
    pub degenerate_variance: bool,
    pub baseline_rmse: f64,
    pub per_fold: Vec<FoldMetrics>,
    pub grid: Vec<GridResult>,
    pub folds: usize,
    pub seed: u64,
    pub samples: usize,
    pub clamped_predictions: usize,
}

impl EvalReport {
    /// Relative RMSE reduction against the mean predictor.
    pub fn improvement_over_baseline(&self) -> f64 {
        if self.baseline_rmse == 0.0 {
            0.0
        } else {
            1.0 - self.rmse / self.baseline_rmse
        }
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let ev_note = if self.degenerate_variance { " (degenerate)" } else { "" };
        let _ = writeln!(s, "backend              {}", self.backend);
        let _ = writeln!(s, "best hyperparameters {}", self.best_hyperparams);
        let _ = writeln!(s, "samples / folds      {} / {}", self.samples, self.folds);
        let _ = writeln!(s, "seed                 {}", self.seed);
        let _ = writeln!(s, "cv rmse              {:.5}", self.rmse);
        let _ = writeln!(s, "explained variance   {:.5}{ev_note}", self.explained_variance);
        let _ = writeln!(s, "mean-predictor rmse  {:.5}", self.baseline_rmse);
        let _ = writeln!(s, "clamped predictions  {}", self.clamped_predictions);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<6}{:>8}{:>10}{:>12}", "fold", "size", "rmse", "expl.var");
        for (i, f) in self.per_fold.iter().enumerate() {
            let flag = if f.degenerate { "*" } else { "" };
            let _ = writeln!(
                s,
                "{:<6}{:>8}{:>10.5}{:>12.5}{flag}",
                i, f.test_size, f.rmse, f.explained_variance
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<28}{:>10}", "grid point", "mean rmse");
        for g in &self.grid {
            let cell = match (g.mean_rmse, &g.error) {
                (Some(r), _) => format!("{r:.5}"),
                (None, Some(e)) => format!("failed: {e}"),
                (None, None) => "-".into(),
            };
            let _ = writeln!(s, "{:<28}{:>10}", g.hyperparams.to_string(), cell);
        }
        s
    }

    /// One row per fold plus a `mean` row and a `baseline` row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["fold", "test_size", "rmse", "explained_variance", "degenerate"])?;
        for (i, f) in self.per_fold.iter().enumerate() {
            w.write_record([
                i.to_string(),
                f.test_size.to_string(),
                f.rmse.to_string(),
                f.explained_variance.to_string(),
                f.degenerate.to_string(),
            ])?;
        }
        w.write_record([
            "mean".to_string(),
            self.samples.to_string(),
            self.rmse.to_string(),
            self.explained_variance.to_string(),
            self.degenerate_variance.to_string(),
        ])?;
        w.write_record([
            "baseline".to_string(),
            self.samples.to_string(),
            self.baseline_rmse.to_string(),
            String::new(),
            String::new(),
        ])?;
        w.flush()?;
        Ok(())
    }
}
