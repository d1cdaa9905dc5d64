//! Composition of the modules into the steps the command-line tool exposes.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::axiom_similarity::{Asf, AxiomComparer, AxiomSimilarityMatrix, LabeledAxiomSet};
use crate::error::{Error, Result};
use crate::hierarchy::{build_concept_matrix, ConceptSimilarityMatrix, Hierarchy, HierarchyOptions};
use crate::instance_baseline::build_instance_matrix;
use crate::learner::{
    cross_validate_similarity, explained_variance, fit, mean, rmse, split_no_leakage, Backend, CvConfig, DenseMatrix,
    EvalReport, Grid, Hyperparams, LearnerError, Prediction, RegressionModel,
};
use crate::rdf_store::{Dataset, Iri, RdfFormat};
use crate::scorer::{score_axiom, Axiom, AxiomKind, ScoringOptions};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let format = path
        .extension()
        .and_then(|e| e.to_str())
        .and_then(RdfFormat::from_extension)
        .ok_or_else(|| Error::Config(format!("cannot tell RDF format of {} (use .nt or .ttl)", path.display())))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    Ok(Dataset::parse(&text, format)?)
}

/// Concept similarity over every class of the dataset's hierarchy.
pub fn dataset_concept_matrix(d: &Dataset, options: HierarchyOptions) -> Result<ConceptSimilarityMatrix> {
    let h = Hierarchy::build_with(d, options)?;
    Ok(build_concept_matrix(&h, &h.concepts())?)
}

pub fn rescore(d: &Dataset, axioms: &[Axiom], options: ScoringOptions) -> Vec<(Axiom, f64)> {
    axioms
        .iter()
        .map(|a| (a.clone(), score_axiom(d, a, options).headline()))
        .collect()
}

/// Training settings shared by `train`, `eval` and `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSettings {
    /// Backends to cross-validate; the best one is kept.
    pub backends: Vec<Backend>,
    pub grid: Grid,
    pub folds: usize,
    pub seed: u64,
}

impl Default for TrainSettings {
    fn default() -> Self {
        TrainSettings {
            backends: Backend::ALL.to_vec(),
            grid: Grid::default(),
            folds: 5,
            seed: 0,
        }
    }
}

impl TrainSettings {
    /// Checks every backend has at least one valid grid point and the fold
    /// count is usable.
    pub fn validate(&self) -> Result<()> {
        if self.backends.is_empty() {
            return Err(Error::Config("no backend selected".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config(format!("{} folds; need at least 2", self.folds)));
        }
        for &b in &self.backends {
            let candidates = self.grid.candidates(b, self.seed);
            if candidates.is_empty() {
                return Err(LearnerError::EmptyGrid.into());
            }
            for hp in candidates {
                hp.validate()?;
            }
        }
        Ok(())
    }

    fn cv(&self, kind: AxiomKind) -> CvConfig {
        CvConfig {
            folds: self.folds,
            seed: self.seed,
            range: Some(kind.score_range()),
        }
    }
}

/// Cross-validates every configured backend and returns all reports and the
/// index of the best one (lowest CV RMSE, earlier backend on ties).
pub fn evaluate(ma: &AxiomSimilarityMatrix, settings: &TrainSettings) -> Result<(Vec<EvalReport>, usize)> {
    if settings.backends.is_empty() {
        return Err(Error::Config("no backend selected".into()));
    }
    let kind = ma.basis().kind();
    let reports = settings
        .backends
        .iter()
        .map(|&b| cross_validate_similarity(b, ma, &settings.grid, settings.cv(kind)))
        .collect::<Result<Vec<_>, _>>()?;
    let best = (0..reports.len())
        .min_by(|&a, &b| reports[a].rmse.total_cmp(&reports[b].rmse).then(a.cmp(&b)))
        .expect("at least one report");
    Ok((reports, best))
}

/// Runs [`evaluate`] and refits the winning hyperparameters on the whole
/// matrix.
pub fn train(ma: &AxiomSimilarityMatrix, settings: &TrainSettings) -> Result<(Vec<EvalReport>, usize, RegressionModel)> {
    let (reports, best) = evaluate(ma, settings)?;
    let x = DenseMatrix::new(ma.len(), ma.len(), ma.values().to_vec())?;
    let model = fit(
        &x,
        ma.basis().scores(),
        reports[best].best_hyperparams,
        Some(ma.basis().kind().score_range()),
    )?;
    Ok((reports, best, model))
}

/// Result of fitting on a training split and scoring a held-out test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub hyperparams: Hyperparams,
    pub train_size: usize,
    pub test_size: usize,
    pub rmse: f64,
    pub explained_variance: f64,
    pub degenerate_variance: bool,
    /// RMSE of predicting the training-split mean for every test axiom.
    pub baseline_rmse: f64,
}

impl HoldoutReport {
    pub fn to_table(&self) -> String {
        format!(
            "holdout {} ({} train, {} test)\nrmse {:.5}  explained variance {:.5}{}  mean-predictor rmse {:.5}\n",
            self.hyperparams,
            self.train_size,
            self.test_size,
            self.rmse,
            self.explained_variance,
            if self.degenerate_variance { " (degenerate)" } else { "" },
            self.baseline_rmse,
        )
    }
}

/// Splits the axioms without leakage, fits `hp` on the training part and
/// evaluates on the rest.
pub fn holdout(ma: &AxiomSimilarityMatrix, hp: Hyperparams, train_frac: f64, seed: u64) -> Result<HoldoutReport> {
    let split = split_no_leakage(ma, train_frac, seed)?;
    let range = Some(ma.basis().kind().score_range());
    let model = fit(&split.train_x, &split.train_y, hp, range)?;
    let preds: Vec<f64> = model.predict_rows(&split.test_x)?.iter().map(|p| p.value).collect();
    let ev = explained_variance(&preds, &split.test_y)?;
    let m = mean(&split.train_y);
    Ok(HoldoutReport {
        hyperparams: hp,
        train_size: split.train_y.len(),
        test_size: split.test_y.len(),
        rmse: rmse(&preds, &split.test_y)?,
        explained_variance: ev.value,
        degenerate_variance: ev.degenerate,
        baseline_rmse: rmse(&vec![m; split.test_y.len()], &split.test_y)?,
    })
}

/// Everything needed to score a new axiom: the fitted model, its labeled
/// basis, and the concept similarities it was trained with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub kind: AxiomKind,
    pub asf: Asf,
    pub unknown_concept_floor: Option<f64>,
    pub score_range: (f64, f64),
    pub basis: Vec<Axiom>,
    pub basis_scores: Vec<f64>,
    pub concepts: Vec<Iri>,
    /// Row-major upper triangle of the concept similarity matrix, diagonal included.
    pub concept_similarity: Vec<f64>,
    pub model: RegressionModel,
}

impl ModelBundle {
    pub fn new(
        mc: &ConceptSimilarityMatrix,
        ma: &AxiomSimilarityMatrix,
        asf: Asf,
        unknown_concept_floor: Option<f64>,
        model: RegressionModel,
        config_hash: String,
        seed: u64,
    ) -> Self {
        let kind = ma.basis().kind();
        ModelBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            config_hash,
            seed,
            kind,
            asf,
            unknown_concept_floor,
            score_range: kind.score_range(),
            basis: ma.basis().axioms().to_vec(),
            basis_scores: ma.basis().scores().to_vec(),
            concepts: mc.concepts().to_vec(),
            concept_similarity: mc.upper_triangle(),
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: ModelBundle = serde_json::from_str(text)?;
        if bundle.format_version != BUNDLE_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported model bundle version {}",
                bundle.format_version
            )));
        }
        bundle.model.check_version()?;
        Ok(bundle)
    }

    pub fn predictor(&self) -> Result<Predictor<'_>> {
        let mc = ConceptSimilarityMatrix::from_upper_triangle(self.concepts.clone(), &self.concept_similarity)?;
        Ok(Predictor { bundle: self, mc })
    }
}

pub struct Predictor<'a> {
    bundle: &'a ModelBundle,
    mc: ConceptSimilarityMatrix,
}

impl Predictor<'_> {
    pub fn predict(&self, axiom: &Axiom) -> Result<Prediction> {
        let mut comparer = AxiomComparer::new(&self.mc, self.bundle.asf);
        if let Some(floor) = self.bundle.unknown_concept_floor {
            comparer = comparer.with_unknown_floor(floor)?;
        }
        let v = comparer.encode(axiom, &self.bundle.basis)?;
        Ok(self.bundle.model.predict(&v.weights)?)
    }
}

/// One similarity method's row in the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub method: String,
    pub matrix_seconds: f64,
    pub cv_seconds: f64,
    /// Time to encode and score one candidate axiom.
    pub candidate_seconds: f64,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub backend: Backend,
    pub concept_matrix_seconds: f64,
    pub rows: Vec<CompareRow>,
    /// Set when the instance-based matrix has no off-diagonal evidence at all.
    pub baseline_evidence_starved: bool,
}

/// Ontological against instance-based axiom similarity, same backend, grid
/// and fold seed for both.
pub fn compare(
    d: &Dataset,
    basis: &LabeledAxiomSet,
    hierarchy: HierarchyOptions,
    asf: Asf,
    inferred: bool,
    backend: Backend,
    settings: &TrainSettings,
) -> Result<CompareReport> {
    let t = Instant::now();
    let mc = dataset_concept_matrix(d, hierarchy)?;
    let concept_matrix_seconds = t.elapsed().as_secs_f64();
    let comparer = AxiomComparer::new(&mc, asf);

    let t = Instant::now();
    let onto = comparer.build_matrix(basis)?;
    let onto_seconds = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let inst = build_instance_matrix(d, basis, inferred)?;
    let inst_seconds = t.elapsed().as_secs_f64();
    let starved = inst.off_diagonal().all(|v| v == 0.0);

    let cv = settings.cv(basis.kind());
    let mut rows = Vec::new();
    for (method, ma, secs) in [("ontological", &onto, onto_seconds), ("instance", &inst, inst_seconds)] {
        let t = Instant::now();
        let report = cross_validate_similarity(backend, ma, &settings.grid, cv)?;
        let cv_seconds = t.elapsed().as_secs_f64();
        let x = DenseMatrix::new(ma.len(), ma.len(), ma.values().to_vec())?;
        let model = fit(&x, basis.scores(), report.best_hyperparams, cv.range)?;
        let probe = &basis.axioms()[0];
        let t = Instant::now();
        let v = if method == "ontological" {
            comparer.encode(probe, basis.axioms())?.weights
        } else {
            instance_row(d, basis, probe, inferred)?
        };
        model.predict(&v)?;
        rows.push(CompareRow {
            method: method.to_string(),
            matrix_seconds: secs,
            cv_seconds,
            candidate_seconds: t.elapsed().as_secs_f64(),
            report,
        });
    }
    Ok(CompareReport {
        backend,
        concept_matrix_seconds,
        rows,
        baseline_evidence_starved: starved,
    })
}

fn instance_row(d: &Dataset, basis: &LabeledAxiomSet, probe: &Axiom, inferred: bool) -> Result<Vec<f64>> {
    use crate::instance_baseline::{instance_similarity, SubsumptionPair};
    let pair = |a: &Axiom| {
        SubsumptionPair::new(a.lhs().clone(), a.rhs().clone(), false).expect("axioms are irreflexive")
    };
    let p = pair(probe);
    Ok(basis
        .axioms()
        .iter()
        .map(|b| if b == probe { 1.0 } else { instance_similarity(d, &p, &pair(b), inferred) })
        .collect())
}

impl CompareReport {
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "backend: {}   concept matrix: {:.4} s", self.backend, self.concept_matrix_seconds);
        let _ = writeln!(
            s,
            "{:<13}{:>11}{:>11}{:>13}{:>10}{:>10}{:>12}{:>12}",
            "method", "asm (s)", "cv (s)", "cand. (s)", "rmse", "expl.var", "mean rmse", "best"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<13}{:>11.4}{:>11.4}{:>13.6}{:>10.5}{:>10.5}{:>12.5}{:>12}",
                r.method,
                r.matrix_seconds,
                r.cv_seconds,
                r.candidate_seconds,
                r.report.rmse,
                r.report.explained_variance,
                r.report.baseline_rmse,
                r.report.best_hyperparams.to_string()
            );
        }
        if self.baseline_evidence_starved {
            let _ = writeln!(s, "note: instance-based matrix is evidence-starved (no shared instances)");
        }
        s
    }
}
