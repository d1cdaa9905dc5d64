//! `axiomscore` command-line tool.
//!
//! Each subcommand performs one step and exchanges plain files with the
//! others; `pipeline` chains them all. Exit codes: 0 success, 2 configuration
//! error, 3 data error, 4 numeric error.

mod artifacts;

use std::io::{BufReader, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use axiomscore::axiom_similarity::{check_unknown_floor, AxiomComparer, AxiomSimilarityMatrix, LabeledAxiomSet, SimilarityError};
use axiomscore::hierarchy::{HierarchyError, HierarchyOptions};
use axiomscore::instance_baseline::build_instance_matrix;
use axiomscore::learner::{check_train_frac, Backend, EvalReport, Grid, LearnerError};
use axiomscore::pipeline::{
    compare, dataset_concept_matrix, evaluate, holdout, load_dataset, rescore, train, ModelBundle, TrainSettings,
};
use axiomscore::rdf_store::RdfError;
use axiomscore::scorer::{
    extract_labeled_axioms, read_axioms, write_scored_axioms, ExtractOptions, ScoreError, ScoringOptions,
};
use axiomscore::{Asf, Axiom, AxiomKind, ConceptSimilarityMatrix, Dataset, ErrorKind, NegationMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use artifacts::{Outputs, Stamp};

#[derive(Parser)]
#[command(name = "axiomscore", version, about = "Score OWL class axioms and predict scores from ontology similarity")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<NonZeroUsize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an RDF file and summarize it, optionally re-emitting N-Triples.
    Ingest(IngestArgs),
    /// List asserted axioms of a kind, labeled from asserted counter-kind axioms.
    Extract(ExtractArgs),
    /// Score axioms against the instance data.
    Score(ScoreArgs),
    /// Build the concept similarity matrix of a dataset's class hierarchy.
    ConceptMatrix(ConceptMatrixArgs),
    /// Build the axiom similarity matrix of a scored axiom set.
    AxiomMatrix(AxiomMatrixArgs),
    /// Cross-validate backends, refit the best one and save the model.
    Train(TrainArgs),
    /// Predict scores of new axioms with a saved model.
    Predict(PredictArgs),
    /// Cross-validate on an axiom similarity matrix, optionally with a holdout split.
    Eval(EvalArgs),
    /// Compare ontological and instance-based axiom similarity on one dataset.
    Compare(CompareArgs),
    /// Run extract, concept-matrix, axiom-matrix and train in one go.
    Pipeline(PipelineArgs),
}

#[derive(Args, Serialize)]
struct ScoringFlags {
    /// How negative class membership is established: disjointness or cwa.
    #[arg(long = "neg-mode", default_value = "disjointness")]
    neg_mode: NegationMode,
    /// Count class membership inherited through subClassOf.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    inferred: bool,
}

impl ScoringFlags {
    fn options(&self) -> ScoringOptions {
        ScoringOptions {
            negation: self.neg_mode,
            inferred: self.inferred,
        }
    }
}

#[derive(Args, Serialize)]
struct HierarchyFlags {
    /// Merge subClassOf cycles into single nodes instead of failing.
    #[arg(long = "collapse-cycles")]
    collapse_cycles: bool,
}

impl HierarchyFlags {
    fn options(&self) -> HierarchyOptions {
        HierarchyOptions {
            collapse_cycles: self.collapse_cycles,
        }
    }
}

#[derive(Args, Serialize)]
struct SimilarityFlags {
    /// Axiom similarity function: average or minimum.
    #[arg(long, default_value = "average")]
    asf: Asf,
    /// Similarity assumed for concepts missing from the concept matrix.
    #[arg(long = "unknown-concept-floor")]
    unknown_concept_floor: Option<f64>,
}

impl SimilarityFlags {
    fn validate(&self) -> Result<()> {
        if let Some(f) = self.unknown_concept_floor {
            check_unknown_floor(f).map_err(axiomscore::Error::from)?;
        }
        Ok(())
    }

    fn comparer<'a>(&self, mc: &'a ConceptSimilarityMatrix) -> Result<AxiomComparer<'a>> {
        let c = AxiomComparer::new(mc, self.asf);
        Ok(match self.unknown_concept_floor {
            Some(f) => c.with_unknown_floor(f)?,
            None => c,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum BackendChoice {
    Knn,
    Ridge,
    #[value(name = "tree_ensemble")]
    TreeEnsemble,
    All,
}

#[derive(Args, Serialize)]
struct LearnFlags {
    /// Regression backend, or `all` to keep the best by cross-validation.
    #[arg(long, value_enum, default_value = "all")]
    backend: BackendChoice,
    /// Neighbour counts to search (comma-separated).
    #[arg(long = "k", value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Ridge penalties to search (comma-separated).
    #[arg(long = "lambda", value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Ensemble sizes to search (comma-separated).
    #[arg(long = "trees", value_delimiter = ',')]
    trees: Option<Vec<usize>>,
    /// Tree depths to search (comma-separated).
    #[arg(long = "max-depth", value_delimiter = ',')]
    max_depth: Option<Vec<usize>>,
    /// Cross-validation folds.
    #[arg(long, default_value_t = 5)]
    folds: usize,
    /// Seed for fold assignment, splits and tree bagging.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl LearnFlags {
    fn settings(&self) -> Result<TrainSettings> {
        let d = Grid::default();
        let grid = Grid {
            knn_k: self.k.clone().unwrap_or(d.knn_k),
            ridge_lambda: self.lambda.clone().unwrap_or(d.ridge_lambda),
            trees: self.trees.clone().unwrap_or(d.trees),
            max_depth: self.max_depth.clone().unwrap_or(d.max_depth),
        };
        let backends = match self.backend {
            BackendChoice::Knn => vec![Backend::Knn],
            BackendChoice::Ridge => vec![Backend::Ridge],
            BackendChoice::TreeEnsemble => vec![Backend::TreeEnsemble],
            BackendChoice::All => Backend::ALL.to_vec(),
        };
        let settings = TrainSettings {
            backends,
            grid,
            folds: self.folds,
            seed: self.seed,
        };
        settings.validate()?;
        Ok(settings)
    }
}

#[derive(Args, Serialize)]
struct IngestArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    /// Write the parsed triples as N-Triples.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExtractArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    #[arg(long, default_value = "SubClassOf")]
    kind: AxiomKind,
    /// Keep equally many positive and negative examples.
    #[arg(long)]
    balance: bool,
    /// Replace the assertion-derived labels with scores from the instance data.
    #[arg(long)]
    rescore: bool,
    #[command(flatten)]
    scoring: ScoringFlags,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ScoreArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    /// Axiom file (`kind lhs rhs [score]`, tab-separated).
    #[arg(long)]
    #[serde(skip)]
    axioms: PathBuf,
    #[command(flatten)]
    scoring: ScoringFlags,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ConceptMatrixArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    #[command(flatten)]
    hierarchy: HierarchyFlags,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Ontological,
    Instance,
}

#[derive(Args, Serialize)]
struct AxiomMatrixArgs {
    /// Scored axiom file.
    #[arg(long)]
    #[serde(skip)]
    axioms: PathBuf,
    #[arg(long, value_enum, default_value = "ontological")]
    method: Method,
    /// Concept matrix CSV (ontological method).
    #[arg(long, required_if_eq("method", "ontological"))]
    #[serde(skip)]
    concepts: Option<PathBuf>,
    /// RDF data (instance method).
    #[arg(long, required_if_eq("method", "instance"))]
    #[serde(skip)]
    data: Option<PathBuf>,
    /// Count inherited class membership (instance method).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    inferred: bool,
    #[command(flatten)]
    similarity: SimilarityFlags,
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct TrainArgs {
    /// Concept matrix CSV.
    #[arg(long)]
    #[serde(skip)]
    concepts: PathBuf,
    /// Scored axiom file.
    #[arg(long)]
    #[serde(skip)]
    axioms: PathBuf,
    #[command(flatten)]
    similarity: SimilarityFlags,
    #[command(flatten)]
    learn: LearnFlags,
    /// Model JSON to write.
    #[arg(long)]
    #[serde(skip)]
    out: PathBuf,
    /// Also write the evaluation report as text.
    #[arg(long)]
    #[serde(skip)]
    report: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PredictArgs {
    #[arg(long)]
    #[serde(skip)]
    model: PathBuf,
    /// Candidate axiom, e.g. "SubClassOf <B> <A>" (repeatable).
    #[arg(long = "axiom")]
    axiom: Vec<Axiom>,
    /// File of candidate axioms.
    #[arg(long)]
    #[serde(skip)]
    axioms: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EvalArgs {
    /// Axiom matrix CSV (with score column).
    #[arg(long)]
    #[serde(skip)]
    matrix: PathBuf,
    #[command(flatten)]
    learn: LearnFlags,
    /// Additionally hold out `1 - train_frac` of the axioms for a final test.
    #[arg(long = "train-frac")]
    train_frac: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    report: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CompareArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    /// Scored SubClassOf axioms; extracted and scored from the data when absent.
    #[arg(long)]
    #[serde(skip)]
    axioms: Option<PathBuf>,
    #[arg(long)]
    balance: bool,
    #[command(flatten)]
    scoring: ScoringFlags,
    #[command(flatten)]
    hierarchy: HierarchyFlags,
    #[arg(long, default_value = "average")]
    asf: Asf,
    #[command(flatten)]
    learn: LearnFlags,
    /// Write the comparison as JSON.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PipelineArgs {
    #[arg(long)]
    #[serde(skip)]
    data: PathBuf,
    #[arg(long, default_value = "SubClassOf")]
    kind: AxiomKind,
    #[arg(long)]
    balance: bool,
    #[arg(long)]
    rescore: bool,
    #[command(flatten)]
    scoring: ScoringFlags,
    #[command(flatten)]
    hierarchy: HierarchyFlags,
    #[command(flatten)]
    similarity: SimilarityFlags,
    #[command(flatten)]
    learn: LearnFlags,
    #[arg(long = "out-dir")]
    #[serde(skip)]
    out_dir: PathBuf,
}

fn config(msg: impl Into<String>) -> anyhow::Error {
    axiomscore::Error::Config(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let code = |k: ErrorKind| match k {
        ErrorKind::Config => 2,
        ErrorKind::Data => 3,
        ErrorKind::Numeric => 4,
    };
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<axiomscore::Error>() {
            return code(err.kind());
        }
        if let Some(err) = cause.downcast_ref::<LearnerError>() {
            return code(axiomscore::Error::Learner(err.clone()).kind());
        }
        if let Some(err) = cause.downcast_ref::<ScoreError>() {
            return code(axiomscore::Error::Score(err.clone()).kind());
        }
        if cause.is::<RdfError>() || cause.is::<HierarchyError>() || cause.is::<SimilarityError>() {
            return 3;
        }
    }
    3
}

/// Joins the cause chain, skipping causes already quoted by their wrapper.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    let mut prev = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !prev.ends_with(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
        prev = text;
    }
    msg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.get()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut outputs = Outputs::default();
    match run(cli.command, &mut outputs) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            outputs.rollback();
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command, out: &mut Outputs) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a, out),
        Command::Extract(a) => extract(a, out),
        Command::Score(a) => score(a, out),
        Command::ConceptMatrix(a) => concept_matrix(a, out),
        Command::AxiomMatrix(a) => axiom_matrix(a, out),
        Command::Train(a) => train_cmd(a, out),
        Command::Predict(a) => predict(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Compare(a) => compare_cmd(a, out),
        Command::Pipeline(a) => pipeline(a, out),
    }
}

fn dataset(path: &Path) -> Result<Dataset> {
    load_dataset(path).with_context(|| format!("loading {}", path.display()))
}

fn read_axiom_file(path: &Path) -> Result<Vec<(Axiom, Option<f64>)>> {
    let file = std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    read_axioms(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn read_scored(path: &Path) -> Result<LabeledAxiomSet> {
    let rows = read_axiom_file(path)?;
    let pairs = rows
        .into_iter()
        .map(|(a, s)| s.map(|s| (a.clone(), s)).ok_or_else(|| anyhow::anyhow!(ScoreError::Parse(format!("{a} has no score")))))
        .collect::<Result<Vec<_>>>()?;
    LabeledAxiomSet::from_pairs(pairs).with_context(|| format!("reading {}", path.display()))
}

fn read_concepts(path: &Path) -> Result<ConceptSimilarityMatrix> {
    let file = std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    ConceptSimilarityMatrix::read_csv(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

/// Writes to `path`, or to stdout when no path is given.
fn emit<F>(out: &mut Outputs, path: Option<&Path>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => out.write(p, |w| body(w)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn write_scored(out: &mut Outputs, path: Option<&Path>, rows: &[(Axiom, f64)], stamp: &Stamp) -> Result<()> {
    emit(out, path, |w| Ok(write_scored_axioms(w, rows, Some(&stamp.line()))?))
}

fn ingest(a: IngestArgs, out: &mut Outputs) -> Result<()> {
    let d = dataset(&a.data)?;
    println!("triples            {}", d.len());
    println!("classes            {}", d.classes().len());
    println!("individuals        {}", d.individuals().len());
    println!("subClassOf edges   {}", d.subclass_edges().len());
    println!("disjointWith edges {}", d.disjoint_edges().len());
    if let Some(path) = &a.out {
        let stamp = Stamp::new("ingest", &a, &[&a.data], 0)?;
        out.write_text(path, &format!("# {}\n{}", stamp.line(), d.to_ntriples()))?;
    }
    Ok(())
}

fn extract(a: ExtractArgs, out: &mut Outputs) -> Result<()> {
    let d = dataset(&a.data)?;
    let mut rows = extract_labeled_axioms(&d, a.kind, ExtractOptions { balance: a.balance });
    if a.rescore {
        let axioms: Vec<Axiom> = rows.into_iter().map(|(ax, _)| ax).collect();
        rows = rescore(&d, &axioms, a.scoring.options());
    }
    let stamp = Stamp::new("extract", &a, &[&a.data], 0)?;
    write_scored(out, a.out.as_deref(), &rows, &stamp)
}

fn score(a: ScoreArgs, out: &mut Outputs) -> Result<()> {
    let d = dataset(&a.data)?;
    let axioms: Vec<Axiom> = read_axiom_file(&a.axioms)?.into_iter().map(|(ax, _)| ax).collect();
    let rows = rescore(&d, &axioms, a.scoring.options());
    let stamp = Stamp::new("score", &a, &[&a.data, &a.axioms], 0)?;
    write_scored(out, a.out.as_deref(), &rows, &stamp)
}

fn concept_matrix(a: ConceptMatrixArgs, out: &mut Outputs) -> Result<()> {
    let d = dataset(&a.data)?;
    let mc = dataset_concept_matrix(&d, a.hierarchy.options())?;
    let stamp = Stamp::new("concept-matrix", &a, &[&a.data], 0)?;
    out.write(&a.out, |w| Ok(mc.write_csv(w, Some(&stamp.line()))?))?;
    eprintln!("{} concepts written to {}", mc.len(), a.out.display());
    Ok(())
}

fn axiom_matrix(a: AxiomMatrixArgs, out: &mut Outputs) -> Result<()> {
    a.similarity.validate()?;
    let basis = read_scored(&a.axioms)?;
    let (ma, inputs): (AxiomSimilarityMatrix, Vec<&Path>) = match a.method {
        Method::Ontological => {
            let path = a.concepts.as_deref().ok_or_else(|| config("--concepts is required"))?;
            let mc = read_concepts(path)?;
            (a.similarity.comparer(&mc)?.build_matrix(&basis)?, vec![path, &a.axioms])
        }
        Method::Instance => {
            let path = a.data.as_deref().ok_or_else(|| config("--data is required"))?;
            let d = dataset(path)?;
            (build_instance_matrix(&d, &basis, a.inferred)?, vec![path, &a.axioms])
        }
    };
    let stamp = Stamp::new("axiom-matrix", &a, &inputs, 0)?;
    out.write(&a.out, |w| Ok(ma.write_csv(w, Some(&stamp.line()))?))?;
    eprintln!("{} axioms written to {}", ma.len(), a.out.display());
    Ok(())
}

fn report_text(stamp: &Stamp, reports: &[EvalReport], best: usize) -> String {
    let mut s = format!("# {}\n", stamp.line());
    for (i, r) in reports.iter().enumerate() {
        let tag = if i == best { " (selected)" } else { "" };
        s.push_str(&format!("== {}{tag}\n", r.backend));
        s.push_str(&r.to_table());
        s.push('\n');
    }
    s
}

/// Cross-validate, refit and write model, report text and report CSV.
#[allow(clippy::too_many_arguments)]
fn train_and_save(
    mc: &ConceptSimilarityMatrix,
    ma: &AxiomSimilarityMatrix,
    similarity: &SimilarityFlags,
    settings: &TrainSettings,
    stamp: &Stamp,
    model_path: &Path,
    report_path: Option<&Path>,
    csv_path: Option<&Path>,
    out: &mut Outputs,
) -> Result<()> {
    let (reports, best, model) = train(ma, settings)?;
    let bundle = ModelBundle::new(
        mc,
        ma,
        similarity.asf,
        similarity.unknown_concept_floor,
        model,
        stamp.config_hash.clone(),
        stamp.seed,
    );
    out.write_text(model_path, &bundle.to_json()?)?;
    let text = report_text(stamp, &reports, best);
    print!("{}", text.split_once('\n').map_or("", |(_, rest)| rest));
    if let Some(p) = report_path {
        out.write_text(p, &text)?;
    }
    if let Some(p) = csv_path {
        out.write(p, |w| {
            writeln!(w, "# {}", stamp.line())?;
            Ok(reports[best].write_csv(w)?)
        })?;
    }
    Ok(())
}

fn train_cmd(a: TrainArgs, out: &mut Outputs) -> Result<()> {
    a.similarity.validate()?;
    let settings = a.learn.settings()?;
    let mc = read_concepts(&a.concepts)?;
    let basis = read_scored(&a.axioms)?;
    let ma = a.similarity.comparer(&mc)?.build_matrix(&basis)?;
    let stamp = Stamp::new("train", &a, &[&a.concepts, &a.axioms], settings.seed)?;
    train_and_save(&mc, &ma, &a.similarity, &settings, &stamp, &a.out, a.report.as_deref(), None, out)
}

fn predict(a: PredictArgs, out: &mut Outputs) -> Result<()> {
    let text = std::fs::read_to_string(&a.model).with_context(|| format!("reading {}", a.model.display()))?;
    let bundle = ModelBundle::from_json(&text).with_context(|| format!("reading {}", a.model.display()))?;
    let mut candidates = a.axiom.clone();
    if let Some(path) = &a.axioms {
        candidates.extend(read_axiom_file(path)?.into_iter().map(|(ax, _)| ax));
    }
    if candidates.is_empty() {
        return Err(config("give at least one --axiom or an --axioms file"));
    }
    let predictor = bundle.predictor()?;
    let mut rows = Vec::with_capacity(candidates.len());
    for c in candidates {
        if c.kind() != bundle.kind {
            return Err(config(format!("model predicts {} axioms, got {c}", bundle.kind)));
        }
        let p = predictor.predict(&c).with_context(|| format!("predicting {c}"))?;
        if p.clamped {
            eprintln!("note: {c}: raw prediction {} clamped to {}", p.raw, p.value);
        }
        rows.push((c, p.value));
    }
    let mut inputs: Vec<&Path> = vec![&a.model];
    if let Some(p) = &a.axioms {
        inputs.push(p);
    }
    let stamp = Stamp::new("predict", &a, &inputs, bundle.seed)?;
    write_scored(out, a.out.as_deref(), &rows, &stamp)
}

fn eval(a: EvalArgs, out: &mut Outputs) -> Result<()> {
    let settings = a.learn.settings()?;
    if let Some(f) = a.train_frac {
        check_train_frac(f).map_err(axiomscore::Error::from)?;
    }
    let file = std::fs::File::open(&a.matrix).with_context(|| format!("reading {}", a.matrix.display()))?;
    let ma = AxiomSimilarityMatrix::read_csv(BufReader::new(file)).with_context(|| format!("reading {}", a.matrix.display()))?;
    let stamp = Stamp::new("eval", &a, &[&a.matrix], settings.seed)?;
    let (reports, best) = evaluate(&ma, &settings)?;
    let mut text = report_text(&stamp, &reports, best);
    if let Some(frac) = a.train_frac {
        let h = holdout(&ma, reports[best].best_hyperparams, frac, settings.seed)?;
        text.push_str(&format!("== {} ", reports[best].backend));
        text.push_str(&h.to_table());
    }
    print!("{}", text.split_once('\n').map_or("", |(_, rest)| rest));
    if let Some(p) = &a.report {
        out.write_text(p, &text)?;
    }
    if let Some(p) = &a.csv {
        out.write(p, |w| {
            writeln!(w, "# {}", stamp.line())?;
            Ok(reports[best].write_csv(w)?)
        })?;
    }
    Ok(())
}

fn compare_cmd(a: CompareArgs, out: &mut Outputs) -> Result<()> {
    let settings = a.learn.settings()?;
    let d = dataset(&a.data)?;
    let basis = match &a.axioms {
        Some(p) => read_scored(p)?,
        None => {
            let rows = extract_labeled_axioms(&d, AxiomKind::SubClassOf, ExtractOptions { balance: a.balance });
            let axioms: Vec<Axiom> = rows.into_iter().map(|(ax, _)| ax).collect();
            if axioms.is_empty() {
                return Err(anyhow::anyhow!(SimilarityError::Empty)).context("no SubClassOf axioms in the data");
            }
            LabeledAxiomSet::from_pairs(rescore(&d, &axioms, a.scoring.options()))?
        }
    };
    let mut inputs: Vec<&Path> = vec![&a.data];
    if let Some(p) = &a.axioms {
        inputs.push(p);
    }
    let stamp = Stamp::new("compare", &a, &inputs, settings.seed)?;
    let mut reports = Vec::new();
    for &backend in &settings.backends {
        let r = compare(
            &d,
            &basis,
            a.hierarchy.options(),
            a.asf,
            a.scoring.inferred,
            backend,
            &settings,
        )?;
        println!("{}", r.to_table());
        reports.push(r);
    }
    if let Some(p) = &a.out {
        #[derive(Serialize)]
        struct Doc<'a> {
            config_hash: &'a str,
            seed: u64,
            comparisons: &'a [axiomscore::pipeline::CompareReport],
        }
        let doc = Doc {
            config_hash: &stamp.config_hash,
            seed: stamp.seed,
            comparisons: &reports,
        };
        out.write_text(p, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(())
}

fn pipeline(a: PipelineArgs, out: &mut Outputs) -> Result<()> {
    a.similarity.validate()?;
    let settings = a.learn.settings()?;
    let d = dataset(&a.data)?;
    let stamp = Stamp::new("pipeline", &a, &[&a.data], settings.seed)?;

    let mut rows = extract_labeled_axioms(&d, a.kind, ExtractOptions { balance: a.balance });
    if a.rescore {
        let axioms: Vec<Axiom> = rows.into_iter().map(|(ax, _)| ax).collect();
        rows = rescore(&d, &axioms, a.scoring.options());
    }
    if rows.is_empty() {
        return Err(anyhow::anyhow!(SimilarityError::Empty)).context(format!("no {} axioms in the data", a.kind));
    }
    let dir = &a.out_dir;
    write_scored(out, Some(&dir.join("axioms.tsv")), &rows, &stamp)?;

    let mc = dataset_concept_matrix(&d, a.hierarchy.options())?;
    out.write(&dir.join("concepts.csv"), |w| Ok(mc.write_csv(w, Some(&stamp.line()))?))?;

    let basis = LabeledAxiomSet::from_pairs(rows)?;
    let ma = a.similarity.comparer(&mc)?.build_matrix(&basis)?;
    out.write(&dir.join("axiom-matrix.csv"), |w| Ok(ma.write_csv(w, Some(&stamp.line()))?))?;

    train_and_save(
        &mc,
        &ma,
        &a.similarity,
        &settings,
        &stamp,
        &dir.join("model.json"),
        Some(&dir.join("report.txt")),
        Some(&dir.join("report.csv")),
        out,
    )?;
    for p in out.created() {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
