//! Possibilistic scoring of atomic class axioms.
//!
//! An axiom's content is realised as one basic statement per individual that
//! the axiom talks about. Each statement is a confirmation, a counterexample,
//! or neither; the three counts feed the possibility and necessity measures,
//! which combine into the acceptance/rejection index (ARI).

mod extract;
mod tsv;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf_store::{Dataset, IndividualSet, Iri};

pub use extract::{extract_labeled_axioms, ExtractOptions};
pub use tsv::{read_axioms, write_scored_axioms};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("counterexamples ({u_minus}) exceed support ({u})")]
    CounterexamplesExceedSupport { u: u64, u_minus: u64 },
    #[error("confirmations ({u_plus}) plus counterexamples ({u_minus}) exceed support ({u})")]
    CountsExceedSupport { u: u64, u_plus: u64, u_minus: u64 },
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("necessity {necessity} > 0 with possibility {possibility} < 1 is not a consistent state")]
    Inconsistent { possibility: f64, necessity: f64 },
    #[error("axiom relates <{0}> to itself")]
    Reflexive(Iri),
    #[error("cannot parse axiom '{0}'")]
    Parse(String),
    #[error("unknown axiom kind '{0}'")]
    UnknownKind(String),
    #[error("line {line}: {message}")]
    Tsv { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomKind {
    SubClassOf,
    DisjointWith,
    EquivalentClass,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 3] = [AxiomKind::SubClassOf, AxiomKind::DisjointWith, AxiomKind::EquivalentClass];

    pub fn is_symmetric(self) -> bool {
        !matches!(self, AxiomKind::SubClassOf)
    }

    /// The kind whose truth implies this kind is false for the same pair.
    pub fn counter(self) -> Option<AxiomKind> {
        match self {
            AxiomKind::SubClassOf => Some(AxiomKind::DisjointWith),
            AxiomKind::DisjointWith => Some(AxiomKind::SubClassOf),
            AxiomKind::EquivalentClass => None,
        }
    }

    /// Range of the headline score: ARI for subsumption and equivalence,
    /// possibility for disjointness.
    pub fn score_range(self) -> (f64, f64) {
        match self {
            AxiomKind::DisjointWith => (0.0, 1.0),
            _ => (-1.0, 1.0),
        }
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomKind::SubClassOf => "SubClassOf",
            AxiomKind::DisjointWith => "DisjointWith",
            AxiomKind::EquivalentClass => "EquivalentClass",
        })
    }
}

impl FromStr for AxiomKind {
    type Err = ScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "subclassof" | "subclass" => Ok(AxiomKind::SubClassOf),
            "disjointwith" | "disjointclasses" | "disjoint" => Ok(AxiomKind::DisjointWith),
            "equivalentclass" | "equivalentclasses" | "equivalent" => Ok(AxiomKind::EquivalentClass),
            _ => Err(ScoreError::UnknownKind(s.to_string())),
        }
    }
}

/// An atomic class axiom. Symmetric kinds compare equal regardless of
/// operand order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Axiom {
    kind: AxiomKind,
    lhs: Iri,
    rhs: Iri,
}

impl Axiom {
    pub fn new(kind: AxiomKind, lhs: Iri, rhs: Iri) -> Result<Self, ScoreError> {
        if lhs == rhs {
            return Err(ScoreError::Reflexive(lhs));
        }
        Ok(Axiom { kind, lhs, rhs })
    }

    pub fn kind(&self) -> AxiomKind {
        self.kind
    }

    pub fn lhs(&self) -> &Iri {
        &self.lhs
    }

    pub fn rhs(&self) -> &Iri {
        &self.rhs
    }

    /// Same axiom with operands swapped. For `SubClassOf` this is a
    /// different axiom.
    pub fn flipped(&self) -> Axiom {
        Axiom {
            kind: self.kind,
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }

    /// Operands of symmetric kinds in lexicographic order.
    pub fn canonical(&self) -> Axiom {
        if self.kind.is_symmetric() && self.rhs < self.lhs {
            self.flipped()
        } else {
            self.clone()
        }
    }

    /// Reinterpret the same class pair as another kind.
    pub fn with_kind(&self, kind: AxiomKind) -> Axiom {
        Axiom {
            kind,
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    fn key(&self) -> (AxiomKind, &Iri, &Iri) {
        if self.kind.is_symmetric() && self.rhs < self.lhs {
            (self.kind, &self.rhs, &self.lhs)
        } else {
            (self.kind, &self.lhs, &self.rhs)
        }
    }
}

impl PartialEq for Axiom {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Axiom {}

impl Hash for Axiom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Axiom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Axiom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> <{}>", self.kind, self.lhs, self.rhs)
    }
}

impl FromStr for Axiom {
    type Err = ScoreError;

    /// Accepts `Kind <lhs> <rhs>`, `Kind(<lhs> <rhs>)` and bare IRIs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScoreError::Parse(s.to_string());
        let cleaned = s.trim().replace(['(', ')'], " ");
        let parts: Vec<&str> = cleaned.split_whitespace().collect();
        let [kind, lhs, rhs] = parts.as_slice() else {
            return Err(bad());
        };
        let kind: AxiomKind = kind.parse()?;
        let lhs: Iri = lhs.parse().map_err(|_| bad())?;
        let rhs: Iri = rhs.parse().map_err(|_| bad())?;
        Axiom::new(kind, lhs, rhs)
    }
}

/// How `¬D(a)` is established for an individual `a`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegationMode {
    /// Closed world: `D(a)` is not derivable.
    Cwa,
    /// Open world: `a` belongs to a class declared disjoint with `D` or with
    /// one of its superclasses.
    #[default]
    Disjointness,
}

impl FromStr for NegationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cwa" => Ok(NegationMode::Cwa),
            "disjointness" | "owa" => Ok(NegationMode::Disjointness),
            other => Err(format!("unknown negation mode '{other}' (expected cwa or disjointness)")),
        }
    }
}

impl fmt::Display for NegationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NegationMode::Cwa => "cwa",
            NegationMode::Disjointness => "disjointness",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringOptions {
    pub negation: NegationMode,
    /// Count inherited class membership (transitive subClassOf).
    pub inferred: bool,
}

impl Default for ScoringOptions {
    fn default() -> Self {
        ScoringOptions {
            negation: NegationMode::Disjointness,
            inferred: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContentCounts {
    pub support: u64,
    pub confirmations: u64,
    pub counterexamples: u64,
}

pub fn possibility(u: u64, u_minus: u64) -> Result<f64, ScoreError> {
    if u_minus > u {
        return Err(ScoreError::CounterexamplesExceedSupport { u, u_minus });
    }
    if u == 0 {
        return Ok(1.0);
    }
    let ratio = (u - u_minus) as f64 / u as f64;
    Ok(1.0 - (1.0 - ratio * ratio).sqrt())
}

pub fn necessity(u: u64, u_plus: u64, u_minus: u64) -> Result<f64, ScoreError> {
    if u_plus.checked_add(u_minus).is_none_or(|s| s > u) {
        return Err(ScoreError::CountsExceedSupport { u, u_plus, u_minus });
    }
    if u == 0 || u_minus > 0 {
        return Ok(0.0);
    }
    let ratio = (u - u_plus) as f64 / u as f64;
    Ok((1.0 - ratio * ratio).sqrt())
}

pub fn ari(possibility: f64, necessity: f64) -> Result<f64, ScoreError> {
    if !(0.0..=1.0).contains(&possibility) {
        return Err(ScoreError::OutOfRange {
            name: "possibility",
            value: possibility,
        });
    }
    if !(0.0..=1.0).contains(&necessity) {
        return Err(ScoreError::OutOfRange {
            name: "necessity",
            value: necessity,
        });
    }
    if necessity > 0.0 && possibility < 1.0 {
        return Err(ScoreError::Inconsistent { possibility, necessity });
    }
    Ok(necessity + possibility - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub kind: AxiomKind,
    pub support: u64,
    pub confirmations: u64,
    pub counterexamples: u64,
    pub possibility: f64,
    pub necessity: f64,
    pub ari: f64,
    /// False for disjointness, whose headline score is the possibility.
    pub ari_used: bool,
}

impl ScoreReport {
    pub fn headline(&self) -> f64 {
        if self.ari_used {
            self.ari
        } else {
            self.possibility
        }
    }
}

/// Individuals whose membership in `class` is contradicted by asserted
/// disjointness. Disjointness propagates down both sides of the hierarchy, so
/// partners are collected over all superclasses of `class` and their members
/// include subclass instances.
fn contradicted(d: &Dataset, class: &Iri) -> IndividualSet {
    let supers = d.superclass_closure(class);
    let mut out = IndividualSet::new();
    for (a, b) in d.disjoint_edges() {
        let partner = if supers.contains(a) {
            b
        } else if supers.contains(b) {
            a
        } else {
            continue;
        };
        out.extend(d.instances_of(partner, true));
    }
    out
}

struct Evidence {
    members: IndividualSet,
    negated: Option<IndividualSet>,
}

impl Evidence {
    fn new(d: &Dataset, class: &Iri, options: ScoringOptions) -> Self {
        Evidence {
            members: d.instances_of(class, options.inferred),
            negated: match options.negation {
                NegationMode::Cwa => None,
                NegationMode::Disjointness => Some(contradicted(d, class)),
            },
        }
    }

    fn contradicts(&self, a: &crate::rdf_store::IndividualId) -> bool {
        match &self.negated {
            None => !self.members.contains(a),
            Some(neg) => neg.contains(a),
        }
    }
}

pub fn content_counts(d: &Dataset, axiom: &Axiom, options: ScoringOptions) -> ContentCounts {
    let c = Evidence::new(d, axiom.lhs(), options);
    let e = Evidence::new(d, axiom.rhs(), options);
    let mut counts = ContentCounts::default();
    match axiom.kind() {
        AxiomKind::SubClassOf => {
            counts.support = c.members.len() as u64;
            for a in &c.members {
                if e.contradicts(a) {
                    counts.counterexamples += 1;
                } else if e.members.contains(a) {
                    counts.confirmations += 1;
                }
            }
        }
        AxiomKind::DisjointWith => {
            let union = c.members.union(&e.members).count() as u64;
            let shared = c.members.intersection(&e.members).count() as u64;
            counts.support = union;
            counts.counterexamples = shared;
            counts.confirmations = union - shared;
        }
        AxiomKind::EquivalentClass => {
            for a in c.members.union(&e.members) {
                counts.support += 1;
                let in_c = c.members.contains(a);
                let in_e = e.members.contains(a);
                if (in_c && e.contradicts(a)) || (in_e && c.contradicts(a)) {
                    counts.counterexamples += 1;
                } else if in_c && in_e {
                    counts.confirmations += 1;
                }
            }
        }
    }
    counts
}

pub fn score_counts(kind: AxiomKind, counts: ContentCounts) -> Result<ScoreReport, ScoreError> {
    let ContentCounts {
        support,
        confirmations,
        counterexamples,
    } = counts;
    let poss = possibility(support, counterexamples)?;
    let mut nec = necessity(support, confirmations, counterexamples)?;
    let ari_used = kind != AxiomKind::DisjointWith;
    if !ari_used {
        nec = 0.0;
    }
    Ok(ScoreReport {
        kind,
        support,
        confirmations,
        counterexamples,
        possibility: poss,
        necessity: nec,
        ari: ari(poss, nec)?,
        ari_used,
    })
}

pub fn score_axiom(d: &Dataset, axiom: &Axiom, options: ScoringOptions) -> ScoreReport {
    score_counts(axiom.kind(), content_counts(d, axiom, options))
        .expect("content counts always satisfy the scoring preconditions")
}
