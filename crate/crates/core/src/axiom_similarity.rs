//! Axiom-to-axiom similarity derived from concept similarity.
//!
//! Two axioms of the same kind are compared side by side: left concept with
//! left concept, right with right, and the two concept similarities are
//! aggregated by an axiom similarity function (ASF). Symmetric kinds are also
//! compared crosswise and the better of the two alignments wins.
//!
//! A labeled axiom set doubles as a basis: any axiom is encoded as the vector
//! of its similarities to the basis axioms.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::hierarchy::ConceptSimilarityMatrix;
use crate::rdf_store::Iri;
use crate::scorer::{Axiom, AxiomKind};
use crate::util::fmt_sig17;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error("axiom kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: AxiomKind, found: AxiomKind },
    #[error("concept <{0}> is not in the concept similarity matrix")]
    MissingConcept(Iri),
    #[error("duplicate axiom in labeled set: {0}")]
    DuplicateAxiom(String),
    #[error("{axioms} axioms but {scores} scores")]
    LengthMismatch { axioms: usize, scores: usize },
    #[error("labeled axiom set is empty")]
    Empty,
    #[error("unknown-concept floor {0} is outside [0, 1]")]
    InvalidFloor(f64),
    #[error("malformed axiom matrix: {0}")]
    Malformed(String),
}

/// Accepts similarity floors in [0, 1].
pub fn check_unknown_floor(floor: f64) -> Result<(), SimilarityError> {
    if (0.0..=1.0).contains(&floor) {
        Ok(())
    } else {
        Err(SimilarityError::InvalidFloor(floor))
    }
}

/// Axiom similarity function: how left- and right-side concept similarities
/// are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Asf {
    #[default]
    Average,
    Minimum,
}

impl Asf {
    pub fn apply(self, left: f64, right: f64) -> f64 {
        match self {
            Asf::Average => (left + right) / 2.0,
            Asf::Minimum => left.min(right),
        }
    }
}

impl FromStr for Asf {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "average" | "avg" | "mean" => Ok(Asf::Average),
            "minimum" | "min" => Ok(Asf::Minimum),
            other => Err(format!("unknown ASF '{other}' (expected average or minimum)")),
        }
    }
}

impl fmt::Display for Asf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Asf::Average => "average",
            Asf::Minimum => "minimum",
        })
    }
}

/// Axioms of a single kind with a parallel score column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledAxiomSet {
    kind: AxiomKind,
    axioms: Vec<Axiom>,
    scores: Vec<f64>,
}

impl LabeledAxiomSet {
    pub fn new(axioms: Vec<Axiom>, scores: Vec<f64>) -> Result<Self, SimilarityError> {
        if axioms.len() != scores.len() {
            return Err(SimilarityError::LengthMismatch {
                axioms: axioms.len(),
                scores: scores.len(),
            });
        }
        let kind = axioms.first().ok_or(SimilarityError::Empty)?.kind();
        let mut seen = HashSet::with_capacity(axioms.len());
        for a in &axioms {
            if a.kind() != kind {
                return Err(SimilarityError::KindMismatch {
                    expected: kind,
                    found: a.kind(),
                });
            }
            if !seen.insert(a) {
                return Err(SimilarityError::DuplicateAxiom(a.to_string()));
            }
        }
        Ok(LabeledAxiomSet { kind, axioms, scores })
    }

    pub fn from_pairs(pairs: Vec<(Axiom, f64)>) -> Result<Self, SimilarityError> {
        let (axioms, scores) = pairs.into_iter().unzip();
        Self::new(axioms, scores)
    }

    pub fn kind(&self) -> AxiomKind {
        self.kind
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Rows picked by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, SimilarityError> {
        Self::new(
            indices.iter().map(|&i| self.axioms[i].clone()).collect(),
            indices.iter().map(|&i| self.scores[i]).collect(),
        )
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Iri> {
        self.axioms.iter().flat_map(|a| [a.lhs(), a.rhs()])
    }
}

/// Similarities of one axiom to every basis axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub weights: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Symmetric `m x m` axiom similarity matrix over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSimilarityMatrix {
    basis: LabeledAxiomSet,
    values: Vec<f64>,
}

impl AxiomSimilarityMatrix {
    /// Assemble from row-major values, checking unit diagonal, symmetry and range.
    pub fn from_parts(basis: LabeledAxiomSet, values: Vec<f64>) -> Result<Self, SimilarityError> {
        let m = basis.len();
        if values.len() != m * m {
            return Err(SimilarityError::Malformed(format!("{} values for {m} axioms", values.len())));
        }
        for i in 0..m {
            if values[i * m + i] != 1.0 {
                return Err(SimilarityError::Malformed(format!("diagonal entry {i} is not 1")));
            }
            for j in i + 1..m {
                let v = values[i * m + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(SimilarityError::Malformed(format!("entry ({i},{j}) = {v} outside [0,1]")));
                }
                if v != values[j * m + i] {
                    return Err(SimilarityError::Malformed(format!("entry ({i},{j}) is not symmetric")));
                }
            }
        }
        Ok(AxiomSimilarityMatrix { basis, values })
    }

    pub fn basis(&self) -> &LabeledAxiomSet {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.len();
        &self.values[i * m..(i + 1) * m]
    }

    /// Off-diagonal entries, upper triangle only.
    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.len();
        (0..m).flat_map(move |i| (i + 1..m).map(move |j| self.values[i * m + j]))
    }

    /// CSV laid out as `score,axiom,<axiom ids...>`, one row per basis axiom.
    pub fn write_csv<W: Write>(&self, mut out: W, stamp: Option<&str>) -> Result<()> {
        if let Some(stamp) = stamp {
            writeln!(out, "# {stamp}").map_err(|e| Error::io("writing axiom matrix", e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        let ids: Vec<String> = self.basis.axioms.iter().map(|a| a.to_string()).collect();
        let mut header = vec!["score".to_string(), "axiom".to_string()];
        header.extend(ids.iter().cloned());
        w.write_record(&header)?;
        for (i, id) in ids.iter().enumerate() {
            let mut record = Vec::with_capacity(self.len() + 2);
            record.push(self.basis.scores[i].to_string());
            record.push(id.clone());
            record.extend(self.row(i).iter().map(|&v| fmt_sig17(v)));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("writing axiom matrix", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(input);
        let header = r.headers()?.clone();
        if header.get(0) != Some("score") || header.get(1) != Some("axiom") {
            return Err(Error::Format("axiom matrix header must start with 'score,axiom'".into()));
        }
        let axioms: Vec<Axiom> = header
            .iter()
            .skip(2)
            .map(|s| s.parse::<Axiom>().map_err(Error::from))
            .collect::<Result<_>>()?;
        let m = axioms.len();
        let mut scores = Vec::with_capacity(m);
        let mut values = Vec::with_capacity(m * m);
        let parse = |cell: &str| {
            cell.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("bad number '{cell}' in axiom matrix")))
        };
        for (i, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != m + 2 {
                return Err(Error::Format(format!("axiom matrix row {i} has {} cells", record.len())));
            }
            let id = record.get(1).unwrap_or("");
            if axioms.get(i).map(|a| a.to_string()).as_deref() != Some(id) {
                return Err(Error::Format(format!("axiom matrix row {i} label does not match header")));
            }
            scores.push(parse(record.get(0).unwrap_or(""))?);
            for cell in record.iter().skip(2) {
                values.push(parse(cell)?);
            }
        }
        if scores.len() != m {
            return Err(Error::Format(format!("axiom matrix has {} rows for {m} columns", scores.len())));
        }
        let basis = LabeledAxiomSet::new(axioms, scores)?;
        Ok(Self::from_parts(basis, values)?)
    }
}

/// Lifts concept similarity to axiom similarity over a fixed concept matrix.
#[derive(Debug, Clone, Copy)]
pub struct AxiomComparer<'a> {
    mc: &'a ConceptSimilarityMatrix,
    asf: Asf,
    unknown_floor: Option<f64>,
}

/// Concept position in the matrix, or `Unknown` when a floor is configured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot<'a> {
    Known(usize),
    Unknown(&'a Iri),
}

type Resolved<'a> = (Slot<'a>, Slot<'a>);

impl<'a> AxiomComparer<'a> {
    pub fn new(mc: &'a ConceptSimilarityMatrix, asf: Asf) -> Self {
        AxiomComparer {
            mc,
            asf,
            unknown_floor: None,
        }
    }

    /// Concepts missing from the matrix get similarity `floor` to everything
    /// but themselves instead of failing.
    pub fn with_unknown_floor(mut self, floor: f64) -> Result<Self, SimilarityError> {
        check_unknown_floor(floor)?;
        self.unknown_floor = Some(floor);
        Ok(self)
    }

    pub fn asf(&self) -> Asf {
        self.asf
    }

    fn slot<'b>(&self, c: &'b Iri) -> Result<Slot<'b>, SimilarityError> {
        match self.mc.index_of(c) {
            Some(i) => Ok(Slot::Known(i)),
            None if self.unknown_floor.is_some() => Ok(Slot::Unknown(c)),
            None => Err(SimilarityError::MissingConcept(c.clone())),
        }
    }

    fn resolve<'b>(&self, a: &'b Axiom) -> Result<Resolved<'b>, SimilarityError> {
        Ok((self.slot(a.lhs())?, self.slot(a.rhs())?))
    }

    fn concept(&self, x: Slot<'_>, y: Slot<'_>) -> f64 {
        match (x, y) {
            (Slot::Known(i), Slot::Known(j)) => self.mc.get(i, j),
            (Slot::Unknown(a), Slot::Unknown(b)) if a == b => 1.0,
            _ => self.unknown_floor.unwrap_or(0.0),
        }
    }

    fn resolved_pair(&self, symmetric: bool, a: Resolved<'_>, b: Resolved<'_>) -> f64 {
        let forward = self.asf.apply(self.concept(a.0, b.0), self.concept(a.1, b.1));
        let crossed = if symmetric {
            self.asf.apply(self.concept(a.0, b.1), self.concept(a.1, b.0))
        } else {
            0.0
        };
        forward.max(crossed)
    }

    pub fn pair(&self, a: &Axiom, b: &Axiom) -> Result<f64, SimilarityError> {
        if a.kind() != b.kind() {
            return Err(SimilarityError::KindMismatch {
                expected: a.kind(),
                found: b.kind(),
            });
        }
        Ok(self.resolved_pair(a.kind().is_symmetric(), self.resolve(a)?, self.resolve(b)?))
    }

    /// Each unordered pair is computed once and mirrored; the diagonal is 1.
    pub fn build_matrix(&self, basis: &LabeledAxiomSet) -> Result<AxiomSimilarityMatrix, SimilarityError> {
        let m = basis.len();
        let symmetric = basis.kind().is_symmetric();
        let slots: Vec<Resolved<'_>> = basis
            .axioms()
            .iter()
            .map(|a| self.resolve(a))
            .collect::<Result<_, _>>()?;
        let upper: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (i + 1..m)
                    .map(|j| self.resolved_pair(symmetric, slots[i], slots[j]))
                    .collect()
            })
            .collect();
        let mut values = vec![0.0; m * m];
        for (i, row) in upper.into_iter().enumerate() {
            values[i * m + i] = 1.0;
            for (off, s) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                values[i * m + j] = s;
                values[j * m + i] = s;
            }
        }
        Ok(AxiomSimilarityMatrix {
            basis: basis.clone(),
            values,
        })
    }

    pub fn encode(&self, candidate: &Axiom, basis: &[Axiom]) -> Result<FeatureVector, SimilarityError> {
        let c = self.resolve(candidate)?;
        let symmetric = candidate.kind().is_symmetric();
        let weights = basis
            .iter()
            .map(|b| {
                if b.kind() != candidate.kind() {
                    return Err(SimilarityError::KindMismatch {
                        expected: b.kind(),
                        found: candidate.kind(),
                    });
                }
                Ok(self.resolved_pair(symmetric, c, self.resolve(b)?))
            })
            .collect::<Result<_, _>>()?;
        Ok(FeatureVector { weights })
    }
}

pub fn axiom_pair_similarity(
    mc: &ConceptSimilarityMatrix,
    a: &Axiom,
    b: &Axiom,
    asf: Asf,
) -> Result<f64, SimilarityError> {
    AxiomComparer::new(mc, asf).pair(a, b)
}

pub fn build_axiom_matrix(
    mc: &ConceptSimilarityMatrix,
    basis: &LabeledAxiomSet,
    asf: Asf,
) -> Result<AxiomSimilarityMatrix, SimilarityError> {
    AxiomComparer::new(mc, asf).build_matrix(basis)
}

pub fn encode_axiom(
    mc: &ConceptSimilarityMatrix,
    candidate: &Axiom,
    basis: &LabeledAxiomSet,
    asf: Asf,
) -> Result<FeatureVector, SimilarityError> {
    AxiomComparer::new(mc, asf).encode(candidate, basis.axioms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{build_concept_matrix, Hierarchy, HierarchyOptions};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/{s}")).unwrap()
    }

    fn ax(kind: AxiomKind, l: &str, r: &str) -> Axiom {
        Axiom::new(kind, iri(l), iri(r)).unwrap()
    }

    /// Concept matrix with hand-set off-diagonal values.
    fn manual(names: &[&str], off: &[((usize, usize), f64)]) -> ConceptSimilarityMatrix {
        let n = names.len();
        let mut v = vec![0.1; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        for &((i, j), s) in off {
            v[i * n + j] = s;
            v[j * n + i] = s;
        }
        ConceptSimilarityMatrix::from_parts(names.iter().map(|s| iri(s)).collect(), v).unwrap()
    }

    fn chain_matrix() -> ConceptSimilarityMatrix {
        let h = Hierarchy::from_edges(
            Vec::new(),
            vec![(iri("B"), iri("A")), (iri("C"), iri("B"))],
            HierarchyOptions::default(),
        )
        .unwrap();
        build_concept_matrix(&h, &[iri("A"), iri("B"), iri("C")]).unwrap()
    }

    #[test]
    fn self_similarity_is_one() {
        let mc = chain_matrix();
        for asf in [Asf::Average, Asf::Minimum] {
            let a = ax(AxiomKind::SubClassOf, "B", "A");
            assert_eq!(axiom_pair_similarity(&mc, &a, &a, asf).unwrap(), 1.0);
        }
    }

    #[test]
    fn subclass_pair_average_and_minimum() {
        // C1-C3 = 0.8 (left), C2-C4 = 0.4 (right)
        let mc = manual(&["C1", "C2", "C3", "C4"], &[((0, 2), 0.8), ((1, 3), 0.4)]);
        let a = ax(AxiomKind::SubClassOf, "C1", "C2");
        let b = ax(AxiomKind::SubClassOf, "C3", "C4");
        let avg = axiom_pair_similarity(&mc, &a, &b, Asf::Average).unwrap();
        assert!((avg - 0.6).abs() < 1e-15);
        assert_eq!(axiom_pair_similarity(&mc, &a, &b, Asf::Minimum).unwrap(), 0.4);
    }

    #[test]
    fn disjoint_pair_takes_better_alignment() {
        // forward: avg(0.5, 0.5) = 0.5; crossed: avg(0.9, 0.9) = 0.9
        let mc = manual(
            &["C1", "C2", "C3", "C4"],
            &[((0, 2), 0.5), ((1, 3), 0.5), ((0, 3), 0.9), ((1, 2), 0.9)],
        );
        let a = ax(AxiomKind::DisjointWith, "C1", "C2");
        let b = ax(AxiomKind::DisjointWith, "C3", "C4");
        assert_eq!(axiom_pair_similarity(&mc, &a, &b, Asf::Average).unwrap(), 0.9);
        // SubClassOf ignores the crossed alignment
        let a = a.with_kind(AxiomKind::SubClassOf);
        let b = b.with_kind(AxiomKind::SubClassOf);
        assert_eq!(axiom_pair_similarity(&mc, &a, &b, Asf::Average).unwrap(), 0.5);
    }

    #[test]
    fn kind_mismatch_and_missing_concept() {
        let mc = chain_matrix();
        let a = ax(AxiomKind::SubClassOf, "B", "A");
        let b = ax(AxiomKind::DisjointWith, "B", "A");
        assert!(matches!(
            axiom_pair_similarity(&mc, &a, &b, Asf::Average),
            Err(SimilarityError::KindMismatch { .. })
        ));
        let z = ax(AxiomKind::SubClassOf, "Z", "A");
        assert_eq!(
            axiom_pair_similarity(&mc, &a, &z, Asf::Average),
            Err(SimilarityError::MissingConcept(iri("Z")))
        );
    }

    #[test]
    fn unknown_concept_floor() {
        let mc = chain_matrix();
        let cmp = AxiomComparer::new(&mc, Asf::Average).with_unknown_floor(0.05).unwrap();
        let a = ax(AxiomKind::SubClassOf, "B", "A");
        let z = ax(AxiomKind::SubClassOf, "Z", "A");
        assert_eq!(cmp.pair(&a, &z).unwrap(), (0.05 + 1.0) / 2.0);
        assert_eq!(cmp.pair(&z, &z).unwrap(), 1.0);
        assert!(AxiomComparer::new(&mc, Asf::Average).with_unknown_floor(1.5).is_err());
    }

    #[test]
    fn singleton_and_identical_concepts() {
        let mc = chain_matrix();
        let set = LabeledAxiomSet::new(vec![ax(AxiomKind::SubClassOf, "B", "A")], vec![1.0]).unwrap();
        let m = build_axiom_matrix(&mc, &set, Asf::Average).unwrap();
        assert_eq!(m.values(), &[1.0]);

        // X ⊑ Y against Y ⊑ X: distinct axioms, similar only through s(X, Y).
        let set = LabeledAxiomSet::new(
            vec![ax(AxiomKind::SubClassOf, "X", "Y"), ax(AxiomKind::SubClassOf, "Y", "X")],
            vec![1.0, -1.0],
        )
        .unwrap();
        let m = build_axiom_matrix(&manual(&["X", "Y"], &[]), &set, Asf::Average).unwrap();
        assert_eq!(m.get(0, 1), 0.1);
        let m = build_axiom_matrix(&manual(&["X", "Y"], &[((0, 1), 1.0)]), &set, Asf::Average).unwrap();
        assert_eq!(m.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn chain_axiom_matrix_by_hand() {
        // Concept similarities on the chain A <- B <- C:
        // s(A,B) = 1/1.5, s(A,C) = 1/1.75, s(B,C) = 0.8
        let mc = chain_matrix();
        let set = LabeledAxiomSet::new(
            vec![
                ax(AxiomKind::SubClassOf, "B", "A"),
                ax(AxiomKind::SubClassOf, "C", "B"),
                ax(AxiomKind::SubClassOf, "C", "A"),
            ],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let m = build_axiom_matrix(&mc, &set, Asf::Average).unwrap();
        let (ab, bc) = (1.0 / 1.5, 0.8);
        let expect = [
            [1.0, (bc + ab) / 2.0, (bc + 1.0) / 2.0],
            [(bc + ab) / 2.0, 1.0, (1.0 + ab) / 2.0],
            [(bc + 1.0) / 2.0, (1.0 + ab) / 2.0, 1.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - expect[i][j]).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn encoding_matches_rows_and_flip_invariance() {
        let mc = chain_matrix();
        let set = LabeledAxiomSet::new(
            vec![ax(AxiomKind::DisjointWith, "B", "A"), ax(AxiomKind::DisjointWith, "C", "A")],
            vec![0.0, 1.0],
        )
        .unwrap();
        let m = build_axiom_matrix(&mc, &set, Asf::Average).unwrap();
        for (k, a) in set.axioms().iter().enumerate() {
            let v = encode_axiom(&mc, a, &set, Asf::Average).unwrap();
            assert_eq!(v.weights, m.row(k));
            assert_eq!(v.weights[k], 1.0);
            let flipped = encode_axiom(&mc, &a.flipped(), &set, Asf::Average).unwrap();
            assert_eq!(flipped.weights, m.row(k));
        }
    }

    #[test]
    fn labeled_set_validation() {
        let a = ax(AxiomKind::DisjointWith, "B", "A");
        assert!(matches!(
            LabeledAxiomSet::new(vec![a.clone(), a.flipped()], vec![0.0, 0.0]),
            Err(SimilarityError::DuplicateAxiom(_))
        ));
        assert!(matches!(
            LabeledAxiomSet::new(vec![a.clone(), a.with_kind(AxiomKind::SubClassOf)], vec![0.0, 0.0]),
            Err(SimilarityError::KindMismatch { .. })
        ));
        assert!(matches!(
            LabeledAxiomSet::new(vec![a], vec![]),
            Err(SimilarityError::LengthMismatch { .. })
        ));
        assert_eq!(LabeledAxiomSet::new(vec![], vec![]), Err(SimilarityError::Empty));
    }

    #[test]
    fn csv_round_trip() {
        let mc = chain_matrix();
        let set = LabeledAxiomSet::new(
            vec![ax(AxiomKind::SubClassOf, "B", "A"), ax(AxiomKind::SubClassOf, "C", "A")],
            vec![0.25, -1.0],
        )
        .unwrap();
        let m = build_axiom_matrix(&mc, &set, Asf::Average).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, Some("config=x")).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let second = text.lines().nth(1).unwrap();
        assert!(second.starts_with("score,axiom,SubClassOf <http://example.org/B> <http://example.org/A>"));
        assert_eq!(AxiomSimilarityMatrix::read_csv(buf.as_slice()).unwrap(), m);
    }
}
