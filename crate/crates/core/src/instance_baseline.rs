//! Instance-counting axiom similarity, kept for comparison against the
//! ontology-based similarity.
//!
//! For subsumptions `A ⊑ B` and `C ⊑ D` the similarity is
//! `|[A]∩[B] ∪ [C]∩[D]| / |[A]∪[C]|`, where `[X]` is the set of instances of
//! `X`. A negated pair `A ⋢ B` contributes `[A] \ [B]` instead of `[A]∩[B]`
//! (closed world over the dataset's individuals). A zero denominator yields 0.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::axiom_similarity::{AxiomSimilarityMatrix, LabeledAxiomSet, SimilarityError};
use crate::rdf_store::{Dataset, Iri};
use crate::scorer::AxiomKind;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsumptionPair {
    pub a: Iri,
    pub b: Iri,
    pub negated: bool,
}

impl SubsumptionPair {
    pub fn new(a: Iri, b: Iri, negated: bool) -> Option<Self> {
        (a != b).then_some(SubsumptionPair { a, b, negated })
    }
}

/// Fixed-width bit set over individual ids.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(d: &Dataset, class: &Iri, inferred: bool) -> Bits {
        let mut words = vec![0u64; d.individuals().len().div_ceil(64)];
        for id in d.instances_of(class, inferred) {
            let i = id.0 as usize;
            words[i / 64] |= 1 << (i % 64);
        }
        Bits(words)
    }

    /// Evidence set of a pair: `[A]∩[B]`, or `[A]\[B]` when negated.
    fn evidence(a: &Bits, b: &Bits, negated: bool) -> Bits {
        Bits(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| if negated { x & !y } else { x & y })
                .collect(),
        )
    }

    fn union_count(x: &Bits, y: &Bits) -> u32 {
        x.0.iter().zip(&y.0).map(|(&p, &q)| (p | q).count_ones()).sum()
    }
}

fn ratio(numerator: u32, denominator: u32) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        f64::from(numerator) / f64::from(denominator)
    }
}

pub fn instance_similarity(d: &Dataset, p: &SubsumptionPair, q: &SubsumptionPair, inferred: bool) -> f64 {
    let ext = |c: &Iri| Bits::of(d, c, inferred);
    let (a, c) = (ext(&p.a), ext(&q.a));
    let ep = Bits::evidence(&a, &ext(&p.b), p.negated);
    let eq = Bits::evidence(&c, &ext(&q.b), q.negated);
    ratio(Bits::union_count(&ep, &eq), Bits::union_count(&a, &c))
}

/// Matrix over a SubClassOf basis, every basis axiom read as non-negated.
pub fn build_instance_matrix(
    d: &Dataset,
    t: &LabeledAxiomSet,
    inferred: bool,
) -> Result<AxiomSimilarityMatrix, SimilarityError> {
    if t.kind() != AxiomKind::SubClassOf {
        return Err(SimilarityError::KindMismatch {
            expected: AxiomKind::SubClassOf,
            found: t.kind(),
        });
    }
    let mut extensions: HashMap<&Iri, Bits> = HashMap::new();
    for c in t.concepts() {
        extensions.entry(c).or_insert_with(|| Bits::of(d, c, inferred));
    }
    let rows: Vec<(&Bits, Bits)> = t
        .axioms()
        .iter()
        .map(|ax| {
            let a = &extensions[ax.lhs()];
            (a, Bits::evidence(a, &extensions[ax.rhs()], false))
        })
        .collect();

    let m = t.len();
    let upper: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .map(|j| {
                    ratio(
                        Bits::union_count(&rows[i].1, &rows[j].1),
                        Bits::union_count(rows[i].0, rows[j].0),
                    )
                })
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
    AxiomSimilarityMatrix::from_parts(t.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf_store::{vocab, Triple};
    use crate::scorer::Axiom;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/{s}")).unwrap()
    }

    fn typed(ind: &str, class: &str) -> Triple {
        Triple::iris(&iri(ind), vocab::RDF_TYPE, &iri(class))
    }

    fn pair(a: &str, b: &str, negated: bool) -> SubsumptionPair {
        SubsumptionPair::new(iri(a), iri(b), negated).unwrap()
    }

    fn sub(a: &str, b: &str) -> Axiom {
        Axiom::new(AxiomKind::SubClassOf, iri(a), iri(b)).unwrap()
    }

    fn dataset() -> Dataset {
        Dataset::from_triples([
            typed("x1", "A"),
            typed("x1", "B"),
            typed("x2", "A"),
            typed("x2", "B"),
            typed("x3", "A"),
            typed("y1", "C"),
            typed("y1", "D"),
            typed("z1", "E"),
        ])
    }

    #[test]
    fn full_overlap_is_one() {
        let d = dataset();
        // Every C is a D: [C]∩[D] = [C].
        let p = pair("C", "D", false);
        assert_eq!(instance_similarity(&d, &p, &p, true), 1.0);
    }

    #[test]
    fn hand_evaluated_ratio() {
        let d = dataset();
        // ([A]∩[B]) ∪ ([C]∩[D]) = {x1, x2, y1}; [A] ∪ [C] = {x1, x2, x3, y1}
        let s = instance_similarity(&d, &pair("A", "B", false), &pair("C", "D", false), true);
        assert_eq!(s, 0.75);
        // Negated A ⋢ B keeps only x3.
        let s = instance_similarity(&d, &pair("A", "B", true), &pair("C", "D", false), true);
        assert_eq!(s, 0.5);
    }

    #[test]
    fn disjoint_extensions_and_empty_denominator() {
        let d = dataset();
        assert_eq!(instance_similarity(&d, &pair("A", "E", false), &pair("C", "E", false), true), 0.0);
        assert_eq!(instance_similarity(&d, &pair("Q", "A", false), &pair("R", "A", false), true), 0.0);
        assert!(SubsumptionPair::new(iri("A"), iri("A"), false).is_none());
    }

    #[test]
    fn matrix_cases() {
        let d = dataset();
        let single = LabeledAxiomSet::new(vec![sub("A", "B")], vec![1.0]).unwrap();
        assert_eq!(build_instance_matrix(&d, &single, true).unwrap().values(), &[1.0]);

        let set = LabeledAxiomSet::new(vec![sub("A", "B"), sub("C", "D"), sub("E", "A")], vec![1.0, 1.0, -1.0])
            .unwrap();
        let m = build_instance_matrix(&d, &set, true).unwrap();
        assert_eq!(m.get(0, 1), 0.75);
        assert_eq!(m.get(1, 0), 0.75);
        for i in 0..3 {
            for j in 0..3 {
                let (p, q) = (&set.axioms()[i], &set.axioms()[j]);
                if i != j {
                    let direct = instance_similarity(
                        &d,
                        &pair_of(p),
                        &pair_of(q),
                        true,
                    );
                    assert_eq!(m.get(i, j), direct);
                }
            }
        }

        let empty = Dataset::default();
        let m = build_instance_matrix(&empty, &set, true).unwrap();
        assert!(m.off_diagonal().all(|v| v == 0.0));
    }

    #[test]
    fn two_axioms_sharing_extension() {
        let d = Dataset::from_triples([typed("x", "A"), typed("x", "B"), typed("x", "C")]);
        let set = LabeledAxiomSet::new(vec![sub("A", "B"), sub("A", "C")], vec![1.0, 1.0]).unwrap();
        assert_eq!(build_instance_matrix(&d, &set, true).unwrap().get(0, 1), 1.0);
    }

    #[test]
    fn rejects_other_kinds() {
        let d = dataset();
        let set = LabeledAxiomSet::new(
            vec![Axiom::new(AxiomKind::DisjointWith, iri("A"), iri("E")).unwrap()],
            vec![1.0],
        )
        .unwrap();
        assert!(build_instance_matrix(&d, &set, true).is_err());
    }

    fn pair_of(a: &Axiom) -> SubsumptionPair {
        SubsumptionPair::new(a.lhs().clone(), a.rhs().clone(), false).unwrap()
    }
}
