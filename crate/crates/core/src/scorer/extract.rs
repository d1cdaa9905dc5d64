use std::collections::BTreeSet;

use super::{Axiom, AxiomKind};
use crate::rdf_store::{vocab, Dataset, Term};

#[derive(Debug, Clone, Copy, Default)]
pub struct ExtractOptions {
    /// Truncate positives and negatives to the size of the smaller group.
    pub balance: bool,
}

/// Asserted axioms of `kind` labelled with the top of the kind's score range,
/// plus asserted axioms of the counter kind, reinterpreted as `kind`,
/// labelled with the bottom of the range.
///
/// Output is deduplicated (an axiom asserted both ways keeps its positive
/// label), symmetric kinds are in canonical operand order, and each group is
/// sorted.
pub fn extract_labeled_axioms(d: &Dataset, kind: AxiomKind, options: ExtractOptions) -> Vec<(Axiom, f64)> {
    let (low, high) = kind.score_range();
    let positives = asserted(d, kind, kind);
    let negatives: BTreeSet<Axiom> = match kind.counter() {
        Some(counter) => asserted(d, counter, kind)
            .into_iter()
            .filter(|a| !positives.contains(a))
            .collect(),
        None => BTreeSet::new(),
    };

    let keep = if options.balance {
        positives.len().min(negatives.len())
    } else {
        usize::MAX
    };
    positives
        .into_iter()
        .take(keep)
        .map(|a| (a, high))
        .chain(negatives.into_iter().take(keep).map(|a| (a, low)))
        .collect()
}

/// Asserted `source` axioms between named classes, relabelled as `target`.
fn asserted(d: &Dataset, source: AxiomKind, target: AxiomKind) -> BTreeSet<Axiom> {
    let pairs: Vec<(&crate::rdf_store::Iri, &crate::rdf_store::Iri)> = match source {
        AxiomKind::SubClassOf => d.subclass_edges().iter().map(|(a, b)| (a, b)).collect(),
        AxiomKind::DisjointWith => d.disjoint_edges().iter().map(|(a, b)| (a, b)).collect(),
        AxiomKind::EquivalentClass => d
            .triples()
            .iter()
            .filter(|t| t.predicate.as_str() == vocab::OWL_EQUIVALENT_CLASS)
            .filter_map(|t| match (&t.subject, &t.object) {
                (Term::Iri(a), Term::Iri(b)) => Some((a, b)),
                _ => None,
            })
            .collect(),
    };
    pairs
        .into_iter()
        .filter_map(|(a, b)| Axiom::new(target, a.clone(), b.clone()).ok())
        .map(|a| a.canonical())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf_store::{Iri, Triple};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/{s}")).unwrap()
    }

    fn edge(a: &str, p: &str, b: &str) -> Triple {
        Triple::iris(&iri(a), p, &iri(b))
    }

    #[test]
    fn subclass_extraction() {
        let d = Dataset::from_triples([edge("B", vocab::RDFS_SUBCLASS_OF, "A")]);
        let got = extract_labeled_axioms(&d, AxiomKind::SubClassOf, ExtractOptions::default());
        assert_eq!(
            got,
            vec![(Axiom::new(AxiomKind::SubClassOf, iri("B"), iri("A")).unwrap(), 1.0)]
        );
    }

    #[test]
    fn counter_type_relabelling() {
        let d = Dataset::from_triples([edge("B", vocab::RDFS_SUBCLASS_OF, "A")]);
        let got = extract_labeled_axioms(&d, AxiomKind::DisjointWith, ExtractOptions::default());
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0.kind(), AxiomKind::DisjointWith);
        assert_eq!(got[0].1, 0.0);
        // canonical ordering puts A first
        assert_eq!(got[0].0.lhs(), &iri("A"));

        let d = Dataset::from_triples([edge("X", vocab::OWL_DISJOINT_WITH, "Y")]);
        let got = extract_labeled_axioms(&d, AxiomKind::SubClassOf, ExtractOptions::default());
        assert_eq!(got[0].1, -1.0);
    }

    #[test]
    fn empty_dataset() {
        for kind in AxiomKind::ALL {
            assert!(extract_labeled_axioms(&Dataset::default(), kind, ExtractOptions::default()).is_empty());
        }
    }

    #[test]
    fn dedup_and_balance() {
        let d = Dataset::from_triples([
            edge("B", vocab::RDFS_SUBCLASS_OF, "A"),
            edge("C", vocab::RDFS_SUBCLASS_OF, "A"),
            edge("A", vocab::OWL_DISJOINT_WITH, "Z"),
            edge("Z", vocab::OWL_DISJOINT_WITH, "A"),
        ]);
        let all = extract_labeled_axioms(&d, AxiomKind::DisjointWith, ExtractOptions::default());
        assert_eq!(all.len(), 3);
        assert_eq!(all.iter().filter(|(_, l)| *l == 1.0).count(), 1);
        let balanced = extract_labeled_axioms(&d, AxiomKind::DisjointWith, ExtractOptions { balance: true });
        assert_eq!(balanced.len(), 2);
    }

    #[test]
    fn equivalence_has_no_counter_type() {
        let d = Dataset::from_triples([
            edge("P", vocab::OWL_EQUIVALENT_CLASS, "Q"),
            edge("B", vocab::RDFS_SUBCLASS_OF, "A"),
        ]);
        let got = extract_labeled_axioms(&d, AxiomKind::EquivalentClass, ExtractOptions::default());
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].1, 1.0);
    }
}
