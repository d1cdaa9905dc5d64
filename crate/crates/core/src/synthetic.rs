//! Seeded generator of small ontologies with instance data and candidate
//! axioms, for end-to-end experiments without an external knowledge base.
//!
//! The class hierarchy is a forest whose top-level classes are pairwise
//! disjoint. Individuals are typed with one class each (membership in the
//! ancestors follows by inference), and a `noise` fraction of them receive an
//! extra type from a different branch.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rdf_store::{vocab, Dataset, Iri, Triple};
use crate::scorer::{score_axiom, Axiom, AxiomKind, ScoringOptions};

pub const NAMESPACE: &str = "http://example.org/synthetic#";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub classes: usize,
    pub top_level: usize,
    /// Upper bound on individuals asserted directly per class.
    pub max_instances_per_class: usize,
    /// Probability that an individual gets an extra type from another branch.
    pub noise: f64,
    pub axioms: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            classes: 80,
            top_level: 4,
            max_instances_per_class: 6,
            noise: 0.05,
            axioms: 480,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticOntology {
    pub dataset: Dataset,
    pub classes: Vec<Iri>,
    /// Parent index per class; `None` for top-level classes.
    pub parents: Vec<Option<usize>>,
    /// Candidate SubClassOf axioms, unscored.
    pub axioms: Vec<Axiom>,
}

fn class_iri(i: usize) -> Iri {
    Iri::new(format!("{NAMESPACE}C{i}")).expect("valid synthetic IRI")
}

fn individual_iri(i: usize) -> Iri {
    Iri::new(format!("{NAMESPACE}i{i}")).expect("valid synthetic IRI")
}

pub fn generate(config: &SyntheticConfig) -> SyntheticOntology {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.classes.max(config.top_level).max(2);
    let top = config.top_level.clamp(1, n);
    let classes: Vec<Iri> = (0..n).map(class_iri).collect();

    let mut parents: Vec<Option<usize>> = vec![None; top];
    let mut branch: Vec<usize> = (0..top).collect();
    for i in top..n {
        let p = rng.random_range(0..i);
        parents.push(Some(p));
        branch.push(branch[p]);
    }

    let mut triples = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        triples.push(Triple::iris(c, vocab::RDF_TYPE, &Iri::new(vocab::OWL_CLASS).expect("valid")));
        if let Some(p) = parents[i] {
            triples.push(Triple::iris(c, vocab::RDFS_SUBCLASS_OF, &classes[p]));
        }
    }
    for a in 0..top {
        for b in a + 1..top {
            triples.push(Triple::iris(&classes[a], vocab::OWL_DISJOINT_WITH, &classes[b]));
        }
    }

    let mut next_individual = 0;
    for (i, c) in classes.iter().enumerate() {
        if config.max_instances_per_class == 0 {
            break;
        }
        let count = rng.random_range(1..=config.max_instances_per_class);
        for _ in 0..count {
            let x = individual_iri(next_individual);
            next_individual += 1;
            triples.push(Triple::iris(&x, vocab::RDF_TYPE, c));
            if top > 1 && rng.random_bool(config.noise.clamp(0.0, 1.0)) {
                let other = loop {
                    let j = rng.random_range(0..n);
                    if branch[j] != branch[i] {
                        break j;
                    }
                };
                triples.push(Triple::iris(&x, vocab::RDF_TYPE, &classes[other]));
            }
        }
    }

    let axioms = candidate_axioms(&mut rng, &classes, &parents, &branch, config.axioms);
    SyntheticOntology {
        dataset: Dataset::from_triples(triples),
        classes,
        parents,
        axioms,
    }
}

fn ancestors(parents: &[Option<usize>], mut i: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while let Some(p) = parents[i] {
        out.push(p);
        i = p;
    }
    out
}

/// Draws SubClassOf candidates from four families in turn: class under an
/// ancestor, class under a class of another branch, parent under child, and
/// class under an unrelated class of its own branch.
fn candidate_axioms(
    rng: &mut ChaCha8Rng,
    classes: &[Iri],
    parents: &[Option<usize>],
    branch: &[usize],
    target: usize,
) -> Vec<Axiom> {
    let n = classes.len();
    let anc: Vec<Vec<usize>> = (0..n).map(|i| ancestors(parents, i)).collect();
    let related = |a: usize, b: usize| anc[a].contains(&b) || anc[b].contains(&a);
    let with_parent: Vec<usize> = (0..n).filter(|&i| parents[i].is_some()).collect();

    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(target);
    let max_attempts = target.saturating_mul(200).max(1000);
    for attempt in 0..max_attempts {
        if out.len() >= target {
            break;
        }
        let pair = match attempt % 4 {
            0 => with_parent.choose(rng).and_then(|&c| anc[c].choose(rng).map(|&a| (c, a))),
            1 => {
                let (c, d) = (rng.random_range(0..n), rng.random_range(0..n));
                (branch[c] != branch[d]).then_some((c, d))
            }
            2 => with_parent.choose(rng).and_then(|&c| {
                let a = *anc[c].choose(rng)?;
                Some((a, c))
            }),
            _ => {
                let (c, d) = (rng.random_range(0..n), rng.random_range(0..n));
                (c != d && branch[c] == branch[d] && !related(c, d)).then_some((c, d))
            }
        };
        let Some((c, d)) = pair else { continue };
        if seen.insert((c, d)) {
            out.push(Axiom::new(AxiomKind::SubClassOf, classes[c].clone(), classes[d].clone()).expect("distinct"));
        }
    }
    out
}

impl SyntheticOntology {
    /// Candidate axioms labeled by the possibilistic scorer over the
    /// generated instances.
    pub fn scored(&self, options: ScoringOptions) -> Vec<(Axiom, f64)> {
        self.axioms
            .iter()
            .map(|a| (a.clone(), score_axiom(&self.dataset, a, options).headline()))
            .collect()
    }
}
