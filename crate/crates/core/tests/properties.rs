mod common;

use axiomscore::axiom_similarity::{AxiomComparer, LabeledAxiomSet};
use axiomscore::hierarchy::{build_concept_matrix, Hierarchy, HierarchyOptions};
use axiomscore::instance_baseline::{instance_similarity, SubsumptionPair};
use axiomscore::learner::{
    cross_validate_similarity, fit, fold_plans, rmse, Backend, CvConfig, DenseMatrix, Grid, Hyperparams, SplitPlan,
};
use axiomscore::rdf_store::{vocab, Literal};
use axiomscore::scorer::{
    ari, necessity, possibility, read_axioms, score_counts, write_scored_axioms, ContentCounts,
};
use axiomscore::{Asf, Axiom, AxiomKind, ConceptSimilarityMatrix, Dataset, RdfFormat, Term, Triple};
use common::{iri, Dag};
use proptest::prelude::*;

fn counts() -> impl Strategy<Value = (u64, u64, u64)> {
    (0u64..500).prop_flat_map(|u| (Just(u), 0..=u)).prop_flat_map(|(u, um)| (Just(u), 0..=u - um, Just(um)))
}

fn class_name() -> impl Strategy<Value = String> {
    "[A-F]"
}

fn small_dataset() -> impl Strategy<Value = Dataset> {
    let typing = ("x[0-7]", class_name());
    let sub = (class_name(), class_name());
    (
        prop::collection::vec(typing, 0..30),
        prop::collection::vec(sub, 0..6),
        prop::collection::vec((class_name(), class_name()), 0..3),
    )
        .prop_map(|(types, subs, disj)| {
            let mut t = Vec::new();
            for (x, c) in types {
                t.push(Triple::iris(&iri(&x), vocab::RDF_TYPE, &iri(&c)));
            }
            // Keep the subclass graph acyclic: only point to later letters.
            for (a, b) in subs {
                if a < b {
                    t.push(Triple::iris(&iri(&a), vocab::RDFS_SUBCLASS_OF, &iri(&b)));
                }
            }
            for (a, b) in disj {
                t.push(Triple::iris(&iri(&a), vocab::OWL_DISJOINT_WITH, &iri(&b)));
            }
            Dataset::from_triples(t)
        })
}

fn random_hierarchy(seed: u64) -> (Dag, Hierarchy) {
    let dag = Dag::random(seed, 10);
    let h = Hierarchy::from_edges(dag.classes(), dag.edges(), HierarchyOptions::default()).unwrap();
    (dag, h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scoring_measures_are_bounded((u, up, um) in counts()) {
        let p = possibility(u, um).unwrap();
        let n = necessity(u, up, um).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((0.0..=1.0).contains(&n));
        prop_assert!(n == 0.0 || p == 1.0);
        let a = ari(p, n).unwrap();
        prop_assert!((-1.0..=1.0).contains(&a));
        let report = score_counts(AxiomKind::SubClassOf, ContentCounts { support: u, confirmations: up, counterexamples: um }).unwrap();
        prop_assert_eq!(report.ari, a);
    }

    #[test]
    fn more_counterexamples_never_raise_possibility(u in 1u64..200, um in 0u64..199) {
        prop_assume!(um < u);
        prop_assert!(possibility(u, um + 1).unwrap() <= possibility(u, um).unwrap());
    }

    #[test]
    fn distance_matches_oracle(seed in any::<u64>()) {
        let (dag, h) = random_hierarchy(seed);
        let depths = dag.depths();
        for a in 0..dag.n {
            for b in a..dag.n {
                let d = h.ontological_distance(&dag.name(a), &dag.name(b)).unwrap();
                prop_assert!((d - dag.oracle_distance(a, b, &depths)).abs() <= 1e-12);
                prop_assert_eq!(d, h.ontological_distance(&dag.name(b), &dag.name(a)).unwrap());
                let s = h.concept_similarity(&dag.name(a), &dag.name(b)).unwrap();
                prop_assert!(s > 0.0 && s <= 1.0);
                prop_assert_eq!(s == 1.0, a == b);
            }
        }
    }

    #[test]
    fn concept_matrix_csv_round_trip(seed in any::<u64>()) {
        let (_, h) = random_hierarchy(seed);
        let m = build_concept_matrix(&h, &h.concepts()).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, None).unwrap();
        prop_assert_eq!(ConceptSimilarityMatrix::read_csv(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn axiom_similarity_laws(seed in any::<u64>(), picks in prop::collection::vec((0usize..10, 0usize..10), 2..12)) {
        let (dag, h) = random_hierarchy(seed);
        let mc = build_concept_matrix(&h, &h.concepts()).unwrap();
        let pairs: Vec<(usize, usize)> = picks.into_iter().map(|(a, b)| (a % dag.n, b % dag.n)).filter(|(a, b)| a != b).collect();
        prop_assume!(pairs.len() >= 2);
        for kind in [AxiomKind::SubClassOf, AxiomKind::DisjointWith] {
            let axioms: Vec<Axiom> = pairs.iter().map(|&(a, b)| Axiom::new(kind, dag.name(a), dag.name(b)).unwrap()).collect();
            let (p, q) = (&axioms[0], &axioms[1]);
            let avg = AxiomComparer::new(&mc, Asf::Average).pair(p, q).unwrap();
            let min = AxiomComparer::new(&mc, Asf::Minimum).pair(p, q).unwrap();
            prop_assert!(min <= avg);
            prop_assert!((0.0..=1.0).contains(&avg));
            prop_assert_eq!(avg, AxiomComparer::new(&mc, Asf::Average).pair(q, p).unwrap());
            if kind.is_symmetric() {
                prop_assert_eq!(avg, AxiomComparer::new(&mc, Asf::Average).pair(&p.flipped(), q).unwrap());
            }
        }
    }

    #[test]
    fn turtle_and_ntriples_agree(d in small_dataset()) {
        let nt = d.to_ntriples();
        let back = Dataset::parse(&nt, RdfFormat::NTriples).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(Dataset::parse(&nt, RdfFormat::Turtle).unwrap(), d);
    }

    #[test]
    fn literal_escapes_round_trip(text in "[ -~\\t\\n\\\\\"é]{0,20}") {
        let t = Triple::new(
            Term::Iri(iri("s")),
            iri("p"),
            Term::Literal(Literal { lexical: text.clone(), datatype: None, language: None }),
        ).unwrap();
        let d = Dataset::from_triples([t]);
        prop_assert_eq!(Dataset::parse(&d.to_ntriples(), RdfFormat::NTriples).unwrap(), d);
    }

    #[test]
    fn scored_tsv_round_trip(rows in prop::collection::vec((class_name(), class_name(), -1.0f64..=1.0), 0..20)) {
        let axioms: Vec<(Axiom, f64)> = rows
            .into_iter()
            .filter_map(|(a, b, s)| Axiom::new(AxiomKind::SubClassOf, iri(&a), iri(&b)).ok().map(|x| (x, s)))
            .collect();
        let mut buf = Vec::new();
        write_scored_axioms(&mut buf, &axioms, Some("stamp")).unwrap();
        let back = read_axioms(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), axioms.len());
        for ((a, s), (b, t)) in axioms.iter().zip(back) {
            prop_assert_eq!(a, &b);
            prop_assert_eq!(Some(*s), t);
        }
    }

    #[test]
    fn instance_similarity_bounded_and_symmetric(
        d in small_dataset(),
        (a, b, c, e) in (class_name(), class_name(), class_name(), class_name()),
        (n1, n2) in (any::<bool>(), any::<bool>()),
    ) {
        let (Some(p), Some(q)) = (
            SubsumptionPair::new(iri(&a), iri(&b), n1),
            SubsumptionPair::new(iri(&c), iri(&e), n2),
        ) else {
            return Ok(());
        };
        let s = instance_similarity(&d, &p, &q, true);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, instance_similarity(&d, &q, &p, true));
    }

    #[test]
    fn splits_are_leakage_free(n in 3usize..60, frac in 0.2f64..0.9, seed in any::<u64>()) {
        let Ok(plan) = SplitPlan::new(n, frac, seed) else { return Ok(()); };
        let mut all: Vec<usize> = plan.train_indices.iter().chain(&plan.test_indices).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        // Mark every column with its own index and check the test block only
        // ever sees training columns.
        let x = DenseMatrix::new(n, n, (0..n * n).map(|k| (k % n) as f64).collect()).unwrap();
        let split = plan.apply(&x, &vec![0.0; n]);
        for r in 0..split.test_x.rows() {
            let cols: Vec<usize> = split.test_x.row(r).iter().map(|&v| v as usize).collect();
            prop_assert_eq!(&cols, &plan.train_indices);
        }
        prop_assert_eq!(plan, SplitPlan::new(n, frac, seed).unwrap());
    }

    #[test]
    fn folds_cover_once(n in 5usize..80, folds in 2usize..6, seed in any::<u64>()) {
        let plans = fold_plans(n, folds, seed).unwrap();
        let mut seen: Vec<usize> = plans.iter().flat_map(|p| p.test_indices.clone()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn knn_one_memorizes_distinct_rows(rows in prop::collection::btree_set(prop::collection::vec(0u8..5, 3), 1..30)) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let y: Vec<f64> = (0..rows.len()).map(|i| (i as f64 * 0.13).sin()).collect();
        let x = DenseMatrix::from_rows(&rows).unwrap();
        let m = fit(&x, &y, Hyperparams::Knn { k: 1 }, None).unwrap();
        let preds: Vec<f64> = m.predict_rows(&x).unwrap().iter().map(|p| p.value).collect();
        prop_assert_eq!(rmse(&preds, &y).unwrap(), 0.0);
    }

    #[test]
    fn predictions_respect_the_score_range(seed in 0u64..1000) {
        let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![((i * 7 + seed as usize) % 11) as f64, i as f64]).collect();
        let y: Vec<f64> = (0..12).map(|i| ((i as f64) - 6.0) / 2.0).collect();
        let x = DenseMatrix::from_rows(&rows).unwrap();
        let m = fit(&x, &y, Hyperparams::Ridge { lambda: 0.01 }, Some((-1.0, 1.0))).unwrap();
        for r in 0..x.rows() {
            let p = m.predict(x.row(r)).unwrap();
            prop_assert!((-1.0..=1.0).contains(&p.value));
            prop_assert_eq!(p.clamped, p.value != p.raw);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cross_validation_is_reproducible(seed in any::<u64>()) {
        let o = axiomscore::synthetic::generate(&axiomscore::synthetic::SyntheticConfig {
            classes: 25,
            axioms: 40,
            seed,
            ..Default::default()
        });
        let h = Hierarchy::build(&o.dataset).unwrap();
        let mc = build_concept_matrix(&h, &h.concepts()).unwrap();
        let basis = LabeledAxiomSet::from_pairs(o.scored(Default::default())).unwrap();
        let ma = AxiomComparer::new(&mc, Asf::Average).build_matrix(&basis).unwrap();
        let grid = Grid { trees: vec![8], max_depth: vec![3], ..Grid::default() };
        let cv = CvConfig { seed, range: Some((-1.0, 1.0)), ..CvConfig::default() };
        for backend in Backend::ALL {
            let a = cross_validate_similarity(backend, &ma, &grid, cv).unwrap();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            let b = pool.install(|| cross_validate_similarity(backend, &ma, &grid, cv).unwrap());
            prop_assert_eq!(a, b);
        }
    }
}
