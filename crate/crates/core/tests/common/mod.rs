//! Helpers shared by the integration tests, including the brute-force
//! distance oracle.

#![allow(dead_code)]

use std::collections::BTreeSet;

use axiomscore::Iri;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn iri(s: &str) -> Iri {
    Iri::new(format!("http://example.org/{s}")).unwrap()
}

/// Random DAG over nodes `N0..N{n-1}`; node `i` only takes parents among
/// lower-numbered nodes, so the graph is acyclic by construction.
pub struct Dag {
    pub n: usize,
    pub parents: Vec<Vec<usize>>,
}

impl Dag {
    pub fn random(seed: u64, max_nodes: usize) -> Dag {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=max_nodes);
        let parents = (0..n)
            .map(|i| {
                let mut ps = BTreeSet::new();
                if i > 0 {
                    for _ in 0..rng.random_range(0..=2usize) {
                        ps.insert(rng.random_range(0..i));
                    }
                }
                ps.into_iter().collect()
            })
            .collect();
        Dag { n, parents }
    }

    pub fn name(&self, i: usize) -> Iri {
        iri(&format!("N{i}"))
    }

    pub fn classes(&self) -> Vec<Iri> {
        (0..self.n).map(|i| self.name(i)).collect()
    }

    pub fn edges(&self) -> Vec<(Iri, Iri)> {
        (0..self.n)
            .flat_map(|i| self.parents[i].iter().map(move |&p| (self.name(i), self.name(p))))
            .collect()
    }

    /// Parents with the virtual root (index `n`) standing above parentless nodes.
    fn up(&self, i: usize) -> Vec<usize> {
        if i == self.n {
            Vec::new()
        } else if self.parents[i].is_empty() {
            vec![self.n]
        } else {
            self.parents[i].clone()
        }
    }

    /// Every upward path from `from`, as the list of nodes after `from`.
    fn all_paths(&self, from: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for p in self.up(from) {
            for rest in self.all_paths(p) {
                let mut path = vec![p];
                path.extend(rest);
                out.push(path);
            }
        }
        out
    }

    /// Depth of every node as the shortest number of edges up to the
    /// virtual root, by enumerating all upward paths.
    pub fn depths(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                self.all_paths(i)
                    .into_iter()
                    .filter(|p| p.last() == Some(&self.n))
                    .map(|p| p.len())
                    .min()
                    .expect("every node reaches the root")
            })
            .collect()
    }

    /// Cheapest cost of any upward path from `from` to each reachable `x`.
    fn path_costs(&self, from: usize, depths: &[usize]) -> Vec<f64> {
        let step = |v: usize| if v == self.n { 1.0 } else { 0.5f64.powi(depths[v] as i32) };
        let mut best = vec![f64::INFINITY; self.n + 1];
        best[from] = 0.0;
        for path in self.all_paths(from) {
            let mut total = 0.0;
            for &v in &path {
                total += step(v);
            }
            if let Some(&x) = path.last() {
                best[x] = best[x].min(total);
            }
        }
        best
    }

    /// Exhaustive distance: every upward path from each side is enumerated
    /// and costed by `2^-depth` per node stepped onto; the answer is the
    /// cheapest pair of paths meeting at a common supertype.
    pub fn oracle_distance(&self, a: usize, b: usize, depths: &[usize]) -> f64 {
        let ca = self.path_costs(a, depths);
        let cb = self.path_costs(b, depths);
        ca.iter().zip(&cb).map(|(x, y)| x + y).fold(f64::INFINITY, f64::min)
    }
}
