//! Subsumption hierarchy, ontological distance and concept similarity.
//!
//! Every class of the dataset becomes a node; classes without an asserted
//! superclass hang under a virtual root so that any two concepts share at
//! least one common supertype. The depth of a node is the length of its
//! shortest parent path to the root (root depth 0).
//!
//! The ontological distance between two concepts is the cheapest way to climb
//! from both to a common supertype, where stepping onto node `x` costs
//! `2^-depth(x)`. Climbing is a shortest-path search over the ancestor graph,
//! so the cost is polynomial even though the number of ancestor paths in a
//! DAG is not.

mod matrix;

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::rdf_store::{Dataset, Iri};

pub use matrix::{build_concept_matrix, build_concept_matrix_with, ConceptSimilarityMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("subClassOf cycle through <{member}> (use --collapse-cycles to merge it)")]
    Cycle { member: Iri },
    #[error("unknown concept <{0}>")]
    UnknownConcept(Iri),
    #[error("concept <{0}> listed twice")]
    DuplicateConcept(Iri),
    #[error("malformed concept matrix: {0}")]
    MalformedMatrix(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HierarchyOptions {
    /// Merge each strongly connected component of subClassOf into one node
    /// instead of rejecting the cycle.
    pub collapse_cycles: bool,
}

/// Maps an ontological distance to a similarity in (0, 1].
pub trait SimilarityTransform: Sync {
    fn similarity(&self, distance: f64) -> f64;
}

/// `1 / (1 + d)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reciprocal;

impl SimilarityTransform for Reciprocal {
    fn similarity(&self, distance: f64) -> f64 {
        1.0 / (1.0 + distance)
    }
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    /// `None` for the virtual root, otherwise the representative IRI.
    names: Vec<Option<Iri>>,
    /// All IRIs merged into a node (one entry unless cycles were collapsed).
    members: Vec<Vec<Iri>>,
    lookup: HashMap<Iri, NodeId>,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<u32>,
}

impl Hierarchy {
    pub const ROOT: NodeId = NodeId(0);

    pub fn build(d: &Dataset) -> Result<Self, HierarchyError> {
        Self::build_with(d, HierarchyOptions::default())
    }

    pub fn build_with(d: &Dataset, options: HierarchyOptions) -> Result<Self, HierarchyError> {
        Self::from_edges(d.classes(), d.subclass_edges().iter().cloned(), options)
    }

    /// Build from an explicit class set and `(sub, super)` edges. Edge
    /// endpoints are added to the class set; self-loops are ignored.
    pub fn from_edges<C, E>(classes: C, edges: E, options: HierarchyOptions) -> Result<Self, HierarchyError>
    where
        C: IntoIterator<Item = Iri>,
        E: IntoIterator<Item = (Iri, Iri)>,
    {
        let mut classes: BTreeSet<Iri> = classes.into_iter().collect();
        let edges: BTreeSet<(Iri, Iri)> = edges.into_iter().filter(|(a, b)| a != b).collect();
        for (a, b) in &edges {
            classes.insert(a.clone());
            classes.insert(b.clone());
        }

        let mut graph: DiGraph<Iri, ()> = DiGraph::new();
        let mut gidx: HashMap<Iri, NodeIndex> = HashMap::with_capacity(classes.len());
        for c in &classes {
            gidx.insert(c.clone(), graph.add_node(c.clone()));
        }
        for (sub, sup) in &edges {
            graph.add_edge(gidx[sub], gidx[sup], ());
        }

        // Group classes into nodes: singletons, or whole SCCs when collapsing.
        let groups: Vec<Vec<Iri>> = if options.collapse_cycles {
            let mut groups: Vec<Vec<Iri>> = tarjan_scc(&graph)
                .into_iter()
                .map(|scc| {
                    let mut members: Vec<Iri> = scc.into_iter().map(|n| graph[n].clone()).collect();
                    members.sort();
                    members
                })
                .collect();
            groups.sort();
            groups
        } else {
            if let Err(cycle) = toposort(&graph, None) {
                let start = cycle.node_id();
                return Err(HierarchyError::Cycle {
                    member: smallest_cycle_member(&graph, start),
                });
            }
            classes.iter().map(|c| vec![c.clone()]).collect()
        };

        let n = groups.len() + 1;
        let mut names = Vec::with_capacity(n);
        let mut members = Vec::with_capacity(n);
        let mut lookup = HashMap::with_capacity(classes.len());
        names.push(None);
        members.push(Vec::new());
        for (i, group) in groups.into_iter().enumerate() {
            let id = NodeId(i as u32 + 1);
            for m in &group {
                lookup.insert(m.clone(), id);
            }
            names.push(Some(group[0].clone()));
            members.push(group);
        }

        let mut parents: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
        for (sub, sup) in &edges {
            let (a, b) = (lookup[sub], lookup[sup]);
            if a != b {
                parents[a.index()].insert(b);
            }
        }
        let parents: Vec<Vec<NodeId>> = parents
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                if i == 0 {
                    Vec::new()
                } else if p.is_empty() {
                    vec![Self::ROOT]
                } else {
                    p.into_iter().collect()
                }
            })
            .collect();
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (i, ps) in parents.iter().enumerate() {
            for p in ps {
                children[p.index()].push(NodeId(i as u32));
            }
        }

        // Shortest parent path to the root == BFS depth from the root downwards.
        let mut depth = vec![u32::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([Self::ROOT]);
        while let Some(x) = queue.pop_front() {
            for &c in &children[x.index()] {
                if depth[c.index()] == u32::MAX {
                    depth[c.index()] = depth[x.index()] + 1;
                    queue.push_back(c);
                }
            }
        }

        Ok(Hierarchy {
            names,
            members,
            lookup,
            parents,
            children,
            depth,
        })
    }

    /// Number of nodes including the virtual root.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.len() == 1
    }

    pub fn node(&self, iri: &Iri) -> Option<NodeId> {
        self.lookup.get(iri).copied()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.names.len() as u32).map(NodeId)
    }

    /// Representative IRI of a node; `None` for the root.
    pub fn name(&self, node: NodeId) -> Option<&Iri> {
        self.names[node.index()].as_ref()
    }

    pub fn members(&self, node: NodeId) -> &[Iri] {
        &self.members[node.index()]
    }

    pub fn parents_of(&self, node: NodeId) -> &[NodeId] {
        &self.parents[node.index()]
    }

    pub fn children_of(&self, node: NodeId) -> &[NodeId] {
        &self.children[node.index()]
    }

    pub fn depth_of(&self, node: NodeId) -> u32 {
        self.depth[node.index()]
    }

    pub fn depth(&self, iri: &Iri) -> Option<u32> {
        self.node(iri).map(|n| self.depth_of(n))
    }

    /// Representative IRIs of all non-root nodes, sorted.
    pub fn concepts(&self) -> Vec<Iri> {
        let mut out: Vec<Iri> = self.names.iter().flatten().cloned().collect();
        out.sort();
        out
    }

    fn require(&self, iri: &Iri) -> Result<NodeId, HierarchyError> {
        self.node(iri)
            .ok_or_else(|| HierarchyError::UnknownConcept(iri.clone()))
    }

    /// Cost of stepping onto `node` while climbing.
    pub fn step_cost(&self, node: NodeId) -> f64 {
        2f64.powi(-(self.depth_of(node) as i32))
    }

    /// Cheapest climbing cost from `start` to each of its ancestors (itself
    /// included at cost 0), sorted by node id.
    pub fn ancestor_costs(&self, start: NodeId) -> Vec<(NodeId, f64)> {
        let mut best: HashMap<NodeId, f64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        best.insert(start, 0.0);
        heap.push(Frontier { cost: 0.0, node: start });
        while let Some(Frontier { cost, node }) = heap.pop() {
            if cost > best[&node] {
                continue;
            }
            for &p in self.parents_of(node) {
                let next = cost + self.step_cost(p);
                let improved = best.get(&p).is_none_or(|&old| next < old);
                if improved {
                    best.insert(p, next);
                    heap.push(Frontier { cost: next, node: p });
                }
            }
        }
        let mut out: Vec<(NodeId, f64)> = best.into_iter().collect();
        out.sort_by_key(|&(n, _)| n);
        out
    }

    pub fn ontological_distance(&self, t1: &Iri, t2: &Iri) -> Result<f64, HierarchyError> {
        let (a, b) = (self.require(t1)?, self.require(t2)?);
        Ok(self.node_distance(a, b))
    }

    pub fn node_distance(&self, a: NodeId, b: NodeId) -> f64 {
        if a == b {
            return 0.0;
        }
        meet_cost(&self.ancestor_costs(a), &self.ancestor_costs(b))
    }

    /// `1 / (1 + D(t1, t2))`.
    pub fn concept_similarity(&self, t1: &Iri, t2: &Iri) -> Result<f64, HierarchyError> {
        self.concept_similarity_with(t1, t2, &Reciprocal)
    }

    pub fn concept_similarity_with(
        &self,
        t1: &Iri,
        t2: &Iri,
        transform: &dyn SimilarityTransform,
    ) -> Result<f64, HierarchyError> {
        Ok(transform.similarity(self.ontological_distance(t1, t2)?))
    }
}

/// Minimum over common ancestors of the summed climbing costs. Both inputs
/// must be sorted by node id.
pub(crate) fn meet_cost(a: &[(NodeId, f64)], b: &[(NodeId, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut best = f64::INFINITY;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                best = best.min(a[i].1 + b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    best
}

fn smallest_cycle_member(graph: &DiGraph<Iri, ()>, start: NodeIndex) -> Iri {
    tarjan_scc(graph)
        .into_iter()
        .find(|scc| scc.contains(&start))
        .and_then(|scc| scc.into_iter().map(|n| graph[n].clone()).min())
        .unwrap_or_else(|| graph[start].clone())
}

#[derive(Debug, Clone, Copy)]
struct Frontier {
    cost: f64,
    node: NodeId,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // Min-heap on cost.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf_store::{vocab, Triple};

    pub(crate) fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/{s}")).unwrap()
    }

    fn from_pairs(classes: &[&str], edges: &[(&str, &str)]) -> Hierarchy {
        Hierarchy::from_edges(
            classes.iter().map(|c| iri(c)),
            edges.iter().map(|(a, b)| (iri(a), iri(b))),
            HierarchyOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn depth_with_virtual_root() {
        let h = from_pairs(&["A", "B"], &[("B", "A")]);
        assert_eq!(h.depth_of(Hierarchy::ROOT), 0);
        assert_eq!(h.depth(&iri("A")), Some(1));
        assert_eq!(h.depth(&iri("B")), Some(2));
        assert!(h.parents_of(Hierarchy::ROOT).is_empty());
    }

    #[test]
    fn isolated_class_is_child_of_root() {
        let h = from_pairs(&["A"], &[]);
        assert_eq!(h.depth(&iri("A")), Some(1));
        assert_eq!(h.parents_of(h.node(&iri("A")).unwrap()), &[Hierarchy::ROOT]);
    }

    #[test]
    fn diamond_depth_is_shortest() {
        let h = from_pairs(&[], &[("D", "B"), ("D", "C"), ("B", "A"), ("C", "A")]);
        assert_eq!(h.depth(&iri("D")), Some(3));
    }

    #[test]
    fn shortcut_edge_shortens_depth() {
        // D -> C -> B -> A and D -> A directly.
        let h = from_pairs(&[], &[("D", "C"), ("C", "B"), ("B", "A"), ("D", "A")]);
        assert_eq!(h.depth(&iri("D")), Some(2));
        assert_eq!(h.depth(&iri("C")), Some(3));
    }

    #[test]
    fn cycle_is_an_error_naming_a_member() {
        let err = Hierarchy::from_edges(
            Vec::new(),
            vec![(iri("A"), iri("B")), (iri("B"), iri("C")), (iri("C"), iri("A")), (iri("D"), iri("A"))],
            HierarchyOptions::default(),
        )
        .unwrap_err();
        let HierarchyError::Cycle { member } = err else { panic!() };
        assert!([iri("A"), iri("B"), iri("C")].contains(&member));
    }

    #[test]
    fn collapse_cycles_merges_component() {
        let h = Hierarchy::from_edges(
            Vec::new(),
            vec![(iri("A"), iri("B")), (iri("B"), iri("A")), (iri("C"), iri("A"))],
            HierarchyOptions { collapse_cycles: true },
        )
        .unwrap();
        let ab = h.node(&iri("A")).unwrap();
        assert_eq!(h.node(&iri("B")), Some(ab));
        assert_eq!(h.members(ab).len(), 2);
        assert_eq!(h.depth_of(ab), 1);
        assert_eq!(h.depth(&iri("C")), Some(2));
        assert_eq!(h.ontological_distance(&iri("A"), &iri("B")).unwrap(), 0.0);
    }

    #[test]
    fn distance_to_self_is_zero() {
        let h = from_pairs(&["A", "B"], &[("B", "A")]);
        for c in h.concepts() {
            assert_eq!(h.ontological_distance(&c, &c).unwrap(), 0.0);
        }
    }

    #[test]
    fn chain_distance() {
        let h = from_pairs(&[], &[("B", "A"), ("C", "B")]);
        assert_eq!(h.ontological_distance(&iri("B"), &iri("C")).unwrap(), 0.25);
        assert_eq!(h.ontological_distance(&iri("C"), &iri("B")).unwrap(), 0.25);
        // C -> B -> A: 1/4 + 1/2
        assert_eq!(h.ontological_distance(&iri("A"), &iri("C")).unwrap(), 0.75);
        assert_eq!(h.concept_similarity(&iri("B"), &iri("C")).unwrap(), 0.8);
    }

    #[test]
    fn sibling_distance() {
        let h = from_pairs(&[], &[("B", "A"), ("B2", "A")]);
        // A sits at depth 1: each sibling climbs one step costing 1/2.
        assert_eq!(h.ontological_distance(&iri("B"), &iri("B2")).unwrap(), 1.0);
        assert_eq!(h.concept_similarity(&iri("B"), &iri("B2")).unwrap(), 0.5);
    }

    #[test]
    fn unrelated_roots_meet_at_virtual_root() {
        let h = from_pairs(&["X", "Y"], &[]);
        assert_eq!(h.ontological_distance(&iri("X"), &iri("Y")).unwrap(), 2.0);
    }

    #[test]
    fn unknown_concept_is_an_error() {
        let h = from_pairs(&["A"], &[]);
        assert_eq!(
            h.ontological_distance(&iri("A"), &iri("Z")),
            Err(HierarchyError::UnknownConcept(iri("Z")))
        );
        assert!(h.concept_similarity(&iri("Z"), &iri("A")).is_err());
    }

    #[test]
    fn build_from_dataset_uses_classes() {
        let owl_class = Iri::new(vocab::OWL_CLASS).unwrap();
        let d = Dataset::from_triples([
            Triple::iris(&iri("B"), vocab::RDFS_SUBCLASS_OF, &iri("A")),
            Triple::iris(&iri("Z"), vocab::RDF_TYPE, &owl_class),
        ]);
        let h = Hierarchy::build(&d).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.depth(&iri("Z")), Some(1));
    }
}
