//! Node-weighted matching minors with lineage back to a base graph.
//!
//! Nodes are `0..k`, always numbered by the smallest base vertex they contain.
//! A node's weight is the number of base vertices shrunk into it. Edges keep
//! their root edge id and the base endpoints they were created from, so the
//! endpoint a minor edge uses inside a contracted node is a field lookup.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, WeightVector};
use crate::oracle::Query;

pub type NodeId = usize;

static CONNECTIVITY_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Number of checked contractions that were handed a disconnected set,
/// counted process-wide.
pub fn connectivity_violations() -> usize {
    CONNECTIVITY_VIOLATIONS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinorEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub id: EdgeId,
    /// Base endpoints, `base_a` inside node `a`.
    pub base_a: VertexId,
    pub base_b: VertexId,
}

impl MinorEdge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// Base endpoint lying inside node `x`.
    pub fn base_in(&self, x: NodeId) -> VertexId {
        if x == self.a {
            self.base_a
        } else {
            self.base_b
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minor {
    base: Arc<Graph>,
    members: Vec<Vec<VertexId>>,
    vertex_node: Vec<NodeId>,
    edges: Vec<MinorEdge>,
}

impl Minor {
    pub fn identity(base: Arc<Graph>) -> Self {
        let n = base.vertex_count();
        let edges = base
            .edges()
            .iter()
            .map(|e| MinorEdge {
                a: e.u,
                b: e.v,
                id: e.id,
                base_a: e.u,
                base_b: e.v,
            })
            .collect();
        Minor {
            members: (0..n).map(|v| vec![v]).collect(),
            vertex_node: (0..n).collect(),
            edges,
            base,
        }
    }

    pub fn base(&self) -> &Arc<Graph> {
        &self.base
    }

    pub fn node_count(&self) -> usize {
        self.members.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.members.len()
    }

    pub fn edges(&self) -> &[MinorEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Base vertices shrunk into `x`, sorted.
    pub fn members(&self, x: NodeId) -> &[VertexId] {
        &self.members[x]
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.vertex_node[v]
    }

    pub fn node_weight(&self, x: NodeId) -> usize {
        self.members[x].len()
    }

    pub fn set_weight(&self, set: &[NodeId]) -> usize {
        set.iter().map(|&x| self.node_weight(x)).sum()
    }

    pub fn total_weight(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    /// Incident edge positions per node.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.node_count()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.a].push(i);
            inc[e.b].push(i);
        }
        inc
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn retain_edges(&self, mut keep: impl FnMut(&MinorEdge) -> bool) -> Minor {
        Minor {
            base: self.base.clone(),
            members: self.members.clone(),
            vertex_node: self.vertex_node.clone(),
            edges: self.edges.iter().copied().filter(|e| keep(e)).collect(),
        }
    }

    /// Keeps only edges whose id is in `allowed`.
    pub fn restrict_to(&self, allowed: &BTreeSet<EdgeId>) -> Minor {
        self.retain_edges(|e| allowed.contains(&e.id))
    }

    /// Contracts pairwise disjoint node sets, each of which must be connected
    /// and of odd weight. Internal edges disappear, parallel edges survive.
    pub fn contract(&self, sets: &[Vec<NodeId>]) -> Result<Minor> {
        self.check_disjoint(sets)?;
        for set in sets.iter().filter(|s| s.len() > 1) {
            if !self.is_connected_set(set) {
                CONNECTIVITY_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
                return Err(Error::DisconnectedSet(sorted(set)));
            }
            if self.set_weight(set).is_multiple_of(2) {
                return Err(Error::EvenSet(sorted(set)));
            }
        }
        Ok(self.contract_raw(sets))
    }

    /// Contraction without the connectivity and parity checks.
    pub fn contract_unchecked(&self, sets: &[Vec<NodeId>]) -> Result<Minor> {
        self.check_disjoint(sets)?;
        Ok(self.contract_raw(sets))
    }

    /// Drops parallel edges, keeping the smallest edge id of each bundle.
    pub fn dedup_parallel(&self) -> Minor {
        let mut seen = BTreeSet::new();
        // edges are sorted by id, so the first survivor of a bundle is the smallest
        self.retain_edges(|e| seen.insert((e.a.min(e.b), e.a.max(e.b))))
    }

    fn check_disjoint(&self, sets: &[Vec<NodeId>]) -> Result<()> {
        let mut used = vec![false; self.node_count()];
        for set in sets {
            for &x in set {
                if x >= self.node_count() {
                    return Err(Error::UnknownNode(x));
                }
                if used[x] {
                    return Err(Error::OverlappingSets(x));
                }
                used[x] = true;
            }
        }
        Ok(())
    }

    fn contract_raw(&self, sets: &[Vec<NodeId>]) -> Minor {
        // group[x] = index of the new node before renumbering
        let k = self.node_count();
        let mut group: Vec<usize> = (0..k).collect();
        for set in sets.iter().filter(|s| !s.is_empty()) {
            let root = *set.iter().min().unwrap();
            for &x in set {
                group[x] = root;
            }
        }
        let mut merged: Vec<Vec<VertexId>> = vec![Vec::new(); k];
        for x in 0..k {
            merged[group[x]].extend_from_slice(&self.members[x]);
        }
        let mut order: Vec<usize> = (0..k).filter(|&g| !merged[g].is_empty()).collect();
        for g in &order {
            merged[*g].sort_unstable();
        }
        order.sort_by_key(|&g| merged[g][0]);
        let mut renumber = vec![usize::MAX; k];
        for (new, &g) in order.iter().enumerate() {
            renumber[g] = new;
        }
        let members: Vec<Vec<VertexId>> = order.iter().map(|&g| std::mem::take(&mut merged[g])).collect();
        let mut vertex_node = vec![0; self.vertex_node.len()];
        for (x, m) in members.iter().enumerate() {
            for &v in m {
                vertex_node[v] = x;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let a = renumber[group[e.a]];
                let b = renumber[group[e.b]];
                (a != b).then_some(MinorEdge { a, b, ..*e })
            })
            .collect();
        Minor {
            base: self.base.clone(),
            members,
            vertex_node,
            edges,
        }
    }

    pub fn is_connected_set(&self, set: &[NodeId]) -> bool {
        if set.len() <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(self.node_count());
        let inside: BTreeSet<NodeId> = set.iter().copied().collect();
        for e in &self.edges {
            if inside.contains(&e.a) && inside.contains(&e.b) {
                uf.union(e.a, e.b);
            }
        }
        let r = uf.find(set[0]);
        set.iter().all(|&x| uf.find(x) == r)
    }

    /// Connected components, each sorted, ordered by smallest node id.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut uf = UnionFind::new(self.node_count());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        uf.groups()
    }

    /// Edges with at least one endpoint of degree two or more.
    pub fn non_isolated_edge_count(&self) -> usize {
        let deg = self.degrees();
        self.edges
            .iter()
            .filter(|e| deg[e.a] >= 2 || deg[e.b] >= 2)
            .count()
    }

    pub fn is_perfect_matching_graph(&self) -> bool {
        self.degrees().iter().all(|&d| d == 1)
    }

    /// Oracle query on the subgraph induced by `nodes` (relabelled in the
    /// given order) with weights `w`.
    pub fn query(&self, nodes: &[NodeId], w: &WeightVector) -> Query {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &x) in nodes.iter().enumerate() {
            local[x] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.a] != usize::MAX && local[e.b] != usize::MAX)
            .map(|e| (local[e.a], local[e.b], w.get(e.id)))
            .collect();
        Query::new(nodes.len(), edges)
    }

    pub fn full_query(&self, w: &WeightVector) -> Query {
        let nodes: Vec<NodeId> = self.nodes().collect();
        self.query(&nodes, w)
    }

    /// Plain graph with one vertex per node; edge ids are kept.
    pub fn to_graph(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| crate::graph::Edge {
                u: e.a,
                v: e.b,
                id: e.id,
            })
            .collect();
        Graph::with_edges(self.node_count(), edges).expect("minor edges are loop-free")
    }

    pub fn to_debug_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Node<'a> {
            id: NodeId,
            weight: usize,
            members: &'a [VertexId],
        }
        #[derive(Serialize)]
        struct DebugEdge {
            ends: (NodeId, NodeId),
            lineage: EdgeId,
        }
        let nodes: Vec<Node> = self
            .nodes()
            .map(|x| Node {
                id: x,
                weight: self.node_weight(x),
                members: &self.members[x],
            })
            .collect();
        let edges: Vec<DebugEdge> = self
            .edges
            .iter()
            .map(|e| DebugEdge {
                ends: (e.a, e.b),
                lineage: e.id,
            })
            .collect();
        serde_json::json!({ "nodes": nodes, "edges": edges })
    }
}

fn sorted(set: &[NodeId]) -> Vec<NodeId> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so representatives are stable
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Groups in order of smallest member, each sorted.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Laminar family of node sets over one minor. Sets are kept sorted and
/// deduplicated; singletons are members like any other set.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LaminarFamily {
    sets: BTreeSet<Vec<NodeId>>,
}

impl LaminarFamily {
    pub fn singletons(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        LaminarFamily {
            sets: nodes.into_iter().map(|x| vec![x]).collect(),
        }
    }

    pub fn insert(&mut self, mut set: Vec<NodeId>) -> bool {
        set.sort_unstable();
        set.dedup();
        !set.is_empty() && self.sets.insert(set)
    }

    pub fn extend(&mut self, other: LaminarFamily) {
        self.sets.extend(other.sets);
    }

    pub fn sets(&self) -> impl Iterator<Item = &Vec<NodeId>> {
        self.sets.iter()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &[NodeId]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.sets.contains(&s)
    }

    pub fn non_singletons(&self) -> impl Iterator<Item = &Vec<NodeId>> {
        self.sets.iter().filter(|s| s.len() > 1)
    }

    /// Errors on the first crossing pair.
    pub fn check_laminar(&self) -> Result<()> {
        let sets: Vec<&Vec<NodeId>> = self.sets.iter().collect();
        for (i, s) in sets.iter().enumerate() {
            for t in &sets[i + 1..] {
                if crosses(s, t) {
                    return Err(Error::NotLaminar((*s).clone(), (*t).clone()));
                }
            }
        }
        Ok(())
    }

    pub fn is_laminar(&self) -> bool {
        self.check_laminar().is_ok()
    }

    /// Inclusion-maximal sets with at least two nodes.
    pub fn maximal_non_singletons(&self) -> Vec<Vec<NodeId>> {
        let big: Vec<&Vec<NodeId>> = self.non_singletons().collect();
        big.iter()
            .filter(|s| !big.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .map(|s| (*s).clone())
            .collect()
    }
}

/// Sorted-slice subset test.
pub fn is_subset(s: &[NodeId], t: &[NodeId]) -> bool {
    let mut j = 0;
    for &x in s {
        while j < t.len() && t[j] < x {
            j += 1;
        }
        if j == t.len() || t[j] != x {
            return false;
        }
    }
    true
}

fn crosses(s: &[NodeId], t: &[NodeId]) -> bool {
    let common = s.iter().filter(|x| t.binary_search(x).is_ok()).count();
    common != 0 && common != s.len() && common != t.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlippedSet {
    pub original: Vec<NodeId>,
    pub complement: Vec<NodeId>,
    pub complement_odd: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipOutcome {
    pub family: LaminarFamily,
    pub flipped: Vec<FlippedSet>,
}

/// Replaces every non-singleton set heavier than half of `component` by its
/// complement within the component. Sets must lie inside the component.
pub fn flip_heavy_sets(minor: &Minor, family: &LaminarFamily, component: &[NodeId]) -> FlipOutcome {
    let mut comp = component.to_vec();
    comp.sort_unstable();
    let total = minor.set_weight(&comp);
    let mut out = LaminarFamily::default();
    let mut flipped = Vec::new();
    for s in family.sets() {
        let weight = minor.set_weight(s);
        if s.len() > 1 && 2 * weight > total {
            let complement: Vec<NodeId> = comp.iter().copied().filter(|x| s.binary_search(x).is_err()).collect();
            let complement_odd = minor.set_weight(&complement) % 2 == 1;
            flipped.push(FlippedSet {
                original: s.clone(),
                complement: complement.clone(),
                complement_odd,
            });
            out.insert(complement);
        } else {
            out.insert(s.clone());
        }
    }
    FlipOutcome {
        family: out,
        flipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn two_triangles_bridge() -> Minor {
        // a b c d e f = 0..6, bridge c-d
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        Minor::identity(Arc::new(g))
    }

    fn graph(n: usize, pairs: &[(usize, usize)]) -> Minor {
        Minor::identity(Arc::new(Graph::new(n, pairs).unwrap()))
    }

    #[test]
    fn contract_triangles() {
        let m = two_triangles_bridge();
        let h = m.contract(&[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0].id, 3);
        assert_eq!(h.edges()[0].base_a, 2);
        assert_eq!(h.edges()[0].base_b, 3);
        assert_eq!(h.total_weight(), 6);
        assert_eq!(h.node_weight(0), 3);
    }

    #[test]
    fn contract_identity_and_errors() {
        let m = two_triangles_bridge();
        let same = m.contract(&[]).unwrap();
        assert_eq!(same.edges(), m.edges());
        assert_eq!(m.contract(&[vec![0, 1]]), Err(Error::EvenSet(vec![0, 1])));
        assert_eq!(m.contract(&[vec![0, 1, 2], vec![2, 3, 4]]), Err(Error::OverlappingSets(2)));
        assert_eq!(m.contract(&[vec![9]]), Err(Error::UnknownNode(9)));
    }

    #[test]
    fn disconnected_set_is_counted() {
        let m = graph(4, &[(0, 1), (2, 3)]);
        let before = connectivity_violations();
        assert_eq!(m.contract(&[vec![0, 2, 3]]).map(|_| ()), Err(Error::DisconnectedSet(vec![0, 2, 3])));
        assert!(connectivity_violations() > before);
    }

    #[test]
    fn renumbering_by_smallest_member() {
        let m = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let h = m.contract(&[vec![2, 3, 4]]).unwrap();
        assert_eq!(h.members(2), &[2, 3, 4]);
        let h2 = m.contract(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(h2.members(0), &[0, 1, 2]);
        assert_eq!(h2.node_of(4), 2);
    }

    #[test]
    fn predicates() {
        assert_eq!(graph(2, &[(0, 1)]).non_isolated_edge_count(), 0);
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(c4.non_isolated_edge_count(), 4);
        assert_eq!(graph(4, &[(0, 1), (1, 2), (2, 3)]).non_isolated_edge_count(), 3);
        assert!(graph(2, &[(0, 1)]).is_perfect_matching_graph());
        assert!(!c4.is_perfect_matching_graph());
        assert!(graph(0, &[]).is_perfect_matching_graph());
    }

    #[test]
    fn components_ordered() {
        let m = graph(4, &[(2, 3), (0, 1)]);
        assert_eq!(m.components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(graph(3, &[(0, 1), (1, 2)]).components().len(), 1);
        assert!(graph(0, &[]).components().is_empty());
    }

    #[test]
    fn dedup_keeps_smallest_id() {
        let m = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let h = m.contract_unchecked(&[vec![1, 2]]).unwrap().dedup_parallel();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0].id, 0);
    }

    #[test]
    fn flip_nested_sets_become_disjoint() {
        let m = graph(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]);
        let comp: Vec<NodeId> = (0..7).collect();
        let mut fam = LaminarFamily::singletons(0..7);
        fam.insert(vec![0, 1, 2]);
        fam.insert(vec![0, 1, 2, 3, 4]);
        let out = flip_heavy_sets(&m, &fam, &comp);
        assert!(out.family.contains(&[5, 6]));
        assert!(out.family.contains(&[0, 1, 2]));
        assert!(out.family.is_laminar());
        assert_eq!(out.flipped.len(), 1);
        assert!(!out.flipped[0].complement_odd);
    }

    #[test]
    fn flip_without_heavy_sets_is_identity() {
        let m = graph(3, &[(0, 1), (1, 2)]);
        let fam = LaminarFamily::singletons(0..3);
        let out = flip_heavy_sets(&m, &fam, &[0, 1, 2]);
        assert_eq!(out.family, fam);
        assert!(out.flipped.is_empty());
    }

    #[test]
    fn laminarity_check() {
        let mut fam = LaminarFamily::default();
        fam.insert(vec![0, 1, 2]);
        fam.insert(vec![2, 3, 4]);
        assert!(!fam.is_laminar());
        let mut ok = LaminarFamily::default();
        ok.insert(vec![0, 1, 2]);
        ok.insert(vec![0, 1, 2, 3, 4]);
        ok.insert(vec![5]);
        assert!(ok.is_laminar());
        assert_eq!(ok.maximal_non_singletons(), vec![vec![0, 1, 2, 3, 4]]);
    }
}
