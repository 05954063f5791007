//! Corpora and independent checkers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use ncmatch::graph::{EdgeId, Graph, VertexId, WeightVector};
use ncmatch::lab::gen;
use ncmatch::minor::{Minor, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub seed: u64,
    pub graph: Graph,
    pub w: WeightVector,
}

/// Random graphs with 4..=16 vertices, edge probability 0.3..=0.8 and
/// weights in 0..=50.
pub fn small_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count as u64)
        .map(|i| {
            let n = rng.gen_range(4..=16);
            let p = rng.gen_range(0.3..=0.8);
            let graph = gen::gnp(n, p, seed.wrapping_mul(7919).wrapping_add(i));
            let w = gen::weights(graph.edge_count(), 50, seed.wrapping_mul(104_729).wrapping_add(i)).into();
            Instance { seed: i, graph, w }
        })
        .collect()
}

/// Every perfect matching, by branching on the lowest uncovered vertex.
/// Stops after `cap` matchings.
pub fn perfect_matchings(g: &Graph, cap: usize) -> Vec<Vec<EdgeId>> {
    fn go(g: &Graph, covered: &mut Vec<bool>, chosen: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        let Some(v) = covered.iter().position(|&c| !c) else {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        for e in g.edges() {
            if !e.touches(v) {
                continue;
            }
            let u = e.other(v);
            if covered[u] {
                continue;
            }
            covered[u] = true;
            covered[v] = true;
            chosen.push(e.id);
            go(g, covered, chosen, out, cap);
            chosen.pop();
            covered[u] = false;
            covered[v] = false;
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![false; g.vertex_count()], &mut Vec::new(), &mut out, cap);
    out
}

pub fn weight_of(w: &WeightVector, m: &[EdgeId]) -> i64 {
    m.iter().map(|&e| w.get(e)).sum()
}

/// All minimum-weight perfect matchings by enumeration.
pub fn min_weight_matchings(g: &Graph, w: &WeightVector, cap: usize) -> Vec<Vec<EdgeId>> {
    let all = perfect_matchings(g, cap);
    let Some(best) = all.iter().map(|m| weight_of(w, m)).min() else {
        return Vec::new();
    };
    all.into_iter().filter(|m| weight_of(w, m) == best).collect()
}

/// Vertices of degree at most one removed until none remain.
pub fn two_core(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut alive_e = vec![true; g.edge_count()];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive_v = vec![true; n];
    while let Some(v) = (0..n).find(|&v| alive_v[v] && deg[v] <= 1) {
        alive_v[v] = false;
        for (i, e) in g.edges().iter().enumerate() {
            if alive_e[i] && e.touches(v) {
                alive_e[i] = false;
                deg[e.u] -= 1;
                deg[e.v] -= 1;
            }
        }
    }
    let keep: Vec<VertexId> = (0..n).filter(|&v| alive_v[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| alive_e[*i])
        .map(|(_, e)| (index[e.u], index[e.v]))
        .collect();
    Graph::new(keep.len(), &pairs).unwrap()
}

/// Closed walk `nodes[i] -edges[i]- nodes[i+1]` that repeats no node.
pub fn is_simple_cycle(minor: &Minor, nodes: &[NodeId], edges: &[EdgeId]) -> bool {
    let ends: BTreeMap<EdgeId, (NodeId, NodeId)> = minor.edges().iter().map(|e| (e.id, (e.a, e.b))).collect();
    let k = edges.len();
    if k == 0 || nodes.len() != k {
        return false;
    }
    let distinct: BTreeSet<NodeId> = nodes.iter().copied().collect();
    if distinct.len() != k || edges.iter().collect::<BTreeSet<_>>().len() != k {
        return false;
    }
    (0..k).all(|i| {
        let (x, y) = (nodes[i], nodes[(i + 1) % k]);
        ends.get(&edges[i]).is_some_and(|&(a, b)| (a, b) == (x, y) || (a, b) == (y, x))
    })
}

pub fn identity(g: &Graph) -> Minor {
    Minor::identity(Arc::new(g.clone()))
}

/// Cycles of the symmetric difference of two perfect matchings, each as an
/// alternating node/edge list starting with an edge of `a`.
pub fn symmetric_difference_cycles(g: &Graph, a: &[EdgeId], b: &[EdgeId]) -> Vec<(Vec<NodeId>, Vec<EdgeId>)> {
    let sa: BTreeSet<EdgeId> = a.iter().copied().collect();
    let sb: BTreeSet<EdgeId> = b.iter().copied().collect();
    let diff: Vec<EdgeId> = sa.symmetric_difference(&sb).copied().collect();
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for &start in diff.iter().filter(|e| sa.contains(e)) {
        if used.contains(&start) {
            continue;
        }
        let e0 = g.edge_by_id(start).unwrap();
        let mut nodes = vec![e0.u];
        let mut edges = vec![start];
        used.insert(start);
        let mut x = e0.v;
        let mut from_a = true;
        while x != e0.u {
            nodes.push(x);
            let next = diff
                .iter()
                .copied()
                .find(|&f| !used.contains(&f) && sa.contains(&f) != from_a && g.edge_by_id(f).unwrap().touches(x))
                .unwrap();
            used.insert(next);
            edges.push(next);
            x = g.edge_by_id(next).unwrap().other(x);
            from_a = !from_a;
        }
        out.push((nodes, edges));
    }
    out
}
