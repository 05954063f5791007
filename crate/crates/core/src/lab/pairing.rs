//! Join pairs of edge-disjoint odd cycles into even walks along a spanning
//! tree, then keep an edge-disjoint subset.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph};
use crate::lab::cycles::{extract_edge_disjoint_cycles, Cycle};
use crate::lab::tokens::pair_tokens_on_tree;
use crate::minor::{Minor, NodeId};
use crate::mis::maximal_independent_set;
use crate::walks::EvenWalk;

/// BFS spanning forest of `minor` over its node ids, keeping edge ids.
/// Returns the forest edges and the component index of each node.
fn spanning_forest(minor: &Minor) -> (Vec<Edge>, Vec<usize>) {
    let inc = minor.incidence();
    let mut comp = vec![usize::MAX; minor.node_count()];
    let mut edges = Vec::new();
    let mut next = 0;
    for r in minor.nodes() {
        if comp[r] != usize::MAX {
            continue;
        }
        comp[r] = next;
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            for &i in &inc[x] {
                let e = &minor.edges()[i];
                let y = e.other(x);
                if comp[y] == usize::MAX {
                    comp[y] = next;
                    edges.push(Edge { u: x, v: y, id: e.id });
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    (edges, comp)
}

fn rotate(c: &Cycle, start: NodeId) -> (Vec<NodeId>, Vec<EdgeId>) {
    let k = c.nodes.iter().position(|&x| x == start).expect("start lies on the cycle");
    let mut nodes = c.nodes.clone();
    let mut edges = c.edges.clone();
    nodes.rotate_left(k);
    edges.rotate_left(k);
    (nodes, edges)
}

/// Arc of `c` from `x` to `y` in cycle order: nodes x..=y and the edges.
fn arc(c: &Cycle, x: NodeId, y: NodeId) -> (Vec<NodeId>, Vec<EdgeId>) {
    let (nodes, edges) = rotate(c, x);
    let j = nodes.iter().position(|&z| z == y).expect("end lies on the cycle");
    (nodes[..=j].to_vec(), edges[..j].to_vec())
}

/// Even walk from two edge-disjoint odd cycles joined by the simple path
/// `path` (node list from a node of `c1` to a node of `c2`, with its edges).
fn join(minor: &Minor, c1: &Cycle, c2: &Cycle, path_nodes: &[NodeId], path_edges: &[EdgeId]) -> Result<EvenWalk> {
    let s1 = c1.node_set();
    let s2 = c2.node_set();
    let shared: Vec<NodeId> = c1.nodes.iter().copied().filter(|x| s2.contains(x)).collect();
    if shared.len() >= 2 {
        // two arcs of c2 between consecutive shared nodes of c1 have opposite
        // parity, so one of them closes an even cycle with the c1 arc
        let (x, y) = (shared[0], shared[1]);
        let (p_nodes, p_edges) = arc(c1, x, y);
        let (q1_nodes, q1_edges) = arc(c2, y, x);
        let (q2_nodes, q2_edges) = arc(c2, x, y);
        let (q_nodes, q_edges) = if (p_edges.len() + q1_edges.len()) % 2 == 0 {
            (q1_nodes, q1_edges)
        } else {
            let mut n = q2_nodes;
            n.reverse();
            let mut e = q2_edges;
            e.reverse();
            (n, e)
        };
        let mut nodes = p_nodes;
        nodes.pop();
        nodes.extend(&q_nodes[..q_nodes.len() - 1]);
        let mut edges = p_edges;
        edges.extend(q_edges);
        return EvenWalk::new(minor, nodes, edges);
    }
    if shared.len() == 1 {
        let x = shared[0];
        let (mut nodes, mut edges) = rotate(c1, x);
        let (n2, e2) = rotate(c2, x);
        nodes.extend(n2);
        edges.extend(e2);
        return EvenWalk::new(minor, nodes, edges);
    }
    let i = path_nodes
        .iter()
        .rposition(|x| s1.contains(x))
        .ok_or_else(|| Error::Inconsistent("path misses the first cycle".into()))?;
    let j = i + path_nodes[i..]
        .iter()
        .position(|x| s2.contains(x))
        .ok_or_else(|| Error::Inconsistent("path misses the second cycle".into()))?;
    let (sub_nodes, sub_edges) = (&path_nodes[i..=j], &path_edges[i..j]);
    let (mut nodes, mut edges) = rotate(c1, sub_nodes[0]);
    nodes.extend(&sub_nodes[..sub_nodes.len() - 1]);
    edges.extend(sub_edges);
    let (n2, e2) = rotate(c2, sub_nodes[sub_nodes.len() - 1]);
    nodes.extend(n2);
    edges.extend(e2);
    nodes.extend(sub_nodes[1..].iter().rev());
    edges.extend(sub_edges.iter().rev());
    EvenWalk::new(minor, nodes, edges)
}

/// Even walks from `odd_cycles` (edge-disjoint, odd). Tokens on each
/// cycle's smallest node are paired along a spanning tree per component; a
/// component with an odd number of cycles drops its last one. Walks longer
/// than twice the average are discarded, and a maximal edge-disjoint subset
/// of the rest is returned.
pub fn build_even_walks(minor: &Minor, odd_cycles: &[Cycle]) -> Result<Vec<EvenWalk>> {
    let mut used = BTreeSet::new();
    for c in odd_cycles {
        if !c.is_odd() {
            return Err(Error::InvalidWalk(format!("cycle of even length {}", c.len())));
        }
        if !c.edges.iter().all(|&e| used.insert(e)) {
            return Err(Error::InvalidWalk("cycles share an edge".into()));
        }
    }
    let (forest, comp) = spanning_forest(minor);
    let mut by_comp: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in odd_cycles.iter().enumerate() {
        let token = *c.nodes.iter().min().expect("nonempty cycle");
        by_comp.entry(comp[token]).or_default().push(i);
    }
    let mut walks = Vec::new();
    for (k, mut ids) in by_comp {
        if ids.len() % 2 == 1 {
            ids.pop();
        }
        if ids.is_empty() {
            continue;
        }
        let nodes: Vec<NodeId> = minor.nodes().filter(|&x| comp[x] == k).collect();
        let mut local = vec![usize::MAX; minor.node_count()];
        for (i, &x) in nodes.iter().enumerate() {
            local[x] = i;
        }
        let tree_edges: Vec<Edge> = forest
            .iter()
            .filter(|e| comp[e.u] == k)
            .map(|e| Edge {
                u: local[e.u],
                v: local[e.v],
                id: e.id,
            })
            .collect();
        let tree = Graph::with_edges(nodes.len(), tree_edges)?;
        let tokens: Vec<usize> = ids
            .iter()
            .map(|&i| local[*odd_cycles[i].nodes.iter().min().unwrap()])
            .collect();
        for p in pair_tokens_on_tree(&tree, &tokens)? {
            let path_nodes: Vec<NodeId> = p.nodes.iter().map(|&x| nodes[x]).collect();
            let (c1, c2) = (&odd_cycles[ids[p.tokens.0]], &odd_cycles[ids[p.tokens.1]]);
            walks.push(join(minor, c1, c2, &path_nodes, &p.edges)?);
        }
    }
    Ok(disjoint_short_walks(walks))
}

/// Drop walks longer than twice the average length, then keep a maximal set
/// of pairwise edge-disjoint walks among the rest.
pub fn disjoint_short_walks(walks: Vec<EvenWalk>) -> Vec<EvenWalk> {
    let total: usize = walks.iter().map(|w| w.distinct_edges().len()).sum();
    let count = walks.len();
    let short: Vec<EvenWalk> = walks
        .into_iter()
        .filter(|w| w.distinct_edges().len() * count <= 2 * total)
        .collect();
    let mut by_edge: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (i, w) in short.iter().enumerate() {
        for e in w.distinct_edges() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut adj = vec![BTreeSet::new(); short.len()];
    for ws in by_edge.values() {
        for &a in ws {
            for &b in ws {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    let keep: BTreeSet<usize> = maximal_independent_set(&adj, 0).set.into_iter().collect();
    short
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, w)| w)
        .collect()
}

/// Even walks from the cycle extraction: the even cycles themselves when at
/// least half are even, otherwise walks built from the odd ones. When that
/// yields nothing, the shortest even cycle found in the cycle space.
pub fn even_walk_pipeline(minor: &Minor) -> Result<Vec<EvenWalk>> {
    let cycles = extract_edge_disjoint_cycles(minor);
    let (even, odd): (Vec<Cycle>, Vec<Cycle>) = cycles.into_iter().partition(|c| !c.is_odd());
    let walks = if !even.is_empty() && 2 * even.len() >= even.len() + odd.len() {
        even.into_iter()
            .map(|c| EvenWalk::new(minor, c.nodes, c.edges))
            .collect::<Result<Vec<_>>>()?
    } else {
        build_even_walks(minor, &odd)?
    };
    if !walks.is_empty() {
        return Ok(walks);
    }
    match shortest_even_cycle(minor, MAX_CYCLE_RANK) {
        Some(c) => Ok(vec![EvenWalk::new(minor, c.nodes, c.edges)?]),
        None => Ok(walks),
    }
}

/// Largest cycle-space dimension searched exhaustively.
pub const MAX_CYCLE_RANK: usize = 16;

/// Shortest simple even cycle, by enumerating the cycle space spanned by the
/// fundamental cycles of a BFS forest. `None` if there is none or the space
/// has dimension above `max_rank`.
pub fn shortest_even_cycle(minor: &Minor, max_rank: usize) -> Option<Cycle> {
    let (forest, _) = spanning_forest(minor);
    let tree_ids: BTreeSet<EdgeId> = forest.iter().map(|e| e.id).collect();
    let n = minor.node_count();
    let mut tree_adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    for (i, e) in forest.iter().enumerate() {
        tree_adj[e.u].push((e.v, i));
        tree_adj[e.v].push((e.u, i));
    }
    let chords: Vec<&crate::minor::MinorEdge> = minor.edges().iter().filter(|e| !tree_ids.contains(&e.id)).collect();
    if chords.is_empty() || chords.len() > max_rank {
        return None;
    }
    // fundamental cycle of each chord as a bitset over positions in minor.edges()
    let pos_of_tree: BTreeMap<EdgeId, usize> = minor.edges().iter().enumerate().map(|(i, e)| (e.id, i)).collect();
    let tree_path = |a: NodeId, b: NodeId| -> Vec<usize> {
        // BFS inside the tree from a to b, returning forest edge indices
        let mut prev: Vec<Option<(NodeId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &(y, i) in &tree_adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, i));
                    queue.push_back(y);
                }
            }
        }
        let mut out = Vec::new();
        let mut z = b;
        while let Some((x, i)) = prev[z] {
            out.push(i);
            z = x;
        }
        out
    };
    let words = minor.edge_count().div_ceil(64);
    let basis: Vec<Vec<u64>> = chords
        .iter()
        .map(|c| {
            let mut bits = vec![0u64; words];
            let mut set = |p: usize| bits[p / 64] ^= 1 << (p % 64);
            set(pos_of_tree[&c.id]);
            for i in tree_path(c.a, c.b) {
                set(pos_of_tree[&forest[i].id]);
            }
            bits
        })
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for mask in 1u64..(1u64 << chords.len()) {
        let mut bits = vec![0u64; words];
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for (x, y) in bits.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        let edges: Vec<usize> = (0..minor.edge_count()).filter(|&p| bits[p / 64] >> (p % 64) & 1 == 1).collect();
        if edges.len() % 2 == 1 || best.as_ref().is_some_and(|b| b.len() <= edges.len()) {
            continue;
        }
        if is_simple_cycle(minor, &edges) {
            best = Some(edges);
        }
    }
    best.map(|edges| trace_cycle(minor, &edges))
}

fn is_simple_cycle(minor: &Minor, positions: &[usize]) -> bool {
    let mut deg: BTreeMap<NodeId, usize> = BTreeMap::new();
    for &p in positions {
        let e = &minor.edges()[p];
        *deg.entry(e.a).or_default() += 1;
        *deg.entry(e.b).or_default() += 1;
    }
    deg.values().all(|&d| d == 2) && deg.len() == positions.len()
        && trace_cycle(minor, positions).len() == positions.len()
}

/// Follows the edges at `positions` from the smallest node.
fn trace_cycle(minor: &Minor, positions: &[usize]) -> Cycle {
    let es: Vec<&crate::minor::MinorEdge> = positions.iter().map(|&p| &minor.edges()[p]).collect();
    let start = es.iter().map(|e| e.a.min(e.b)).min().unwrap();
    let mut used = vec![false; es.len()];
    let mut nodes = vec![start];
    let mut edges = Vec::new();
    let mut x = start;
    while let Some(k) = (0..es.len()).find(|&k| !used[k] && (es[k].a == x || es[k].b == x)) {
        used[k] = true;
        edges.push(es[k].id);
        x = es[k].other(x);
        if x == start {
            break;
        }
        nodes.push(x);
    }
    Cycle { nodes, edges }
}
