//! Many edge-disjoint cycles in a multigraph, by the induction that strips
//! loops, parallel pairs and low-degree vertices and otherwise removes a
//! shortest cycle.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::graph::EdgeId;
use crate::minor::{Minor, NodeId};
use crate::par;

/// Closed walk `nodes[0] -edges[0]- nodes[1] ... -edges[k-1]- nodes[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn node_set(&self) -> BTreeSet<NodeId> {
        self.nodes.iter().copied().collect()
    }
}

/// `(|E| - |V|) / (2 log₂ |V|)`, zero below two vertices.
pub fn cycle_bound(edges: usize, nodes: usize) -> f64 {
    if nodes < 2 {
        return 0.0;
    }
    (edges as f64 - nodes as f64) / (2.0 * (nodes as f64).log2())
}

/// A working edge that may stand for a spliced path of original edges.
#[derive(Debug, Clone)]
struct Piece {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl Piece {
    fn u(&self) -> NodeId {
        self.nodes[0]
    }

    fn v(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    /// Node and edge sequence starting at `from`, without the final node.
    fn walk_from(&self, from: NodeId) -> (Vec<NodeId>, Vec<EdgeId>) {
        if from == self.u() {
            (self.nodes[..self.nodes.len() - 1].to_vec(), self.edges.clone())
        } else {
            let mut nodes: Vec<NodeId> = self.nodes[1..].to_vec();
            nodes.reverse();
            let mut edges = self.edges.clone();
            edges.reverse();
            (nodes, edges)
        }
    }
}

struct Work {
    pieces: Vec<Option<Piece>>,
    inc: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl Work {
    fn remove(&mut self, p: usize) -> Piece {
        let piece = self.pieces[p].take().unwrap();
        self.inc[piece.u()].remove(&p);
        self.inc[piece.v()].remove(&p);
        piece
    }

    fn add(&mut self, piece: Piece) {
        let p = self.pieces.len();
        self.inc[piece.u()].insert(p);
        self.inc[piece.v()].insert(p);
        self.pieces.push(Some(piece));
    }

    fn piece(&self, p: usize) -> &Piece {
        self.pieces[p].as_ref().unwrap()
    }

    fn other(&self, p: usize, x: NodeId) -> NodeId {
        let piece = self.piece(p);
        if piece.u() == x {
            piece.v()
        } else {
            piece.u()
        }
    }

    /// Cycle formed by following `steps` (piece, start node) in order.
    fn cycle(&mut self, steps: &[(usize, NodeId)]) -> Cycle {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for &(p, from) in steps {
            let (n, e) = self.piece(p).walk_from(from);
            nodes.extend(n);
            edges.extend(e);
        }
        for &(p, _) in steps {
            self.remove(p);
        }
        Cycle { nodes, edges }
    }

    fn find_loop(&self) -> Option<usize> {
        self.pieces
            .iter()
            .position(|p| p.as_ref().is_some_and(|p| p.u() == p.v()))
    }

    fn find_parallel(&self) -> Option<(usize, usize)> {
        for x in 0..self.inc.len() {
            let mut seen: BTreeMap<NodeId, usize> = BTreeMap::new();
            for &p in &self.inc[x] {
                let y = self.other(p, x);
                if let Some(&q) = seen.get(&y) {
                    return Some((q, p));
                }
                seen.insert(y, p);
            }
        }
        None
    }

    /// Shortest cycle in the (simple) working graph as (piece, start) steps.
    fn shortest_cycle(&self) -> Option<Vec<(usize, NodeId)>> {
        let roots: Vec<NodeId> = (0..self.inc.len()).filter(|&x| !self.inc[x].is_empty()).collect();
        let found = par::map(&roots, |&r| self.shortest_through_root(r));
        let best = found
            .into_iter()
            .zip(&roots)
            .filter_map(|(c, &r)| c.map(|c| (c.len(), r, c)))
            .min_by_key(|(len, r, _)| (*len, *r))?;
        Some(best.2)
    }

    fn shortest_through_root(&self, root: NodeId) -> Option<Vec<(usize, NodeId)>> {
        let n = self.inc.len();
        let mut dist = vec![usize::MAX; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut best: Option<(usize, NodeId, usize, NodeId)> = None;
        while let Some(x) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[x] >= b.0) {
                break;
            }
            for &p in &self.inc[x] {
                if Some(p) == parent[x] {
                    continue;
                }
                let y = self.other(p, x);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = Some(p);
                    queue.push_back(y);
                } else {
                    let len = dist[x] + dist[y] + 1;
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, x, p, y));
                    }
                }
            }
        }
        let (_, x, p, y) = best?;
        let up = |mut z: NodeId| {
            let mut path = Vec::new();
            while let Some(q) = parent[z] {
                let prev = self.other(q, z);
                path.push((q, prev));
                z = prev;
            }
            path.reverse();
            path
        };
        // root .. x, then the closing piece, then y .. root
        let mut steps: Vec<(usize, NodeId)> = up(x);
        steps.push((p, x));
        let down: Vec<(usize, NodeId)> = up(y).into_iter().rev().map(|(q, prev)| (q, self.other(q, prev))).collect();
        steps.extend(down);
        let starts: BTreeSet<NodeId> = steps.iter().map(|s| s.1).collect();
        (starts.len() == steps.len()).then_some(steps)
    }
}

/// Edge-disjoint cycles of `minor`, at least `cycle_bound(|E|, |V|)` of them.
/// Cycles are reported in the minor's own edges and nodes.
pub fn extract_edge_disjoint_cycles(minor: &Minor) -> Vec<Cycle> {
    let n = minor.node_count();
    let mut work = Work {
        pieces: Vec::new(),
        inc: vec![BTreeSet::new(); n],
        alive: vec![true; n],
    };
    for e in minor.edges() {
        work.add(Piece {
            nodes: vec![e.a, e.b],
            edges: vec![e.id],
        });
    }
    let mut out = Vec::new();
    loop {
        if let Some(p) = work.find_loop() {
            let u = work.piece(p).u();
            out.push(work.cycle(&[(p, u)]));
            continue;
        }
        if let Some((p, q)) = work.find_parallel() {
            let (u, v) = (work.piece(p).u(), work.piece(p).v());
            out.push(work.cycle(&[(p, u), (q, v)]));
            continue;
        }
        let mut spliced = false;
        for x in 0..n {
            if !work.alive[x] {
                continue;
            }
            match work.inc[x].len() {
                0 | 1 => {
                    let ps: Vec<usize> = work.inc[x].iter().copied().collect();
                    for p in ps {
                        work.remove(p);
                    }
                    work.alive[x] = false;
                    spliced = true;
                }
                2 => {
                    let ps: Vec<usize> = work.inc[x].iter().copied().collect();
                    let (a, b) = (work.remove(ps[0]), work.remove(ps[1]));
                    let (mut nodes, mut edges) = a.walk_from(if a.u() == x { a.v() } else { a.u() });
                    let (bn, be) = b.walk_from(x);
                    nodes.extend(bn);
                    edges.extend(be);
                    nodes.push(if b.u() == x { b.v() } else { b.u() });
                    work.alive[x] = false;
                    work.add(Piece { nodes, edges });
                    spliced = true;
                    break;
                }
                _ => {}
            }
        }
        if spliced {
            continue;
        }
        match work.shortest_cycle() {
            Some(steps) => out.push(work.cycle(&steps)),
            None => break,
        }
    }
    out
}
