//! Even walks, their signatures, and the weight family that gives any small
//! collection of edge-disjoint walks nonzero circulation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightVector};
use crate::minor::{Minor, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WalkKind {
    EvenCycle,
    TwoOddCycles,
}

/// Closed walk `nodes[0] -e0- nodes[1] -e1- ... -e_{k-1}- nodes[0]` over a minor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvenWalk {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
    kind: WalkKind,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidWalk(msg.into())
}

impl EvenWalk {
    /// Validates the walk against `minor`: it must be a simple even cycle, or
    /// two odd cycles joined by a path traversed once in each direction.
    pub fn new(minor: &Minor, nodes: Vec<NodeId>, edges: Vec<EdgeId>) -> Result<Self> {
        let k = edges.len();
        if k == 0 || k % 2 == 1 {
            return Err(invalid(format!("length {k} is not positive and even")));
        }
        if nodes.len() != k {
            return Err(invalid("need one start node per edge"));
        }
        let ends: HashMap<EdgeId, (NodeId, NodeId)> = minor.edges().iter().map(|e| (e.id, (e.a, e.b))).collect();
        for i in 0..k {
            let (x, y) = (nodes[i], nodes[(i + 1) % k]);
            let &(a, b) = ends
                .get(&edges[i])
                .ok_or_else(|| invalid(format!("edge {} is not in the minor", edges[i])))?;
            if !((a, b) == (x, y) || (a, b) == (y, x)) {
                return Err(invalid(format!("edge {} does not join {x} and {y}", edges[i])));
            }
        }
        let mut positions: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
        for (i, &e) in edges.iter().enumerate() {
            positions.entry(e).or_default().push(i);
        }
        let mut doubled = Vec::new();
        for (&e, pos) in &positions {
            match pos.as_slice() {
                [_] => {}
                [p, q] if (q - p) % 2 == 0 => doubled.push(e),
                [_, _] => return Err(invalid(format!("edge {e} repeats with opposite parity"))),
                _ => return Err(invalid(format!("edge {e} used more than twice"))),
            }
        }
        let mut visits: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &x in &nodes {
            *visits.entry(x).or_default() += 1;
        }
        let kind = if doubled.is_empty() && visits.values().all(|&c| c == 1) {
            WalkKind::EvenCycle
        } else if doubled.is_empty() {
            check_figure_eight(&nodes, &visits)?;
            WalkKind::TwoOddCycles
        } else {
            check_dumbbell(&nodes, &edges, &ends, &positions, &doubled)?;
            WalkKind::TwoOddCycles
        };
        Ok(EvenWalk { nodes, edges, kind })
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn distinct_edges(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Alternating ±1 incidence vector, first edge negative.
    pub fn signature(&self) -> BTreeMap<EdgeId, i64> {
        let mut sig = BTreeMap::new();
        for (i, &e) in self.edges.iter().enumerate() {
            *sig.entry(e).or_insert(0) += if i % 2 == 0 { -1 } else { 1 };
        }
        sig
    }

    pub fn circulation(&self, w: &WeightVector) -> i64 {
        self.signature().iter().map(|(&e, &s)| s * w.get(e)).sum::<i64>().abs()
    }

    /// Absolute signed count of walk edges crossing the boundary of `set`.
    pub fn mismatch(&self, minor: &Minor, set: &[NodeId]) -> i64 {
        let inside: BTreeSet<NodeId> = set.iter().copied().collect();
        let crossing: BTreeSet<EdgeId> = minor
            .edges()
            .iter()
            .filter(|e| inside.contains(&e.a) != inside.contains(&e.b))
            .map(|e| e.id)
            .collect();
        self.signature()
            .iter()
            .filter(|(e, _)| crossing.contains(e))
            .map(|(_, &s)| s)
            .sum::<i64>()
            .abs()
    }
}

/// Two odd cycles sharing exactly one node and nothing else.
fn check_figure_eight(nodes: &[NodeId], visits: &BTreeMap<NodeId, usize>) -> Result<()> {
    let twice: Vec<NodeId> = visits.iter().filter(|(_, &c)| c == 2).map(|(&x, _)| x).collect();
    if twice.len() != 1 || visits.values().any(|&c| c > 2) {
        return Err(invalid("not a simple cycle and not two cycles through one node"));
    }
    let x = twice[0];
    let at: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i] == x).collect();
    if (at[1] - at[0]).is_multiple_of(2) {
        return Err(invalid("cycles through the shared node are even"));
    }
    Ok(())
}

/// Doubled edges form a path whose ends sit on two disjoint odd cycles made
/// of the single edges.
fn check_dumbbell(
    nodes: &[NodeId],
    edges: &[EdgeId],
    ends: &HashMap<EdgeId, (NodeId, NodeId)>,
    positions: &BTreeMap<EdgeId, Vec<usize>>,
    doubled: &[EdgeId],
) -> Result<()> {
    let mut path_deg: BTreeMap<NodeId, usize> = BTreeMap::new();
    for e in doubled {
        let (a, b) = ends[e];
        *path_deg.entry(a).or_default() += 1;
        *path_deg.entry(b).or_default() += 1;
    }
    let tips: Vec<NodeId> = path_deg.iter().filter(|(_, &d)| d == 1).map(|(&x, _)| x).collect();
    if tips.len() != 2 || path_deg.values().any(|&d| d > 2) || path_deg.len() != doubled.len() + 1 {
        return Err(invalid("doubled edges do not form a simple path"));
    }
    let singles: Vec<EdgeId> = positions.iter().filter(|(_, p)| p.len() == 1).map(|(&e, _)| e).collect();
    let mut cyc_deg: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut uf: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    fn find(uf: &mut BTreeMap<NodeId, NodeId>, x: NodeId) -> NodeId {
        let p = *uf.entry(x).or_insert(x);
        if p == x {
            x
        } else {
            let r = find(uf, p);
            uf.insert(x, r);
            r
        }
    }
    for e in &singles {
        let (a, b) = ends[e];
        *cyc_deg.entry(a).or_default() += 1;
        *cyc_deg.entry(b).or_default() += 1;
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        uf.insert(ra, rb);
    }
    if cyc_deg.values().any(|&d| d != 2) {
        return Err(invalid("single edges do not form cycles"));
    }
    let (x, y) = (tips[0], tips[1]);
    if !cyc_deg.contains_key(&x) || !cyc_deg.contains_key(&y) {
        return Err(invalid("path ends are not on the cycles"));
    }
    for (&v, _) in path_deg.iter().filter(|(&v, _)| v != x && v != y) {
        if cyc_deg.contains_key(&v) {
            return Err(invalid(format!("path meets a cycle at interior node {v}")));
        }
    }
    let (rx, ry) = (find(&mut uf, x), find(&mut uf, y));
    let cycle_nodes: Vec<NodeId> = cyc_deg.keys().copied().collect();
    let roots: BTreeSet<NodeId> = cycle_nodes.iter().map(|&v| find(&mut uf, v)).collect();
    if rx == ry || roots.len() != 2 {
        return Err(invalid("single edges must form exactly two disjoint cycles"));
    }
    let mut size: BTreeMap<NodeId, usize> = BTreeMap::new();
    for e in &singles {
        let r = find(&mut uf, ends[e].0);
        *size.entry(r).or_default() += 1;
    }
    if size.values().any(|&s| s % 2 == 0) {
        return Err(invalid("cycles of a two-cycle walk must be odd"));
    }
    // closedness plus these multiplicities leaves only the dumbbell traversal
    let _ = (nodes, edges);
    Ok(())
}

/// The first `k` primes strictly above `above`.
pub fn primes_above(above: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut c = above + 1;
    while out.len() < k {
        if crate::oracle::field::is_prime(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Walk budget `⌈scale · m / log₂² n⌉`, at least 1.
pub fn walk_budget(m: usize, n: usize, scale: f64) -> usize {
    let lg = (n.max(2) as f64).log2().max(1.0);
    ((scale * m as f64 / (lg * lg)).ceil() as usize).max(1)
}

/// How many primes the family uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FamilySize {
    /// `s · ⌊m ln 5 / ln q⌋ + 1` for the smallest prime `q` used: enough for
    /// `s` walks to each rule out fewer primes than that.
    Tight,
    /// `2 · m · s`.
    Generous,
    Fixed(usize),
}

pub fn family_len(m: usize, s: usize, size: FamilySize) -> usize {
    let m = m.max(1);
    let s = s.max(1);
    match size {
        FamilySize::Tight => {
            let q = primes_above(((m * m).max(s)) as u64, 1)[0] as f64;
            s * ((m as f64 * 5f64.ln() / q.ln()).floor() as usize) + 1
        }
        FamilySize::Generous => 2 * m * s,
        FamilySize::Fixed(k) => k.max(1),
    }
}

/// Member `j` is `i -> 5^i mod r_j` over edge positions `0..m`, where `r_j`
/// are consecutive primes above `max(m², s)`.
pub fn weight_family(m: usize, s: usize, size: FamilySize) -> Vec<Vec<i64>> {
    let k = family_len(m, s, size);
    primes_above(((m * m).max(s.max(1))) as u64, k)
        .into_iter()
        .map(|r| {
            let mut x = 1u64 % r;
            (0..m)
                .map(|_| {
                    let v = x as i64;
                    x = x * 5 % r;
                    v
                })
                .collect()
        })
        .collect()
}

/// The family laid out on a minor's edges, position `i` being the `i`-th
/// edge in id order.
pub fn family_for(minor: &Minor, s: usize, size: FamilySize) -> Vec<WeightVector> {
    let ids = minor.edge_ids();
    weight_family(ids.len(), s, size)
        .into_iter()
        .map(|vals| {
            let mut w = WeightVector::default();
            for (&id, v) in ids.iter().zip(vals) {
                w.set(id, v);
            }
            w
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use std::sync::Arc;

    fn minor(n: usize, pairs: &[(usize, usize)]) -> Minor {
        Minor::identity(Arc::new(Graph::new(n, pairs).unwrap()))
    }

    #[test]
    fn four_cycle_signature() {
        let m = minor(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let walk = EvenWalk::new(&m, vec![0, 1, 2, 3], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(walk.kind(), WalkKind::EvenCycle);
        let sig: Vec<i64> = walk.signature().values().copied().collect();
        assert_eq!(sig, vec![-1, 1, -1, 1]);
        assert_eq!(walk.circulation(&vec![1, 2, 1, 2].into()), 2);
        assert_eq!(walk.circulation(&vec![1, 1, 1, 1].into()), 0);
        assert_eq!(walk.circulation(&WeightVector::zeros(4)), 0);
        let shifted = EvenWalk::new(&m, vec![1, 2, 3, 0], vec![1, 2, 3, 0]).unwrap();
        let flipped: Vec<i64> = shifted.signature().values().copied().collect();
        assert_eq!(flipped, vec![1, -1, 1, -1]);
        assert_eq!(shifted.circulation(&vec![1, 2, 1, 2].into()), 2);
    }

    #[test]
    fn dumbbell_walk() {
        // triangles 0-1-2 and 3-4-5, path edge 2-3 has id 3
        let m = minor(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        let walk = EvenWalk::new(&m, vec![2, 0, 1, 2, 3, 4, 5, 3], vec![2, 0, 1, 3, 4, 5, 6, 3]).unwrap();
        assert_eq!(walk.kind(), WalkKind::TwoOddCycles);
        assert_eq!(walk.signature()[&3].abs(), 2);
        assert_eq!(walk.mismatch(&m, &[0, 1, 2]), 2);
        assert_eq!(walk.mismatch(&m, &[0, 1, 2, 3, 4, 5]), 0);
    }

    #[test]
    fn figure_eight_walk() {
        let m = minor(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let walk = EvenWalk::new(&m, vec![2, 0, 1, 2, 3, 4], vec![2, 0, 1, 3, 4, 5]).unwrap();
        assert_eq!(walk.kind(), WalkKind::TwoOddCycles);
    }

    #[test]
    fn rejects_bad_walks() {
        let m = minor(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert!(EvenWalk::new(&m, vec![0, 1, 2], vec![0, 1, 4]).is_err());
        assert!(EvenWalk::new(&m, vec![0, 1, 2, 3], vec![0, 1, 2, 2]).is_err());
        assert!(EvenWalk::new(&m, vec![0, 1, 0, 1], vec![0, 0, 0, 0]).is_err());
        // two even cycles through node 0 and 2 share two nodes
        assert!(EvenWalk::new(&m, vec![0, 1, 2, 0, 2, 3], vec![0, 1, 4, 4, 2, 3]).is_err());
    }

    #[test]
    fn mismatch_cancels_on_opposite_parity() {
        let m = minor(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let walk = EvenWalk::new(&m, vec![0, 1, 2, 3], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(walk.mismatch(&m, &[1]), 0);
        assert_eq!(walk.mismatch(&m, &[0, 1, 2, 3]), 0);
    }

    #[test]
    fn family_is_deterministic_and_separates() {
        let a = weight_family(12, 3, FamilySize::Tight);
        assert_eq!(a, weight_family(12, 3, FamilySize::Tight));
        assert_eq!(a.len(), family_len(12, 3, FamilySize::Tight));
        assert!(a.iter().flatten().all(|&x| (0..1000).contains(&x)));
        let m = minor(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let walk = EvenWalk::new(&m, vec![0, 1, 2, 3], vec![0, 1, 2, 3]).unwrap();
        let fam = family_for(&m, 1, FamilySize::Tight);
        assert!(walk.circulation(&fam[0]) > 0);
    }

    #[test]
    fn primes() {
        assert_eq!(primes_above(10, 3), vec![11, 13, 17]);
        assert_eq!(walk_budget(64, 16, 1.0), 4);
        assert_eq!(walk_budget(1, 2, 1.0), 1);
    }
}
