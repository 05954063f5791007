//! Shrink a graph to a matching minor that is itself a perfect matching.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, WeightVector};
use crate::mis::{is_maximal_independent, maximal_independent_set};
use crate::minor::{Minor, NodeId};
use crate::oracle::allowed_edges;
use crate::par;
use crate::reduce::reduce;
use crate::stats::{Context, TraceEntry};
use crate::walks::{family_for, walk_budget};

/// Path `a - b - c` through degree-2 nodes, `b` in the middle and `a < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Triad {
    pub a: NodeId,
    pub b: NodeId,
    pub c: NodeId,
}

impl Triad {
    pub fn nodes(&self) -> [NodeId; 3] {
        [self.a, self.b, self.c]
    }

    fn smallest(&self) -> NodeId {
        self.a.min(self.b)
    }
}

/// All triads, ordered by smallest node and then by centre.
pub fn find_triads(minor: &Minor) -> Vec<Triad> {
    let deg = minor.degrees();
    let inc = minor.incidence();
    let mut out: Vec<Triad> = minor
        .nodes()
        .filter(|&b| deg[b] == 2)
        .filter_map(|b| {
            let x = minor.edges()[inc[b][0]].other(b);
            let y = minor.edges()[inc[b][1]].other(b);
            (x != y && deg[x] == 2 && deg[y] == 2).then(|| Triad {
                a: x.min(y),
                b,
                c: x.max(y),
            })
        })
        .collect();
    out.sort_by_key(|t| (t.smallest(), t.b));
    out
}

fn disjoint_triads(triads: &[Triad], seed: u64) -> (Vec<Triad>, usize) {
    let mut by_node: std::collections::HashMap<NodeId, Vec<usize>> = std::collections::HashMap::new();
    for (i, t) in triads.iter().enumerate() {
        for x in t.nodes() {
            by_node.entry(x).or_default().push(i);
        }
    }
    let adj: Vec<Vec<usize>> = triads
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut nb: Vec<usize> = t.nodes().iter().flat_map(|x| by_node[x].iter().copied()).filter(|&j| j != i).collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let mis = maximal_independent_set(&adj, seed);
    assert!(is_maximal_independent(&adj, &mis.set), "triad selection is not maximal");
    (mis.set.iter().map(|&i| triads[i]).collect(), mis.rounds)
}

/// A maximal node-disjoint subset of `triads`, in input order.
pub fn maximal_disjoint_triads(triads: &[Triad], seed: u64) -> Vec<Triad> {
    disjoint_triads(triads, seed).0
}

#[derive(Debug, Clone)]
pub struct Partial {
    pub minor: Minor,
    pub rounds: usize,
}

fn mix(seed: u64, key: &[u8; 32]) -> u64 {
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&key[..8]);
    seed ^ u64::from_le_bytes(bytes)
}

/// Repeatedly replaces the current minor by the candidate with the fewest
/// non-isolated edges until it is a perfect matching, or returns early with a
/// two-node minor once some node carries a sixth of the total weight.
pub fn partial_matching(ctx: &Context, graph: Arc<Graph>, path: &str) -> Result<Partial> {
    let cfg = ctx.config;
    let zero = WeightVector::default();
    let cap = cfg.cap_for(graph.edge_count());
    let mut g = Minor::identity(graph);
    let mut rounds = 0;
    let mut iteration = 0;
    while !g.is_perfect_matching_graph() {
        ctx.count_iteration();
        iteration += 1;
        let total = g.total_weight();
        let before = g.non_isolated_edge_count();
        if let Some(v) = g.nodes().find(|&x| 6 * g.node_weight(x) >= total) {
            let allowed = allowed_edges(ctx.session, &g, &zero)?;
            let rest: Vec<NodeId> = g.nodes().filter(|&x| x != v).collect();
            let h = g.restrict_to(&allowed).contract_unchecked(&[rest])?.dedup_parallel();
            ctx.record(TraceEntry {
                path: path.to_string(),
                iteration,
                nodes: g.node_count(),
                non_isolated_before: before,
                non_isolated_after: h.non_isolated_edge_count(),
                chosen: None,
                candidates: 0,
                evaluated: 0,
                heavy: Some((g.node_weight(v), total)),
            });
            return Ok(Partial {
                minor: h,
                rounds: rounds + 3,
            });
        }
        let s = walk_budget(g.edge_count(), g.node_count(), cfg.walk_budget_scale);
        let family = family_for(&g, s, cfg.family_size);
        for w in &family {
            w.check_cap(cap)?;
        }
        let seed = mix(cfg.mis_seed, &g.full_query(&zero).key());
        let candidate = |&i: &usize| -> Result<(Minor, usize)> {
            if i == 0 {
                let (chosen, mis_rounds) = disjoint_triads(&find_triads(&g), seed);
                let allowed = allowed_edges(ctx.session, &g, &zero)?;
                let sets: Vec<Vec<NodeId>> = chosen.iter().map(|t| t.nodes().to_vec()).collect();
                let h = g.contract(&sets)?.restrict_to(&allowed);
                Ok((h, mis_rounds + 3))
            } else {
                let r = reduce(ctx.session, &g, &family[i - 1])?;
                Ok((r.minor, r.rounds))
            }
        };
        let count = 1 + family.len();
        let chunk = cfg.candidate_chunk.max(1);
        let mut best: Option<(usize, usize, Minor)> = None;
        let mut evaluated = 0;
        let mut step_rounds = 0;
        for start in (0..count).step_by(chunk) {
            let idx: Vec<usize> = (start..(start + chunk).min(count)).collect();
            let results = par::try_map(&idx, candidate)?;
            evaluated += idx.len();
            for (i, (h, r)) in idx.into_iter().zip(results) {
                step_rounds = step_rounds.max(r);
                let c = h.non_isolated_edge_count();
                if best.as_ref().is_none_or(|b| c < b.0) {
                    best = Some((c, i, h));
                }
            }
            if best.as_ref().is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let (after, chosen, h) = best.expect("at least the triad candidate");
        ctx.record(TraceEntry {
            path: path.to_string(),
            iteration,
            nodes: g.node_count(),
            non_isolated_before: before,
            non_isolated_after: after,
            chosen: Some(chosen),
            candidates: count,
            evaluated,
            heavy: None,
        });
        if after >= before {
            return Err(Error::NoProgress(before));
        }
        rounds += 1 + step_rounds;
        g = h;
    }
    Ok(Partial { minor: g, rounds })
}
