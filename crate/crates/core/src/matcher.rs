//! Perfect, minimum-weight perfect, and maximum matchings on top of the oracle.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, WeightVector};
use crate::minor::Minor;
use crate::oracle::OracleSession;
use crate::par;
use crate::partial::partial_matching;
use crate::reduce::reduce;
use crate::stats::{Context, Stats, TraceEntry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingResult {
    /// Root edge ids, sorted.
    pub edges: Vec<EdgeId>,
    pub weight: i64,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Matched(MatchingResult),
    NoPerfectMatching { stats: Stats, trace: Vec<TraceEntry> },
}

impl Outcome {
    pub fn matching(&self) -> Option<&MatchingResult> {
        match self {
            Outcome::Matched(m) => Some(m),
            Outcome::NoPerfectMatching { .. } => None,
        }
    }

    pub fn stats(&self) -> &Stats {
        match self {
            Outcome::Matched(m) => &m.stats,
            Outcome::NoPerfectMatching { stats, .. } => stats,
        }
    }

    pub fn trace(&self) -> &[TraceEntry] {
        match self {
            Outcome::Matched(m) => &m.trace,
            Outcome::NoPerfectMatching { trace, .. } => trace,
        }
    }
}

struct Rec {
    edges: Vec<EdgeId>,
    depth: usize,
    rounds: usize,
}

/// Edges of the perfect-matching minor `h` extended recursively inside each
/// node's preimage, with `solve` handling every preimage minus its matched
/// endpoint. Returns the union and the children's maxima.
fn extend(
    graph: &Graph,
    h: &Minor,
    matched: &[EdgeId],
    path: &str,
    solve: impl Fn(Arc<Graph>, String) -> Result<Rec> + Sync + Send,
) -> Result<Rec> {
    let matched: BTreeSet<EdgeId> = matched.iter().copied().collect();
    let mut endpoint: HashMap<usize, VertexId> = HashMap::new();
    for e in h.edges().iter().filter(|e| matched.contains(&e.id)) {
        for x in [e.a, e.b] {
            if endpoint.insert(x, e.base_in(x)).is_some() {
                return Err(Error::Inconsistent(format!("node {x} matched twice")));
            }
        }
    }
    let mut pieces = Vec::new();
    for x in h.nodes() {
        let v = *endpoint
            .get(&x)
            .ok_or_else(|| Error::Inconsistent(format!("node {x} left unmatched")))?;
        let rest: Vec<VertexId> = h.members(x).iter().copied().filter(|&u| u != v).collect();
        if !rest.is_empty() {
            pieces.push((x, rest));
        }
    }
    let subs = par::try_map(&pieces, |(x, rest)| solve(Arc::new(graph.induced(rest)), format!("{path}/{x}")))?;
    let mut edges: Vec<EdgeId> = matched.into_iter().collect();
    let mut depth = 0;
    let mut rounds = 0;
    for s in subs {
        edges.extend(s.edges);
        depth = depth.max(s.depth);
        rounds = rounds.max(s.rounds);
    }
    edges.sort_unstable();
    Ok(Rec { edges, depth, rounds })
}

fn pm_rec(ctx: &Context, graph: Arc<Graph>, path: String) -> Result<Option<Rec>> {
    if graph.vertex_count() == 0 {
        return Ok(Some(Rec {
            edges: Vec::new(),
            depth: 0,
            rounds: 0,
        }));
    }
    let zero = WeightVector::default();
    if ctx.session.weight(&Minor::identity(graph.clone()).full_query(&zero))?.is_none() {
        return Ok(None);
    }
    let part = partial_matching(ctx, graph.clone(), &path)?;
    let h = part.minor;
    let matched = h.edge_ids();
    let rec = extend(&graph, &h, &matched, &path, |sub, p| {
        pm_rec(ctx, sub, p)?.ok_or_else(|| Error::Inconsistent("preimage without a perfect matching".into()))
    })?;
    Ok(Some(Rec {
        edges: rec.edges,
        depth: 1 + rec.depth,
        rounds: 1 + part.rounds + 1 + rec.rounds,
    }))
}

fn mwpm_rec(ctx: &Context, graph: Arc<Graph>, w: &WeightVector, path: String) -> Result<Option<Rec>> {
    if graph.vertex_count() == 0 {
        return Ok(Some(Rec {
            edges: Vec::new(),
            depth: 0,
            rounds: 0,
        }));
    }
    let g = Minor::identity(graph.clone());
    if ctx.session.weight(&g.full_query(w))?.is_none() {
        return Ok(None);
    }
    let red = reduce(ctx.session, &g, w)?;
    let h = red.minor;
    let shrunk = Arc::new(h.to_graph());
    let pm = pm_rec(ctx, shrunk, format!("{path}:pm"))?
        .ok_or_else(|| Error::Inconsistent("shrunk graph has no perfect matching".into()))?;
    let rec = extend(&graph, &h, &pm.edges, &path, |sub, p| {
        mwpm_rec(ctx, sub, w, p)?.ok_or_else(|| Error::Inconsistent("shrunk piece has no perfect matching".into()))
    })?;
    Ok(Some(Rec {
        edges: rec.edges,
        depth: pm.depth.max(rec.depth),
        rounds: 1 + red.rounds + pm.rounds + 1 + rec.rounds,
    }))
}

fn finish(ctx: &Context, start: crate::oracle::OracleCounters, rec: Option<Rec>, w: &WeightVector) -> Outcome {
    let end = ctx.session.counters();
    let mut stats = Stats {
        oracle_calls: end.oracle_calls - start.oracle_calls,
        cache_hits: end.cache_hits - start.cache_hits,
        iterations: ctx.iterations(),
        depth: 0,
        rounds: 0,
    };
    let trace = ctx.take_trace();
    match rec {
        Some(r) => {
            stats.depth = r.depth;
            stats.rounds = r.rounds;
            Outcome::Matched(MatchingResult {
                weight: w.total(&r.edges),
                edges: r.edges,
                stats,
                trace,
            })
        }
        None => Outcome::NoPerfectMatching { stats, trace },
    }
}

/// Any perfect matching of `graph`, found by recursive shrinking.
pub fn perfect_matching(graph: &Graph, session: &OracleSession, config: &Config) -> Result<Outcome> {
    let ctx = Context::new(session, config);
    let start = session.counters();
    let rec = pm_rec(&ctx, Arc::new(graph.clone()), "pm".into())?;
    Ok(finish(&ctx, start, rec, &WeightVector::default()))
}

/// A minimum-weight perfect matching of `graph` under `w`.
pub fn min_weight_perfect_matching(
    graph: &Graph,
    w: &WeightVector,
    session: &OracleSession,
    config: &Config,
) -> Result<Outcome> {
    let mut used = WeightVector::default();
    for e in graph.edges() {
        used.set(e.id, w.get(e.id));
    }
    used.check_cap(config.cap_for(graph.edge_count()))?;
    let ctx = Context::new(session, config);
    let start = session.counters();
    let rec = mwpm_rec(&ctx, Arc::new(graph.clone()), w, "mwpm".into())?;
    Ok(finish(&ctx, start, rec, w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximumMatching {
    pub edges: Vec<EdgeId>,
    /// Minimum perfect-matching weight of the doubled graph, `n - 2·|matching|`.
    pub doubled_weight: i64,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
}

/// Two copies of `graph` with free edges plus a unit-cost edge between the
/// copies of each vertex. Copy-one edge `i` has id `i`; returns the ids of
/// `graph` in copy-one order.
pub fn doubled_graph(graph: &Graph) -> (Graph, WeightVector, Vec<EdgeId>) {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let mut pairs = Vec::with_capacity(2 * m + n);
    for e in graph.edges() {
        pairs.push((e.u, e.v));
    }
    for e in graph.edges() {
        pairs.push((e.u + n, e.v + n));
    }
    for v in 0..n {
        pairs.push((v, v + n));
    }
    let mut w = WeightVector::zeros(2 * m + n);
    for v in 0..n {
        w.set(2 * m + v, 1);
    }
    let doubled = Graph::new(2 * n, &pairs).expect("doubled graph is loop-free");
    (doubled, w, graph.edges().iter().map(|e| e.id).collect())
}

pub fn maximum_matching(graph: &Graph, session: &OracleSession, config: &Config) -> Result<MaximumMatching> {
    let (doubled, w, ids) = doubled_graph(graph);
    match min_weight_perfect_matching(&doubled, &w, session, config)? {
        Outcome::Matched(r) => {
            let mut edges: Vec<EdgeId> = r.edges.iter().filter(|&&e| e < ids.len()).map(|&e| ids[e]).collect();
            edges.sort_unstable();
            Ok(MaximumMatching {
                edges,
                doubled_weight: r.weight,
                stats: r.stats,
                trace: r.trace,
            })
        }
        Outcome::NoPerfectMatching { .. } => Err(Error::Inconsistent("doubled graph always has a perfect matching".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub problems: Vec<String>,
}

fn check_edges(graph: &Graph, edges: &[EdgeId], perfect: bool) -> VerifyReport {
    let mut problems = Vec::new();
    let mut cover = vec![0usize; graph.vertex_count()];
    let mut seen = BTreeSet::new();
    for &id in edges {
        if !seen.insert(id) {
            problems.push(format!("edge {id} listed twice"));
            continue;
        }
        match graph.edge_by_id(id) {
            Some(e) => {
                cover[e.u] += 1;
                cover[e.v] += 1;
            }
            None => problems.push(format!("edge {id} is not in the graph")),
        }
    }
    for (v, &c) in cover.iter().enumerate() {
        if c > 1 || (perfect && c == 0) {
            problems.push(format!("vertex {v} covered {c} times"));
        }
    }
    VerifyReport {
        valid: problems.is_empty(),
        problems,
    }
}

/// Independent check that `edges` cover every vertex exactly once.
pub fn verify_perfect_matching(graph: &Graph, edges: &[EdgeId]) -> VerifyReport {
    check_edges(graph, edges, true)
}

/// Independent check that `edges` cover every vertex at most once.
pub fn verify_matching(graph: &Graph, edges: &[EdgeId]) -> VerifyReport {
    check_edges(graph, edges, false)
}
