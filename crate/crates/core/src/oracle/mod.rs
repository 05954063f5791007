//! The MWPM weight oracle and the primitives built on it.
//!
//! Every query goes through an [`OracleSession`], which canonicalizes it,
//! memoizes the answer under a SHA-256 key and keeps the counters reported in
//! run statistics. The first answer recorded for a key is the answer for the
//! rest of the run.

mod brute;
mod exact;
pub mod field;
mod tutte;

pub use brute::BruteForceOracle;
pub use exact::ExactOracle;
pub use tutte::TutteOracle;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightVector};
use crate::minor::{Minor, NodeId};

pub type QueryKey = [u8; 32];

/// Canonical weighted multigraph: vertices `0..n`, edges `(u, v, w)` with
/// `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl Query {
    pub fn new(n: usize, mut edges: Vec<(usize, usize, i64)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_unstable();
        Query { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn key(&self) -> QueryKey {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        h.update((self.edges.len() as u64).to_le_bytes());
        for &(u, v, w) in &self.edges {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
            h.update(w.to_le_bytes());
        }
        let mut key = [0u8; 32];
        key.copy_from_slice(&h.finalize());
        key
    }

    /// The query with vertices `u` and `v` deleted and the rest relabelled.
    pub fn without(&self, u: usize, v: usize) -> Query {
        let shift = |x: usize| x - usize::from(x > u) - usize::from(x > v);
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b, _)| a != u && a != v && b != u && b != v)
            .map(|&(a, b, w)| (shift(a), shift(b), w))
            .collect();
        // relabelling is monotone, so the order survives
        Query { n: self.n - 2, edges }
    }
}

pub fn key_hex(key: &QueryKey) -> String {
    let mut s = String::with_capacity(64);
    for b in key {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn parse_hex(s: &str) -> Option<QueryKey> {
    if s.len() != 64 {
        return None;
    }
    let mut key = [0u8; 32];
    for (i, byte) in key.iter_mut().enumerate() {
        *byte = u8::from_str_radix(s.get(2 * i..2 * i + 2)?, 16).ok()?;
    }
    Some(key)
}

/// Minimum perfect-matching weight, `None` when no perfect matching exists.
pub trait MwpmOracle: Send + Sync {
    fn name(&self) -> &'static str;

    fn mwpm_weight(&self, query: &Query) -> Result<Option<i64>>;

    /// Answers for `query` with each listed vertex pair deleted.
    fn pair_deletions(&self, query: &Query, pairs: &[(usize, usize)]) -> Result<Vec<Option<i64>>> {
        pairs
            .iter()
            .map(|&(u, v)| self.mwpm_weight(&query.without(u, v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub key: String,
    pub answer: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<Query>,
}

/// Recorded oracle answers, sorted by key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub oracle: String,
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Oracle(format!("bad transcript: {e}")))
    }
}

/// Answers only queries present in a transcript.
pub struct ReplayOracle {
    answers: HashMap<QueryKey, Option<i64>>,
}

impl ReplayOracle {
    pub fn new(transcript: &Transcript) -> Result<Self> {
        let mut answers = HashMap::new();
        for e in &transcript.entries {
            let key = parse_hex(&e.key).ok_or_else(|| Error::Oracle(format!("bad key {}", e.key)))?;
            answers.insert(key, e.answer);
        }
        Ok(ReplayOracle { answers })
    }
}

impl MwpmOracle for ReplayOracle {
    fn name(&self) -> &'static str {
        "replay"
    }

    fn mwpm_weight(&self, query: &Query) -> Result<Option<i64>> {
        let key = query.key();
        self.answers
            .get(&key)
            .copied()
            .ok_or_else(|| Error::Oracle(format!("query {} missing from transcript", key_hex(&key))))
    }
}

struct Memo {
    answer: Option<i64>,
    query: Option<Query>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OracleCounters {
    pub queries: usize,
    pub cache_hits: usize,
    pub oracle_calls: usize,
    pub conflicts: usize,
}

/// Memoizing front end shared by all workers of a run.
pub struct OracleSession {
    oracle: Arc<dyn MwpmOracle>,
    memo: Mutex<HashMap<QueryKey, Memo>>,
    record_queries: bool,
    queries: AtomicUsize,
    cache_hits: AtomicUsize,
    oracle_calls: AtomicUsize,
    conflicts: AtomicUsize,
}

impl OracleSession {
    pub fn new(oracle: Arc<dyn MwpmOracle>) -> Self {
        OracleSession {
            oracle,
            memo: Mutex::new(HashMap::new()),
            record_queries: false,
            queries: AtomicUsize::new(0),
            cache_hits: AtomicUsize::new(0),
            oracle_calls: AtomicUsize::new(0),
            conflicts: AtomicUsize::new(0),
        }
    }

    /// Keep the full query next to each answer so a transcript can be audited.
    pub fn recording_queries(mut self) -> Self {
        self.record_queries = true;
        self
    }

    pub fn oracle_name(&self) -> &'static str {
        self.oracle.name()
    }

    pub fn counters(&self) -> OracleCounters {
        OracleCounters {
            queries: self.queries.load(Ordering::Relaxed),
            cache_hits: self.cache_hits.load(Ordering::Relaxed),
            oracle_calls: self.oracle_calls.load(Ordering::Relaxed),
            conflicts: self.conflicts.load(Ordering::Relaxed),
        }
    }

    fn lookup(&self, key: &QueryKey) -> Option<Option<i64>> {
        self.memo.lock().unwrap().get(key).map(|m| m.answer)
    }

    fn commit(&self, key: QueryKey, answer: Option<i64>, query: impl FnOnce() -> Query) -> Option<i64> {
        let mut memo = self.memo.lock().unwrap();
        match memo.get(&key) {
            Some(first) => {
                if first.answer != answer {
                    self.conflicts.fetch_add(1, Ordering::Relaxed);
                }
                first.answer
            }
            None => {
                let query = self.record_queries.then(query);
                memo.insert(key, Memo { answer, query });
                answer
            }
        }
    }

    pub fn weight(&self, query: &Query) -> Result<Option<i64>> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let key = query.key();
        if let Some(answer) = self.lookup(&key) {
            self.cache_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(answer);
        }
        self.oracle_calls.fetch_add(1, Ordering::Relaxed);
        let answer = self.oracle.mwpm_weight(query)?;
        Ok(self.commit(key, answer, || query.clone()))
    }

    /// One batch of pair-deleted subqueries of `query`.
    pub fn pair_deletions(&self, query: &Query, pairs: &[(usize, usize)]) -> Result<Vec<Option<i64>>> {
        self.queries.fetch_add(pairs.len(), Ordering::Relaxed);
        let children: Vec<Query> = pairs.iter().map(|&(u, v)| query.without(u, v)).collect();
        let keys: Vec<QueryKey> = children.iter().map(Query::key).collect();
        let mut out: Vec<Option<Option<i64>>> = keys.iter().map(|k| self.lookup(k)).collect();
        let missing: Vec<usize> = (0..pairs.len()).filter(|&i| out[i].is_none()).collect();
        self.cache_hits
            .fetch_add(pairs.len() - missing.len(), Ordering::Relaxed);
        if !missing.is_empty() {
            // a pair can repeat (parallel edges); ask the oracle once per key
            let mut first_of: HashMap<QueryKey, usize> = HashMap::new();
            let mut ask = Vec::new();
            for &i in &missing {
                if let std::collections::hash_map::Entry::Vacant(e) = first_of.entry(keys[i]) {
                    e.insert(ask.len());
                    ask.push(i);
                }
            }
            self.oracle_calls.fetch_add(ask.len(), Ordering::Relaxed);
            let asked: Vec<(usize, usize)> = ask.iter().map(|&i| pairs[i]).collect();
            let answers = self.oracle.pair_deletions(query, &asked)?;
            if answers.len() != ask.len() {
                return Err(Error::Oracle("batch answer has wrong length".into()));
            }
            let mut committed = vec![None; ask.len()];
            for (slot, &i) in ask.iter().enumerate() {
                committed[slot] = self.commit(keys[i], answers[slot], || children[i].clone());
            }
            for &i in &missing {
                out[i] = Some(committed[first_of[&keys[i]]]);
            }
        }
        Ok(out.into_iter().map(|a| a.unwrap()).collect())
    }

    pub fn transcript(&self) -> Transcript {
        let memo = self.memo.lock().unwrap();
        let mut entries: Vec<TranscriptEntry> = memo
            .iter()
            .map(|(k, m)| TranscriptEntry {
                key: key_hex(k),
                answer: m.answer,
                query: m.query.clone(),
            })
            .collect();
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        Transcript {
            oracle: self.oracle.name().to_string(),
            entries,
        }
    }
}

/// Threshold form of the oracle: is there a perfect matching of weight at most `bound`?
pub fn at_most(session: &OracleSession, query: &Query, bound: i64) -> Result<bool> {
    Ok(matches!(session.weight(query)?, Some(w) if w <= bound))
}

pub fn mwpm_weight(session: &OracleSession, minor: &Minor, w: &WeightVector) -> Result<Option<i64>> {
    session.weight(&minor.full_query(w))
}

/// Edges of `minor` lying in some minimum-weight perfect matching.
pub fn allowed_edges(session: &OracleSession, minor: &Minor, w: &WeightVector) -> Result<BTreeSet<EdgeId>> {
    let query = minor.full_query(w);
    let total = session.weight(&query)?.ok_or(Error::NoPerfectMatchingInput)?;
    let mut pairs: Vec<(usize, usize)> = minor.edges().iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let answers = session.pair_deletions(&query, &pairs)?;
    let rest: HashMap<(usize, usize), Option<i64>> = pairs.into_iter().zip(answers).collect();
    Ok(minor
        .edges()
        .iter()
        .filter(|e| rest[&(e.a.min(e.b), e.a.max(e.b))].is_some_and(|r| r + w.get(e.id) == total))
        .map(|e| e.id)
        .collect())
}

/// μ for every node of `component` in a minor already restricted to allowed
/// edges: the cheapest perfect matching of the component after deleting the
/// node and some partner.
pub fn mu_component(session: &OracleSession, minor: &Minor, component: &[NodeId], w: &WeightVector) -> Result<Vec<i64>> {
    let k = component.len();
    let query = minor.query(component, w);
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let answers = session.pair_deletions(&query, &pairs)?;
    let mut best: Vec<Option<i64>> = vec![None; k];
    for (&(i, j), a) in pairs.iter().zip(answers) {
        if let Some(a) = a {
            for x in [i, j] {
                best[x] = Some(best[x].map_or(a, |b| b.min(a)));
            }
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(Error::NoWitness(component[i])))
        .collect()
}

/// μ(v) over the whole allowed subgraph of `minor`.
pub fn mu(session: &OracleSession, minor: &Minor, w: &WeightVector, v: NodeId) -> Result<i64> {
    if v >= minor.node_count() {
        return Err(Error::UnknownNode(v));
    }
    let allowed = allowed_edges(session, minor, w)?;
    let restricted = minor.restrict_to(&allowed);
    let query = restricted.full_query(w);
    let pairs: Vec<(usize, usize)> = minor.nodes().filter(|&u| u != v).map(|u| (u.min(v), u.max(v))).collect();
    let answers = session.pair_deletions(&query, &pairs)?;
    answers.into_iter().flatten().min().ok_or(Error::NoWitness(v))
}
