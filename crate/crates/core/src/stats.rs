//! Run statistics and the shared per-run context.
//!
//! `rounds` is a simulated parallel depth: a batch of oracle queries costs one
//! round, a parallel loop costs one round plus the most expensive body, and
//! sequential steps add up.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::oracle::OracleSession;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub oracle_calls: usize,
    pub cache_hits: usize,
    pub iterations: usize,
    pub depth: usize,
    pub rounds: usize,
}

/// One pass of the shrinking loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// Position in the recursion, e.g. `pm/0/3` or `mwpm/2:pm`.
    pub path: String,
    pub iteration: usize,
    pub nodes: usize,
    pub non_isolated_before: usize,
    pub non_isolated_after: usize,
    /// Candidate index adopted, `None` when the heavy-node exit fired.
    pub chosen: Option<usize>,
    pub candidates: usize,
    pub evaluated: usize,
    /// Weight of the heavy node and the total, when that exit fired.
    pub heavy: Option<(usize, usize)>,
}

pub struct Context<'a> {
    pub session: &'a OracleSession,
    pub config: &'a Config,
    iterations: AtomicUsize,
    trace: Mutex<Vec<TraceEntry>>,
}

impl<'a> Context<'a> {
    pub fn new(session: &'a OracleSession, config: &'a Config) -> Self {
        Context {
            session,
            config,
            iterations: AtomicUsize::new(0),
            trace: Mutex::new(Vec::new()),
        }
    }

    pub fn count_iteration(&self) {
        self.iterations.fetch_add(1, Ordering::Relaxed);
    }

    pub fn iterations(&self) -> usize {
        self.iterations.load(Ordering::Relaxed)
    }

    pub fn record(&self, entry: TraceEntry) {
        if self.config.trace {
            self.trace.lock().unwrap().push(entry);
        }
    }

    /// Trace sorted by recursion path and iteration.
    pub fn take_trace(&self) -> Vec<TraceEntry> {
        let mut t = std::mem::take(&mut *self.trace.lock().unwrap());
        t.sort_by(|a, b| (&a.path, a.iteration).cmp(&(&b.path, b.iteration)));
        t
    }
}
