use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use mwmatching::{Matching, SENTINEL};

use super::{MwpmOracle, Query};
use crate::error::{Error, Result};

/// Deterministic blossom solver, for instances beyond the brute-force range.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle;

impl MwpmOracle for ExactOracle {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn mwpm_weight(&self, q: &Query) -> Result<Option<i64>> {
        let n = q.vertex_count();
        if n == 0 {
            return Ok(Some(0));
        }
        if n % 2 == 1 || q.edges().is_empty() {
            return Ok(None);
        }
        let mut cheapest: HashMap<(usize, usize), i64> = HashMap::new();
        for &(u, v, w) in q.edges() {
            cheapest.entry((u, v)).and_modify(|c| *c = (*c).min(w)).or_insert(w);
        }
        let lo = *cheapest.values().min().unwrap();
        let hi = *cheapest.values().max().unwrap();
        // maximize sum of (big - w) over maximum-cardinality matchings
        let big = hi - lo + 1;
        if big.saturating_mul(n as i64) > (i32::MAX / 4) as i64 {
            return Err(Error::Oracle(format!("weight range {big} too large for the blossom solver")));
        }
        let mut edges: Vec<(usize, usize, i32)> = cheapest
            .iter()
            .map(|(&(u, v), &w)| (u, v, (big - (w - lo)) as i32))
            .collect();
        edges.sort_unstable();
        let mate = catch_unwind(AssertUnwindSafe(|| Matching::new(edges).max_cardinality().solve()))
            .map_err(|_| Error::Oracle("blossom solver panicked".into()))?;
        let mut total = 0;
        for v in 0..n {
            let m = mate.get(v).copied().unwrap_or(SENTINEL);
            if m == SENTINEL || m >= n {
                return Ok(None);
            }
            if v < m {
                total += cheapest[&(v, m)];
            }
        }
        Ok(Some(total))
    }
}
