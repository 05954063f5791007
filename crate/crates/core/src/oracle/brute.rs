use super::{MwpmOracle, Query};
use crate::error::{Error, Result};

const NONE: i64 = i64::MAX;

/// Exhaustive subset dynamic program over vertex bitmasks.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    pub max_vertices: usize,
}

impl Default for BruteForceOracle {
    fn default() -> Self {
        BruteForceOracle { max_vertices: 24 }
    }
}

impl BruteForceOracle {
    /// `f[mask]` = cheapest perfect matching of the vertices in `mask`.
    fn table(&self, q: &Query) -> Result<Vec<i64>> {
        let n = q.vertex_count();
        if n > self.max_vertices {
            return Err(Error::Oracle(format!(
                "brute force limited to {} vertices, got {n}",
                self.max_vertices
            )));
        }
        let mut weight = vec![NONE; n * n];
        let mut nbrs = vec![0u32; n];
        for &(u, v, w) in q.edges() {
            let cell = &mut weight[u * n + v];
            *cell = (*cell).min(w);
            weight[v * n + u] = *cell;
            nbrs[u] |= 1 << v;
            nbrs[v] |= 1 << u;
        }
        let size = 1usize << n;
        let mut f = vec![NONE; size];
        f[0] = 0;
        for mask in 1..size {
            if (mask as u32).count_ones() % 2 == 1 {
                continue;
            }
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut cand = nbrs[i] & rest as u32;
            let mut best = NONE;
            while cand != 0 {
                let j = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let sub = f[rest & !(1 << j)];
                if sub != NONE {
                    best = best.min(sub + weight[i * n + j]);
                }
            }
            f[mask] = best;
        }
        Ok(f)
    }
}

fn answer(x: i64) -> Option<i64> {
    (x != NONE).then_some(x)
}

impl MwpmOracle for BruteForceOracle {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn mwpm_weight(&self, q: &Query) -> Result<Option<i64>> {
        if q.vertex_count() % 2 == 1 {
            return Ok(None);
        }
        let f = self.table(q)?;
        Ok(answer(f[f.len() - 1]))
    }

    fn pair_deletions(&self, q: &Query, pairs: &[(usize, usize)]) -> Result<Vec<Option<i64>>> {
        if q.vertex_count() % 2 == 1 {
            return Ok(vec![None; pairs.len()]);
        }
        let f = self.table(q)?;
        let full = f.len() - 1;
        Ok(pairs
            .iter()
            .map(|&(u, v)| answer(f[full & !(1 << u) & !(1 << v)]))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let o = BruteForceOracle::default();
        assert_eq!(o.mwpm_weight(&Query::new(0, vec![])).unwrap(), Some(0));
        assert_eq!(o.mwpm_weight(&Query::new(2, vec![])).unwrap(), None);
        let c4 = Query::new(4, vec![(0, 1, 1), (1, 2, 2), (2, 3, 3), (0, 3, 4)]);
        assert_eq!(o.mwpm_weight(&c4).unwrap(), Some(4));
        let parallel = Query::new(2, vec![(0, 1, 5), (0, 1, -2)]);
        assert_eq!(o.mwpm_weight(&parallel).unwrap(), Some(-2));
        assert_eq!(
            o.pair_deletions(&c4, &[(0, 1), (0, 2)]).unwrap(),
            vec![Some(3), None]
        );
    }

    #[test]
    fn size_limit() {
        let o = BruteForceOracle { max_vertices: 4 };
        assert!(o.mwpm_weight(&Query::new(6, vec![])).is_err());
    }
}
