//! Randomized maximal independent set in synchronous rounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ROUNDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisOutcome {
    /// Chosen vertices, sorted.
    pub set: Vec<usize>,
    pub rounds: usize,
}

/// Each round every live vertex draws a priority and joins when it beats all
/// live neighbours; winners and their neighbours then leave. Anything still
/// live after the round cap is finished greedily in index order.
pub fn maximal_independent_set(adj: &[Vec<usize>], seed: u64) -> MisOutcome {
    let n = adj.len();
    let mut live = vec![true; n];
    let mut chosen = vec![false; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds = 0;
    while rounds < MAX_ROUNDS && live.iter().any(|&l| l) {
        rounds += 1;
        let prio: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
        let beats = |v: usize, u: usize| (prio[v], v) < (prio[u], u);
        let winners: Vec<usize> = (0..n)
            .filter(|&v| live[v] && adj[v].iter().all(|&u| !live[u] || beats(v, u)))
            .collect();
        for &v in &winners {
            chosen[v] = true;
        }
        for &v in &winners {
            live[v] = false;
            for &u in &adj[v] {
                live[u] = false;
            }
        }
    }
    for v in 0..n {
        if live[v] && adj[v].iter().all(|&u| !chosen[u]) {
            chosen[v] = true;
        }
    }
    let set: Vec<usize> = (0..n).filter(|&v| chosen[v]).collect();
    debug_assert!(is_maximal_independent(adj, &set));
    MisOutcome { set, rounds }
}

pub fn is_maximal_independent(adj: &[Vec<usize>], set: &[usize]) -> bool {
    let mut inside = vec![false; adj.len()];
    for &v in set {
        inside[v] = true;
    }
    let independent = set.iter().all(|&v| adj[v].iter().all(|&u| u == v || !inside[u]));
    let maximal = (0..adj.len()).all(|v| inside[v] || adj[v].iter().any(|&u| inside[u]));
    independent && maximal
}
