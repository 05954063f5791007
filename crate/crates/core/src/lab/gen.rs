//! Seeded random graph families.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

fn build(n: usize, set: BTreeSet<(VertexId, VertexId)>) -> Graph {
    let pairs: Vec<(VertexId, VertexId)> = set.into_iter().collect();
    Graph::new(n, &pairs).expect("generated pairs are valid")
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

/// Union of `k` uniformly random perfect matchings on `n` (even) vertices.
/// Every edge lies in a perfect matching.
pub fn union_of_matchings(n: usize, k: usize, seed: u64) -> Graph {
    assert!(n.is_multiple_of(2), "need an even vertex count");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    let mut perm: Vec<VertexId> = (0..n).collect();
    for _ in 0..k {
        perm.shuffle(&mut rng);
        for p in perm.chunks(2) {
            set.insert(key(p[0], p[1]));
        }
    }
    build(n, set)
}

/// Random Hamiltonian cycle on `n` (even) vertices plus `chords` chords
/// joining vertices an odd distance apart along it. Each chord lies in a
/// perfect matching, so the graph is matching-covered.
pub fn cycle_with_chords(n: usize, chords: usize, seed: u64) -> Graph {
    assert!(n.is_multiple_of(2) && n >= 4, "need an even vertex count of at least 4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut set: BTreeSet<(VertexId, VertexId)> = (0..n).map(|i| key(order[i], order[(i + 1) % n])).collect();
    let target = (set.len() + chords).min(n * n / 4);
    let mut tries = 0;
    while set.len() < target && tries < 100 * (chords + 1) {
        tries += 1;
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if (i + n - j) % 2 == 1 {
            set.insert(key(order[i], order[j]));
        }
    }
    build(n, set)
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                set.insert((u, v));
            }
        }
    }
    build(n, set)
}

/// A random perfect matching plus `extra` random edges, so a perfect
/// matching always exists.
pub fn planted(n: usize, extra: usize, seed: u64) -> Graph {
    assert!(n.is_multiple_of(2), "need an even vertex count");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut set: BTreeSet<(VertexId, VertexId)> = perm.chunks(2).map(|p| key(p[0], p[1])).collect();
    let target = (set.len() + extra).min(n * (n - 1) / 2);
    while set.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            set.insert(key(u, v));
        }
    }
    build(n, set)
}

/// Random multigraph edge list (no loops) for the cycle extraction tests.
pub fn multigraph(n: usize, m: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                break (u, v);
            }
        })
        .collect()
}

/// Uniform random integer weights in `0..=max` for `m` edges.
pub fn weights(m: usize, max: i64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| rng.gen_range(0..=max)).collect()
}
