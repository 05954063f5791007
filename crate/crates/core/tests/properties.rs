mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use ncmatch::duals::balanced_critical_dual;
use ncmatch::lab::{self, gen};
use ncmatch::minor::flip_heavy_sets;
use ncmatch::oracle::{allowed_edges, mu, BruteForceOracle, ExactOracle, MwpmOracle, ReplayOracle, Transcript, TutteOracle};
use ncmatch::partial::{find_triads, maximal_disjoint_triads, partial_matching};
use ncmatch::reduce::reduce;
use ncmatch::stats::Context;
use ncmatch::walks::EvenWalk;
use ncmatch::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_session() -> OracleSession {
    OracleSession::new(Arc::new(BruteForceOracle::default()))
}

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    gen::gnp(n, p, seed)
}

fn random_weights(g: &Graph, lo: i64, hi: i64, seed: u64) -> WeightVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightVector::new((0..g.edge_count()).map(|_| rng.gen_range(lo..=hi)).collect())
}

fn planted_instance(half: usize, extra: usize, max_w: i64, seed: u64) -> (Graph, WeightVector) {
    let g = gen::planted(2 * half, extra, seed);
    let w = random_weights(&g, 0, max_w, seed ^ 0xABCD);
    (g, w)
}

/// Nested and disjoint subsets of `0..k`, built by splitting a shuffled
/// order into random intervals recursively.
fn random_laminar(k: usize, seed: u64) -> LaminarFamily {
    fn split(order: &[usize], rng: &mut ChaCha8Rng, family: &mut LaminarFamily) {
        if order.len() <= 1 {
            return;
        }
        let mut start = 0;
        while start < order.len() {
            let end = rng.gen_range(start + 1..=order.len());
            let piece = &order[start..end];
            if piece.len() > 1 && rng.gen_bool(0.7) {
                family.insert(piece.to_vec());
            }
            if piece.len() < order.len() {
                split(piece, rng, family);
            }
            start = end;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(&mut rng);
    let mut family = LaminarFamily::singletons(0..k);
    split(&order, &mut rng, &mut family);
    family
}

fn brute_maximum_matching(g: &Graph) -> usize {
    fn go(g: &Graph, v: usize, used: &mut Vec<bool>) -> usize {
        if v == g.vertex_count() {
            return 0;
        }
        if used[v] {
            return go(g, v + 1, used);
        }
        let mut best = go(g, v + 1, used);
        used[v] = true;
        for e in g.edges().iter().filter(|e| e.touches(v)) {
            let u = e.other(v);
            if !used[u] {
                used[u] = true;
                best = best.max(1 + go(g, v + 1, used));
                used[u] = false;
            }
        }
        used[v] = false;
        best
    }
    go(g, 0, &mut vec![false; g.vertex_count()])
}

fn check_weights(minor: &Minor, n: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(minor.total_weight(), n);
    for x in minor.nodes() {
        let wx = minor.node_weight(x);
        prop_assert!(wx == 1 || wx % 2 == 1, "node {} has even weight {}", x, wx);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn flipped_families_stay_laminar(k in 1usize..16, seed in any::<u64>()) {
        let family = random_laminar(k, seed);
        prop_assert!(family.is_laminar());
        let minor = identity(&Graph::empty(k));
        let comp: Vec<usize> = (0..k).collect();
        let out = flip_heavy_sets(&minor, &family, &comp);
        prop_assert!(out.family.is_laminar());
        for s in out.family.sets() {
            prop_assert!(s.len() == 1 || 2 * s.len() <= k, "set {:?} is heavy", s);
        }
        for v in 0..k {
            prop_assert!(out.family.contains(&[v]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn oracles_agree(n in 0usize..=12, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let w = random_weights(&g, 0, 50, seed);
        let q = identity(&g).full_query(&w);
        let want = BruteForceOracle::default().mwpm_weight(&q).unwrap();
        prop_assert_eq!(ExactOracle.mwpm_weight(&q).unwrap(), want);
        prop_assert_eq!(TutteOracle::with_seed(seed).mwpm_weight(&q).unwrap(), want);
    }

    #[test]
    fn allowed_edges_are_the_union_of_optimal_matchings(n in 2usize..=10, p in 0.3f64..0.9, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let w = random_weights(&g, 0, 6, seed);
        let got = allowed_edges(&brute_session(), &identity(&g), &w);
        if perfect_matchings(&g, 1).is_empty() {
            prop_assert_eq!(got, Err(Error::NoPerfectMatchingInput));
            return Ok(());
        }
        let got = got.unwrap();
        let want: BTreeSet<EdgeId> = min_weight_matchings(&g, &w, usize::MAX).into_iter().flatten().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn restricted_mu_never_undercuts_the_unrestricted_one(half in 2usize..=5, extra in 0usize..12, seed in any::<u64>()) {
        // the two forms differ on roughly 40% of planted instances; only the
        // inequality holds in general
        let (g, w) = planted_instance(half, extra, 5, seed);
        let n = g.vertex_count();
        let minor = identity(&g);
        let session = brute_session();
        for v in 0..n {
            let restricted = mu(&session, &minor, &w, v).unwrap();
            let full = (0..n)
                .filter(|&u| u != v)
                .filter_map(|u| {
                    let keep: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
                    BruteForceOracle::default().mwpm_weight(&minor.query(&keep, &w)).unwrap()
                })
                .min()
                .unwrap();
            prop_assert!(restricted >= full);
        }
    }

    #[test]
    fn replay_reproduces_the_output(half in 1usize..=6, extra in 0usize..12, seed in any::<u64>()) {
        let (g, w) = planted_instance(half, extra, 9, seed);
        let session = brute_session();
        let first = min_weight_perfect_matching(&g, &w, &session, &Config::default()).unwrap();
        let transcript = Transcript::from_json(&session.transcript().to_json()).unwrap();
        let replay = OracleSession::new(Arc::new(ReplayOracle::new(&transcript).unwrap()));
        let second = min_weight_perfect_matching(&g, &w, &replay, &Config::default()).unwrap();
        prop_assert_eq!(first.matching().map(|m| m.edges.clone()), second.matching().map(|m| m.edges.clone()));
    }

    #[test]
    fn optimal_on_small_graphs_with_signed_weights(n in 0usize..=12, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let w = random_weights(&g, -20, 20, seed);
        let want = BruteForceOracle::default().mwpm_weight(&identity(&g).full_query(&w)).unwrap();
        let got = min_weight_perfect_matching(&g, &w, &brute_session(), &Config::default()).unwrap();
        match got.matching() {
            Some(m) => {
                prop_assert!(verify_perfect_matching(&g, &m.edges).valid);
                prop_assert_eq!(Some(m.weight), want);
            }
            None => prop_assert_eq!(want, None),
        }
    }

    #[test]
    fn maximum_matching_size(n in 0usize..=9, p in 0.1f64..0.7, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let out = maximum_matching(&g, &brute_session(), &Config::default()).unwrap();
        prop_assert!(verify_matching(&g, &out.edges).valid);
        let nu = brute_maximum_matching(&g);
        prop_assert_eq!(out.edges.len(), nu);
        prop_assert_eq!(out.doubled_weight, (n - 2 * nu) as i64);
    }

    #[test]
    fn dual_sets_are_tight(half in 1usize..=5, extra in 0usize..14, seed in any::<u64>()) {
        let (g, w) = planted_instance(half, extra, 4, seed);
        let minor = identity(&g);
        let family = balanced_critical_dual(&brute_session(), &minor, &w).unwrap();
        prop_assert!(family.is_laminar());
        for v in 0..g.vertex_count() {
            prop_assert!(family.contains(&[v]));
        }
        let optimal = min_weight_matchings(&g, &w, usize::MAX);
        for s in family.non_singletons() {
            prop_assert!(s.len() % 2 == 1);
            for m in &optimal {
                let crossing = m
                    .iter()
                    .filter(|&&e| {
                        let e = g.edge_by_id(e).unwrap();
                        s.contains(&e.u) != s.contains(&e.v)
                    })
                    .count();
                prop_assert_eq!(crossing, 1, "set {:?} crossed {} times", s, crossing);
            }
        }
        // the same family from another correct oracle and another schedule
        let exact = balanced_critical_dual(&OracleSession::new(Arc::new(ExactOracle)), &minor, &w).unwrap();
        let threaded = ncmatch::par::with_threads(4, || balanced_critical_dual(&brute_session(), &minor, &w).unwrap());
        let sets = |f: &LaminarFamily| f.sets().cloned().collect::<Vec<_>>();
        prop_assert_eq!(sets(&family), sets(&exact));
        prop_assert_eq!(sets(&family), sets(&threaded));
    }

    #[test]
    fn optimal_matchings_differ_by_balanced_cycles(half in 2usize..=5, extra in 2usize..14, seed in any::<u64>()) {
        let (g, w) = planted_instance(half, extra, 2, seed);
        let minor = identity(&g);
        let family = balanced_critical_dual(&brute_session(), &minor, &w).unwrap();
        let optimal = min_weight_matchings(&g, &w, 64);
        for (i, a) in optimal.iter().enumerate() {
            for b in &optimal[i + 1..] {
                for (nodes, edges) in symmetric_difference_cycles(&g, a, b) {
                    let walk = EvenWalk::new(&minor, nodes, edges).unwrap();
                    prop_assert_eq!(walk.circulation(&w), 0);
                    for s in family.non_singletons() {
                        prop_assert_eq!(walk.mismatch(&minor, s), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn mismatch_needs_an_internal_edge(n in 4usize..=14, p in 0.2f64..0.7, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let minor = identity(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for walk in lab::even_walk_pipeline(&minor).unwrap() {
            let mut set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if set.len().is_multiple_of(2) {
                set.pop();
            }
            if walk.mismatch(&minor, &set) > 0 {
                let inside = walk.edges().iter().any(|&e| {
                    let e = g.edge_by_id(e).unwrap();
                    set.contains(&e.u) && set.contains(&e.v)
                });
                prop_assert!(inside);
                prop_assert!(lab::internal_edge(&minor, &walk, &set).is_some());
            }
        }
    }

    #[test]
    fn reduce_is_sound(half in 1usize..=5, extra in 0usize..14, seed in any::<u64>()) {
        let (g, w) = planted_instance(half, extra, 4, seed);
        let n = g.vertex_count();
        let session = brute_session();
        let red = reduce(&session, &identity(&g), &w).unwrap();
        let h = red.minor;
        check_weights(&h, n)?;
        for comp in h.components() {
            let total = h.set_weight(&comp);
            for &x in &comp {
                let wx = h.node_weight(x);
                prop_assert!(wx == 1 || 2 * wx <= total);
            }
        }
        let opt = BruteForceOracle::default().mwpm_weight(&identity(&g).full_query(&w)).unwrap().unwrap();
        let shrunk = h.to_graph();
        let lifts = perfect_matchings(&shrunk, 256);
        prop_assert!(!lifts.is_empty());
        for m in lifts {
            let mut total = weight_of(&w, &m);
            for x in h.nodes() {
                let e = h.edges().iter().find(|e| m.contains(&e.id) && (e.a == x || e.b == x)).unwrap();
                let v = e.base_in(x);
                let rest: Vec<usize> = h.members(x).iter().copied().filter(|&u| u != v).collect();
                if rest.is_empty() {
                    continue;
                }
                // induced subgraphs keep edge ids, so `w` still applies
                let best = min_weight_matchings(&g.induced(&rest), &w, usize::MAX);
                prop_assert!(!best.is_empty(), "piece {:?} has no perfect matching", rest);
                total += weight_of(&w, &best[0]);
            }
            prop_assert_eq!(total, opt);
        }
    }

    #[test]
    fn partial_matching_invariants(half in 2usize..=10, k in 2usize..4, seed in any::<u64>()) {
        let g = gen::union_of_matchings(2 * half, k, seed);
        let n = g.vertex_count();
        let session = brute_session();
        let config = Config { trace: true, ..Config::default() };
        let ctx = Context::new(&session, &config);
        let part = partial_matching(&ctx, Arc::new(g), "").unwrap();
        check_weights(&part.minor, n)?;
        prop_assert!(part.minor.is_perfect_matching_graph());
        for t in ctx.take_trace() {
            prop_assert!(t.non_isolated_after < t.non_isolated_before);
            if let Some((wv, total)) = t.heavy {
                prop_assert!(6 * wv >= total && 2 * wv <= total);
                prop_assert_eq!(part.minor.node_count(), 2);
                for x in part.minor.nodes() {
                    prop_assert!(6 * part.minor.node_weight(x) <= 5 * total);
                }
            }
        }
    }

    #[test]
    fn triad_counts(n in 3usize..=60, d in 1.5f64..4.0, seed in any::<u64>()) {
        let g = two_core(&gen::gnp(n, (d / n as f64).min(1.0), seed));
        let minor = identity(&g);
        let triads = find_triads(&minor);
        let (nv, ne) = (g.vertex_count() as i64, g.edge_count() as i64);
        prop_assert!(triads.len() as i64 >= 9 * nv - 8 * ne);
        let chosen = maximal_disjoint_triads(&triads, seed);
        prop_assert!(5 * chosen.len() >= triads.len());
        let mut seen = BTreeSet::new();
        for t in &chosen {
            for x in t.nodes() {
                prop_assert!(seen.insert(x));
            }
        }
    }
}
