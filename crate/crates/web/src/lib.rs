//! WebAssembly bindings behind `www/index.html`. Graphs cross the boundary as
//! the same text format the CLI reads, results as JSON strings.

use std::sync::Arc;

use ncmatch::duals::balanced_critical_dual;
use ncmatch::lab::gen;
use ncmatch::oracle::{allowed_edges, BruteForceOracle, ExactOracle, MwpmOracle, TutteOracle};
use ncmatch::{dimacs, Config, Graph, Minor, OracleSession, Outcome, WeightVector};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn session(oracle: &str, seed: u32) -> Result<OracleSession, String> {
    let o: Arc<dyn MwpmOracle> = match oracle {
        "brute" => Arc::new(BruteForceOracle::default()),
        "exact" => Arc::new(ExactOracle),
        "tutte" => Arc::new(TutteOracle::with_seed(seed.into())),
        other => return Err(format!("unknown oracle `{other}`")),
    };
    Ok(OracleSession::new(o))
}

fn parse(text: &str) -> Result<(Graph, WeightVector), String> {
    dimacs::parse(text).map_err(|e| e.to_string())
}

/// Random graph with a planted perfect matching half the time, weights in
/// `0..=max_weight`, as graph text.
pub fn random_graph_text(n: usize, p: f64, max_weight: i64, seed: u32) -> String {
    let seed = u64::from(seed);
    let g = if seed % 2 == 0 && n.is_multiple_of(2) {
        let extra = (p * (n * n.saturating_sub(1)) as f64 / 2.0) as usize;
        gen::planted(n, extra, seed)
    } else {
        gen::gnp(n, p.clamp(0.0, 1.0), seed)
    };
    let w = WeightVector::new(gen::weights(g.edge_count(), max_weight.max(0), seed ^ 0x5eed));
    dimacs::serialize(&g, &w)
}

/// `mode` is `pm`, `mwpm` or `max`. Vertices in the output are 0-based.
pub fn solve_json(text: &str, mode: &str, oracle: &str, seed: u32) -> Result<String, String> {
    let (g, w) = parse(text)?;
    let s = session(oracle, seed)?;
    let config = Config::default();
    let (edges, stats) = match mode {
        "pm" | "mwpm" => {
            let out = if mode == "pm" {
                ncmatch::perfect_matching(&g, &s, &config)
            } else {
                ncmatch::min_weight_perfect_matching(&g, &w, &s, &config)
            }
            .map_err(|e| e.to_string())?;
            match out {
                Outcome::Matched(m) => (Some(m.edges), m.stats),
                Outcome::NoPerfectMatching { stats, .. } => (None, stats),
            }
        }
        "max" => {
            let m = ncmatch::maximum_matching(&g, &s, &config).map_err(|e| e.to_string())?;
            (Some(m.edges), m.stats)
        }
        other => return Err(format!("unknown mode `{other}`")),
    };
    let pairs: Vec<[usize; 2]> = edges
        .iter()
        .flatten()
        .map(|&id| {
            let e = g.edge_by_id(id).expect("matched edge");
            [e.u, e.v]
        })
        .collect();
    Ok(json!({
        "mode": mode,
        "matching": pairs,
        "weight": edges.as_ref().map(|e| w.total(e)),
        "no_perfect_matching": edges.is_none(),
        "stats": stats,
    })
    .to_string())
}

/// Allowed edges (by position) and the non-singleton odd sets of the
/// laminar dual support.
pub fn laminar_family_json(text: &str, oracle: &str, seed: u32) -> Result<String, String> {
    let (g, w) = parse(text)?;
    let s = session(oracle, seed)?;
    let minor = Minor::identity(Arc::new(g.clone()));
    let allowed = allowed_edges(&s, &minor, &w).map_err(|e| e.to_string())?;
    let family = balanced_critical_dual(&s, &minor, &w).map_err(|e| e.to_string())?;
    let positions: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| allowed.contains(&e.id))
        .map(|(i, _)| i)
        .collect();
    let sets: Vec<&Vec<usize>> = family.non_singletons().collect();
    Ok(json!({ "allowed": positions, "sets": sets }).to_string())
}

#[wasm_bindgen]
pub fn random_graph(n: usize, p: f64, max_weight: i32, seed: u32) -> String {
    random_graph_text(n, p, max_weight.into(), seed)
}

#[wasm_bindgen]
pub fn solve(text: &str, mode: &str, oracle: &str, seed: u32) -> Result<String, JsError> {
    solve_json(text, mode, oracle, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn laminar_family(text: &str, oracle: &str, seed: u32) -> Result<String, JsError> {
    laminar_family_json(text, oracle, seed).map_err(|e| JsError::new(&e))
}
