//! Constructive versions of the structural facts behind the shrinking step.
//! None of this is used by the matchers; it backs property tests and the
//! `lab` measurements.

pub mod cycles;
pub mod destroy;
pub mod gen;
pub mod pairing;
pub mod tokens;

use std::sync::Arc;

use serde::Serialize;

pub use cycles::{cycle_bound, extract_edge_disjoint_cycles, Cycle};
pub use destroy::{internal_edge, verify_walk_destruction, Evidence};
pub use pairing::{build_even_walks, disjoint_short_walks, even_walk_pipeline};
pub use tokens::{pair_tokens_on_tree, TreePath};

use crate::error::Result;
use crate::graph::Graph;
use crate::minor::Minor;
use crate::partial::{find_triads, maximal_disjoint_triads};

/// Measured structure of one graph next to the guaranteed counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabRow {
    pub family: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub triads: usize,
    /// `9|V| - 8|E|`
    pub triad_bound: i64,
    pub disjoint_triads: usize,
    pub cycles: usize,
    pub cycle_bound: f64,
    pub odd_cycles: usize,
    pub even_walks: usize,
    /// `|E| / log₂²|V|`, the walk count up to the unknown constant.
    pub walk_scale: f64,
}

pub const CSV_HEADER: &str =
    "family,seed,n,m,triads,triad_bound,disjoint_triads,cycles,cycle_bound,odd_cycles,even_walks,walk_scale";

impl LabRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.4},{},{},{:.4}",
            self.family,
            self.seed,
            self.n,
            self.m,
            self.triads,
            self.triad_bound,
            self.disjoint_triads,
            self.cycles,
            self.cycle_bound,
            self.odd_cycles,
            self.even_walks,
            self.walk_scale
        )
    }
}

pub fn walk_scale(edges: usize, nodes: usize) -> f64 {
    let l = (nodes.max(2) as f64).log2();
    edges as f64 / (l * l)
}

pub fn measure(family: &str, seed: u64, graph: &Graph) -> Result<LabRow> {
    let minor = Minor::identity(Arc::new(graph.clone()));
    let (n, m) = (graph.vertex_count(), graph.edge_count());
    let triads = find_triads(&minor);
    let cycles = extract_edge_disjoint_cycles(&minor);
    let walks = even_walk_pipeline(&minor)?;
    Ok(LabRow {
        family: family.to_string(),
        seed,
        n,
        m,
        triads: triads.len(),
        triad_bound: 9 * n as i64 - 8 * m as i64,
        disjoint_triads: maximal_disjoint_triads(&triads, seed).len(),
        cycles: cycles.len(),
        cycle_bound: cycle_bound(m, n),
        odd_cycles: cycles.iter().filter(|c| c.is_odd()).count(),
        even_walks: walks.len(),
        walk_scale: walk_scale(m, n),
    })
}
