use serde::Serialize;

use crate::walks::FamilySize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Constant in the walk budget `⌈c · m / log₂² n⌉`.
    pub walk_budget_scale: f64,
    pub family_size: FamilySize,
    pub mis_seed: u64,
    /// Largest allowed |weight|; `None` picks `max(10⁶, 4(m+1)²)`.
    pub weight_cap: Option<i64>,
    /// Candidates of one shrinking step are evaluated in index-ordered chunks
    /// of this size, stopping once some candidate leaves no non-isolated edge.
    pub candidate_chunk: usize,
    pub trace: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            walk_budget_scale: 1.0,
            family_size: FamilySize::Tight,
            mis_seed: 0,
            weight_cap: None,
            candidate_chunk: 8,
            trace: false,
        }
    }
}

impl Config {
    pub fn cap_for(&self, edges: usize) -> i64 {
        self.weight_cap.unwrap_or_else(|| {
            let m = edges as i64 + 1;
            (4 * m * m).max(1_000_000)
        })
    }
}
