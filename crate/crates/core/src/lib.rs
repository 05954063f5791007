//! Perfect and minimum-weight perfect matching by repeated queries to an
//! oracle that only reports the minimum perfect-matching weight.

pub mod config;
pub mod dimacs;
pub mod duals;
pub mod error;
pub mod graph;
pub mod lab;
pub mod matcher;
pub mod minor;
pub mod mis;
pub mod oracle;
pub mod par;
pub mod partial;
pub mod reduce;
pub mod stats;
pub mod walks;

pub use config::Config;
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, VertexId, WeightVector};
pub use matcher::{
    maximum_matching, min_weight_perfect_matching, perfect_matching, verify_matching, verify_perfect_matching,
    MatchingResult, MaximumMatching, Outcome,
};
pub use minor::{LaminarFamily, Minor, NodeId};
pub use oracle::{MwpmOracle, OracleSession, Query};
pub use stats::{Stats, TraceEntry};
