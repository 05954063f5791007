//! Why a positive-circulation walk cannot survive: it uses a disallowed
//! edge, or it is mismatched with a set of the laminar family and therefore
//! has an edge inside that set.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightVector};
use crate::minor::{LaminarFamily, Minor, NodeId};
use crate::oracle::{allowed_edges, OracleSession};
use crate::walks::EvenWalk;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Evidence {
    DisallowedEdge(EdgeId),
    MismatchedSet {
        set: Vec<NodeId>,
        mismatch: i64,
        internal_edge: EdgeId,
    },
}

/// First walk edge with both ends in `set`, in walk order.
pub fn internal_edge(minor: &Minor, walk: &EvenWalk, set: &[NodeId]) -> Option<EdgeId> {
    let inside: BTreeSet<NodeId> = set.iter().copied().collect();
    walk.edges().iter().copied().find(|&id| {
        minor
            .edges()
            .iter()
            .find(|e| e.id == id)
            .is_some_and(|e| inside.contains(&e.a) && inside.contains(&e.b))
    })
}

/// Disallowed walk edges are reported first (smallest id). Otherwise the
/// first set of `family` with positive mismatch, which must contain a walk
/// edge. Anything else is a `LemmaViolation`.
pub fn verify_walk_destruction(
    session: &OracleSession,
    minor: &Minor,
    w: &WeightVector,
    walk: &EvenWalk,
    family: &LaminarFamily,
) -> Result<Evidence> {
    if walk.circulation(w) == 0 {
        return Err(Error::ZeroCirculation);
    }
    let allowed = allowed_edges(session, minor, w)?;
    if let Some(&e) = walk.distinct_edges().iter().find(|e| !allowed.contains(e)) {
        return Ok(Evidence::DisallowedEdge(e));
    }
    for set in family.sets() {
        let mismatch = walk.mismatch(minor, set);
        if mismatch > 0 {
            let internal = internal_edge(minor, walk, set).ok_or(Error::LemmaViolation)?;
            return Ok(Evidence::MismatchedSet {
                set: set.clone(),
                mismatch,
                internal_edge: internal,
            });
        }
    }
    Err(Error::LemmaViolation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle::BruteForceOracle;
    use std::sync::Arc;

    fn session() -> OracleSession {
        OracleSession::new(Arc::new(BruteForceOracle::default()))
    }

    /// Two triangles a,b,c and x,y,z with unit-weight rungs a-x, b-y, c-z.
    fn blocked() -> (Minor, WeightVector) {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap();
        (Minor::identity(Arc::new(g)), vec![0, 0, 0, 0, 0, 0, 1, 1, 1].into())
    }

    #[test]
    fn crossing_cycle_is_trapped_by_the_triangle() {
        let (m, w) = blocked();
        // a - b - y - x - a
        let walk = EvenWalk::new(&m, vec![0, 1, 4, 3], vec![0, 7, 3, 6]).unwrap();
        assert_eq!(walk.circulation(&w), 2);
        assert_eq!(walk.mismatch(&m, &[0, 1, 2]), 2);
        let mut family = LaminarFamily::singletons(0..6);
        family.insert(vec![0, 1, 2]);
        let ev = verify_walk_destruction(&session(), &m, &w, &walk, &family).unwrap();
        assert_eq!(
            ev,
            Evidence::MismatchedSet {
                set: vec![0, 1, 2],
                mismatch: 2,
                internal_edge: 0
            }
        );
    }

    #[test]
    fn bipartite_cycle_loses_an_edge() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = Minor::identity(Arc::new(g));
        let w: WeightVector = vec![1, 2, 1, 2].into();
        let walk = EvenWalk::new(&m, vec![0, 1, 2, 3], vec![0, 1, 2, 3]).unwrap();
        let ev = verify_walk_destruction(&session(), &m, &w, &walk, &LaminarFamily::singletons(0..4)).unwrap();
        assert_eq!(ev, Evidence::DisallowedEdge(1));
    }

    #[test]
    fn zero_circulation_is_rejected() {
        let (m, _) = blocked();
        let walk = EvenWalk::new(&m, vec![0, 1, 4, 3], vec![0, 7, 3, 6]).unwrap();
        let family = LaminarFamily::singletons(0..6);
        assert_eq!(
            verify_walk_destruction(&session(), &m, &WeightVector::zeros(9), &walk, &family),
            Err(Error::ZeroCirculation)
        );
    }

    #[test]
    fn missing_tight_set_is_a_violation() {
        let (m, w) = blocked();
        let walk = EvenWalk::new(&m, vec![0, 1, 4, 3], vec![0, 7, 3, 6]).unwrap();
        let family = LaminarFamily::singletons(0..6);
        assert_eq!(
            verify_walk_destruction(&session(), &m, &w, &walk, &family),
            Err(Error::LemmaViolation)
        );
    }
}
