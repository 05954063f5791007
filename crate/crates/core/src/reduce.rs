//! Drop disallowed edges and shrink the top-level tight odd sets.

use crate::duals::component_dual;
use crate::error::{Error, Result};
use crate::graph::WeightVector;
use crate::minor::{flip_heavy_sets, FlipOutcome, LaminarFamily, Minor, NodeId};
use crate::oracle::{allowed_edges, OracleSession};
use crate::par;

#[derive(Debug, Clone)]
pub struct Reduced {
    pub minor: Minor,
    /// Flipped family over the allowed subgraph (node ids of the input minor).
    pub family: LaminarFamily,
    pub flipped: Vec<crate::minor::FlippedSet>,
    pub rounds: usize,
}

pub fn reduce(session: &OracleSession, minor: &Minor, w: &WeightVector) -> Result<Reduced> {
    let allowed = minor.restrict_to(&allowed_edges(session, minor, w)?);
    let comps = allowed.components();
    let per_comp = par::try_map(&comps, |comp| -> Result<(FlipOutcome, Vec<Vec<NodeId>>, usize)> {
        let (family, rounds) = component_dual(session, &allowed, comp, w)?;
        let flip = flip_heavy_sets(&allowed, &family, comp);
        let half = allowed.set_weight(comp);
        let tops = flip.family.maximal_non_singletons();
        if let Some(big) = tops.iter().find(|s| 2 * allowed.set_weight(s) > half) {
            return Err(Error::Inconsistent(format!("flipped set {big:?} is still heavy")));
        }
        Ok((flip, tops, rounds))
    })?;
    let mut family = LaminarFamily::default();
    let mut flipped = Vec::new();
    let mut sets = Vec::new();
    let mut rounds = 0;
    for (flip, tops, r) in per_comp {
        family.extend(flip.family);
        flipped.extend(flip.flipped);
        sets.extend(tops);
        rounds = rounds.max(r);
    }
    let minor = allowed.contract(&sets)?;
    // allowed edges (2 rounds), components in parallel, contraction
    Ok(Reduced {
        minor,
        family,
        flipped,
        rounds: 2 + 1 + rounds + 1,
    })
}
