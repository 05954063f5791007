//! Support of the balanced critical dual, one connected component of the
//! allowed subgraph at a time.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::WeightVector;
use crate::minor::{LaminarFamily, Minor, NodeId, UnionFind};
use crate::oracle::{allowed_edges, mu_component, OracleSession};
use crate::par;

/// Laminar family of one component of `allowed`, a minor whose edges are
/// exactly the allowed ones. Returns the family and its simulated rounds.
///
/// Sets are the components of `{e : w_e + μ(u) + μ(v) ≤ t}` for each
/// threshold `t`. The whole component is left out.
pub fn component_dual(
    session: &OracleSession,
    allowed: &Minor,
    component: &[NodeId],
    w: &WeightVector,
) -> Result<(LaminarFamily, usize)> {
    let mut family = LaminarFamily::singletons(component.iter().copied());
    if component.len() <= 2 {
        return Ok((family, 0));
    }
    let mu = mu_component(session, allowed, component, w)?;
    let mut local = vec![usize::MAX; allowed.node_count()];
    for (i, &x) in component.iter().enumerate() {
        local[x] = i;
    }
    let edges: Vec<(usize, usize, i64)> = allowed
        .edges()
        .iter()
        .filter(|e| local[e.a] != usize::MAX)
        .map(|e| {
            let (a, b) = (local[e.a], local[e.b]);
            (a, b, w.get(e.id) + mu[a] + mu[b])
        })
        .collect();
    let thresholds: Vec<i64> = edges.iter().map(|e| e.2).collect::<BTreeSet<_>>().into_iter().collect();
    let total = allowed.set_weight(component);
    let found = par::try_map(&thresholds, |&t| {
        let mut uf = UnionFind::new(component.len());
        for &(a, b, wp) in &edges {
            if wp <= t {
                uf.union(a, b);
            }
        }
        let mut sets = Vec::new();
        for group in uf.groups().into_iter().filter(|g| g.len() >= 2) {
            let nodes: Vec<NodeId> = group.iter().map(|&i| component[i]).collect();
            let weight = allowed.set_weight(&nodes);
            if weight == total {
                continue;
            }
            if weight.is_multiple_of(2) {
                return Err(Error::EvenComponentAtThreshold(nodes));
            }
            sets.push(nodes);
        }
        Ok(sets)
    })?;
    for set in found.into_iter().flatten() {
        family.insert(set);
    }
    family.check_laminar()?;
    // μ batch, then the threshold loop
    Ok((family, 2))
}

/// Balanced critical dual support of `minor` under `w`: the union of the
/// per-component families of its allowed subgraph.
pub fn balanced_critical_dual(session: &OracleSession, minor: &Minor, w: &WeightVector) -> Result<LaminarFamily> {
    if minor.node_count() == 0 {
        return Ok(LaminarFamily::default());
    }
    let allowed = minor.restrict_to(&allowed_edges(session, minor, w)?);
    let comps = allowed.components();
    let parts = par::try_map(&comps, |c| component_dual(session, &allowed, c, w))?;
    let mut family = LaminarFamily::default();
    for (f, _) in parts {
        family.extend(f);
    }
    Ok(family)
}
