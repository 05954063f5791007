//! Pair up tokens on a tree so that the connecting tree paths share no edge.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreePath {
    /// Indices into the token list, smaller first.
    pub tokens: (usize, usize),
    /// Vertices from the first token's vertex to the second's.
    pub nodes: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Tokens are vertex positions, repeats allowed. Each token climbs toward
/// the root until it meets another unpaired one, so every tree edge carries
/// at most one token and the resulting paths are edge-disjoint.
pub fn pair_tokens_on_tree(tree: &Graph, tokens: &[VertexId]) -> Result<Vec<TreePath>> {
    if tokens.len() % 2 == 1 {
        return Err(Error::OddTokens(tokens.len()));
    }
    let n = tree.vertex_count();
    if n == 0 {
        return if tokens.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::NotATree("tokens on an empty graph".into()))
        };
    }
    if tree.edge_count() != n - 1 {
        return Err(Error::NotATree(format!("{} vertices but {} edges", n, tree.edge_count())));
    }
    if let Some(&t) = tokens.iter().find(|&&t| t >= n) {
        return Err(Error::NotATree(format!("token on missing vertex {t}")));
    }
    let inc = tree.incidence();
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &i in &inc[x] {
            let e = tree.edge(i);
            let y = e.other(x);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, e.id));
                queue.push_back(y);
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotATree("graph is disconnected".into()));
    }

    // a climbing token with the path it has walked so far
    struct Climb {
        token: usize,
        nodes: Vec<VertexId>,
        edges: Vec<EdgeId>,
    }
    let mut at: Vec<Vec<Climb>> = (0..n).map(|_| Vec::new()).collect();
    for (i, &v) in tokens.iter().enumerate() {
        at[v].push(Climb {
            token: i,
            nodes: vec![v],
            edges: Vec::new(),
        });
    }
    let mut out = Vec::new();
    for &x in order.iter().rev() {
        let mut here = std::mem::take(&mut at[x]);
        here.sort_by_key(|c| c.token);
        let carry = if here.len() % 2 == 1 { here.pop() } else { None };
        let mut it = here.into_iter();
        while let (Some(a), Some(b)) = (it.next(), it.next()) {
            let mut nodes = a.nodes;
            let mut edges = a.edges;
            nodes.extend(b.nodes.iter().rev().skip(1));
            edges.extend(b.edges.iter().rev());
            out.push(TreePath {
                tokens: (a.token, b.token),
                nodes,
                edges,
            });
        }
        if let Some(mut c) = carry {
            let (p, e) = parent[x].ok_or_else(|| Error::Inconsistent("token left at the root".into()))?;
            c.nodes.push(p);
            c.edges.push(e);
            at[p].push(c);
        }
    }
    out.sort_by_key(|p| p.tokens);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn disjoint(paths: &[TreePath]) -> bool {
        let mut used = BTreeSet::new();
        paths.iter().flat_map(|p| &p.edges).all(|&e| used.insert(e))
    }

    #[test]
    fn same_vertex_gives_empty_path() {
        let t = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = pair_tokens_on_tree(&t, &[1, 1]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].edges.is_empty());
        assert_eq!(p[0].nodes, vec![1]);
    }

    #[test]
    fn path_ends() {
        let t = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = pair_tokens_on_tree(&t, &[0, 2]).unwrap();
        assert_eq!(p[0].nodes, vec![0, 1, 2]);
        assert_eq!(p[0].edges, vec![0, 1]);
    }

    #[test]
    fn star_leaves() {
        let t = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = pair_tokens_on_tree(&t, &[1, 2, 3, 4]).unwrap();
        assert_eq!(p.len(), 2);
        assert!(disjoint(&p));
        assert!(p.iter().all(|x| x.edges.len() == 2));
    }

    #[test]
    fn errors() {
        let t = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(pair_tokens_on_tree(&t, &[0]), Err(Error::OddTokens(1)));
        let c = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(pair_tokens_on_tree(&c, &[0, 1]), Err(Error::NotATree(_))));
    }
}
