//! Plain undirected multigraphs and edge weights.
//!
//! A [`Graph`] is the base every [`Minor`](crate::minor::Minor) refers back to.
//! Vertices are `0..n`; every edge carries a stable [`EdgeId`] naming an edge of
//! the root input graph, so induced subgraphs built during recursion still
//! report their edges in root terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub id: EdgeId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Loop-free multigraph with edges sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph whose edge ids are the positions in `pairs`.
    pub fn new(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| Edge { u, v, id })
            .collect();
        Self::with_edges(n, edges)
    }

    pub fn with_edges(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::Inconsistent(format!(
                    "edge {} = ({}, {}) out of range for {} vertices",
                    e.id, e.u, e.v, n
                )));
            }
            if e.u == e.v {
                return Err(Error::Inconsistent(format!("edge {} is a loop", e.id)));
            }
        }
        edges.sort_by_key(|e| e.id);
        if edges.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Inconsistent("duplicate edge id".into()));
        }
        Ok(Graph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Position of the edge with the given id.
    pub fn position(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn edge_by_id(&self, id: EdgeId) -> Option<&Edge> {
        self.position(id).map(|i| &self.edges[i])
    }

    pub fn max_edge_id(&self) -> Option<EdgeId> {
        self.edges.last().map(|e| e.id)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Incident edge positions per vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        inc
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    /// Edge ids are preserved.
    pub fn induced(&self, vertices: &[VertexId]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|e| Edge {
                u: local[e.u],
                v: local[e.v],
                id: e.id,
            })
            .collect();
        Graph {
            n: vertices.len(),
            edges,
        }
    }
}

/// Integral edge weights indexed by root edge id.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<i64>,
}

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightVector { weights }
    }

    pub fn zeros(len: usize) -> Self {
        WeightVector {
            weights: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight of an edge; ids beyond the stored range weigh 0.
    pub fn get(&self, id: EdgeId) -> i64 {
        self.weights.get(id).copied().unwrap_or(0)
    }

    pub fn set(&mut self, id: EdgeId, weight: i64) {
        if id >= self.weights.len() {
            self.weights.resize(id + 1, 0);
        }
        self.weights[id] = weight;
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.weights
    }

    pub fn max_abs(&self) -> i64 {
        self.weights.iter().map(|w| w.abs()).max().unwrap_or(0)
    }

    pub fn total<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> i64 {
        ids.into_iter().map(|&id| self.get(id)).sum()
    }

    /// Rejects any weight whose magnitude exceeds `cap`.
    pub fn check_cap(&self, cap: i64) -> Result<()> {
        match self.weights.iter().enumerate().find(|(_, w)| w.abs() > cap) {
            Some((edge, &weight)) => Err(Error::WeightCap { edge, weight, cap }),
            None => Ok(()),
        }
    }
}

impl From<Vec<i64>> for WeightVector {
    fn from(weights: Vec<i64>) -> Self {
        WeightVector::new(weights)
    }
}
