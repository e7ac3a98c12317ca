//! Immutable simple graphs with CSR adjacency.

use std::collections::HashSet;

use thiserror::Error;

pub type Vertex = u32;
pub type EdgeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} ({u}, {v}) is a self-loop")]
    SelfLoop { index: usize, u: u64, v: u64 },
    #[error("edge {index} ({u}, {v}) duplicates an earlier edge")]
    DuplicateEdge { index: usize, u: u64, v: u64 },
    #[error("edge {index} ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { index: usize, u: u64, v: u64, n: u64 },
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

/// A simple undirected graph.
///
/// Edge ids follow input order; adjacency lists preserve input order too.
/// Endpoints are stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    endpoints: Vec<(Vertex, Vertex)>,
    offsets: Vec<usize>,
    adjacency: Vec<(Vertex, EdgeId)>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range ids.
    pub fn new(n: usize, edges: &[(u64, u64)]) -> Result<Self, GraphError> {
        if n > Vertex::MAX as usize || edges.len() >= EdgeId::MAX as usize {
            return Err(GraphError::TooLarge(format!(
                "{n} vertices, {} edges",
                edges.len()
            )));
        }
        let mut endpoints = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= n as u64 || v >= n as u64 {
                return Err(GraphError::VertexOutOfRange {
                    index,
                    u,
                    v,
                    n: n as u64,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop { index, u, v });
            }
            let (a, b) = (u.min(v) as Vertex, u.max(v) as Vertex);
            if !seen.insert(((a as u64) << 32) | b as u64) {
                return Err(GraphError::DuplicateEdge { index, u, v });
            }
            endpoints.push((a, b));
        }

        let mut offsets = vec![0usize; n + 1];
        for &(a, b) in &endpoints {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        let mut max_degree = 0;
        for v in 0..n {
            max_degree = max_degree.max(offsets[v + 1]);
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0, 0); 2 * endpoints.len()];
        for (e, &(a, b)) in endpoints.iter().enumerate() {
            adjacency[fill[a as usize]] = (b, e as EdgeId);
            fill[a as usize] += 1;
            adjacency[fill[b as usize]] = (a, e as EdgeId);
            fill[b as usize] += 1;
        }

        Ok(Self {
            n,
            endpoints,
            offsets,
            adjacency,
            max_degree,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.endpoints.len()
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// `(neighbor, edge)` pairs in input order.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adjacency[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.endpoints[e as usize]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (Vertex, Vertex)> + '_ {
        self.endpoints.iter().copied()
    }

    /// The endpoint of `e` that is not `v`. `v` must lie on `e`.
    #[inline]
    pub fn other_endpoint(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.endpoints[e as usize];
        debug_assert!(a == v || b == v, "vertex {v} not on edge {e}");
        a ^ b ^ v
    }

    /// Vertex shared by two distinct edges, if they are adjacent.
    #[inline]
    pub fn shared_vertex(&self, e: EdgeId, f: EdgeId) -> Option<Vertex> {
        let (a, b) = self.endpoints[e as usize];
        let (c, d) = self.endpoints[f as usize];
        if a == c || a == d {
            Some(a)
        } else if b == c || b == d {
            Some(b)
        } else {
            None
        }
    }

    /// Linear scan of the smaller adjacency list.
    pub fn find_edge(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let (probe, target) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(probe)
            .iter()
            .find(|&&(w, _)| w == target)
            .map(|&(_, e)| e)
    }
}
