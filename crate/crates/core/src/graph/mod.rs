//! Simple undirected graphs stored as fixed-width adjacency bitsets.
//!
//! Row `u` of the adjacency is the neighbourhood `N(u)`; rows are kept
//! symmetric with a zero diagonal by every constructor and mutator.

mod clique;
mod io;
mod parts;

pub use clique::{clique_number, independence_number, is_k4_free};
pub use io::{parse_edge_list, parse_graph6, to_edge_list, to_graph6, Graph6Error, EdgeListError};
pub use parts::PartSizes;

use crate::bits;
use thiserror::Error;

/// Hard cap on the vertex count of any [`Graph`].
pub const MAX_VERTICES: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("{n} vertices exceeds the limit of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid part sizes: {0}")]
    InvalidParts(String),
    #[error("Turán graph needs 1 <= r <= n, got n = {n}, r = {r}")]
    InvalidTuran { n: usize, r: usize },
    #[error("Zykov operation needs two distinct vertices, got {0} twice")]
    ZykovSameVertex(usize),
    #[error("Zykov operation needs non-adjacent vertices, but {0} ~ {1}")]
    ZykovAdjacent(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, g6={})", self.n, self.m(), to_graph6(self))
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        let words = bits::words_for(n);
        Ok(Self { n, words, rows: vec![0; n * words] })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let full = bits::full(n);
        for u in 0..n {
            let row = g.row_mut(u);
            row.copy_from_slice(&full);
            bits::clear(row, u);
        }
        Ok(g)
    }

    /// Graph with exactly the given edges. Duplicate edges are idempotent.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// `K_{n_1,...,n_r}` with vertices grouped by part, largest part first.
    pub fn complete_multipartite(parts: &PartSizes) -> Result<Self, GraphError> {
        let mut g = Self::empty(parts.n())?;
        let labels = parts.vertex_parts();
        for u in 0..g.n {
            for v in (u + 1)..g.n {
                if labels[u] != labels[v] {
                    g.set_edge(u, v, true);
                }
            }
        }
        Ok(g)
    }

    /// Balanced complete `r`-partite graph `T(n, r)`; `T(n, 1)` is edgeless.
    pub fn turan(n: usize, r: usize) -> Result<Self, GraphError> {
        if r == 0 || r > n {
            return Err(GraphError::InvalidTuran { n, r });
        }
        if r == 1 {
            return Self::empty(n);
        }
        Self::complete_multipartite(&PartSizes::turan(n, r)?)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidParts(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edge_list(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edge_list(n, &edges)
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edge_list(10, &edges).expect("static edge list")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        bits::count(&self.rows) / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    pub fn degree(&self, u: usize) -> usize {
        bits::count(self.row(u))
    }

    /// Neighbourhood of `u` as a bitset row of `ceil(n / 64)` words.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits::iter_ones(self.row(u))
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * (self.n - 1) / 2
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        let full = bits::full(self.n);
        for u in 0..self.n {
            let row = out.row_mut(u);
            for (w, f) in row.iter_mut().zip(&full) {
                *w = !*w & f;
            }
            bits::clear(row, u);
        }
        out
    }

    /// Relabels vertices so that old vertex `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edge_list(self.n, &edges)
    }

    /// Copy with the pair `{u, v}` toggled.
    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        let present = g.has_edge(u, v);
        g.set_edge(u, v, !present);
        Ok(g)
    }

    /// Dense row-major 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (u, v) in self.edges() {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }

    /// `A x` in exact integer arithmetic.
    pub fn apply_integer(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|u| self.neighbors(u).map(|v| x[v]).sum()).collect()
    }

    /// Upper-triangle adjacency bits in graph6 order; orders graphs for tie-breaking.
    pub fn edge_key(&self) -> Vec<bool> {
        let mut key = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for j in 1..self.n {
            for i in 0..j {
                key.push(self.has_edge(i, j));
            }
        }
        key
    }

    /// Number of triangles, counted once each.
    pub fn triangle_count(&self) -> u64 {
        let mut total = 0u64;
        for (u, v) in self.edges() {
            total += bits::and_count(self.row(u), self.row(v)) as u64;
        }
        // every triangle is seen once from each of its three edges
        total / 3
    }

    /// Zykov symmetrization: `u` takes over the neighbourhood of `v`.
    ///
    /// Requires `u != v` and `u`, `v` non-adjacent; the result has
    /// `N(u) = N(v) = N_g(v)` and all other adjacencies unchanged.
    pub fn zykov(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::ZykovSameVertex(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ZykovAdjacent(u, v));
        }
        let mut g = self.clone();
        let old: Vec<usize> = self.neighbors(u).collect();
        for w in old {
            g.set_edge(u, w, false);
        }
        let new: Vec<usize> = self.neighbors(v).collect();
        for w in new {
            g.set_edge(u, w, true);
        }
        Ok(g)
    }

    /// Non-adjacent ordered pairs `(u, v)`, `u != v`; the valid Zykov arguments.
    pub fn non_adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v && !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_vertex(&self, u: usize) -> Result<(), GraphError> {
        if u >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: u, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn row_mut(&mut self, u: usize) -> &mut [u64] {
        &mut self.rows[u * self.words..(u + 1) * self.words]
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v);
        if present {
            bits::set(self.row_mut(u), v);
            bits::set(self.row_mut(v), u);
        } else {
            bits::clear(self.row_mut(u), v);
            bits::clear(self.row_mut(v), u);
        }
    }

    /// Symmetry and empty diagonal, bit for bit.
    pub fn is_well_formed(&self) -> bool {
        let full = bits::full(self.n);
        (0..self.n).all(|u| {
            let row = self.row(u);
            !bits::test(row, u)
                && row.iter().zip(&full).all(|(w, f)| w & !f == 0)
                && self.neighbors(u).all(|v| self.has_edge(v, u))
        })
    }
}
