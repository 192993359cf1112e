//! Undirected simple graphs over contiguous vertex ids.
//!
//! A [`Graph`] is immutable once built. Construction validates that the edge
//! set is simple and that the graph is connected, since every algorithm in
//! this crate relies on finite shortest-path distances.

mod bisection;
mod io;
mod metrics;
mod named;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use bisection::{bisection_width, Bisection, BisectionMode, Exactness, MAX_EXACT_BISECTION};
pub use io::{load_graph, save_graph, save_graph_with_comments};
pub use metrics::{GraphMetrics, Mpl};
pub use named::{named_graph, NamedGraph, MAX_FAMILY_PARAM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u} {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is disconnected: vertices {a} and {b} lie in different components")]
    Disconnected { a: usize, b: usize },
    #[error("unknown graph name '{0}'")]
    UnknownName(String),
    #[error("parameter {value} for {family} out of range {min}..={max}")]
    ParameterOutOfRange {
        family: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares degree {declared} but graph {found}")]
    DegreeMismatch { declared: i64, found: String },
    #[error("exact bisection limited to {max} vertices, graph has {n}; use heuristic mode")]
    ExactBisectionTooLarge { n: usize, max: usize },
}

/// Undirected, simple, connected graph with vertices `0..n`.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    name: Option<String>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// disconnected inputs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let g = Self::from_edges_unchecked_connectivity(n, edges)?;
        g.check_connected()?;
        Ok(g)
    }

    /// Same validation as [`Graph::from_edges`] minus the connectivity check.
    pub(crate) fn from_edges_unchecked_connectivity<I>(
        n: usize,
        edges: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
        }
        Ok(Graph {
            adj,
            edge_count,
            name: None,
        })
    }

    /// Adjacency lists must already be sorted, symmetric and simple.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj
            .iter()
            .enumerate()
            .all(|(u, l)| l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|&v| v != u)));
        Graph {
            adj,
            edge_count,
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The common degree if every vertex has it.
    pub fn is_regular(&self) -> Option<usize> {
        let k = self.degree(0);
        self.adj.iter().all(|l| l.len() == k).then_some(k)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Hop distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        let mut queue = VecDeque::with_capacity(self.n());
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in &self.adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub(crate) fn check_connected(&self) -> Result<(), GraphError> {
        let dist = self.bfs_distances(0);
        match dist.iter().position(|&d| d == u32::MAX) {
            Some(b) => Err(GraphError::Disconnected { a: 0, b }),
            None => Ok(()),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("edges", &self.edge_count)
            .finish()
    }
}
