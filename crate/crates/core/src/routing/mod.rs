//! Load-balanced shortest-path routing.
//!
//! Routing happens in two stages. First every shortest path of every demand
//! is enumerated. Then one path per demand is selected so that the node
//! forwarding loads `d_n` are as even as possible, i.e. the selection
//! minimises `sum_n (d_n - mean(d))^2`. A node's load counts the selected
//! paths that pass through it, endpoints excluded.
//!
//! Demands with a unique shortest path contribute a fixed load `h_n`; only
//! demands with several candidates ("free groups") are subject to choice.

mod compose;
mod exact;
mod floyd;
mod local;
mod model;
mod paths;
mod solve;
mod state;
mod table;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::GraphError;

pub use compose::{compose_product_routing, ComposeOrder};
pub use exact::{solve_exact, EXACT_NODE_LIMIT};
pub use floyd::floyd_routing;
pub use local::{solve_local, LocalConfig, LocalSolution};
pub use model::{build_model, objective, Group, LoadProfile, RoutingModel, Selection, DEFAULT_PATH_CAP};
pub use paths::all_shortest_paths;
pub use solve::{balanced_routing, BalancedRouting, Solver, AUTO_EXACT_FREE_GROUPS};
pub use table::{Route, RoutingTable};

/// Vertex sequence from source to destination.
pub type Path = Vec<usize>;

/// Whether `(s, t)` and `(t, s)` are one demand or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum DemandMode {
    /// One demand per unordered pair `{s, t}`, stored with `s < t`; the
    /// reverse direction uses the reversed path.
    #[default]
    Unordered,
    Ordered,
}

impl DemandMode {
    pub fn includes(self, src: usize, dst: usize) -> bool {
        match self {
            DemandMode::Unordered => src < dst,
            DemandMode::Ordered => src != dst,
        }
    }

    /// Number of demands on `n` vertices.
    pub fn demand_count(self, n: usize) -> usize {
        match self {
            DemandMode::Unordered => n * n.saturating_sub(1) / 2,
            DemandMode::Ordered => n * n.saturating_sub(1),
        }
    }
}

impl fmt::Display for DemandMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DemandMode::Unordered => "unordered",
            DemandMode::Ordered => "ordered",
        })
    }
}

impl FromStr for DemandMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unordered" => Ok(DemandMode::Unordered),
            "ordered" => Ok(DemandMode::Ordered),
            _ => Err(format!("unknown demand mode '{s}'")),
        }
    }
}

/// A source-destination pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Demand {
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("{count} shortest paths between {src} and {dst} exceed the cap of {cap}")]
    PathExplosion {
        src: usize,
        dst: usize,
        count: u64,
        cap: usize,
    },
    #[error("path enumeration needs distinct endpoints, got {0} twice")]
    SameEndpoints(usize),
    #[error("exact search exceeded {limit} nodes; use the local solver")]
    TooLarge { limit: u64 },
    #[error("selection invalid: {0}")]
    InvalidSelection(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("route {src}->{dst}: {a} and {b} are not adjacent")]
    NotAdjacent { src: usize, dst: usize, a: usize, b: usize },
    #[error("route {src}->{dst} has {len} hops but the distance is {dist}")]
    NotShortest { src: usize, dst: usize, len: usize, dist: u32 },
    #[error("route {src}->{dst} does not start at {src} and end at {dst}")]
    WrongEndpoints { src: usize, dst: usize },
    #[error("no route for demand {src}->{dst}")]
    MissingDemand { src: usize, dst: usize },
    #[error("demand {src}->{dst} listed twice or out of order")]
    DuplicateDemand { src: usize, dst: usize },
    #[error("table is for {table} vertices, graph has {graph}")]
    SizeMismatch { table: usize, graph: usize },
    #[error("expected a table in {expected} mode, got {found}")]
    ModeMismatch { expected: DemandMode, found: DemandMode },
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
