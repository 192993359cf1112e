//! Nested interconnection networks and load-balanced shortest-path routing.
//!
//! * [`graph`]: graph type, named generators, edge-list files and metrics.
//! * [`search`]: annealing search for regular graphs of minimal mean path length.
//! * [`product`]: Cartesian products and folded powers.
//! * [`routing`]: all-shortest-path enumeration, the path-selection model,
//!   exact and local solvers, the Floyd baseline and product composition.
//! * [`sim`]: flow-level evaluation of routing tables under all-to-all traffic.

pub mod graph;

pub use graph::{Graph, GraphError};
pub mod search;

mod anneal;

pub use anneal::Schedule;
pub mod product;
pub mod routing;
pub mod sim;
