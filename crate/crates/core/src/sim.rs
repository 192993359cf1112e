//! Flow-level evaluation of routing tables under uniform all-to-all traffic.
//!
//! Every demand sends `flow` units along its table path. Node loads count
//! flow forwarded through a node (endpoints excluded) with each stored
//! demand counted once, so at unit flow they equal the routing load profile.
//! Link loads are per directed arc and expand unordered demands into both
//! directions, since links are full duplex.
//!
//! The throughput and all-to-all time figures are trend proxies: they rank
//! tables on one graph but do not predict absolute performance.

use std::fmt::Write as _;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::Graph;
use crate::routing::{DemandMode, RoutingError, RoutingTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid traffic spec: {0}")]
    InvalidSpec(&'static str),
    #[error("the two tables route different graphs")]
    DifferentGraphs,
    #[error(transparent)]
    Routing(#[from] RoutingError),
}

/// Uniform all-to-all traffic parameters. Defaults model gigabit links
/// (125e6 bytes per second) with 30 microseconds per hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficSpec {
    pub flow: f64,
    pub link_capacity: f64,
    pub per_hop_latency: f64,
}

impl Default for TrafficSpec {
    fn default() -> Self {
        TrafficSpec {
            flow: 1.0,
            link_capacity: 125e6,
            per_hop_latency: 30e-6,
        }
    }
}

impl TrafficSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.link_capacity > 0.0 && self.link_capacity.is_finite()) {
            return Err(SimError::InvalidSpec("link capacity must be positive"));
        }
        if !(self.flow >= 0.0 && self.flow.is_finite()) {
            return Err(SimError::InvalidSpec("flow must be non-negative"));
        }
        if !(self.per_hop_latency >= 0.0 && self.per_hop_latency.is_finite()) {
            return Err(SimError::InvalidSpec("latency must be non-negative"));
        }
        Ok(())
    }
}

/// Directed arcs of `g` in `(u, v)` order, `v` ascending within `u`.
pub fn arcs(g: &Graph) -> Vec<(usize, usize)> {
    (0..g.n())
        .flat_map(|u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .collect()
}

fn checked(table: &RoutingTable, g: &Graph, spec: &TrafficSpec) -> Result<(), SimError> {
    spec.validate()?;
    table.validate(g)?;
    Ok(())
}

fn node_counts(table: &RoutingTable) -> Vec<u64> {
    table.node_loads()
}

fn link_counts(table: &RoutingTable, g: &Graph) -> Vec<u64> {
    // arc (u, v) has index offset[u] + position of v in u's neighbours
    let mut offset = Vec::with_capacity(g.n() + 1);
    offset.push(0);
    for u in 0..g.n() {
        offset.push(offset[u] + g.degree(u));
    }
    let arc = |u: usize, v: usize| {
        offset[u] + g.neighbors(u).binary_search(&v).expect("validated path")
    };
    let both = table.mode() == DemandMode::Unordered;
    let mut load = vec![0u64; offset[g.n()]];
    for r in table.routes() {
        for w in r.path.windows(2) {
            load[arc(w[0], w[1])] += 1;
            if both {
                load[arc(w[1], w[0])] += 1;
            }
        }
    }
    load
}

/// Forwarded flow per node.
pub fn node_loads(table: &RoutingTable, g: &Graph, spec: &TrafficSpec) -> Result<Vec<f64>, SimError> {
    checked(table, g, spec)?;
    Ok(node_counts(table).iter().map(|&c| c as f64 * spec.flow).collect())
}

/// Flow per directed arc, indexed like [`arcs`].
pub fn link_loads(table: &RoutingTable, g: &Graph, spec: &TrafficSpec) -> Result<Vec<f64>, SimError> {
    checked(table, g, spec)?;
    Ok(link_counts(table, g).iter().map(|&c| c as f64 * spec.flow).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    /// Injection rate per node at which the busiest arc saturates.
    pub per_node: f64,
    /// No node forwards anything: every demand uses a direct link, so only
    /// the injection links limit the rate.
    pub capacity_bound: bool,
}

fn throughput_from(max_link: u64, max_node: u64, n: usize, spec: &TrafficSpec) -> Throughput {
    // Each node spreads its injection rate over n - 1 destinations, so an
    // arc carrying `max_link` demands saturates at capacity * (n-1) / max_link.
    let per_node = if max_link == 0 {
        f64::INFINITY
    } else {
        spec.link_capacity * (n - 1) as f64 / max_link as f64
    };
    Throughput {
        per_node,
        capacity_bound: max_node == 0,
    }
}

pub fn saturation_throughput(table: &RoutingTable, g: &Graph, spec: &TrafficSpec) -> Result<Throughput, SimError> {
    checked(table, g, spec)?;
    let max_link = link_counts(table, g).into_iter().max().unwrap_or(0);
    let max_node = node_counts(table).into_iter().max().unwrap_or(0);
    Ok(throughput_from(max_link, max_node, g.n(), spec))
}

fn estimate_from(max_link: u64, diameter: usize, spec: &TrafficSpec, message_size: f64) -> f64 {
    max_link as f64 * message_size / spec.link_capacity + diameter as f64 * spec.per_hop_latency
}

/// `max_link_load * message_size / capacity + diameter * latency`, where
/// `message_size` is the payload of one demand.
pub fn alltoall_estimate(
    table: &RoutingTable,
    g: &Graph,
    spec: &TrafficSpec,
    message_size: f64,
) -> Result<f64, SimError> {
    checked(table, g, spec)?;
    let max_link = link_counts(table, g).into_iter().max().unwrap_or(0);
    Ok(estimate_from(max_link, table.diameter(), spec, message_size))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
}

impl Summary {
    fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Summary { max: 0.0, mean: 0.0, stddev: 0.0 };
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        Summary {
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean,
            stddev: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub node_load: Vec<f64>,
    pub link_load: Vec<f64>,
    pub arcs: Vec<(usize, usize)>,
    pub node_summary: Summary,
    pub link_summary: Summary,
    /// Balance objective of the unit-flow node loads.
    pub objective: Ratio<i128>,
    pub throughput: Throughput,
    pub message_size: f64,
    pub alltoall_time: f64,
}

impl SimReport {
    pub fn node_csv(&self) -> String {
        let mut out = String::from("id,load\n");
        for (v, l) in self.node_load.iter().enumerate() {
            let _ = writeln!(out, "{v},{l}");
        }
        out
    }

    /// Arc ids follow [`arcs`]; the endpoints are listed for readability.
    pub fn link_csv(&self) -> String {
        let mut out = String::from("id,load,src,dst\n");
        for (i, (l, (u, v))) in self.link_load.iter().zip(&self.arcs).enumerate() {
            let _ = writeln!(out, "{i},{l},{u},{v}");
        }
        out
    }

    pub fn key_values(&self, prefix: &str) -> String {
        let mut out = String::new();
        for m in Metric::ALL {
            let _ = writeln!(out, "{prefix}{}={}", m.key(), m.value(self));
        }
        let _ = writeln!(
            out,
            "{prefix}objective_exact={}/{}",
            self.objective.numer(),
            self.objective.denom()
        );
        let _ = writeln!(out, "{prefix}capacity_bound={}", self.throughput.capacity_bound);
        out
    }
}

/// Full evaluation of one table.
pub fn simulate(
    table: &RoutingTable,
    g: &Graph,
    spec: &TrafficSpec,
    message_size: f64,
) -> Result<SimReport, SimError> {
    checked(table, g, spec)?;
    let nodes = node_counts(table);
    let links = link_counts(table, g);
    let max_node = nodes.iter().copied().max().unwrap_or(0);
    let max_link = links.iter().copied().max().unwrap_or(0);
    let node_load: Vec<f64> = nodes.iter().map(|&c| c as f64 * spec.flow).collect();
    let link_load: Vec<f64> = links.iter().map(|&c| c as f64 * spec.flow).collect();
    Ok(SimReport {
        node_summary: Summary::of(&node_load),
        link_summary: Summary::of(&link_load),
        objective: table.load_profile().objective,
        throughput: throughput_from(max_link, max_node, g.n(), spec),
        message_size,
        alltoall_time: estimate_from(max_link, table.diameter(), spec, message_size),
        node_load,
        link_load,
        arcs: arcs(g),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MaxNodeLoad,
    MeanNodeLoad,
    StddevNodeLoad,
    MaxLinkLoad,
    MeanLinkLoad,
    Objective,
    Throughput,
    AlltoallTime,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::MaxNodeLoad,
        Metric::MeanNodeLoad,
        Metric::StddevNodeLoad,
        Metric::MaxLinkLoad,
        Metric::MeanLinkLoad,
        Metric::Objective,
        Metric::Throughput,
        Metric::AlltoallTime,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Metric::MaxNodeLoad => "max_node_load",
            Metric::MeanNodeLoad => "mean_node_load",
            Metric::StddevNodeLoad => "stddev_node_load",
            Metric::MaxLinkLoad => "max_link_load",
            Metric::MeanLinkLoad => "mean_link_load",
            Metric::Objective => "objective",
            Metric::Throughput => "throughput",
            Metric::AlltoallTime => "alltoall_time",
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == Metric::Throughput
    }

    pub fn value(self, r: &SimReport) -> f64 {
        match self {
            Metric::MaxNodeLoad => r.node_summary.max,
            Metric::MeanNodeLoad => r.node_summary.mean,
            Metric::StddevNodeLoad => r.node_summary.stddev,
            Metric::MaxLinkLoad => r.link_summary.max,
            Metric::MeanLinkLoad => r.link_summary.mean,
            Metric::Objective => *r.objective.numer() as f64 / *r.objective.denom() as f64,
            Metric::Throughput => r.throughput.per_node,
            Metric::AlltoallTime => r.alltoall_time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    A,
    B,
    Tie,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub metric: Metric,
    pub a: f64,
    pub b: f64,
    /// `a - b`.
    pub delta: f64,
    pub winner: Winner,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub a: SimReport,
    pub b: SimReport,
    pub rows: Vec<MetricRow>,
}

impl Comparison {
    pub fn row(&self, m: Metric) -> &MetricRow {
        self.rows.iter().find(|r| r.metric == m).expect("every metric has a row")
    }

    pub fn is_tie(&self) -> bool {
        self.rows.iter().all(|r| r.winner == Winner::Tie)
    }

    /// Aligned table with one row per metric.
    pub fn text_table(&self, name_a: &str, name_b: &str) -> String {
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                let w = match r.winner {
                    Winner::A => name_a.to_string(),
                    Winner::B => name_b.to_string(),
                    Winner::Tie => "tie".to_string(),
                };
                [r.metric.key().to_string(), fmt_num(r.a), fmt_num(r.b), fmt_num(r.delta), w]
            })
            .collect();
        let header = [
            "metric".to_string(),
            name_a.to_string(),
            name_b.to_string(),
            "delta".to_string(),
            "winner".to_string(),
        ];
        let mut width = [0usize; 5];
        for row in std::iter::once(&header).chain(&cells) {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&header).chain(&cells) {
            let line: Vec<String> = row
                .iter()
                .zip(width)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }

    pub fn key_values(&self) -> String {
        let mut out = self.a.key_values("a.");
        out.push_str(&self.b.key_values("b."));
        for r in &self.rows {
            let _ = writeln!(out, "delta.{}={}", r.metric.key(), r.delta);
            let w = match r.winner {
                Winner::A => "a",
                Winner::B => "b",
                Winner::Tie => "tie",
            };
            let _ = writeln!(out, "winner.{}={w}", r.metric.key());
        }
        out
    }
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x}")
    } else if x.is_finite() && x.abs() >= 1e-3 && x.abs() < 1e9 {
        format!("{x:.4}")
    } else {
        format!("{x:.4e}")
    }
}

/// Runs both tables on the same spec and ranks them per metric.
pub fn compare_report(
    a: &RoutingTable,
    b: &RoutingTable,
    g: &Graph,
    spec: &TrafficSpec,
    message_size: f64,
) -> Result<Comparison, SimError> {
    if a.n() != b.n() || a.n() != g.n() {
        return Err(SimError::DifferentGraphs);
    }
    let ra = simulate(a, g, spec, message_size)?;
    let rb = simulate(b, g, spec, message_size)?;
    let rows = Metric::ALL
        .iter()
        .map(|&metric| {
            let (va, vb) = (metric.value(&ra), metric.value(&rb));
            let a_better = if metric.higher_is_better() { va > vb } else { va < vb };
            let winner = if va == vb {
                Winner::Tie
            } else if a_better {
                Winner::A
            } else {
                Winner::B
            };
            let delta = if va == vb { 0.0 } else { va - vb };
            MetricRow { metric, a: va, b: vb, delta, winner }
        })
        .collect();
    Ok(Comparison { a: ra, b: rb, rows })
}
