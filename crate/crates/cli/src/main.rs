//! `nestnet`: build topologies, route them and compare routings.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for failures
//! reported by the library (bad files, oversized searches and so on).

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::UsageError;

#[derive(Debug, Parser)]
#[command(name = "nestnet", version, about = "Nested interconnection networks and load-balanced routing")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave the creation timestamp out of artifact headers.
    #[arg(long, global = true)]
    pub no_header: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named or random regular graph.
    Gen(GenArgs),
    /// Anneal for a k-regular graph with minimal mean path length.
    Search(SearchArgs),
    /// Print diameter, mean path length and bisection width.
    Metrics(MetricsArgs),
    /// Cartesian product of graph files.
    Product(ProductArgs),
    /// Balanced or Floyd routing table for a graph.
    Route(RouteArgs),
    /// Routing table for a product built from factor tables.
    Compose(ComposeArgs),
    /// Flow-level evaluation of one table.
    Simulate(SimulateArgs),
    /// Side-by-side evaluation of two tables.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// petersen, heawood, levi, hypercube(m), complete(m), cycle(m).
    #[arg(long, conflicts_with_all = ["n", "k"])]
    pub name: Option<String>,
    /// Vertices of a random regular graph.
    #[arg(long, requires = "k")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Total objective evaluations across restarts.
    #[arg(long, default_value_t = nestnet::search::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = nestnet::search::DEFAULT_RESTARTS)]
    pub restarts: u32,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    pub graph: String,
    /// auto, exact or heuristic.
    #[arg(long, default_value = "auto")]
    pub bisection: String,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    /// Factor graph files, in order; factor 0 is the most significant digit.
    #[arg(long = "factor", required = true)]
    pub factors: Vec<String>,
    /// Raise the single factor to this power instead.
    #[arg(long)]
    pub power: Option<usize>,
    #[arg(long)]
    pub out: String,
    /// Optional label map sidecar.
    #[arg(long)]
    pub labels: Option<String>,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[arg(long = "in")]
    pub input: String,
    /// unordered or ordered.
    #[arg(long, default_value = "unordered")]
    pub mode: String,
    /// balanced or floyd.
    #[arg(long, default_value = "balanced")]
    pub algo: String,
    /// auto, exact or local.
    #[arg(long, default_value = "auto")]
    pub solver: String,
    /// Limit on shortest paths per demand.
    #[arg(long, default_value_t = nestnet::routing::DEFAULT_PATH_CAP)]
    pub cap: usize,
    /// Local search restarts.
    #[arg(long, default_value_t = 4)]
    pub restarts: u32,
    /// Local search moves per restart; 0 picks a size-based default.
    #[arg(long, default_value_t = 0)]
    pub steps: u64,
    #[arg(long)]
    pub out: String,
    /// Write the node load report here.
    #[arg(long)]
    pub loads: Option<String>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Factor graph files of the product, in order.
    #[arg(long = "factor", required = true, num_args = 1)]
    pub factors: Vec<String>,
    /// Ordered table over the product of all but the last factor.
    #[arg(long)]
    pub r1: String,
    /// Ordered table over the last factor.
    #[arg(long)]
    pub r2: String,
    /// g1_first or g2_first.
    #[arg(long, default_value = "g1_first")]
    pub order: String,
    #[arg(long)]
    pub out: String,
    #[arg(long)]
    pub loads: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct TrafficArgs {
    /// Graph file; inferred from the table's one-hop routes when absent.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub flow: f64,
    /// Link capacity in units per second.
    #[arg(long, default_value_t = 125e6)]
    pub capacity: f64,
    /// Per-hop latency in seconds.
    #[arg(long, default_value_t = 30e-6)]
    pub latency: f64,
    /// Payload per demand for the all-to-all estimate.
    #[arg(long, default_value_t = 65536.0)]
    pub message_size: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub table: String,
    #[command(flatten)]
    pub traffic: TrafficArgs,
    #[arg(long)]
    pub node_csv: Option<String>,
    #[arg(long)]
    pub link_csv: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: String,
    pub b: String,
    #[command(flatten)]
    pub traffic: TrafficArgs,
    /// Labels for the two tables in the report.
    #[arg(long, default_value = "a")]
    pub name_a: String,
    #[arg(long, default_value = "b")]
    pub name_b: String,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
