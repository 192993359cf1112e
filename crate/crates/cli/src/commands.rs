use std::fmt;
use std::fs;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use nestnet::graph::{load_graph, named_graph, save_graph_with_comments, BisectionMode, Exactness, GraphMetrics, NamedGraph};
use nestnet::product::{folded_power, product_of, verify_product_properties, ProductGraph};
use nestnet::routing::{
    balanced_routing, compose_product_routing, floyd_routing, ComposeOrder, DemandMode, LoadProfile, LocalConfig,
    RoutingTable, Solver,
};
use nestnet::search::{moore_mpl_bound, random_regular, search_optimal, SearchConfig};
use nestnet::sim::{compare_report, simulate, TrafficSpec};
use nestnet::Graph;
use num_rational::Ratio;

use crate::{Cli, Command, CompareArgs, ComposeArgs, GenArgs, MetricsArgs, ProductArgs, RouteArgs, SearchArgs, SimulateArgs, TrafficArgs};

/// A bad argument value that clap could not catch; exits with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T, E: fmt::Display>(r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| UsageError(e.to_string()).into())
}

struct Ctx<'a> {
    seed: u64,
    no_header: bool,
    argv: &'a [String],
}

impl Ctx<'_> {
    /// Provenance comment lines, followed by `extra` metadata. The echoed
    /// command leaves out `--threads`, which never changes an artifact.
    fn header(&self, extra: &[String]) -> Vec<String> {
        let mut args = Vec::new();
        let mut skip = false;
        for a in &self.argv[1..] {
            if skip {
                skip = false;
            } else if a == "--threads" {
                skip = true;
            } else if !a.starts_with("--threads=") {
                args.push(a.as_str());
            }
        }
        let mut h = vec![format!("nestnet {}", args.join(" ")), format!("seed {}", self.seed)];
        if !self.no_header {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            h.push(format!("created unix:{secs}"));
        }
        h.extend_from_slice(extra);
        h
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

fn write(path: &str, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {path}"))
}

fn comments(lines: &[String]) -> String {
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

fn read_graph(path: &str) -> Result<Graph> {
    load_graph(&read(path)?).with_context(|| format!("invalid graph file {path}"))
}

fn read_table(path: &str) -> Result<RoutingTable> {
    RoutingTable::parse(&read(path)?).with_context(|| format!("invalid routing table {path}"))
}

fn ratio<T: fmt::Display>(r: &Ratio<T>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn decimal(numer: f64, denom: f64) -> String {
    format!("{:.4}", numer / denom)
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(UsageError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot start thread pool")?;
    }
    let ctx = Ctx {
        seed: cli.seed,
        no_header: cli.no_header,
        argv,
    };
    match &cli.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Search(a) => search(&ctx, a),
        Command::Metrics(a) => metrics(&ctx, a),
        Command::Product(a) => product(&ctx, a),
        Command::Route(a) => route(&ctx, a),
        Command::Compose(a) => compose(&ctx, a),
        Command::Simulate(a) => simulate_cmd(&ctx, a),
        Command::Compare(a) => compare(a),
    }
}

fn gen(ctx: &Ctx, a: &GenArgs) -> Result<()> {
    let g = match (&a.name, a.n, a.k) {
        (Some(name), _, _) => named_graph(usage(name.parse::<NamedGraph>())?)?,
        (None, Some(n), Some(k)) => random_regular(n, k, ctx.seed)?,
        _ => return Err(UsageError("give --name or both --n and --k".into()).into()),
    };
    write(&a.out, &save_graph_with_comments(&g, &ctx.header(&[])))?;
    println!("n={} edges={}", g.n(), g.edge_count());
    Ok(())
}

fn search(ctx: &Ctx, a: &SearchArgs) -> Result<()> {
    let cfg = SearchConfig {
        budget: a.budget,
        restarts: a.restarts,
        ..SearchConfig::new(a.n, a.k, ctx.seed)
    };
    let r = search_optimal(&cfg)?;
    let bound = moore_mpl_bound(a.n, a.k);
    let meta = vec![
        format!("n={}", a.n),
        format!("k={}", a.k),
        format!("seed={}", ctx.seed),
        format!("mpl={}", ratio(&r.mpl)),
        format!("mpl_decimal={}", decimal(*r.mpl.numer() as f64, *r.mpl.denom() as f64)),
        format!("diameter={}", r.diameter),
        format!("moore_bound={}", ratio(&bound)),
        format!("hit_lower_bound={}", r.hit_lower_bound),
        format!("evaluations={}", r.evaluations_used),
        format!("restart={}", r.restart),
    ];
    write(&a.out, &save_graph_with_comments(&r.graph, &ctx.header(&meta)))?;
    for m in meta {
        println!("{m}");
    }
    Ok(())
}

fn metrics(ctx: &Ctx, a: &MetricsArgs) -> Result<()> {
    let mode: BisectionMode = usage(a.bisection.parse())?;
    let g = read_graph(&a.graph)?;
    let m = GraphMetrics::compute(&g, mode, ctx.seed)?;
    let k = m.degree.map_or("irregular".to_string(), |k| k.to_string());
    let kind = match m.bisection.exactness {
        Exactness::Exact => "exact",
        Exactness::HeuristicUpperBound => "heuristic_upper_bound",
    };
    println!(
        "N={} K={k} D={} MPL={:.2} MPL_exact={} BW={} BW_kind={kind}",
        m.n,
        m.diameter,
        *m.mpl.numer() as f64 / *m.mpl.denom() as f64,
        ratio(&m.mpl),
        m.bisection.width
    );
    Ok(())
}

fn product(ctx: &Ctx, a: &ProductArgs) -> Result<()> {
    let factors: Vec<Graph> = a.factors.iter().map(|f| read_graph(f)).collect::<Result<_>>()?;
    let pg: ProductGraph = match a.power {
        Some(alpha) => {
            if factors.len() != 1 {
                return Err(UsageError("--power takes exactly one --factor".into()).into());
            }
            folded_power(&factors[0], alpha)?
        }
        None => product_of(&factors)?,
    };
    let radices: Vec<String> = pg.radices().iter().map(usize::to_string).collect();
    let meta = vec![format!("radices {}", radices.join(" "))];
    write(&a.out, &save_graph_with_comments(pg.graph(), &ctx.header(&meta)))?;
    if let Some(path) = &a.labels {
        write(path, &(comments(&ctx.header(&meta)) + &pg.label_map()))?;
    }
    let report = verify_product_properties(&pg);
    print!("{report}");
    println!("n={} edges={}", pg.graph().n(), pg.graph().edge_count());
    if !report.all_hold() {
        anyhow::bail!("product laws violated");
    }
    Ok(())
}

fn profile_meta(p: &LoadProfile) -> Vec<String> {
    vec![
        format!("objective={}", ratio(&p.objective)),
        format!("max_load={}", p.max()),
        format!("min_load={}", p.min()),
        format!("total_load={}", p.total),
    ]
}

fn route(ctx: &Ctx, a: &RouteArgs) -> Result<()> {
    let mode: DemandMode = usage(a.mode.parse())?;
    let solver: Solver = usage(a.solver.parse())?;
    let g = read_graph(&a.input)?;
    let mut meta = vec![format!("mode={mode}"), format!("algo={}", a.algo)];
    let (table, profile) = match a.algo.as_str() {
        "floyd" => {
            let t = floyd_routing(&g, mode);
            let p = t.load_profile();
            (t, p)
        }
        "balanced" => {
            let cfg = LocalConfig {
                restarts: a.restarts,
                steps: a.steps,
                ..LocalConfig::default()
            };
            let b = balanced_routing(&g, mode, a.cap, solver, ctx.seed, &cfg)?;
            meta.push(format!("solver={}", b.solver));
            meta.push(format!("free_groups={}", b.free_groups));
            (b.table, b.profile)
        }
        other => return Err(UsageError(format!("unknown algorithm '{other}', expected balanced or floyd")).into()),
    };
    meta.push(format!("demands={}", table.routes().len()));
    meta.extend(profile_meta(&profile));
    write(&a.out, &table.export_with_comments(&ctx.header(&meta)))?;
    if let Some(path) = &a.loads {
        write(path, &(comments(&ctx.header(&[])) + &profile.report()))?;
    }
    for m in meta {
        println!("{m}");
    }
    Ok(())
}

fn compose(ctx: &Ctx, a: &ComposeArgs) -> Result<()> {
    let order: ComposeOrder = usage(a.order.parse())?;
    if a.factors.len() < 2 {
        return Err(UsageError("compose needs at least two --factor files".into()).into());
    }
    let factors: Vec<Graph> = a.factors.iter().map(|f| read_graph(f)).collect::<Result<_>>()?;
    let pg = product_of(&factors)?;
    let r1 = read_table(&a.r1)?;
    let r2 = read_table(&a.r2)?;
    let t = compose_product_routing(&r1, &r2, &pg, order)?;
    let p = t.load_profile();
    let mut meta = vec![format!("order={order}"), format!("demands={}", t.routes().len())];
    meta.extend(profile_meta(&p));
    write(&a.out, &t.export_with_comments(&ctx.header(&meta)))?;
    if let Some(path) = &a.loads {
        write(path, &(comments(&ctx.header(&[])) + &p.report()))?;
    }
    for m in meta {
        println!("{m}");
    }
    Ok(())
}

fn traffic(a: &TrafficArgs, table: &RoutingTable) -> Result<(Graph, TrafficSpec)> {
    let g = match &a.graph {
        Some(path) => read_graph(path)?,
        None => table.infer_graph().context("cannot infer the graph from the table")?,
    };
    let spec = TrafficSpec {
        flow: a.flow,
        link_capacity: a.capacity,
        per_hop_latency: a.latency,
    };
    usage(spec.validate())?;
    Ok((g, spec))
}

fn simulate_cmd(ctx: &Ctx, a: &SimulateArgs) -> Result<()> {
    let t = read_table(&a.table)?;
    let (g, spec) = traffic(&a.traffic, &t)?;
    let r = simulate(&t, &g, &spec, a.traffic.message_size)?;
    print!("{}", r.key_values(""));
    if let Some(path) = &a.node_csv {
        write(path, &(comments(&ctx.header(&[])) + &r.node_csv()))?;
    }
    if let Some(path) = &a.link_csv {
        write(path, &(comments(&ctx.header(&[])) + &r.link_csv()))?;
    }
    Ok(())
}

fn compare(a: &CompareArgs) -> Result<()> {
    let ta = read_table(&a.a)?;
    let tb = read_table(&a.b)?;
    let (g, spec) = traffic(&a.traffic, &ta)?;
    let c = compare_report(&ta, &tb, &g, &spec, a.traffic.message_size)?;
    print!("{}", c.text_table(&a.name_a, &a.name_b));
    println!();
    print!("{}", c.key_values());
    Ok(())
}
