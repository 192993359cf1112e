//! Search for `(n, k)`-regular graphs with minimal mean path length.
//!
//! Each restart draws a random connected regular graph and anneals it with
//! degree-preserving double edge swaps. The objective is the integer sum of
//! distances over vertex pairs, evaluated by a bitset BFS that advances the
//! reach sets of all sources one level at a time.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::anneal::{Schedule, Thermostat};
use crate::graph::{Graph, Mpl};

pub const MAX_SEARCH_VERTICES: usize = 64;
pub const DEFAULT_BUDGET: u64 = 2_000_000;
pub const DEFAULT_RESTARTS: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("n*k must be even (n={n}, k={k})")]
    OddDegreeSum { n: usize, k: usize },
    #[error("degree {k} invalid for {n} vertices; need 2 <= k < n")]
    BadDegree { n: usize, k: usize },
    #[error("search supports at most {MAX_SEARCH_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("no connected {k}-regular graph on {n} vertices found (seed {seed})")]
    GenerationFailed { n: usize, k: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    /// Total objective evaluations, split evenly across restarts.
    pub budget: u64,
    pub restarts: u32,
    pub seed: u64,
    pub schedule: Schedule,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        SearchConfig {
            n,
            k,
            budget: DEFAULT_BUDGET,
            restarts: DEFAULT_RESTARTS,
            seed,
            schedule: Schedule::new(2.0, 0.97, 1000),
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        check_degree(self.n, self.k)?;
        if self.n > MAX_SEARCH_VERTICES {
            return Err(SearchError::TooManyVertices(self.n));
        }
        if self.budget == 0 {
            return Err(SearchError::InvalidConfig("budget must be positive"));
        }
        if self.restarts == 0 {
            return Err(SearchError::InvalidConfig("restarts must be positive"));
        }
        if !self.schedule.is_valid() {
            return Err(SearchError::InvalidConfig("schedule"));
        }
        Ok(())
    }
}

fn check_degree(n: usize, k: usize) -> Result<(), SearchError> {
    if k < 2 || k >= n {
        return Err(SearchError::BadDegree { n, k });
    }
    if n * k % 2 != 0 {
        return Err(SearchError::OddDegreeSum { n, k });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub graph: Graph,
    pub mpl: Mpl,
    pub diameter: u32,
    pub evaluations_used: u64,
    pub hit_lower_bound: bool,
    /// Restart that produced `graph`.
    pub restart: u32,
    /// `(evaluation, best unordered distance total)` each time the winning
    /// restart improved.
    pub trace: Vec<(u64, u64)>,
}

/// Distance distribution of an ideal Moore-like ball: `k` vertices at
/// distance 1, `k(k-1)` at distance 2 and so on until `n - 1` are placed.
/// Returns the sum of those distances.
fn moore_distance_sum(n: usize, k: usize) -> u64 {
    let mut remaining = n.saturating_sub(1) as u64;
    let mut layer = k as u64;
    let mut dist = 1u64;
    let mut sum = 0;
    while remaining > 0 {
        let take = layer.min(remaining);
        sum += take * dist;
        remaining -= take;
        layer = layer.saturating_mul((k as u64).saturating_sub(1)).max(1);
        dist += 1;
    }
    sum
}

/// Lower bound on the mean path length of any `k`-regular graph on `n`
/// vertices.
pub fn moore_mpl_bound(n: usize, k: usize) -> Mpl {
    if n < 2 {
        return Ratio::from_integer(0);
    }
    Ratio::new(moore_distance_sum(n, k), n as u64 - 1)
}

/// Bitset adjacency with an explicit edge list, for swap-based search.
#[derive(Clone, Debug)]
struct SwapState {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl SwapState {
    fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64);
        let mut s = SwapState {
            n,
            words,
            rows: vec![0; n * words],
            edges: g.edges().collect(),
        };
        for (u, v) in s.edges.clone() {
            s.set(u, v, true);
        }
        s
    }

    fn to_graph(&self) -> Graph {
        let mut edges = self.edges.clone();
        for e in &mut edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        Graph::from_edges(self.n, edges).expect("swap state is a connected simple graph")
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        for (a, b) in [(u, v), (v, u)] {
            let w = &mut self.rows[a * self.words + b / 64];
            if on {
                *w |= 1 << (b % 64);
            } else {
                *w &= !(1 << (b % 64));
            }
        }
    }

    /// Rewires edges `i = (a,b)` and `j = (c,d)` into `(a,c),(b,d)` when
    /// `cross` is false, or `(a,d),(b,c)` otherwise. Returns false and leaves
    /// the state unchanged if the result would not be simple.
    fn try_swap(&mut self, i: usize, j: usize, cross: bool) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = self.edges[i];
        let (c, d) = if cross {
            (self.edges[j].1, self.edges[j].0)
        } else {
            self.edges[j]
        };
        if a == c || b == d || a == d || b == c {
            return false;
        }
        if self.has(a, c) || self.has(b, d) {
            return false;
        }
        self.set(a, b, false);
        self.set(c, d, false);
        self.set(a, c, true);
        self.set(b, d, true);
        self.edges[i] = (a, c);
        self.edges[j] = (b, d);
        true
    }

    /// Exact inverse of a successful `try_swap(i, j, cross)`.
    fn undo_swap(&mut self, i: usize, j: usize, cross: bool) {
        let (a, c) = self.edges[i];
        let (b, d) = self.edges[j];
        self.set(a, c, false);
        self.set(b, d, false);
        self.set(a, b, true);
        self.set(c, d, true);
        self.edges[i] = (a, b);
        self.edges[j] = if cross { (d, c) } else { (c, d) };
    }

    /// Sum of distances over ordered pairs, `None` when disconnected.
    fn ordered_distance_total(&self, reach: &mut Vec<u64>, next: &mut Vec<u64>) -> Option<u64> {
        let (n, w) = (self.n, self.words);
        reach.clear();
        reach.resize(n * w, 0);
        for v in 0..n {
            reach[v * w + v / 64] |= 1 << (v % 64);
        }
        let target = (n * n) as u64;
        let mut covered = n as u64;
        let mut total = 0u64;
        while covered < target {
            total += target - covered;
            next.clear();
            next.extend_from_slice(reach);
            for v in 0..n {
                let row = self.row(v);
                for (wi, &bits) in row.iter().enumerate() {
                    let mut bits = bits;
                    while bits != 0 {
                        let u = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        for k in 0..w {
                            next[v * w + k] |= reach[u * w + k];
                        }
                    }
                }
            }
            let now: u64 = next.iter().map(|x| x.count_ones() as u64).sum();
            if now == covered {
                return None;
            }
            covered = now;
            std::mem::swap(reach, next);
        }
        Some(total)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if !seen[u] && self.has(v, u) {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }
}

enum Multigraph {
    Simple(Vec<(usize, usize)>),
    Stuck,
}

/// Pairs `k` stubs per vertex uniformly, then repairs loops and parallel
/// edges with random swaps.
fn pair_stubs<R: Rng>(n: usize, k: usize, rng: &mut R) -> Multigraph {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    stubs.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
    let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    for &e in &edges {
        *counts.entry(key(e)).or_default() += 1;
    }
    let bad = |e: (usize, usize), counts: &HashMap<(usize, usize), u32>| {
        e.0 == e.1 || counts[&key(e)] > 1
    };
    for _ in 0..100 * n * k {
        let Some(i) = (0..edges.len()).find(|&i| bad(edges[i], &counts)) else {
            return Multigraph::Simple(edges.into_iter().map(key).collect());
        };
        let j = rng.gen_range(0..edges.len());
        let (a, b) = edges[i];
        let (c, d) = if rng.gen() { edges[j] } else { (edges[j].1, edges[j].0) };
        if i == j || a == c || b == d || counts.contains_key(&key((a, c))) || counts.contains_key(&key((b, d))) {
            continue;
        }
        for e in [edges[i], edges[j]] {
            let c = counts.get_mut(&key(e)).unwrap();
            *c -= 1;
            if *c == 0 {
                counts.remove(&key(e));
            }
        }
        edges[i] = (a, c);
        edges[j] = (b, d);
        for e in [edges[i], edges[j]] {
            *counts.entry(key(e)).or_default() += 1;
        }
    }
    Multigraph::Stuck
}

/// Joins components by swapping one edge from each of two components into
/// two crossing edges. Each swap removes exactly one component.
fn connect_components(n: usize, edges: &mut [(usize, usize)]) {
    loop {
        let mut comp = vec![usize::MAX; n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges.iter() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut ncomp = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = ncomp;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = ncomp;
                        stack.push(w);
                    }
                }
            }
            ncomp += 1;
        }
        if ncomp == 1 {
            return;
        }
        let i = edges.iter().position(|e| comp[e.0] == 0).unwrap();
        let j = edges.iter().position(|e| comp[e.0] == 1).unwrap();
        let (a, b) = edges[i];
        let (c, d) = edges[j];
        edges[i] = (a.min(c), a.max(c));
        edges[j] = (b.min(d), b.max(d));
    }
}

fn random_regular_with<R: Rng>(n: usize, k: usize, rng: &mut R) -> Option<Graph> {
    for _ in 0..100 {
        if let Multigraph::Simple(mut edges) = pair_stubs(n, k, rng) {
            connect_components(n, &mut edges);
            return Graph::from_edges(n, edges).ok();
        }
    }
    None
}

/// A connected `k`-regular graph on `n` vertices drawn from the pairing model.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph, SearchError> {
    check_degree(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_with(n, k, &mut rng).ok_or(SearchError::GenerationFailed { n, k, seed })
}

/// One random degree-preserving rewiring. Proposals that would create loops,
/// parallel edges or disconnect the graph are resampled; after a bounded
/// number of rejections the input is returned unchanged.
pub fn double_edge_swap<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
    let mut state = SwapState::from_graph(g);
    let m = state.edges.len();
    if m < 2 {
        return g.clone();
    }
    for _ in 0..1000 {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let cross = rng.gen();
        if state.try_swap(i, j, cross) {
            if state.is_connected() {
                return state.to_graph().with_name_of(g);
            }
            state.undo_swap(i, j, cross);
        }
    }
    g.clone()
}

impl Graph {
    fn with_name_of(self, other: &Graph) -> Graph {
        match other.name() {
            Some(name) => self.with_name(name.to_string()),
            None => self,
        }
    }
}

struct RestartOutcome {
    best: SwapState,
    best_total: u64,
    evaluations: u64,
    trace: Vec<(u64, u64)>,
}

fn anneal_restart(cfg: &SearchConfig, restart: u32, share: u64, bound_total: u64) -> Result<RestartOutcome, SearchError> {
    let seed = cfg.seed ^ restart as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_regular_with(cfg.n, cfg.k, &mut rng).ok_or(SearchError::GenerationFailed {
        n: cfg.n,
        k: cfg.k,
        seed,
    })?;
    let mut state = SwapState::from_graph(&start);
    let (mut reach, mut next) = (Vec::new(), Vec::new());
    let mut current = state
        .ordered_distance_total(&mut reach, &mut next)
        .expect("generator returns connected graphs")
        / 2;
    let mut evaluations = 1u64;
    let mut best = state.clone();
    let mut best_total = current;
    let mut trace = vec![(evaluations, best_total)];
    let mut thermostat = Thermostat::new(cfg.schedule);
    let m = state.edges.len();
    let mut idle = 0u32;

    while evaluations < share && best_total > bound_total {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let cross = rng.gen();
        if !state.try_swap(i, j, cross) {
            idle += 1;
            if idle > 1_000_000 {
                break;
            }
            continue;
        }
        idle = 0;
        evaluations += 1;
        thermostat.tick();
        match state.ordered_distance_total(&mut reach, &mut next) {
            Some(total) => {
                let total = total / 2;
                let delta = total as i64 - current as i64;
                if thermostat.accept(delta, &mut rng) {
                    current = total;
                    if current < best_total {
                        best_total = current;
                        best = state.clone();
                        trace.push((evaluations, best_total));
                    }
                } else {
                    state.undo_swap(i, j, cross);
                }
            }
            None => state.undo_swap(i, j, cross),
        }
    }
    Ok(RestartOutcome {
        best,
        best_total,
        evaluations,
        trace,
    })
}

/// Anneals `cfg.restarts` independent chains. The best graph wins with ties
/// going to the lowest restart index, so the result does not depend on how
/// restarts are scheduled across threads.
pub fn search_optimal(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    let pairs = (cfg.n * (cfg.n - 1) / 2) as u64;
    // moore_distance_sum is per vertex; n * sum / 2 is the unordered total.
    let ordered_bound = cfg.n as u64 * moore_distance_sum(cfg.n, cfg.k);
    let bound_total = ordered_bound.div_ceil(2);
    let share = (cfg.budget / cfg.restarts as u64).max(1);

    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| anneal_restart(cfg, r, share, bound_total))
        .collect::<Result<Vec<_>, _>>()?;

    let evaluations_used = outcomes.iter().map(|o| o.evaluations).sum();
    let (restart, winner) = outcomes
        .into_iter()
        .enumerate()
        .min_by_key(|(i, o)| (o.best_total, *i))
        .expect("restarts > 0");
    let graph = winner.best.to_graph();
    let diameter = graph.diameter();
    let graph = graph.with_name(format!("({},{})-searched", cfg.n, cfg.k));
    Ok(SearchResult {
        mpl: Ratio::new(winner.best_total, pairs),
        diameter,
        evaluations_used,
        hit_lower_bound: 2 * winner.best_total == ordered_bound,
        restart: restart as u32,
        trace: winner.trace,
        graph,
    })
}
