//! Minimum balanced edge cut.
//!
//! Small graphs are bisected exactly by enumerating every balanced vertex
//! subset as a bitmask. Larger graphs use Kernighan-Lin refinement from
//! seeded random partitions; the result is then only an upper bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Graph, GraphError};

/// Largest graph accepted by [`BisectionMode::Exact`].
pub const MAX_EXACT_BISECTION: usize = 28;
/// `Auto` switches to the heuristic above this size.
const AUTO_EXACT_LIMIT: usize = 20;
const HEURISTIC_RESTARTS: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BisectionMode {
    #[default]
    Auto,
    Exact,
    Heuristic,
}

impl std::str::FromStr for BisectionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "exact" => Ok(Self::Exact),
            "heuristic" => Ok(Self::Heuristic),
            _ => Err(format!("unknown bisection mode '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    HeuristicUpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    pub width: usize,
    pub exactness: Exactness,
    /// `true` for vertices on the smaller (`n / 2`) side.
    pub side: Vec<bool>,
}

pub fn bisection_width(g: &Graph, mode: BisectionMode, seed: u64) -> Result<Bisection, GraphError> {
    let n = g.n();
    match mode {
        BisectionMode::Exact if n > MAX_EXACT_BISECTION => Err(GraphError::ExactBisectionTooLarge {
            n,
            max: MAX_EXACT_BISECTION,
        }),
        BisectionMode::Exact => Ok(exact(g)),
        BisectionMode::Auto if n <= AUTO_EXACT_LIMIT => Ok(exact(g)),
        _ => Ok(heuristic(g, seed)),
    }
}

fn cut_size(g: &Graph, side: &[bool]) -> usize {
    g.edges().filter(|&(u, v)| side[u] != side[v]).count()
}

fn exact(g: &Graph) -> Bisection {
    let n = g.n();
    let half = n / 2;
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let cut = |set: u32| -> usize {
        let outside = !set & full;
        let mut rest = set;
        let mut c = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            c += (adj[v] & outside).count_ones() as usize;
        }
        c
    };

    if half == 0 {
        return Bisection {
            width: 0,
            exactness: Exactness::Exact,
            side: vec![false; n],
        };
    }

    // With equal halves vertex 0 can be pinned to the enumerated side.
    let (free_bits, pick, pinned) = if n % 2 == 0 {
        (n - 1, half - 1, 1u32)
    } else {
        (n, half, 0u32)
    };
    let to_set = |c: u32| if pinned == 1 { (c << 1) | 1 } else { c };

    let mut best = (usize::MAX, 0u32);
    if pick == 0 {
        best = (cut(pinned), pinned);
    } else {
        let limit = 1u64 << free_bits;
        let mut c: u32 = (1u32 << pick) - 1;
        loop {
            let set = to_set(c);
            let w = cut(set);
            if w < best.0 {
                best = (w, set);
            }
            // Gosper's hack: next integer with the same popcount.
            let low = c & c.wrapping_neg();
            let ripple = c as u64 + low as u64;
            if ripple >= limit {
                break;
            }
            let ripple = ripple as u32;
            c = (((ripple ^ c) >> 2) / low) | ripple;
        }
    }
    Bisection {
        width: best.0,
        exactness: Exactness::Exact,
        side: (0..n).map(|v| best.1 >> v & 1 == 1).collect(),
    }
}

fn heuristic(g: &Graph, seed: u64) -> Bisection {
    let (width, side) = (0..HEURISTIC_RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ r);
            let mut order: Vec<usize> = (0..g.n()).collect();
            order.shuffle(&mut rng);
            let mut side = vec![false; g.n()];
            for &v in &order[..g.n() / 2] {
                side[v] = true;
            }
            kernighan_lin(g, &mut side);
            (cut_size(g, &side), side)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .min_by_key(|(w, _)| *w)
        .expect("at least one restart");
    Bisection {
        width,
        exactness: Exactness::HeuristicUpperBound,
        side,
    }
}

/// Pairwise-swap refinement; keeps partition sizes fixed.
fn kernighan_lin(g: &Graph, side: &mut [bool]) {
    let n = g.n();
    let w = |a: usize, b: usize| g.has_edge(a, b) as i64;
    loop {
        let mut gain: Vec<i64> = (0..n)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&u| if side[u] != side[v] { 1 } else { -1 })
                    .sum()
            })
            .collect();
        let mut locked = vec![false; n];
        let mut swaps = Vec::new();
        let mut running = 0i64;
        let mut best_prefix = (0i64, 0usize);

        let steps = (n / 2).min(n - n / 2);
        for _ in 0..steps {
            let mut pick: Option<(i64, usize, usize)> = None;
            for a in (0..n).filter(|&a| side[a] && !locked[a]) {
                for b in (0..n).filter(|&b| !side[b] && !locked[b]) {
                    let gab = gain[a] + gain[b] - 2 * w(a, b);
                    if pick.is_none_or(|(best, _, _)| gab > best) {
                        pick = Some((gab, a, b));
                    }
                }
            }
            let Some((gab, a, b)) = pick else { break };
            locked[a] = true;
            locked[b] = true;
            for x in 0..n {
                if locked[x] {
                    continue;
                }
                let delta = 2 * w(x, a) - 2 * w(x, b);
                gain[x] += if side[x] { delta } else { -delta };
            }
            running += gab;
            swaps.push((a, b));
            if running > best_prefix.0 {
                best_prefix = (running, swaps.len());
            }
        }
        if best_prefix.0 <= 0 {
            return;
        }
        for &(a, b) in &swaps[..best_prefix.1] {
            side[a] = false;
            side[b] = true;
        }
    }
}
