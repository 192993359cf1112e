//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library except to build a `Graph` from an edge list.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use nestnet::Graph;

pub type Edges = Vec<(usize, usize)>;

/// Adjacency bits of a graph on at most 11 vertices, pair `(i, j)` with
/// `i < j` at bit `j * (j - 1) / 2 + i`.
fn pair_bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1 << (j * (j - 1) / 2 + i)
}

fn bits_of(edges: &[(usize, usize)]) -> u64 {
    edges.iter().fold(0, |b, &(u, v)| b | pair_bit(u, v))
}

fn edges_of(n: usize, bits: u64) -> Edges {
    let mut e = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if bits & pair_bit(i, j) != 0 {
                e.push((i, j));
            }
        }
    }
    e
}

/// Minimum relabelled bit string over all permutations that keep vertices
/// sorted by an isomorphism invariant (degree, then neighbour degrees).
fn canonical(n: usize, bits: u64) -> u64 {
    let adj = |a: usize, b: usize| a != b && bits & pair_bit(a, b) != 0;
    let deg: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| adj(u, v)).count()).collect();
    let inv: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = (0..n).filter(|&u| adj(u, v)).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // cells of equal invariant, permuted independently
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut label = vec![0usize; n];
    fn rec(
        cells: &mut [Vec<usize>],
        ci: usize,
        k: usize,
        pos: usize,
        label: &mut Vec<usize>,
        n: usize,
        bits: u64,
        best: &mut u64,
    ) {
        if ci == cells.len() {
            let mut out = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits & pair_bit(i, j) != 0 {
                        out |= pair_bit(label[i], label[j]);
                    }
                }
            }
            *best = (*best).min(out);
            return;
        }
        if k == cells[ci].len() {
            rec(cells, ci + 1, 0, pos, label, n, bits, best);
            return;
        }
        for i in k..cells[ci].len() {
            cells[ci].swap(k, i);
            label[cells[ci][k]] = pos;
            rec(cells, ci, k + 1, pos + 1, label, n, bits, best);
            cells[ci].swap(k, i);
        }
    }
    rec(&mut cells, 0, 0, 0, &mut label, n, bits, &mut best);
    best
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One edge list per isomorphism class of connected graphs on `n` vertices.
/// Every graph on `n` vertices is a smaller one plus a vertex, so classes
/// are grown vertex by vertex and deduplicated by canonical form.
pub fn connected_graphs(n: usize) -> Vec<Edges> {
    assert!((1..=9).contains(&n));
    let mut level: Vec<u64> = vec![0];
    for m in 1..n {
        let mut next = HashSet::new();
        for &b in &level {
            for mask in 0u64..1 << m {
                let mut nb = b;
                for i in 0..m {
                    if mask >> i & 1 == 1 {
                        nb |= pair_bit(i, m);
                    }
                }
                next.insert(canonical(m + 1, nb));
            }
        }
        level = next.into_iter().collect();
    }
    level.sort_unstable();
    level
        .into_iter()
        .map(|b| edges_of(n, b))
        .filter(|e| connected(n, e))
        .collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied()).expect("oracle graphs are simple and connected")
}

pub fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// Hop distances by plain BFS over an adjacency list.
pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if d[u] == usize::MAX {
                d[u] = d[v] + 1;
                q.push_back(u);
            }
        }
    }
    d
}

/// Mean path length as `(sum of distances, ordered pairs)`.
pub fn mpl(adj: &[Vec<usize>]) -> (u64, u64) {
    let n = adj.len();
    let sum: u64 = (0..n).map(|s| bfs(adj, s).iter().map(|&d| d as u64).sum::<u64>()).sum();
    (sum, (n * (n - 1)) as u64)
}

/// All simple `s`-`t` paths of the fewest edges, by depth-limited DFS with
/// increasing limit, in lexicographic order.
pub fn shortest_paths_dfs(adj: &[Vec<usize>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<usize>], t: usize, left: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for &u in &adj[v] {
            if !on[u] {
                on[u] = true;
                path.push(u);
                go(adj, t, left - 1, path, on, out);
                path.pop();
                on[u] = false;
            }
        }
    }
    for limit in 0..adj.len() {
        let mut out = Vec::new();
        let mut on = vec![false; adj.len()];
        on[s] = true;
        go(adj, t, limit, &mut vec![s], &mut on, &mut out);
        if !out.is_empty() {
            out.sort();
            return out;
        }
    }
    Vec::new()
}

/// Smallest `n * sum(d^2) - (sum d)^2` over every choice of one shortest
/// path per demand, where `d` counts interior vertices. Unordered demands
/// are `s < t`. Also returns the number of selections enumerated.
pub fn brute_force_balance(adj: &[Vec<usize>], ordered: bool) -> (i128, u128) {
    let n = adj.len();
    let mut base = vec![0i64; n];
    let mut groups: Vec<Vec<Vec<usize>>> = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s == t || (!ordered && t < s) {
                continue;
            }
            let ps: Vec<Vec<usize>> = shortest_paths_dfs(adj, s, t)
                .into_iter()
                .map(|p| p[1..p.len() - 1].to_vec())
                .collect();
            if ps.len() == 1 {
                for &v in &ps[0] {
                    base[v] += 1;
                }
            } else {
                groups.push(ps);
            }
        }
    }
    fn rec(groups: &[Vec<Vec<usize>>], i: usize, loads: &mut [i64], best: &mut i128, leaves: &mut u128) {
        if i == groups.len() {
            *leaves += 1;
            let n = loads.len() as i128;
            let s: i128 = loads.iter().map(|&d| d as i128).sum();
            let q: i128 = loads.iter().map(|&d| (d as i128) * (d as i128)).sum();
            *best = (*best).min(n * q - s * s);
            return;
        }
        for p in &groups[i] {
            p.iter().for_each(|&v| loads[v] += 1);
            rec(groups, i + 1, loads, best, leaves);
            p.iter().for_each(|&v| loads[v] -= 1);
        }
    }
    let mut best = i128::MAX;
    let mut leaves = 0;
    rec(&groups, 0, &mut base, &mut best, &mut leaves);
    (best, leaves)
}

/// Number of selections `brute_force_balance` would enumerate.
pub fn selection_count(adj: &[Vec<usize>], ordered: bool) -> u128 {
    let n = adj.len();
    let mut c: u128 = 1;
    for s in 0..n {
        for t in 0..n {
            if s != t && (ordered || s < t) {
                c = c.saturating_mul(shortest_paths_dfs(adj, s, t).len() as u128);
            }
        }
    }
    c
}

/// Interior-vertex loads of an explicit path list.
pub fn loads_of<'a>(n: usize, paths: impl IntoIterator<Item = &'a Vec<usize>>) -> Vec<u64> {
    let mut d = vec![0u64; n];
    for p in paths {
        if p.len() > 2 {
            p[1..p.len() - 1].iter().for_each(|&v| d[v] += 1);
        }
    }
    d
}

/// Minimum edge cut over balanced bipartitions, by enumeration.
pub fn brute_force_bisection(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let half = n / 2;
    let mut best = usize::MAX;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != half {
            continue;
        }
        let cut = (0..n)
            .flat_map(|u| adj[u].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v && (mask >> u & 1) != (mask >> v & 1))
            .count();
        best = best.min(cut);
    }
    best
}

/// Cheap deterministic generator for test inputs.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// Random connected graph: a random tree plus extra random edges.
pub fn random_connected(n: usize, extra: usize, rng: &mut SplitMix) -> Edges {
    let mut set = HashSet::new();
    for v in 1..n {
        let u = rng.below(v);
        set.insert((u, v));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_edges);
    while set.len() < target {
        let (a, b) = (rng.below(n), rng.below(n));
        if a != b {
            set.insert((a.min(b), a.max(b)));
        }
    }
    let mut e: Edges = set.into_iter().collect();
    e.sort_unstable();
    e
}

pub fn bits_canonical(n: usize, edges: &[(usize, usize)]) -> u64 {
    canonical(n, bits_of(edges))
}
