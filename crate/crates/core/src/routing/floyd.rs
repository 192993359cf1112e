use crate::graph::Graph;

use super::{DemandMode, Path, Route, RoutingTable};

const UNREACHED: u32 = u32::MAX / 2;

/// Single-path baseline from Floyd-Warshall.
///
/// Intermediate vertices are tried in ascending order and a next hop only
/// changes on a strict improvement, so among equal-length paths the one
/// through the earliest pivot wins. Initial next hops are the direct edges.
pub fn floyd_routing(g: &Graph, mode: DemandMode) -> RoutingTable {
    let n = g.n();
    let mut dist = vec![UNREACHED; n * n];
    let mut next = vec![usize::MAX; n * n];
    for u in 0..n {
        dist[u * n + u] = 0;
        next[u * n + u] = u;
        for &v in g.neighbors(u) {
            dist[u * n + v] = 1;
            next[u * n + v] = v;
        }
    }
    for k in 0..n {
        let row_k: Vec<u32> = dist[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik >= UNREACHED {
                continue;
            }
            let hop = next[i * n + k];
            let row_i = &mut dist[i * n..(i + 1) * n];
            let next_i = &mut next[i * n..(i + 1) * n];
            for j in 0..n {
                let via = dik + row_k[j];
                if via < row_i[j] {
                    row_i[j] = via;
                    next_i[j] = hop;
                }
            }
        }
    }

    let routes = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .filter(|&(s, t)| mode.includes(s, t))
        .map(|(src, dst)| {
            let mut path: Path = vec![src];
            let mut at = src;
            while at != dst {
                at = next[at * n + dst];
                path.push(at);
            }
            Route { src, dst, path }
        })
        .collect();
    RoutingTable::from_sorted_routes(mode, n, routes)
}
