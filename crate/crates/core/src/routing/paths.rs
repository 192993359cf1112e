use crate::graph::Graph;

use super::{Path, RoutingError};

/// BFS layers from one source with shortest-path counts; predecessors of `v`
/// are the neighbors one layer closer to the source.
pub(crate) struct ShortestPathDag<'g> {
    graph: &'g Graph,
    source: usize,
    dist: Vec<u32>,
    count: Vec<u64>,
}

impl<'g> ShortestPathDag<'g> {
    pub fn new(graph: &'g Graph, source: usize) -> Self {
        let dist = graph.bfs_distances(source);
        let mut order: Vec<usize> = (0..graph.n()).filter(|&v| dist[v] != u32::MAX).collect();
        order.sort_by_key(|&v| dist[v]);
        let mut count = vec![0u64; graph.n()];
        count[source] = 1;
        for &v in &order[1..] {
            count[v] = graph
                .neighbors(v)
                .iter()
                .filter(|&&w| dist[w] != u32::MAX && dist[w] + 1 == dist[v])
                .fold(0u64, |acc, &w| acc.saturating_add(count[w]));
        }
        ShortestPathDag {
            graph,
            source,
            dist,
            count,
        }
    }

    /// All shortest paths to `t`, lexicographically sorted.
    pub fn paths(&self, t: usize, cap: usize) -> Result<Vec<Path>, RoutingError> {
        let count = self.count[t];
        if count > cap as u64 {
            return Err(RoutingError::PathExplosion {
                src: self.source,
                dst: t,
                count,
                cap,
            });
        }
        let len = self.dist[t] as usize;
        let mut out = Vec::with_capacity(count as usize);
        let mut stack = vec![0usize; len + 1];
        self.walk_back(t, len, &mut stack, &mut out);
        out.sort_unstable();
        Ok(out)
    }

    fn walk_back(&self, v: usize, pos: usize, stack: &mut Vec<usize>, out: &mut Vec<Path>) {
        stack[pos] = v;
        if pos == 0 {
            out.push(stack.clone());
            return;
        }
        for &w in self.graph.neighbors(v) {
            if self.dist[w] != u32::MAX && self.dist[w] + 1 == self.dist[v] {
                self.walk_back(w, pos - 1, stack, out);
            }
        }
    }
}

/// Every distinct shortest path from `s` to `t`, in lexicographic order.
///
/// Fails instead of truncating when there are more than `cap` paths.
pub fn all_shortest_paths(g: &Graph, s: usize, t: usize, cap: usize) -> Result<Vec<Path>, RoutingError> {
    if s == t {
        return Err(RoutingError::SameEndpoints(s));
    }
    ShortestPathDag::new(g, s).paths(t, cap.max(1))
}
