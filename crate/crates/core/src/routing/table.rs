//! Static source-routing tables and their text format.
//!
//! ```text
//! ROUTES <mode> <N> <num_demands>
//! src dst len v0 v1 ... v_len
//! ```
//!
//! Lines are sorted by `(src, dst)`. In unordered mode only `src < dst`
//! appears and the reverse direction uses the reversed path.

use std::fmt::Write as _;

use crate::graph::Graph;

use super::model::{LoadProfile, RoutingModel, Selection};
use super::{DemandMode, Path, RoutingError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub src: usize,
    pub dst: usize,
    pub path: Path,
}

impl Route {
    pub fn hops(&self) -> usize {
        self.path.len() - 1
    }

    pub fn interior(&self) -> &[usize] {
        &self.path[1..self.path.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTable {
    mode: DemandMode,
    n: usize,
    routes: Vec<Route>,
}

impl RoutingTable {
    pub(crate) fn from_sorted_routes(mode: DemandMode, n: usize, routes: Vec<Route>) -> Self {
        debug_assert!(routes.windows(2).all(|w| (w[0].src, w[0].dst) < (w[1].src, w[1].dst)));
        RoutingTable { mode, n, routes }
    }

    /// The table realising `sel` on `model`.
    pub fn from_selection(model: &RoutingModel, sel: &Selection) -> Result<Self, RoutingError> {
        model.validate(sel)?;
        let routes = model
            .groups()
            .iter()
            .zip(&sel.chosen)
            .enumerate()
            .map(|(m, (g, &c))| Route {
                src: g.demand.src,
                dst: g.demand.dst,
                path: model.candidates(m)[c as usize].clone(),
            })
            .collect();
        Ok(Self::from_sorted_routes(model.mode(), model.n(), routes))
    }

    pub fn mode(&self) -> DemandMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    fn find(&self, src: usize, dst: usize) -> Option<&Route> {
        self.routes
            .binary_search_by(|r| (r.src, r.dst).cmp(&(src, dst)))
            .ok()
            .map(|i| &self.routes[i])
    }

    /// Route for the stored demand `(src, dst)` without reversal.
    pub(crate) fn stored(&self, src: usize, dst: usize) -> Option<&Route> {
        self.find(src, dst)
    }

    /// Vertex sequence used to go from `src` to `dst`.
    pub fn path(&self, src: usize, dst: usize) -> Option<Path> {
        if let Some(r) = self.find(src, dst) {
            return Some(r.path.clone());
        }
        match self.mode {
            DemandMode::Unordered => self.find(dst, src).map(|r| r.path.iter().rev().copied().collect()),
            DemandMode::Ordered => None,
        }
    }

    /// Next vertex after `at` on the way from `src` to `dst`, for `at` on
    /// that route.
    pub fn next_hop(&self, src: usize, dst: usize, at: usize) -> Option<usize> {
        let p = self.path(src, dst)?;
        let i = p.iter().position(|&v| v == at)?;
        p.get(i + 1).copied()
    }

    /// Forwarding load per node: routes passing strictly through it.
    pub fn node_loads(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.n];
        for r in &self.routes {
            for &v in r.interior() {
                d[v] += 1;
            }
        }
        d
    }

    pub fn load_profile(&self) -> LoadProfile {
        LoadProfile::from_loads(self.node_loads())
    }

    pub fn diameter(&self) -> usize {
        self.routes.iter().map(Route::hops).max().unwrap_or(0)
    }

    /// Expands an unordered table into both directions.
    pub fn to_ordered(&self) -> RoutingTable {
        if self.mode == DemandMode::Ordered {
            return self.clone();
        }
        let mut routes: Vec<Route> = self
            .routes
            .iter()
            .flat_map(|r| {
                let back = Route {
                    src: r.dst,
                    dst: r.src,
                    path: r.path.iter().rev().copied().collect(),
                };
                [r.clone(), back]
            })
            .collect();
        routes.sort_by_key(|r| (r.src, r.dst));
        Self::from_sorted_routes(DemandMode::Ordered, self.n, routes)
    }

    /// Graph spanned by the one-hop routes. Every edge of the underlying
    /// graph is itself an all-to-all demand, so this recovers it exactly.
    pub fn infer_graph(&self) -> Result<Graph, RoutingError> {
        let edges = self
            .routes
            .iter()
            .filter(|r| r.hops() == 1 && r.src < r.dst)
            .map(|r| (r.src, r.dst));
        Ok(Graph::from_edges(self.n, edges)?)
    }

    /// Checks completeness, adjacency and shortestness against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), RoutingError> {
        if g.n() != self.n {
            return Err(RoutingError::SizeMismatch {
                table: self.n,
                graph: g.n(),
            });
        }
        let mut it = self.routes.iter().peekable();
        for src in 0..self.n {
            let dist = g.bfs_distances(src);
            for dst in (0..self.n).filter(|&t| self.mode.includes(src, t)) {
                let r = match it.peek() {
                    Some(r) if (r.src, r.dst) == (src, dst) => it.next().unwrap(),
                    Some(r) if (r.src, r.dst) < (src, dst) => {
                        return Err(RoutingError::DuplicateDemand { src: r.src, dst: r.dst })
                    }
                    _ => return Err(RoutingError::MissingDemand { src, dst }),
                };
                if r.path.first() != Some(&src) || r.path.last() != Some(&dst) {
                    return Err(RoutingError::WrongEndpoints { src, dst });
                }
                if let Some(w) = r.path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
                    return Err(RoutingError::NotAdjacent { src, dst, a: w[0], b: w[1] });
                }
                if r.hops() != dist[dst] as usize {
                    return Err(RoutingError::NotShortest {
                        src,
                        dst,
                        len: r.hops(),
                        dist: dist[dst],
                    });
                }
            }
        }
        if let Some(r) = it.next() {
            return Err(RoutingError::DuplicateDemand { src: r.src, dst: r.dst });
        }
        Ok(())
    }

    pub fn export(&self) -> String {
        self.export_with_comments(&[])
    }

    pub fn export_with_comments(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "ROUTES {} {} {}", self.mode, self.n, self.routes.len());
        for r in &self.routes {
            let _ = write!(out, "{} {} {}", r.src, r.dst, r.hops());
            for v in &r.path {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format without a graph; structural checks only.
    pub fn parse(text: &str) -> Result<Self, RoutingError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| RoutingError::Parse { line, message };

        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing ROUTES header".into()))?;
        let fields: Vec<&str> = header.split_ascii_whitespace().collect();
        if fields.len() != 4 || fields[0] != "ROUTES" {
            return Err(perr(hl, "expected 'ROUTES <mode> <N> <num_demands>'".into()));
        }
        let mode: DemandMode = fields[1].parse().map_err(|e: String| perr(hl, e))?;
        let n: usize = fields[2].parse().map_err(|_| perr(hl, "invalid N".into()))?;
        let count: usize = fields[3].parse().map_err(|_| perr(hl, "invalid demand count".into()))?;

        let mut routes = Vec::with_capacity(count);
        for (ln, line) in lines {
            let nums: Vec<usize> = line
                .split_ascii_whitespace()
                .map(|t| t.parse().map_err(|_| perr(ln, format!("invalid integer '{t}'"))))
                .collect::<Result<_, _>>()?;
            if nums.len() < 3 || nums.len() != nums[2] + 4 {
                return Err(perr(ln, "expected 'src dst len v0 .. v_len'".into()));
            }
            let (src, dst) = (nums[0], nums[1]);
            let path = nums[3..].to_vec();
            if let Some(&v) = path.iter().find(|&&v| v >= n) {
                return Err(perr(ln, format!("vertex {v} out of range for N={n}")));
            }
            if !mode.includes(src, dst) {
                return Err(perr(ln, format!("demand {src} {dst} not valid in {mode} mode")));
            }
            if path[0] != src || path[path.len() - 1] != dst {
                return Err(RoutingError::WrongEndpoints { src, dst });
            }
            if let Some(prev) = routes.last().map(|r: &Route| (r.src, r.dst)) {
                if prev >= (src, dst) {
                    return Err(RoutingError::DuplicateDemand { src, dst });
                }
            }
            routes.push(Route { src, dst, path });
        }
        if routes.len() != count {
            return Err(perr(
                0,
                format!("header declares {count} demands, found {}", routes.len()),
            ));
        }
        Ok(RoutingTable { mode, n, routes })
    }

    /// Parses and validates against `g`.
    pub fn import(text: &str, g: &Graph) -> Result<Self, RoutingError> {
        let t = Self::parse(text)?;
        t.validate(g)?;
        Ok(t)
    }
}
