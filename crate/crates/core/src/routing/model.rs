use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::graph::Graph;

use super::paths::ShortestPathDag;
use super::{Demand, DemandMode, Path, RoutingError};

/// Default limit on candidate paths per demand.
pub const DEFAULT_PATH_CAP: usize = 4096;

/// The candidate paths of one demand, as a range of the model's path list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub demand: Demand,
    pub first: usize,
    pub count: usize,
}

/// Path-selection problem for one graph and demand mode.
///
/// `paths` is the global candidate list; group `m` owns
/// `paths[first..first + count]`. Path `j` contributes one unit of load to
/// each vertex strictly inside it.
#[derive(Debug, Clone)]
pub struct RoutingModel {
    n: usize,
    mode: DemandMode,
    groups: Vec<Group>,
    paths: Vec<Path>,
    free: Vec<usize>,
    fixed: Vec<u64>,
}

/// One chosen candidate index per group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub chosen: Vec<u32>,
}

impl Selection {
    /// First candidate everywhere.
    pub fn first(model: &RoutingModel) -> Self {
        Selection {
            chosen: vec![0; model.groups.len()],
        }
    }

    /// `s_j` as a 0/1 vector over the model's path list.
    pub fn indicator(&self, model: &RoutingModel) -> Vec<u8> {
        let mut s = vec![0; model.paths.len()];
        for (g, &c) in model.groups.iter().zip(&self.chosen) {
            s[g.first + c as usize] = 1;
        }
        s
    }
}

/// Node loads with the balance objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProfile {
    pub loads: Vec<u64>,
    /// `sum_n (d_n - mean)^2`, exact.
    pub objective: Ratio<i128>,
    pub sum_of_squares: u128,
    pub total: u64,
}

impl LoadProfile {
    pub fn from_loads(loads: Vec<u64>) -> Self {
        let total: u64 = loads.iter().sum();
        let sum_of_squares: u128 = loads.iter().map(|&d| (d as u128) * (d as u128)).sum();
        let objective = balance_objective(sum_of_squares, total, loads.len());
        LoadProfile {
            loads,
            objective,
            sum_of_squares,
            total,
        }
    }

    pub fn max(&self) -> u64 {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> u64 {
        self.loads.iter().copied().min().unwrap_or(0)
    }

    /// `node load` lines followed by `objective p/q`.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (v, d) in self.loads.iter().enumerate() {
            let _ = writeln!(out, "{v} {d}");
        }
        let _ = writeln!(
            out,
            "objective {}/{}",
            self.objective.numer(),
            self.objective.denom()
        );
        out
    }
}

/// `sum (d - S/N)^2 = (N * sum d^2 - S^2) / N`.
pub(crate) fn balance_objective(sum_of_squares: u128, total: u64, n: usize) -> Ratio<i128> {
    if n == 0 {
        return Ratio::from_integer(0);
    }
    let n = n as i128;
    let s = total as i128;
    Ratio::new(n * sum_of_squares as i128 - s * s, n)
}

impl RoutingModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> DemandMode {
        self.mode
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// Indices of groups with more than one candidate.
    pub fn free_groups(&self) -> &[usize] {
        &self.free
    }

    /// `h_n`: load from demands whose shortest path is unique.
    pub fn fixed_loads(&self) -> &[u64] {
        &self.fixed
    }

    pub fn candidates(&self, group: usize) -> &[Path] {
        let g = &self.groups[group];
        &self.paths[g.first..g.first + g.count]
    }

    /// Interior vertices of candidate `c` of `group`.
    pub fn interior(&self, group: usize, c: usize) -> &[usize] {
        let p = &self.candidates(group)[c];
        &p[1..p.len() - 1]
    }

    /// `P_nj`: whether node `n` lies strictly inside path `j`.
    pub fn incidence(&self, node: usize, path: usize) -> bool {
        let p = &self.paths[path];
        p[1..p.len() - 1].contains(&node)
    }

    /// `Omega_mj`: whether path `j` belongs to group `m`.
    pub fn membership(&self, group: usize, path: usize) -> bool {
        let g = &self.groups[group];
        (g.first..g.first + g.count).contains(&path)
    }

    /// Number of possible selections, saturating.
    pub fn selection_space(&self) -> u128 {
        self.free
            .iter()
            .fold(1u128, |acc, &g| acc.saturating_mul(self.groups[g].count as u128))
    }

    pub fn validate(&self, sel: &Selection) -> Result<(), RoutingError> {
        if sel.chosen.len() != self.groups.len() {
            return Err(RoutingError::InvalidSelection(format!(
                "{} entries for {} groups",
                sel.chosen.len(),
                self.groups.len()
            )));
        }
        if let Some((m, g)) = self
            .groups
            .iter()
            .enumerate()
            .find(|(m, g)| sel.chosen[*m] as usize >= g.count)
        {
            return Err(RoutingError::InvalidSelection(format!(
                "group {m} has {} candidates, index {} chosen",
                g.count, sel.chosen[m]
            )));
        }
        Ok(())
    }

    /// `d_n = h_n + sum_j P_nj s_j` recomputed from scratch.
    pub fn loads(&self, sel: &Selection) -> Result<Vec<u64>, RoutingError> {
        self.validate(sel)?;
        let mut d = self.fixed.clone();
        for &m in &self.free {
            for &v in self.interior(m, sel.chosen[m] as usize) {
                d[v] += 1;
            }
        }
        Ok(d)
    }

    pub fn load_profile(&self, sel: &Selection) -> Result<LoadProfile, RoutingError> {
        Ok(LoadProfile::from_loads(self.loads(sel)?))
    }
}

/// Enumerates candidates for every demand of `g` under `mode`.
pub fn build_model(g: &Graph, mode: DemandMode, cap: usize) -> Result<RoutingModel, RoutingError> {
    let n = g.n();
    let per_source: Vec<Vec<(Demand, Vec<Path>)>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let dag = ShortestPathDag::new(g, s);
            (0..n)
                .filter(|&t| mode.includes(s, t))
                .map(|t| Ok((Demand { src: s, dst: t }, dag.paths(t, cap)?)))
                .collect::<Result<Vec<_>, RoutingError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut groups = Vec::with_capacity(mode.demand_count(n));
    let mut paths = Vec::new();
    let mut free = Vec::new();
    let mut fixed = vec![0u64; n];
    for (demand, candidates) in per_source.into_iter().flatten() {
        let m = groups.len();
        if candidates.len() == 1 {
            let p = &candidates[0];
            for &v in &p[1..p.len() - 1] {
                fixed[v] += 1;
            }
        } else {
            free.push(m);
        }
        groups.push(Group {
            demand,
            first: paths.len(),
            count: candidates.len(),
        });
        paths.extend(candidates);
    }
    Ok(RoutingModel {
        n,
        mode,
        groups,
        paths,
        free,
        fixed,
    })
}

/// Balance objective of `sel`.
pub fn objective(model: &RoutingModel, sel: &Selection) -> Result<Ratio<i128>, RoutingError> {
    Ok(model.load_profile(sel)?.objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, NamedGraph};

    fn model(which: NamedGraph, mode: DemandMode) -> RoutingModel {
        build_model(&named_graph(which).unwrap(), mode, DEFAULT_PATH_CAP).unwrap()
    }

    #[test]
    fn petersen_has_no_free_groups() {
        let m = model(NamedGraph::Petersen, DemandMode::Unordered);
        assert_eq!(m.groups().len(), 45);
        assert!(m.free_groups().is_empty());
        assert_eq!(m.fixed_loads(), &[3; 10]);
        let sel = Selection::first(&m);
        assert_eq!(objective(&m, &sel).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn c4_free_groups() {
        let m = model(NamedGraph::Cycle(4), DemandMode::Unordered);
        assert_eq!(m.free_groups().len(), 2);
        assert!(m.free_groups().iter().all(|&g| m.groups()[g].count == 2));
        assert_eq!(m.fixed_loads(), &[0; 4]);
        for a in 0..2 {
            for b in 0..2 {
                let mut sel = Selection::first(&m);
                sel.chosen[m.free_groups()[0]] = a;
                sel.chosen[m.free_groups()[1]] = b;
                let p = m.load_profile(&sel).unwrap();
                let mut loads = p.loads.clone();
                loads.sort();
                assert_eq!(loads, vec![0, 0, 1, 1]);
                assert_eq!(p.objective, Ratio::from_integer(1));
            }
        }
    }

    #[test]
    fn c5_all_singletons() {
        let m = model(NamedGraph::Cycle(5), DemandMode::Unordered);
        assert!(m.free_groups().is_empty());
        assert_eq!(m.fixed_loads(), &[1; 5]);
    }

    #[test]
    fn incidence_and_membership() {
        let m = model(NamedGraph::Cycle(4), DemandMode::Unordered);
        // groups in (src,dst) order: 01 02 03 12 13 23; 02 owns paths 1 and 2.
        assert_eq!(m.groups()[1].demand, Demand { src: 0, dst: 2 });
        assert!(m.membership(1, 1) && m.membership(1, 2) && !m.membership(1, 0));
        assert!(m.incidence(1, 1) && !m.incidence(0, 1) && !m.incidence(2, 1));
        let sel = Selection::first(&m);
        let s = sel.indicator(&m);
        // every group selects exactly one of its paths
        for (gi, _) in m.groups().iter().enumerate() {
            let picked: u32 = (0..m.paths().len())
                .filter(|&j| m.membership(gi, j))
                .map(|j| s[j] as u32)
                .sum();
            assert_eq!(picked, 1);
        }
    }

    #[test]
    fn candidates_are_shortest_and_endpointed() {
        let g = named_graph(NamedGraph::Hypercube(4)).unwrap();
        let m = build_model(&g, DemandMode::Ordered, 64).unwrap();
        assert_eq!(m.groups().len(), 16 * 15);
        for (gi, grp) in m.groups().iter().enumerate() {
            let d = g.bfs_distances(grp.demand.src)[grp.demand.dst] as usize;
            for p in m.candidates(gi) {
                assert_eq!(p.len(), d + 1);
                assert_eq!((p[0], p[d]), (grp.demand.src, grp.demand.dst));
                assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
            }
        }
    }

    #[test]
    fn cap_propagates() {
        let g = named_graph(NamedGraph::Hypercube(4)).unwrap();
        assert!(matches!(
            build_model(&g, DemandMode::Unordered, 10),
            Err(RoutingError::PathExplosion { count: 24, .. })
        ));
    }

    #[test]
    fn invalid_selection() {
        let m = model(NamedGraph::Cycle(4), DemandMode::Unordered);
        let mut sel = Selection::first(&m);
        sel.chosen[1] = 2;
        assert!(matches!(m.loads(&sel), Err(RoutingError::InvalidSelection(_))));
        sel.chosen.pop();
        assert!(matches!(m.loads(&sel), Err(RoutingError::InvalidSelection(_))));
    }

    #[test]
    fn load_report_format() {
        let p = LoadProfile::from_loads(vec![1, 0, 1, 0]);
        assert_eq!(p.report(), "0 1\n1 0\n2 1\n3 0\nobjective 1/1\n");
        let q = LoadProfile::from_loads(vec![2, 1, 1]);
        // mean 4/3: (4/9 + 1/9 + 1/9) = 2/3
        assert_eq!(q.objective, Ratio::new(2, 3));
    }
}
