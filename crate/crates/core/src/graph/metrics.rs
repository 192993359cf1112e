use num_rational::Ratio;
use rayon::prelude::*;

use super::{bisection_width, Bisection, BisectionMode, Graph, GraphError};

/// Exact mean path length.
pub type Mpl = Ratio<u64>;

/// Diameter, mean path length and bisection width of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMetrics {
    pub n: usize,
    pub degree: Option<usize>,
    pub diameter: u32,
    pub mpl: Mpl,
    pub bisection: Bisection,
}

impl GraphMetrics {
    pub fn compute(g: &Graph, mode: BisectionMode, seed: u64) -> Result<Self, GraphError> {
        let (total, diameter) = g.distance_profile();
        Ok(GraphMetrics {
            n: g.n(),
            degree: g.is_regular(),
            diameter,
            mpl: mpl_from_total(total, g.n()),
            bisection: bisection_width(g, mode, seed)?,
        })
    }
}

/// Sum over unordered pairs divided by the pair count.
pub(crate) fn mpl_from_total(unordered_total: u64, n: usize) -> Mpl {
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if pairs == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(unordered_total, pairs)
    }
}

impl Graph {
    /// Sum of distances over unordered pairs together with the diameter.
    ///
    /// Per-source BFS runs in parallel; the reduction is integer-valued and
    /// therefore independent of scheduling.
    pub fn distance_profile(&self) -> (u64, u32) {
        let (ordered, diameter) = (0..self.n())
            .into_par_iter()
            .map(|s| {
                let d = self.bfs_distances(s);
                let sum: u64 = d.iter().map(|&x| x as u64).sum();
                (sum, d.into_iter().max().unwrap_or(0))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
        (ordered / 2, diameter)
    }

    pub fn diameter(&self) -> u32 {
        self.distance_profile().1
    }

    pub fn mean_path_length(&self) -> Mpl {
        mpl_from_total(self.distance_profile().0, self.n())
    }

    /// Full distance matrix, row-major `n * n`.
    pub fn distance_matrix(&self) -> Vec<u32> {
        let rows: Vec<Vec<u32>> = (0..self.n())
            .into_par_iter()
            .map(|s| self.bfs_distances(s))
            .collect();
        rows.concat()
    }
}
