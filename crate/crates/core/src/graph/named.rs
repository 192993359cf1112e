use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError};

/// Upper limit for the parameter of the parametric families.
pub const MAX_FAMILY_PARAM: usize = 16;

/// Canonical graphs that can be generated by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    Petersen,
    Heawood,
    /// Levi graph of the generalized quadrangle GQ(2,2) (Tutte-Coxeter graph).
    Levi,
    Hypercube(usize),
    Complete(usize),
    Cycle(usize),
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    /// Accepts `petersen`, `hypercube(3)` and `hypercube:3` spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || GraphError::UnknownName(s.clone());
        let (family, param) = match s.find(['(', ':']) {
            Some(i) => {
                let rest = s[i + 1..].trim_end_matches(')');
                let m = rest.trim().parse::<usize>().map_err(|_| unknown())?;
                (&s[..i], Some(m))
            }
            None => (s.as_str(), None),
        };
        match (family, param) {
            ("petersen" | "peterson", None) => Ok(NamedGraph::Petersen),
            ("heawood", None) => Ok(NamedGraph::Heawood),
            ("levi" | "tutte-coxeter", None) => Ok(NamedGraph::Levi),
            ("hypercube", Some(m)) => Ok(NamedGraph::Hypercube(m)),
            ("complete", Some(m)) => Ok(NamedGraph::Complete(m)),
            ("cycle", Some(m)) => Ok(NamedGraph::Cycle(m)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraph::Petersen => write!(f, "petersen"),
            NamedGraph::Heawood => write!(f, "heawood"),
            NamedGraph::Levi => write!(f, "levi"),
            NamedGraph::Hypercube(m) => write!(f, "hypercube({m})"),
            NamedGraph::Complete(m) => write!(f, "complete({m})"),
            NamedGraph::Cycle(m) => write!(f, "cycle({m})"),
        }
    }
}

fn check_param(family: &'static str, value: usize, min: usize) -> Result<(), GraphError> {
    if (min..=MAX_FAMILY_PARAM).contains(&value) {
        Ok(())
    } else {
        Err(GraphError::ParameterOutOfRange {
            family,
            value,
            min,
            max: MAX_FAMILY_PARAM,
        })
    }
}

/// Cubic Hamiltonian graph from LCF notation `shifts^repeats`.
fn lcf(shifts: &[isize], repeats: usize) -> Vec<(usize, usize)> {
    let n = shifts.len() * repeats;
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = (i as isize + shifts[i % shifts.len()]).rem_euclid(n as isize) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    edges
}

pub fn named_graph(which: NamedGraph) -> Result<Graph, GraphError> {
    let (n, edges) = match which {
        NamedGraph::Petersen => {
            let mut e = Vec::with_capacity(15);
            for i in 0..5 {
                e.push((i, (i + 1) % 5));
                e.push((i, i + 5));
                e.push((5 + i, 5 + (i + 2) % 5));
            }
            (10, e)
        }
        NamedGraph::Heawood => (14, lcf(&[5, -5], 7)),
        NamedGraph::Levi => (30, lcf(&[-13, -9, 7, -7, 9, 13], 5)),
        NamedGraph::Hypercube(m) => {
            // Q1 = K2 is admitted so that Q1^m = Qm holds for every m.
            check_param("hypercube", m, 1)?;
            let n = 1usize << m;
            let e = (0..n)
                .flat_map(|u| (0..m).map(move |b| (u, u ^ (1 << b))))
                .filter(|&(u, v)| u < v)
                .collect();
            (n, e)
        }
        NamedGraph::Complete(m) => {
            check_param("complete", m, 2)?;
            let e = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
            (m, e)
        }
        NamedGraph::Cycle(m) => {
            check_param("cycle", m, 3)?;
            (m, (0..m).map(|i| (i, (i + 1) % m)).collect())
        }
    };
    Ok(Graph::from_edges(n, edges)?.with_name(which.to_string()))
}
