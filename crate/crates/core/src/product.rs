//! Cartesian products of graphs.
//!
//! A product vertex is a tuple of factor vertices. Flat ids use mixed radix
//! with factor 0 most significant, so for `G1 x G2` the copy of `G2` at
//! `u1` occupies the contiguous block `u1 * n2 .. (u1 + 1) * n2`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Products larger than this are refused.
pub const MAX_PRODUCT_VERTICES: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error("product would have {size} vertices, limit is {MAX_PRODUCT_VERTICES}")]
    TooLarge { size: u128 },
    #[error("folded power exponent must be at least 1")]
    ZeroExponent,
    #[error("label {0:?} does not match the factor sizes")]
    BadLabel(Vec<usize>),
    #[error("label map line {line}: {message}")]
    LabelMap { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Coordinates of a product vertex, one per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductLabel(pub Vec<usize>);

impl fmt::Display for ProductLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

#[derive(Debug, Clone)]
pub struct ProductGraph {
    graph: Graph,
    factors: Vec<Graph>,
}

impl ProductGraph {
    /// Treats a plain graph as a one-factor product.
    pub fn single(g: Graph) -> Self {
        ProductGraph {
            graph: g.clone(),
            factors: vec![g],
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn factors(&self) -> &[Graph] {
        &self.factors
    }

    pub fn radices(&self) -> Vec<usize> {
        self.factors.iter().map(Graph::n).collect()
    }

    pub fn label_of(&self, mut v: usize) -> ProductLabel {
        let mut coords = vec![0; self.factors.len()];
        for (c, f) in coords.iter_mut().zip(&self.factors).rev() {
            *c = v % f.n();
            v /= f.n();
        }
        ProductLabel(coords)
    }

    pub fn id_of(&self, label: &ProductLabel) -> Result<usize, ProductError> {
        if label.0.len() != self.factors.len()
            || label.0.iter().zip(&self.factors).any(|(&c, f)| c >= f.n())
        {
            return Err(ProductError::BadLabel(label.0.clone()));
        }
        Ok(label
            .0
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, f)| acc * f.n() + c))
    }

    /// `self x g`, appending `g` as the last factor.
    pub fn times(&self, g: &Graph) -> Result<ProductGraph, ProductError> {
        let graph = binary_product(&self.graph, g)?;
        let mut factors = self.factors.clone();
        factors.push(g.clone());
        let name = factors
            .iter()
            .map(|f| f.name().unwrap_or("G").to_string())
            .collect::<Vec<_>>()
            .join("x");
        Ok(ProductGraph {
            graph: graph.with_name(name),
            factors,
        })
    }

    /// The sidecar label map: one `flat_id c0 c1 ...` line per vertex.
    pub fn label_map(&self) -> String {
        let mut out = String::new();
        for v in 0..self.graph.n() {
            let _ = write!(out, "{v}");
            for c in self.label_of(v).0 {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a label map, checking that every line agrees with the mixed-radix
/// encoding of `pg`.
pub fn check_label_map(pg: &ProductGraph, text: &str) -> Result<(), ProductError> {
    let mut seen = 0;
    for (i, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ProductError::LabelMap { line: i, message };
        let nums: Vec<usize> = line
            .split_ascii_whitespace()
            .map(|t| t.parse().map_err(|_| err(format!("invalid integer '{t}'"))))
            .collect::<Result<_, _>>()?;
        let (&id, coords) = nums.split_first().ok_or_else(|| err("empty line".into()))?;
        let expected = pg.id_of(&ProductLabel(coords.to_vec())).map_err(|e| err(e.to_string()))?;
        if expected != id || id != seen {
            return Err(err(format!("id {id} does not match its coordinates")));
        }
        seen += 1;
    }
    if seen != pg.graph.n() {
        return Err(ProductError::LabelMap {
            line: 0,
            message: format!("expected {} entries, found {seen}", pg.graph.n()),
        });
    }
    Ok(())
}

fn checked_size(sizes: &[usize]) -> Result<usize, ProductError> {
    let size = sizes.iter().fold(1u128, |acc, &n| acc.saturating_mul(n as u128));
    if size > MAX_PRODUCT_VERTICES as u128 {
        Err(ProductError::TooLarge { size })
    } else {
        Ok(size as usize)
    }
}

fn binary_product(g1: &Graph, g2: &Graph) -> Result<Graph, ProductError> {
    let (n1, n2) = (g1.n(), g2.n());
    checked_size(&[n1, n2])?;
    let mut adj = Vec::with_capacity(n1 * n2);
    for u in 0..n1 {
        for v in 0..n2 {
            // Neighbors in other G2 copies come before or after the block of
            // the current copy, so this order is already sorted.
            let mut list = Vec::with_capacity(g1.degree(u) + g2.degree(v));
            let (before, after): (Vec<usize>, Vec<usize>) =
                g1.neighbors(u).iter().partition(|&&w| w < u);
            list.extend(before.iter().map(|&w| w * n2 + v));
            list.extend(g2.neighbors(v).iter().map(|&w| u * n2 + w));
            list.extend(after.iter().map(|&w| w * n2 + v));
            adj.push(list);
        }
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Result<ProductGraph, ProductError> {
    ProductGraph::single(g1.clone()).times(g2)
}

/// Left-folded product of all `factors`.
pub fn product_of(factors: &[Graph]) -> Result<ProductGraph, ProductError> {
    let (first, rest) = factors.split_first().ok_or(ProductError::ZeroExponent)?;
    checked_size(&factors.iter().map(Graph::n).collect::<Vec<_>>())?;
    rest.iter()
        .try_fold(ProductGraph::single(first.clone()), |pg, g| pg.times(g))
}

/// The `alpha`-fold product of `g` with itself.
pub fn folded_power(g: &Graph, alpha: usize) -> Result<ProductGraph, ProductError> {
    if alpha == 0 {
        return Err(ProductError::ZeroExponent);
    }
    let size = (g.n() as u128).checked_pow(alpha as u32).unwrap_or(u128::MAX);
    if size > MAX_PRODUCT_VERTICES as u128 {
        return Err(ProductError::TooLarge { size });
    }
    product_of(&vec![g.clone(); alpha])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: &'static str,
    pub expected: String,
    pub observed: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub checks: Vec<LawCheck>,
}

impl ProductReport {
    pub fn violations(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }
}

impl fmt::Display for ProductReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.holds { "ok" } else { "VIOLATED" };
            writeln!(f, "{:<14} {:>8} expected={} observed={}", c.law, mark, c.expected, c.observed)?;
        }
        Ok(())
    }
}

/// Checks size, degree and diameter laws, and that reversing the factor
/// order yields the same graph after relabeling.
pub fn verify_product_properties(pg: &ProductGraph) -> ProductReport {
    let mut checks = Vec::new();
    let g = &pg.graph;

    let size: usize = pg.factors.iter().map(Graph::n).product();
    checks.push(LawCheck {
        law: "size",
        expected: size.to_string(),
        observed: g.n().to_string(),
        holds: size == g.n(),
    });

    let bad_degree = (0..g.n()).find(|&v| {
        let label = pg.label_of(v);
        let want: usize = label.0.iter().zip(&pg.factors).map(|(&c, f)| f.degree(c)).sum();
        want != g.degree(v)
    });
    checks.push(LawCheck {
        law: "degree",
        expected: "sum of factor degrees".into(),
        observed: bad_degree.map_or("all vertices".into(), |v| format!("vertex {v} differs")),
        holds: bad_degree.is_none(),
    });

    let want_d: u32 = pg.factors.iter().map(Graph::diameter).sum();
    let got_d = g.diameter();
    checks.push(LawCheck {
        law: "diameter",
        expected: want_d.to_string(),
        observed: got_d.to_string(),
        holds: want_d == got_d,
    });

    let reversed: Vec<Graph> = pg.factors.iter().rev().cloned().collect();
    let commutes = match product_of(&reversed) {
        Ok(rev) => {
            let relabel = |v: usize| {
                let mut c = pg.label_of(v).0;
                c.reverse();
                rev.id_of(&ProductLabel(c)).expect("reversed label in range")
            };
            rev.graph.n() == g.n()
                && g.edges().all(|(u, v)| rev.graph.has_edge(relabel(u), relabel(v)))
                && rev.graph.edge_count() == g.edge_count()
        }
        Err(_) => false,
    };
    checks.push(LawCheck {
        law: "commutativity",
        expected: "relabeled reverse product equal".into(),
        observed: if commutes { "equal" } else { "different" }.into(),
        holds: commutes,
    });

    ProductReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, NamedGraph};

    fn named(w: NamedGraph) -> Graph {
        named_graph(w).unwrap()
    }

    #[test]
    fn k2_squared_is_c4() {
        let k2 = named(NamedGraph::Complete(2));
        let pg = cartesian_product(&k2, &k2).unwrap();
        // C4 in product labeling: <0,0> <0,1> <1,1> <1,0>
        let c4 = Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(pg.graph(), &c4);
        assert_eq!(pg.graph().is_regular(), Some(2));
        assert_eq!(pg.graph().diameter(), 2);
        assert!(verify_product_properties(&pg).all_hold());
    }

    #[test]
    fn petersen_square() {
        let p = named(NamedGraph::Petersen);
        let pg = cartesian_product(&p, &p).unwrap();
        assert_eq!(pg.graph().n(), 100);
        assert_eq!(pg.graph().is_regular(), Some(6));
        let report = verify_product_properties(&pg);
        assert!(report.all_hold(), "{report}");
        assert_eq!(pg.graph().diameter(), 4);
    }

    #[test]
    fn folded_powers() {
        let h2 = folded_power(&named(NamedGraph::Heawood), 2).unwrap();
        assert_eq!((h2.graph().n(), h2.graph().is_regular()), (196, Some(6)));
        assert_eq!(h2.graph().diameter(), 6);

        let p = named(NamedGraph::Petersen);
        let p1 = folded_power(&p, 1).unwrap();
        assert_eq!(p1.graph(), &p);
        assert_eq!(p1.label_of(7), ProductLabel(vec![7]));

        let k2 = named(NamedGraph::Hypercube(1));
        for m in 1..=6 {
            let q = folded_power(&k2, m).unwrap();
            assert_eq!(q.graph(), &named(NamedGraph::Hypercube(m)));
        }
        assert_eq!(folded_power(&p, 0).unwrap_err(), ProductError::ZeroExponent);
        assert!(matches!(folded_power(&p, 7), Err(ProductError::TooLarge { .. })));
    }

    #[test]
    fn labels_are_mixed_radix() {
        let pg = product_of(&[
            named(NamedGraph::Cycle(3)),
            named(NamedGraph::Complete(2)),
            named(NamedGraph::Cycle(5)),
        ])
        .unwrap();
        assert_eq!(pg.label_of(0), ProductLabel(vec![0, 0, 0]));
        assert_eq!(pg.label_of(5), ProductLabel(vec![0, 1, 0]));
        assert_eq!(pg.label_of(29), ProductLabel(vec![2, 1, 4]));
        for v in 0..pg.graph().n() {
            assert_eq!(pg.id_of(&pg.label_of(v)).unwrap(), v);
        }
        assert!(pg.id_of(&ProductLabel(vec![3, 0, 0])).is_err());
        assert!(pg.id_of(&ProductLabel(vec![0, 0])).is_err());
        assert_eq!(pg.label_of(29).to_string(), "<2,1,4>");
    }

    #[test]
    fn associativity_of_folding() {
        let a = named(NamedGraph::Cycle(3));
        let b = named(NamedGraph::Petersen);
        let c = named(NamedGraph::Complete(2));
        let left = product_of(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let bc = cartesian_product(&b, &c).unwrap();
        let right = cartesian_product(&a, bc.graph()).unwrap();
        assert_eq!(left.graph(), right.graph());
    }

    #[test]
    fn label_map_sidecar() {
        let pg = cartesian_product(&named(NamedGraph::Cycle(3)), &named(NamedGraph::Complete(2))).unwrap();
        let text = pg.label_map();
        assert!(text.starts_with("0 0 0\n1 0 1\n2 1 0\n"));
        check_label_map(&pg, &text).unwrap();
        assert!(check_label_map(&pg, "0 0 0\n1 1 0\n").is_err());
    }

    #[test]
    fn reports_violation_on_mislabeled_factors() {
        let c5 = named(NamedGraph::Cycle(5));
        let mut pg = cartesian_product(&c5, &c5).unwrap();
        pg.factors[1] = named(NamedGraph::Complete(5));
        let report = verify_product_properties(&pg);
        assert!(!report.all_hold());
        assert!(report.violations().any(|c| c.law == "degree"));
    }
}
