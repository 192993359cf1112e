//! Routing on `G1 x G2` assembled from routings of the factors.
//!
//! A demand `<u1,v1> -> <u2,v2>` moves along G1 inside the copy of G1 at
//! its G2 coordinate and along G2 inside the copy of G2 at its G1
//! coordinate. Distances add in a Cartesian product, so the concatenation
//! of two shortest factor paths is shortest.
//!
//! With ordered factor tables of loads `d1`, `d2` and the G1 leg first,
//! node `<a,b>` carries `d1(a) * n2 + d2(b) * n1 + (n1 - 1)(n2 - 1)`: each
//! G1 leg at row `b` is reused for all `n2` destinations' G2 coordinates,
//! likewise for G2 legs, and the last term counts demands pivoting at
//! `<a,b>`. Constant factor loads therefore give a constant product load.

use std::fmt;
use std::str::FromStr;

use crate::product::{product_of, ProductGraph};

use super::{DemandMode, Path, Route, RoutingError, RoutingTable};

/// Which factor a mixed demand traverses first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum ComposeOrder {
    /// `<u1,v1> -> <u2,v1> -> <u2,v2>`.
    #[default]
    G1First,
    /// `<u1,v1> -> <u1,v2> -> <u2,v2>`.
    G2First,
}

impl fmt::Display for ComposeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComposeOrder::G1First => "g1_first",
            ComposeOrder::G2First => "g2_first",
        })
    }
}

impl FromStr for ComposeOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g1_first" | "g1-first" => Ok(ComposeOrder::G1First),
            "g2_first" | "g2-first" => Ok(ComposeOrder::G2First),
            _ => Err(format!("unknown composition order '{s}'")),
        }
    }
}

/// Composes ordered tables `r1` and `r2` into an ordered table over `pg`.
///
/// `r2` routes the last factor of `pg` and `r1` the product of all earlier
/// factors (a plain factor when `pg` has two), so products of more factors
/// compose by folding from the left.
pub fn compose_product_routing(
    r1: &RoutingTable,
    r2: &RoutingTable,
    pg: &ProductGraph,
    order: ComposeOrder,
) -> Result<RoutingTable, RoutingError> {
    for r in [r1, r2] {
        if r.mode() != DemandMode::Ordered {
            return Err(RoutingError::ModeMismatch {
                expected: DemandMode::Ordered,
                found: r.mode(),
            });
        }
    }
    let factors = pg.factors();
    if factors.len() < 2 {
        return Err(RoutingError::FactorMismatch(
            "product graph has a single factor".into(),
        ));
    }
    let (head, last) = factors.split_at(factors.len() - 1);
    let g2 = &last[0];
    let n2 = g2.n();
    let n1 = pg.graph().n() / n2;
    if r1.n() != n1 || r2.n() != n2 {
        return Err(RoutingError::FactorMismatch(format!(
            "tables cover {} and {} vertices, factors have {n1} and {n2}",
            r1.n(),
            r2.n()
        )));
    }
    r2.validate(g2)
        .map_err(|e| RoutingError::FactorMismatch(format!("second table: {e}")))?;
    let g1 = if head.len() == 1 {
        head[0].clone()
    } else {
        product_of(head)
            .map_err(|e| RoutingError::FactorMismatch(e.to_string()))?
            .into_graph()
    };
    r1.validate(&g1)
        .map_err(|e| RoutingError::FactorMismatch(format!("first table: {e}")))?;

    let leg1 = |a: usize, b: usize| -> &[usize] {
        if a == b {
            &[]
        } else {
            &r1.stored(a, b).expect("validated table is complete").path
        }
    };
    let leg2 = |a: usize, b: usize| -> &[usize] {
        if a == b {
            &[]
        } else {
            &r2.stored(a, b).expect("validated table is complete").path
        }
    };

    let n = n1 * n2;
    let mut routes = Vec::with_capacity(n * (n - 1));
    for src in 0..n {
        let (u1, v1) = (src / n2, src % n2);
        for dst in (0..n).filter(|&t| t != src) {
            let (u2, v2) = (dst / n2, dst % n2);
            let p1 = leg1(u1, u2);
            let p2 = leg2(v1, v2);
            let mut path: Path = Vec::with_capacity(p1.len() + p2.len());
            match order {
                ComposeOrder::G1First => {
                    path.extend(p1.iter().map(|&a| a * n2 + v1));
                    let skip = usize::from(!p1.is_empty());
                    path.extend(p2.iter().skip(skip).map(|&b| u2 * n2 + b));
                }
                ComposeOrder::G2First => {
                    path.extend(p2.iter().map(|&b| u1 * n2 + b));
                    let skip = usize::from(!p2.is_empty());
                    path.extend(p1.iter().skip(skip).map(|&a| a * n2 + v2));
                }
            }
            routes.push(Route { src, dst, path });
        }
    }
    Ok(RoutingTable::from_sorted_routes(DemandMode::Ordered, n, routes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, NamedGraph};
    use crate::product::cartesian_product;
    use crate::routing::{build_model, floyd_routing, solve_exact, DEFAULT_PATH_CAP};
    use num_rational::Ratio;

    fn balanced(which: NamedGraph) -> RoutingTable {
        let g = named_graph(which).unwrap();
        let m = build_model(&g, DemandMode::Ordered, DEFAULT_PATH_CAP).unwrap();
        let (sel, _) = solve_exact(&m).unwrap();
        RoutingTable::from_selection(&m, &sel).unwrap()
    }

    #[test]
    fn k3_square_loads_four() {
        let k3 = named_graph(NamedGraph::Complete(3)).unwrap();
        let r = floyd_routing(&k3, DemandMode::Ordered);
        let pg = cartesian_product(&k3, &k3).unwrap();
        for order in [ComposeOrder::G1First, ComposeOrder::G2First] {
            let t = compose_product_routing(&r, &r, &pg, order).unwrap();
            t.validate(pg.graph()).unwrap();
            let p = t.load_profile();
            assert_eq!(p.loads, vec![4; 9]);
            assert_eq!(p.objective, Ratio::from_integer(0));
        }
    }

    #[test]
    fn c4_square_balanced() {
        let c4 = named_graph(NamedGraph::Cycle(4)).unwrap();
        let r = balanced(NamedGraph::Cycle(4));
        assert_eq!(r.load_profile().loads, vec![1; 4]);
        let pg = cartesian_product(&c4, &c4).unwrap();
        let t = compose_product_routing(&r, &r, &pg, ComposeOrder::G1First).unwrap();
        t.validate(pg.graph()).unwrap();
        // 1 * 4 + 1 * 4 + 3 * 3
        assert_eq!(t.load_profile().loads, vec![17; 16]);
    }

    #[test]
    fn legs_are_lifted_factor_paths() {
        let c4 = named_graph(NamedGraph::Cycle(4)).unwrap();
        let k3 = named_graph(NamedGraph::Complete(3)).unwrap();
        let r1 = floyd_routing(&c4, DemandMode::Ordered);
        let r2 = floyd_routing(&k3, DemandMode::Ordered);
        let pg = cartesian_product(&c4, &k3).unwrap();
        let t = compose_product_routing(&r1, &r2, &pg, ComposeOrder::G1First).unwrap();
        // pure G1 demand <0,1> -> <2,1> follows r1's 0-1-2 in row 1
        let id = |a: usize, b: usize| a * 3 + b;
        assert_eq!(t.path(id(0, 1), id(2, 1)).unwrap(), vec![id(0, 1), id(1, 1), id(2, 1)]);
        // pure G2 demand stays in column 3
        assert_eq!(t.path(id(3, 0), id(3, 2)).unwrap(), vec![id(3, 0), id(3, 2)]);
        // mixed demand pivots at <2,0>
        assert_eq!(
            t.path(id(0, 0), id(2, 1)).unwrap(),
            vec![id(0, 0), id(1, 0), id(2, 0), id(2, 1)]
        );
        let t2 = compose_product_routing(&r1, &r2, &pg, ComposeOrder::G2First).unwrap();
        assert_eq!(
            t2.path(id(0, 0), id(2, 1)).unwrap(),
            vec![id(0, 0), id(0, 1), id(1, 1), id(2, 1)]
        );
        t2.validate(pg.graph()).unwrap();
    }

    #[test]
    fn three_factors_fold() {
        let k3 = named_graph(NamedGraph::Complete(3)).unwrap();
        let r = floyd_routing(&k3, DemandMode::Ordered);
        let pg2 = cartesian_product(&k3, &k3).unwrap();
        let r12 = compose_product_routing(&r, &r, &pg2, ComposeOrder::G1First).unwrap();
        let pg3 = pg2.times(&k3).unwrap();
        let t = compose_product_routing(&r12, &r, &pg3, ComposeOrder::G1First).unwrap();
        t.validate(pg3.graph()).unwrap();
        // 4 * 3 + 0 * 9 + 8 * 2
        assert_eq!(t.load_profile().loads, vec![28; 27]);
    }

    #[test]
    fn mismatches_rejected() {
        let k3 = named_graph(NamedGraph::Complete(3)).unwrap();
        let c4 = named_graph(NamedGraph::Cycle(4)).unwrap();
        let pg = cartesian_product(&k3, &c4).unwrap();
        let r3 = floyd_routing(&k3, DemandMode::Ordered);
        let r4 = floyd_routing(&c4, DemandMode::Ordered);
        assert!(matches!(
            compose_product_routing(&r4, &r3, &pg, ComposeOrder::G1First),
            Err(RoutingError::FactorMismatch(_))
        ));
        let u = floyd_routing(&k3, DemandMode::Unordered);
        assert!(matches!(
            compose_product_routing(&u, &r4, &pg, ComposeOrder::G1First),
            Err(RoutingError::ModeMismatch { .. })
        ));
        assert!(compose_product_routing(&r3, &r4, &pg, ComposeOrder::G1First).is_ok());
    }
}
