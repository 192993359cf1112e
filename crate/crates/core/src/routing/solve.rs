use std::fmt;
use std::str::FromStr;

use crate::graph::Graph;

use super::exact::solve_exact;
use super::local::{solve_local, LocalConfig};
use super::model::{build_model, LoadProfile};
use super::{DemandMode, RoutingError, RoutingTable};

/// Which solver produces a balanced table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Solver {
    /// Exact up to [`AUTO_EXACT_FREE_GROUPS`] free groups and while the
    /// exact search stays within its limit, local search otherwise.
    #[default]
    Auto,
    Exact,
    Local,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Auto => "auto",
            Solver::Exact => "exact",
            Solver::Local => "local",
        })
    }
}

impl FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Solver::Auto),
            "exact" => Ok(Solver::Exact),
            "local" => Ok(Solver::Local),
            _ => Err(format!("unknown solver '{s}'")),
        }
    }
}

/// Larger models skip the exact attempt under [`Solver::Auto`]; on the
/// 32-vertex searched graphs it only ever ran into its limit.
pub const AUTO_EXACT_FREE_GROUPS: usize = 80;

#[derive(Debug, Clone)]
pub struct BalancedRouting {
    pub table: RoutingTable,
    pub profile: LoadProfile,
    /// `Exact` or `Local`, whichever produced the table.
    pub solver: Solver,
    pub free_groups: usize,
}

/// Builds the model for `g` and solves it with `solver`.
pub fn balanced_routing(
    g: &Graph,
    mode: DemandMode,
    cap: usize,
    solver: Solver,
    seed: u64,
    cfg: &LocalConfig,
) -> Result<BalancedRouting, RoutingError> {
    let model = build_model(g, mode, cap)?;
    let exact = match solver {
        Solver::Local => None,
        Solver::Exact => Some(solve_exact(&model)?),
        Solver::Auto if model.free_groups().len() > AUTO_EXACT_FREE_GROUPS => None,
        Solver::Auto => match solve_exact(&model) {
            Ok(r) => Some(r),
            Err(RoutingError::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        },
    };
    let (selection, profile, used) = match exact {
        Some((sel, p)) => (sel, p, Solver::Exact),
        None => {
            let s = solve_local(&model, seed, cfg);
            (s.selection, s.profile, Solver::Local)
        }
    };
    Ok(BalancedRouting {
        table: RoutingTable::from_selection(&model, &selection)?,
        profile,
        solver: used,
        free_groups: model.free_groups().len(),
    })
}
