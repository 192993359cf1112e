//! Branch and bound over the free groups.
//!
//! Every search node relaxes the undecided groups to a water-filling
//! problem: their load units may go anywhere, but each vertex stays inside
//! the range those groups can still put on it. The search branches on the
//! group with the fewest candidates whose relaxation still beats the
//! incumbent, so forced choices are taken first and dead ends are found
//! early.
//!
//! The first pass finds the optimal sum of squares. The lexicographically
//! smallest optimal selection is then fixed group by group in index order:
//! a group keeps the witness's candidate unless a smaller one still admits
//! an optimal completion.

use super::local::polished_greedy;
use super::model::{LoadProfile, RoutingModel, Selection};
use super::state::{box_water_fill, LoadState};
use super::RoutingError;

/// Relaxations evaluated per pass before giving up.
pub const EXACT_NODE_LIMIT: u64 = 10_000_000;

struct BranchAndBound<'m> {
    model: &'m RoutingModel,
    undecided: Vec<usize>,
    remaining_units: u64,
    state: LoadState,
    chosen: Vec<u32>,
    /// Per group, vertices inside some candidate and inside every candidate.
    touched: Vec<(Vec<usize>, Vec<usize>)>,
    /// Load still reachable at each vertex from undecided groups: at least
    /// `min_add`, at most `max_add`.
    min_add: Vec<u64>,
    max_add: Vec<u64>,
    evaluations: u64,
    limit: u64,
    /// Stop at the first leaf that beats the incumbent.
    first_leaf: bool,
    best_choice: Option<Vec<u32>>,
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl<'m> BranchAndBound<'m> {
    /// Searches the groups in `undecided`; every other group is held at its
    /// entry of `chosen`.
    fn new(model: &'m RoutingModel, chosen: Vec<u32>, undecided: Vec<usize>, limit: u64) -> Self {
        let n = model.n();
        let mut base = model.loads(&Selection { chosen: chosen.clone() }).expect("valid selection");
        let mut remaining_units = 0;
        let mut touched = vec![(Vec::new(), Vec::new()); model.groups().len()];
        let (mut min_add, mut max_add) = (vec![0u64; n], vec![0u64; n]);
        let mut hits = vec![0usize; n];
        for &g in &undecided {
            for &v in model.interior(g, chosen[g] as usize) {
                base[v] -= 1;
            }
            remaining_units += model.interior(g, 0).len() as u64;
            let count = model.groups()[g].count;
            let mut any = Vec::new();
            for c in 0..count {
                for &v in model.interior(g, c) {
                    if hits[v] == 0 {
                        any.push(v);
                    }
                    hits[v] += 1;
                }
            }
            let all: Vec<usize> = any.iter().copied().filter(|&v| hits[v] == count).collect();
            for &v in &any {
                hits[v] = 0;
                max_add[v] += 1;
            }
            for &v in &all {
                min_add[v] += 1;
            }
            touched[g] = (any, all);
        }
        BranchAndBound {
            model,
            undecided,
            remaining_units,
            state: LoadState::new(base),
            chosen,
            touched,
            min_add,
            max_add,
            evaluations: 0,
            limit,
            first_leaf: false,
            best_choice: None,
            lo: vec![0; n],
            hi: vec![0; n],
        }
    }

    fn total(&self) -> u64 {
        self.state.loads.iter().sum::<u64>() + self.remaining_units
    }

    /// Relaxation value if group `g` took candidate `c`; `lo`/`hi` hold the
    /// ranges for the current node and are restored before returning.
    fn bound_with(&mut self, g: usize, c: usize, total: u64) -> Result<u128, RoutingError> {
        self.evaluations += 1;
        if self.evaluations > self.limit {
            return Err(RoutingError::TooLarge { limit: self.limit });
        }
        let (any, all) = &self.touched[g];
        let interior = self.model.interior(g, c);
        for &v in any {
            self.hi[v] -= 1;
        }
        for &v in all {
            self.lo[v] -= 1;
        }
        for &v in interior {
            self.lo[v] += 1;
            self.hi[v] += 1;
        }
        let b = box_water_fill(&self.lo, &self.hi, total);
        for &v in interior {
            self.lo[v] -= 1;
            self.hi[v] -= 1;
        }
        for &v in all {
            self.lo[v] += 1;
        }
        for &v in any {
            self.hi[v] += 1;
        }
        Ok(b)
    }

    fn set_ranges(&mut self) {
        for v in 0..self.state.loads.len() {
            self.lo[v] = self.state.loads[v] + self.min_add[v];
            self.hi[v] = self.state.loads[v] + self.max_add[v];
        }
    }

    fn release(&mut self, g: usize, back: bool) {
        let (any, all) = &self.touched[g];
        for &v in any {
            if back {
                self.max_add[v] += 1;
            } else {
                self.max_add[v] -= 1;
            }
        }
        for &v in all {
            if back {
                self.min_add[v] += 1;
            } else {
                self.min_add[v] -= 1;
            }
        }
    }

    /// Depth-first search for leaves below `best`; returns true to stop.
    fn search(&mut self, best: &mut u128) -> Result<bool, RoutingError> {
        if self.undecided.is_empty() {
            if self.state.sum_sq < *best {
                *best = self.state.sum_sq;
                self.best_choice = Some(self.chosen.clone());
                return Ok(self.first_leaf);
            }
            return Ok(false);
        }
        let total = self.total();
        self.set_ranges();
        // (position in `undecided`, viable candidates with their bounds)
        let mut pick: Option<(usize, Vec<(u128, usize)>)> = None;
        for i in 0..self.undecided.len() {
            let g = self.undecided[i];
            let mut viable = Vec::new();
            for c in 0..self.model.groups()[g].count {
                let b = self.bound_with(g, c, total)?;
                if b < *best {
                    viable.push((b, c));
                }
            }
            if pick.as_ref().is_none_or(|(_, v)| viable.len() < v.len()) {
                let done = viable.is_empty();
                pick = Some((i, viable));
                if done {
                    return Ok(false);
                }
            }
        }
        let (i, mut viable) = pick.expect("undecided is non-empty");
        viable.sort_unstable();
        let g = self.undecided.remove(i);
        self.release(g, false);
        self.remaining_units -= self.model.interior(g, 0).len() as u64;
        let mut result = Ok(false);
        for (b, c) in viable {
            if b >= *best {
                continue;
            }
            let interior = self.model.interior(g, c);
            self.state.add(interior);
            self.chosen[g] = c as u32;
            result = self.search(best);
            self.state.remove(interior);
            if !matches!(result, Ok(false)) {
                break;
            }
        }
        self.remaining_units += self.model.interior(g, 0).len() as u64;
        self.release(g, true);
        self.undecided.insert(i, g);
        result
    }
}

/// Global optimum of the balance objective with the lexicographically
/// smallest selection among optimal ones.
pub fn solve_exact(model: &RoutingModel) -> Result<(Selection, LoadProfile), RoutingError> {
    solve_exact_with_limit(model, EXACT_NODE_LIMIT)
}

pub(crate) fn solve_exact_with_limit(
    model: &RoutingModel,
    limit: u64,
) -> Result<(Selection, LoadProfile), RoutingError> {
    let free = model.free_groups();
    let first = Selection::first(model).chosen;

    // one above a known attainable value, so some leaf is always recorded
    let mut best = polished_greedy(model) + 1;
    let mut bb = BranchAndBound::new(model, first.clone(), free.to_vec(), limit);
    bb.search(&mut best)?;
    let mut witness = bb.best_choice.expect("the incumbent is attainable");

    let mut budget = limit;
    for (k, &g) in free.iter().enumerate() {
        for c in 0..witness[g] {
            let mut fixed = witness.clone();
            fixed[g] = c;
            let mut bb = BranchAndBound::new(model, fixed, free[k + 1..].to_vec(), budget);
            bb.first_leaf = true;
            let mut target = best + 1;
            bb.search(&mut target)?;
            budget -= bb.evaluations.min(budget);
            if let Some(found) = bb.best_choice {
                witness = found;
                break;
            }
        }
    }
    let sel = Selection { chosen: witness };
    let profile = model.load_profile(&sel)?;
    Ok((sel, profile))
}

/// Root relaxation of the whole model: a lower bound on the sum of squares
/// of every selection.
pub(crate) fn relaxation_floor(model: &RoutingModel) -> u128 {
    let first = Selection::first(model).chosen;
    let mut bb = BranchAndBound::new(model, first, model.free_groups().to_vec(), u64::MAX);
    let total = bb.total();
    bb.set_ranges();
    box_water_fill(&bb.lo, &bb.hi, total)
}

/// Re-optimises the groups in `subset` with everything else held at
/// `chosen`, evaluating at most `limit` relaxations. With `sideways`, a
/// different selection of equal value also counts, which lets callers
/// drift across plateaus. Returns whether `chosen` changed.
pub(crate) fn improve_subset(
    model: &RoutingModel,
    chosen: &mut [u32],
    subset: &[usize],
    limit: u64,
    sideways: bool,
) -> bool {
    let mut bb = BranchAndBound::new(model, chosen.to_vec(), subset.to_vec(), limit);
    let current = LoadState::new(model.loads(&Selection { chosen: chosen.to_vec() }).expect("valid selection")).sum_sq;
    let mut best = if sideways { current + 1 } else { current };
    let _ = bb.search(&mut best);
    match bb.best_choice {
        Some(found) if found.as_slice() != &*chosen => {
            chosen.copy_from_slice(&found);
            true
        }
        _ => false,
    }
}
