//! Incrementally maintained loads and sum of squares.

#[derive(Debug, Clone)]
pub(crate) struct LoadState {
    pub loads: Vec<u64>,
    pub sum_sq: u128,
}

impl LoadState {
    pub fn new(loads: Vec<u64>) -> Self {
        let sum_sq = loads.iter().map(|&d| (d as u128) * (d as u128)).sum();
        LoadState { loads, sum_sq }
    }

    pub fn add(&mut self, interior: &[usize]) {
        for &v in interior {
            self.sum_sq += 2 * self.loads[v] as u128 + 1;
            self.loads[v] += 1;
        }
    }

    pub fn remove(&mut self, interior: &[usize]) {
        for &v in interior {
            self.loads[v] -= 1;
            self.sum_sq -= 2 * self.loads[v] as u128 + 1;
        }
    }

    /// Change in the sum of squares if `interior` were added.
    pub fn add_delta(&self, interior: &[usize]) -> u128 {
        interior.iter().map(|&v| 2 * self.loads[v] as u128 + 1).sum()
    }

    /// Change in the sum of squares from replacing `old` with `new`.
    pub fn swap_delta(&mut self, old: &[usize], new: &[usize]) -> i128 {
        let before = self.sum_sq;
        self.remove(old);
        self.add(new);
        let after = self.sum_sq;
        self.remove(new);
        self.add(old);
        after as i128 - before as i128
    }
}

/// Smallest sum of squares of integers `x_v` in `[lo_v, hi_v]` summing to
/// `total`: raise everything to a common level, clamped to the boxes, and
/// give the remainder to nodes that can still grow. Requires
/// `sum lo <= total <= sum hi`.
pub(crate) fn box_water_fill(lo: &[u64], hi: &[u64], total: u64) -> u128 {
    let level_sum = |l: u64| -> u64 { lo.iter().zip(hi).map(|(&a, &b)| l.clamp(a, b)).sum() };
    let (mut a, mut b) = (
        lo.iter().copied().min().unwrap_or(0),
        hi.iter().copied().max().unwrap_or(0),
    );
    // largest level whose clamped sum does not exceed `total`
    while a < b {
        let mid = a + (b - a).div_ceil(2);
        if level_sum(mid) <= total {
            a = mid;
        } else {
            b = mid - 1;
        }
    }
    let level = a;
    let remainder = (total - level_sum(level).min(total)) as u128;
    let base: u128 = lo
        .iter()
        .zip(hi)
        .map(|(&x, &y)| {
            let v = level.clamp(x, y) as u128;
            v * v
        })
        .sum();
    base + remainder * (2 * level as u128 + 1)
}
