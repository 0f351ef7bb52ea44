use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::instance::TtpInstance;
use crate::rng::DttpRng;
use crate::scalar::Scalar;

/// Maximum number of DP table cells (items x capacity units).
pub const DP_CELL_LIMIT: u128 = 100_000_000;

/// Finds the smallest power-of-ten scale (up to 1e6) that makes every
/// weight an integer.
fn weight_scale<F: Scalar>(inst: &TtpInstance<F>) -> Option<f64> {
    let mut scale = 1.0;
    for _ in 0..=6 {
        let integral = inst.items().iter().all(|it| {
            let w = it.weight.as_f64() * scale;
            (w - w.round()).abs() <= 1e-9 * w.abs().max(1.0)
        });
        if integral {
            return Some(scale);
        }
        scale *= 10.0;
    }
    None
}

/// Exact 0/1 knapsack by dynamic programming over integer-scaled weights.
/// Returns the chosen 0-based item indices in ascending order.
pub fn dp_knapsack<F: Scalar>(inst: &TtpInstance<F>) -> Result<Vec<usize>> {
    let scale = weight_scale(inst).ok_or_else(|| {
        Error::Config("item weights are not integral at any supported granularity".into())
    })?;
    let items = inst.items();
    let m = items.len();
    let cap = (inst.capacity().as_f64() * scale + 1e-9).floor();
    if cap < 0.0 {
        return Ok(Vec::new());
    }
    let cells = (m as u128) * (cap as u128 + 1);
    if cells > DP_CELL_LIMIT {
        return Err(Error::TooLargeForDp {
            cells,
            limit: DP_CELL_LIMIT,
        });
    }
    let cap = cap as usize;
    let width = cap + 1;
    let weights: Vec<usize> = items
        .iter()
        .map(|it| (it.weight.as_f64() * scale).round() as usize)
        .collect();
    let mut best = vec![0.0f64; width];
    let mut keep = vec![0u64; (m * width).div_ceil(64)];
    for (i, it) in items.iter().enumerate() {
        let w = weights[i];
        if w > cap {
            continue;
        }
        let p = it.profit.as_f64();
        for c in (w..=cap).rev() {
            let candidate = best[c - w] + p;
            if candidate > best[c] {
                best[c] = candidate;
                let bit = i * width + c;
                keep[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = cap;
    for i in (0..m).rev() {
        let bit = i * width + c;
        if keep[bit / 64] >> (bit % 64) & 1 == 1 {
            chosen.push(i);
            c -= weights[i];
        }
    }
    chosen.reverse();
    Ok(chosen)
}

/// Items by descending profit/weight (ties: lower index first), each taken
/// when it still fits.
pub fn greedy_knapsack<F: Scalar>(inst: &TtpInstance<F>) -> Vec<usize> {
    let items = inst.items();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[b]
            .ratio()
            .partial_cmp(&items[a].ratio())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut load = F::zero();
    let mut chosen = Vec::new();
    for i in order {
        let w = load + items[i].weight;
        if w <= inst.capacity() {
            load = w;
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Random item permutation truncated before the first item that would
/// overflow the knapsack.
pub fn random_packing<F: Scalar>(inst: &TtpInstance<F>, rng: &mut DttpRng) -> Vec<usize> {
    let items = inst.items();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(rng);
    let mut load = F::zero();
    let mut chosen = Vec::new();
    for i in order {
        let w = load + items[i].weight;
        if w > inst.capacity() {
            break;
        }
        load = w;
        chosen.push(i);
    }
    chosen.sort_unstable();
    chosen
}
