//! Variation operators: order crossover on tours, one-point crossover on
//! the item bit vector, single-swap and bitflip mutation.

use rand::Rng;

use crate::instance::{PackingPlan, Solution, Tour, TtpInstance};
use crate::rng::DttpRng;
use crate::scalar::Scalar;
use crate::solvers::swap_mutation;

/// Order crossover (OX) keeping the start city in place: the child copies
/// `p1[a..b]` and fills the remaining positions, starting after `b` and
/// wrapping, with the missing cities in the order they follow `b` in `p2`.
pub fn order_crossover(p1: &Tour, p2: &Tour, rng: &mut DttpRng) -> Tour {
    let n = p1.len();
    if n < 4 {
        return p1.clone();
    }
    // cut points over positions 1..n
    let mut a = rng.gen_range(1..n);
    let mut b = rng.gen_range(1..n);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let b = b + 1;
    ox_with_cuts(p1, p2, a, b)
}

pub(crate) fn ox_with_cuts(p1: &Tour, p2: &Tour, a: usize, b: usize) -> Tour {
    let n = p1.len();
    let (o1, o2) = (p1.order(), p2.order());
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    child[0] = 0;
    used[0] = true;
    for k in a..b {
        child[k] = o1[k];
        used[o1[k]] = true;
    }
    let donor = (b..n).chain(1..b).map(|k| o2[k]).filter(|&c| !used[c]);
    let slots = (b..n).chain(1..a);
    for (slot, city) in slots.zip(donor) {
        child[slot] = city;
    }
    Tour::from_order_unchecked(child)
}

/// One-point crossover of two packing bit vectors.
pub fn one_point_crossover(
    p1: &PackingPlan,
    p2: &PackingPlan,
    rng: &mut DttpRng,
) -> (PackingPlan, PackingPlan) {
    let m = p1.num_items();
    if m < 2 {
        return (p1.clone(), p2.clone());
    }
    let cut = rng.gen_range(1..m);
    let (a, b) = (p1.bits(), p2.bits());
    let c1 = a[..cut].iter().chain(&b[cut..]).copied().collect();
    let c2 = b[..cut].iter().chain(&a[cut..]).copied().collect();
    (PackingPlan::from_bits(c1), PackingPlan::from_bits(c2))
}

/// Applies a single swap with probability `swap_rate`, then flips every
/// item independently with probability `flip_rate`, then repairs capacity.
pub fn mutate<F: Scalar>(
    sol: &mut Solution,
    inst: &TtpInstance<F>,
    swap_rate: f64,
    flip_rate: f64,
    rng: &mut DttpRng,
) {
    if swap_rate > 0.0 && rng.gen::<f64>() < swap_rate {
        swap_mutation(&mut sol.tour, rng);
    }
    if flip_rate > 0.0 {
        for bit in sol.packing.bits_mut().iter_mut() {
            if rng.gen::<f64>() < flip_rate {
                *bit = !*bit;
            }
        }
    }
    sol.packing.repair(inst);
}
