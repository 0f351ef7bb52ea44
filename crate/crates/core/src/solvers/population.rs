use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{Solution, Tour, TtpInstance};
use crate::rng::DttpRng;
use crate::scalar::Scalar;

/// Consecutive failed variant attempts before uniqueness is declared
/// unreachable.
const MAX_FAILED_VARIANTS: usize = 500;

/// Swaps two random positions of the tour, never touching the start city.
pub fn swap_mutation(tour: &mut Tour, rng: &mut DttpRng) {
    let n = tour.len();
    if n < 3 {
        return;
    }
    let a = rng.gen_range(1..n);
    let mut b = rng.gen_range(1..n - 1);
    if b >= a {
        b += 1;
    }
    tour.order_mut().swap(a, b);
}

fn flip_one<F: Scalar>(sol: &mut Solution, inst: &TtpInstance<F>, rng: &mut DttpRng) {
    let m = inst.num_items();
    if m == 0 {
        return;
    }
    let i = rng.gen_range(0..m);
    let was = sol.packing.is_picked(i);
    sol.packing.set(i, !was);
    sol.packing.repair(inst);
}

/// Expands `base` into `pop_size` distinct feasible solutions: the base
/// itself plus variants that each received the fewest single-swap and
/// single-bitflip mutations needed to differ from every earlier member.
pub fn expand_to_population<F: Scalar>(
    inst: &TtpInstance<F>,
    base: &Solution,
    pop_size: usize,
    rng: &mut DttpRng,
) -> Result<Vec<Solution>> {
    let mut seen = HashSet::new();
    expand_into(inst, base, pop_size, rng, &mut seen)
}

/// Like [`expand_to_population`], but also avoids everything in `seen`
/// and records the new members there. When the base itself is already in
/// `seen` it is not repeated.
pub fn expand_into<F: Scalar>(
    inst: &TtpInstance<F>,
    base: &Solution,
    pop_size: usize,
    rng: &mut DttpRng,
    seen: &mut HashSet<Solution>,
) -> Result<Vec<Solution>> {
    if !base.is_feasible(inst) {
        return Err(Error::Infeasible("seed solution is infeasible".into()));
    }
    let mut out = Vec::with_capacity(pop_size);
    if pop_size == 0 {
        return Ok(out);
    }
    if seen.insert(base.clone()) {
        out.push(base.clone());
    }
    let max_steps = 2 * (inst.num_cities() + inst.num_items()) + 8;
    let mut failures = 0;
    while out.len() < pop_size {
        let mut candidate = base.clone();
        let mut found = false;
        for _ in 0..max_steps {
            if rng.gen::<bool>() {
                swap_mutation(&mut candidate.tour, rng);
            } else {
                flip_one(&mut candidate, inst, rng);
            }
            if !seen.contains(&candidate) {
                found = true;
                break;
            }
        }
        if found {
            seen.insert(candidate.clone());
            out.push(candidate);
            failures = 0;
        } else {
            failures += 1;
            if failures > MAX_FAILED_VARIANTS {
                return Err(Error::UniquenessUnreachable {
                    wanted: pop_size,
                    found: out.len(),
                });
            }
        }
    }
    Ok(out)
}
