use rand::seq::SliceRandom;

use crate::instance::{DistanceMatrix, Tour, TtpInstance};
use crate::rng::DttpRng;
use crate::scalar::Scalar;

/// Pass budget used when a solver tour is requested without an explicit one.
pub const DEFAULT_TOUR_PASSES: usize = 1_000;

/// Relative improvement below which a move is not taken; keeps the local
/// search from cycling on rounding noise.
const IMPROVEMENT_EPS: f64 = 1e-10;

/// Nearest-neighbour tour from city 1. Ties go to the lower city index.
pub fn greedy_tour<F: Scalar>(inst: &TtpInstance<F>) -> Tour {
    let n = inst.num_cities();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = 0;
    visited[0] = true;
    order.push(0);
    for _ in 1..n {
        let mut best: Option<(usize, F)> = None;
        for (c, &seen) in visited.iter().enumerate() {
            if seen {
                continue;
            }
            let d = inst.distance(current, c);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((c, d));
            }
        }
        let (next, _) = best.expect("unvisited city remains");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::from_order_unchecked(order)
}

/// Uniformly random tour that starts at city 1.
pub fn random_tour<F: Scalar>(inst: &TtpInstance<F>, rng: &mut DttpRng) -> Tour {
    let mut rest: Vec<usize> = (1..inst.num_cities()).collect();
    rest.shuffle(rng);
    let mut order = Vec::with_capacity(inst.num_cities());
    order.push(0);
    order.extend(rest);
    Tour::from_order_unchecked(order)
}

/// Nearest-neighbour tour improved by alternating 2-opt and Or-opt passes
/// until neither finds an improving move or `passes` rounds are spent.
///
/// Both neighbourhoods use first improvement in a fixed scan order, so the
/// result is deterministic and never longer than the greedy tour.
pub fn solver_tour<F: Scalar>(inst: &TtpInstance<F>, passes: usize) -> Tour {
    let d = inst.distances();
    let mut order = greedy_tour(inst).order().to_vec();
    for _ in 0..passes {
        let a = two_opt_pass(&mut order, d);
        let b = or_opt_pass(&mut order, d);
        if !a && !b {
            break;
        }
    }
    Tour::from_order_unchecked(order)
}

fn improves<F: Scalar>(delta: F, scale: F) -> bool {
    delta < -(F::lit(IMPROVEMENT_EPS) * F::one().max(scale))
}

/// One first-improvement sweep of 2-opt over a tour whose position 0 is
/// fixed. Returns whether any move was applied.
pub fn two_opt_pass<F: Scalar>(order: &mut [usize], d: &DistanceMatrix<F>) -> bool {
    let n = order.len();
    if n < 4 {
        return false;
    }
    let mut improved = false;
    for i in 1..n - 1 {
        for j in (i + 1)..n {
            if i == 1 && j == n - 1 {
                continue;
            }
            let a = order[i - 1];
            let b = order[i];
            let c = order[j];
            let e = order[(j + 1) % n];
            let before = d.get(a, b) + d.get(c, e);
            let delta = d.get(a, c) + d.get(b, e) - before;
            if improves(delta, before) {
                order[i..=j].reverse();
                improved = true;
            }
        }
    }
    improved
}

/// One first-improvement sweep of Or-opt: relocate segments of 1 to 3
/// consecutive cities (either orientation) anywhere else in the tour.
pub fn or_opt_pass<F: Scalar>(order: &mut Vec<usize>, d: &DistanceMatrix<F>) -> bool {
    let n = order.len();
    if n < 4 {
        return false;
    }
    let mut improved = false;
    for len in 1..=3usize {
        let mut i = 1;
        while i + len <= n {
            if n - len < 2 {
                break;
            }
            let prev = order[i - 1];
            let s0 = order[i];
            let se = order[i + len - 1];
            let next = order[(i + len) % n];
            let gain = d.get(prev, s0) + d.get(se, next) - d.get(prev, next);
            let rest: Vec<usize> = order[..i].iter().chain(&order[i + len..]).copied().collect();
            let r = rest.len();
            let mut applied = false;
            for k in 0..r {
                let u = rest[k];
                let v = rest[(k + 1) % r];
                if u == prev {
                    continue;
                }
                let forward = d.get(u, s0) + d.get(se, v) - d.get(u, v);
                let backward = d.get(u, se) + d.get(s0, v) - d.get(u, v);
                let (cost, reversed) = if backward < forward {
                    (backward, true)
                } else {
                    (forward, false)
                };
                if improves(cost - gain, gain.abs() + cost.abs()) {
                    let mut seg: Vec<usize> = order[i..i + len].to_vec();
                    if reversed {
                        seg.reverse();
                    }
                    let mut fresh = Vec::with_capacity(n);
                    fresh.extend_from_slice(&rest[..=k]);
                    fresh.extend_from_slice(&seg);
                    fresh.extend_from_slice(&rest[k + 1..]);
                    *order = fresh;
                    applied = true;
                    break;
                }
            }
            if applied {
                improved = true;
            }
            i += 1;
        }
    }
    improved
}
