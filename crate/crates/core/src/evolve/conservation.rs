use std::collections::{HashMap, HashSet};

use crate::instance::{PackingPlan, Tour, TtpInstance};
use crate::scalar::Scalar;

/// Percentage of the initial tour's undirected adjacencies (closing edge
/// included) still present in the final tour.
pub fn tour_conservation(initial: &Tour, final_tour: &Tour) -> f64 {
    let n = initial.len();
    if n == 0 {
        return 100.0;
    }
    let kept: HashSet<(usize, usize)> = final_tour.edges().collect();
    let hits = initial.edges().filter(|e| kept.contains(e)).count();
    100.0 * hits as f64 / n as f64
}

fn overlap_percent(common: usize, a: usize, b: usize) -> f64 {
    100.0 * common as f64 / a.max(b) as f64
}

/// Half item-id overlap, half collection-city overlap (as multisets), each
/// measured as |intersection| / max(|initial|, |final|). Two empty plans
/// are fully conserved; exactly one empty plan conserves nothing.
pub fn packing_conservation<F: Scalar>(
    initial: &PackingPlan,
    final_plan: &PackingPlan,
    inst: &TtpInstance<F>,
) -> f64 {
    let a: Vec<usize> = initial.picked().collect();
    let b: Vec<usize> = final_plan.picked().collect();
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 100.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let bs: HashSet<usize> = b.iter().copied().collect();
    let common_items = a.iter().filter(|i| bs.contains(i)).count();

    let mut cities: HashMap<usize, usize> = HashMap::new();
    for c in final_plan.collection_cities(inst) {
        *cities.entry(c).or_default() += 1;
    }
    let mut common_cities = 0;
    for c in initial.collection_cities(inst) {
        if let Some(k) = cities.get_mut(&c) {
            if *k > 0 {
                *k -= 1;
                common_cities += 1;
            }
        }
    }
    0.5 * overlap_percent(common_items, a.len(), b.len())
        + 0.5 * overlap_percent(common_cities, a.len(), b.len())
}
