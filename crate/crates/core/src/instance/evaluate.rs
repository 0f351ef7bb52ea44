use crate::error::{Error, Result};
use crate::scalar::{snapped_ceil, Scalar};

use super::{PackingPlan, Solution, Tour, TtpInstance};

/// Objective values of one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<F> {
    /// Total travel time including the closing leg (minimised).
    pub tour_time: F,
    /// Sum of decayed item values at the end of the tour (maximised).
    pub final_profit: F,
    /// Knapsack weight when the tour ends.
    pub knapsack_weight: F,
}

/// Speed with `current_weight` in the knapsack: linear from `v_max` (empty)
/// down to `v_min` (full).
pub fn current_velocity<F: Scalar>(current_weight: F, inst: &TtpInstance<F>) -> Result<F> {
    let cap = inst.capacity();
    if current_weight > cap {
        return Err(Error::Infeasible(format!(
            "knapsack weight {current_weight} exceeds capacity {cap}"
        )));
    }
    if current_weight < F::zero() {
        return Err(Error::Infeasible("negative knapsack weight".into()));
    }
    Ok(velocity_unchecked(current_weight, inst))
}

#[inline]
fn velocity_unchecked<F: Scalar>(current_weight: F, inst: &TtpInstance<F>) -> F {
    let p = inst.params();
    let w = current_weight.min(inst.capacity());
    p.v_max - w * (p.v_max - p.v_min) / inst.capacity()
}

/// Bi-objective evaluation.
///
/// The tour is simulated leg by leg from city 1, including the return leg.
/// Items picked at a city are loaded before leaving it, so every later leg
/// is travelled at the reduced speed and the item's carry time runs from
/// that departure to the end of the tour.
pub fn evaluate<F: Scalar>(
    inst: &TtpInstance<F>,
    tour: &Tour,
    plan: &PackingPlan,
) -> Result<Evaluation<F>> {
    if !tour.is_valid_for(inst.num_cities()) {
        return Err(Error::Infeasible(format!(
            "tour visits {} cities, instance has {}",
            tour.len(),
            inst.num_cities()
        )));
    }
    if plan.num_items() != inst.num_items() {
        return Err(Error::Infeasible(format!(
            "packing plan covers {} items, instance has {}",
            plan.num_items(),
            inst.num_items()
        )));
    }
    let weight = plan.weight(inst);
    if weight > inst.capacity() {
        return Err(Error::Infeasible(format!(
            "packing weight {weight} exceeds capacity {}",
            inst.capacity()
        )));
    }
    Ok(simulate(inst, tour, plan))
}

pub(crate) fn evaluate_solution<F: Scalar>(
    inst: &TtpInstance<F>,
    solution: &Solution,
) -> Result<Evaluation<F>> {
    evaluate(inst, &solution.tour, &solution.packing)
}

fn simulate<F: Scalar>(inst: &TtpInstance<F>, tour: &Tour, plan: &PackingPlan) -> Evaluation<F> {
    let order = tour.order();
    let n = order.len();
    let items = inst.items();
    let mut departure = vec![F::zero(); n];
    let mut time = F::zero();
    let mut load = F::zero();
    for k in 0..n {
        let city = order[k];
        for &i in inst.items_at(city) {
            if plan.is_picked(i) {
                load = load + items[i].weight;
            }
        }
        departure[city] = time;
        let next = order[(k + 1) % n];
        time = time + inst.distance(city, next) / velocity_unchecked(load, inst);
    }
    let drop = inst.params().drop_rate;
    let c = inst.drop_constant();
    let final_profit = plan
        .picked()
        .map(|i| {
            let item = &items[i];
            let carried = time - departure[item.city_index()];
            item.profit * drop.powf(snapped_ceil(carried / c))
        })
        .sum();
    Evaluation {
        tour_time: time,
        final_profit,
        knapsack_weight: load,
    }
}

/// Converts a knapsack selection (0-based item indices) into a packing plan
/// that collects each item at its current city.
pub fn kp_to_packing_plan<F: Scalar>(
    selection: &[usize],
    inst: &TtpInstance<F>,
) -> Result<PackingPlan> {
    let plan = PackingPlan::from_indices(inst.num_items(), selection)?;
    let w = plan.weight(inst);
    if w > inst.capacity() {
        return Err(Error::Infeasible(format!(
            "selection weight {w} exceeds capacity {}",
            inst.capacity()
        )));
    }
    Ok(plan)
}
