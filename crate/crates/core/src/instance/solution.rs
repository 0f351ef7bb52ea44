use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::TtpInstance;

/// A closed tour over all cities, stored as 0-based city indices and always
/// starting at the first city.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Validates and wraps a 0-based visiting order.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n == 0 || order[0] != 0 {
            return Err(Error::Infeasible("tour must start at city 1".into()));
        }
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || seen[c] {
                return Err(Error::Infeasible(format!(
                    "tour is not a permutation of 1..{n}"
                )));
            }
            seen[c] = true;
        }
        Ok(Tour { order })
    }

    /// Builds a tour from 1-based city ids.
    pub fn from_ids(ids: &[usize]) -> Result<Self> {
        if ids.contains(&0) {
            return Err(Error::Infeasible("city ids are 1-based".into()));
        }
        Self::new(ids.iter().map(|&c| c - 1).collect())
    }

    /// Identity order 1, 2, ..., n.
    pub fn identity(n: usize) -> Self {
        Tour {
            order: (0..n).collect(),
        }
    }

    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn order_mut(&mut self) -> &mut Vec<usize> {
        &mut self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based city ids in visiting order.
    pub fn ids(&self) -> Vec<usize> {
        self.order.iter().map(|c| c + 1).collect()
    }

    /// Undirected edges of the closed tour, each as `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |k| {
            let a = self.order[k];
            let b = self.order[(k + 1) % n];
            (a.min(b), a.max(b))
        })
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        self.order.len() == n
    }
}

/// Item selection as a bit vector over the instance's items. Each picked
/// item is collected at its current city.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackingPlan {
    picks: Vec<bool>,
}

impl PackingPlan {
    pub fn empty(num_items: usize) -> Self {
        PackingPlan {
            picks: vec![false; num_items],
        }
    }

    pub fn from_bits(picks: Vec<bool>) -> Self {
        PackingPlan { picks }
    }

    /// Builds a plan from 0-based item indices.
    pub fn from_indices(num_items: usize, indices: &[usize]) -> Result<Self> {
        let mut plan = Self::empty(num_items);
        for &i in indices {
            if i >= num_items {
                return Err(Error::Infeasible(format!("unknown item index {i}")));
            }
            plan.picks[i] = true;
        }
        Ok(plan)
    }

    pub fn bits(&self) -> &[bool] {
        &self.picks
    }

    pub(crate) fn bits_mut(&mut self) -> &mut Vec<bool> {
        &mut self.picks
    }

    pub fn is_picked(&self, item: usize) -> bool {
        self.picks[item]
    }

    pub fn set(&mut self, item: usize, picked: bool) {
        self.picks[item] = picked;
    }

    pub fn num_items(&self) -> usize {
        self.picks.len()
    }

    /// 0-based indices of picked items, ascending.
    pub fn picked(&self) -> impl Iterator<Item = usize> + '_ {
        self.picks
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i))
    }

    pub fn count(&self) -> usize {
        self.picks.iter().filter(|&&p| p).count()
    }

    pub fn weight<F: Scalar>(&self, inst: &TtpInstance<F>) -> F {
        let items = inst.items();
        self.picked().map(|i| items[i].weight).sum()
    }

    pub fn profit<F: Scalar>(&self, inst: &TtpInstance<F>) -> F {
        let items = inst.items();
        self.picked().map(|i| items[i].profit).sum()
    }

    pub fn is_feasible<F: Scalar>(&self, inst: &TtpInstance<F>) -> bool {
        self.picks.len() == inst.num_items() && self.weight(inst) <= inst.capacity()
    }

    /// Collection city index for every picked item, in item order.
    pub fn collection_cities<F: Scalar>(&self, inst: &TtpInstance<F>) -> Vec<usize> {
        let items = inst.items();
        self.picked().map(|i| items[i].city_index()).collect()
    }

    /// Drops picked items with the lowest profit/weight ratio (ties: higher
    /// index first) until the plan fits the knapsack.
    pub fn repair<F: Scalar>(&mut self, inst: &TtpInstance<F>) {
        let mut weight = self.weight(inst);
        if weight <= inst.capacity() {
            return;
        }
        let items = inst.items();
        let mut picked: Vec<usize> = self.picked().collect();
        // worst first: ascending ratio, then descending index
        picked.sort_by(|&a, &b| {
            items[a]
                .ratio()
                .partial_cmp(&items[b].ratio())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.cmp(&a))
        });
        for i in picked {
            if weight <= inst.capacity() {
                break;
            }
            self.picks[i] = false;
            weight = weight - items[i].weight;
        }
        // guard against accumulated rounding in the running total
        if self.weight(inst) > inst.capacity() {
            self.repair(inst);
        }
    }
}

/// A candidate: tour plus packing plan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub tour: Tour,
    pub packing: PackingPlan,
}

impl Solution {
    pub fn new(tour: Tour, packing: PackingPlan) -> Self {
        Solution { tour, packing }
    }

    pub fn is_feasible<F: Scalar>(&self, inst: &TtpInstance<F>) -> bool {
        self.tour.is_valid_for(inst.num_cities()) && self.packing.is_feasible(inst)
    }
}
