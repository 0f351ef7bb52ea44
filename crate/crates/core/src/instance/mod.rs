//! Instance model: cities, items, the availability map and the derived
//! distance matrix and drop constant.
//!
//! Indexing convention: the library API uses 0-based indices for cities and
//! items. The 1-based ids stored on [`City`] and [`Item`] are what appear in
//! files and in [`Tour::ids`].

mod evaluate;
mod io;
mod solution;

pub use evaluate::{current_velocity, evaluate, kp_to_packing_plan, Evaluation};
pub(crate) use evaluate::evaluate_solution;
pub use io::{read_instance, write_instance, parse_instance, format_instance};
pub use solution::{PackingPlan, Solution, Tour};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The fixed value of the random ratio in the drop-constant formula.
pub const DROP_RATIO: f64 = 0.45;

/// Absolute tolerance used when comparing derived constants (e.g. a stored
/// drop constant against its recomputation).
pub const DERIVED_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct City<F> {
    /// 1-based id.
    pub id: usize,
    pub x: F,
    pub y: F,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Item<F> {
    /// 1-based id.
    pub id: usize,
    pub profit: F,
    pub weight: F,
    /// 1-based id of the city where the item is collected.
    pub city: usize,
}

impl<F: Scalar> Item<F> {
    /// 0-based index of the collection city.
    pub fn city_index(&self) -> usize {
        self.city - 1
    }

    pub fn ratio(&self) -> F {
        self.profit / self.weight
    }
}

/// Speed and decay parameters of the thief.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThiefParams<F> {
    pub v_min: F,
    pub v_max: F,
    pub drop_rate: F,
}

impl<F: Scalar> Default for ThiefParams<F> {
    fn default() -> Self {
        ThiefParams {
            v_min: F::lit(0.1),
            v_max: F::one(),
            drop_rate: F::lit(0.9),
        }
    }
}

/// Dense symmetric Euclidean distance matrix, indexed by 0-based city index.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> DistanceMatrix<F> {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Smallest off-diagonal entry.
    pub fn min_off_diagonal(&self) -> F {
        let mut best = F::infinity();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                best = best.min(self.get(i, j));
            }
        }
        best
    }

    /// Mean of the off-diagonal entries.
    pub fn mean_off_diagonal(&self) -> F {
        let mut sum = F::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                sum = sum + self.get(i, j);
            }
        }
        let pairs = F::lit((self.n * (self.n - 1) / 2) as f64);
        sum / pairs
    }

    /// Recomputes row and column `k` from the given coordinates.
    pub(crate) fn refresh_city(&mut self, k: usize, cities: &[City<F>]) {
        for j in 0..self.n {
            let d = if j == k {
                F::zero()
            } else {
                euclid(&cities[k], &cities[j])
            };
            self.data[k * self.n + j] = d;
            self.data[j * self.n + k] = d;
        }
    }

    pub fn tour_length(&self, tour: &Tour) -> F {
        let order = tour.order();
        let n = order.len();
        (0..n)
            .map(|k| self.get(order[k], order[(k + 1) % n]))
            .sum()
    }
}

fn euclid<F: Scalar>(a: &City<F>, b: &City<F>) -> F {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Builds the full Euclidean distance matrix.
pub fn compute_distances<F: Scalar>(cities: &[City<F>]) -> Result<DistanceMatrix<F>> {
    if cities.len() < 3 {
        return Err(Error::InvalidInstance(format!(
            "at least 3 cities are required, got {}",
            cities.len()
        )));
    }
    if let Some(c) = cities.iter().find(|c| !c.x.is_finite() || !c.y.is_finite()) {
        return Err(Error::InvalidInstance(format!(
            "city {} has a non-finite coordinate",
            c.id
        )));
    }
    let n = cities.len();
    let mut data = vec![F::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclid(&cities[i], &cities[j]);
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, data })
}

/// Drop constant `C = ln(Dr) * E_t / (v_min * ln(r * l / u))` where `E_t` is
/// the shortest inter-city distance and `l`, `u` are the smallest and
/// largest item profits.
pub fn compute_drop_constant<F: Scalar>(
    distances: &DistanceMatrix<F>,
    items: &[Item<F>],
    params: &ThiefParams<F>,
) -> Result<F> {
    if items.is_empty() {
        return Err(Error::InvalidInstance("instance has no items".into()));
    }
    let shortest = distances.min_off_diagonal();
    drop_constant_from_parts(
        shortest,
        items.iter().map(|i| i.profit).fold(F::infinity(), F::min),
        items.iter().map(|i| i.profit).fold(F::neg_infinity(), F::max),
        params,
    )
}

/// The drop-constant formula on its raw inputs.
pub fn drop_constant_from_parts<F: Scalar>(
    shortest: F,
    min_profit: F,
    max_profit: F,
    params: &ThiefParams<F>,
) -> Result<F> {
    if !(shortest > F::zero()) {
        return Err(Error::InvalidInstance(
            "shortest inter-city distance is zero (duplicate coordinates)".into(),
        ));
    }
    let ratio = F::lit(DROP_RATIO) * min_profit / max_profit;
    if !(ratio < F::one()) || !(ratio > F::zero()) {
        return Err(Error::Config(format!(
            "r*l/u = {ratio} must lie in (0, 1) for a positive drop constant"
        )));
    }
    let c = (params.drop_rate.ln() * shortest) / (params.v_min * ratio.ln());
    if !(c > F::zero()) || !c.is_finite() {
        return Err(Error::Config(format!("drop constant {c} is not positive")));
    }
    Ok(c)
}

/// An immutable travelling thief instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TtpInstance<F> {
    name: String,
    cities: Vec<City<F>>,
    items: Vec<Item<F>>,
    capacity: F,
    params: ThiefParams<F>,
    drop_constant: F,
    distances: DistanceMatrix<F>,
    items_at_city: Vec<Vec<usize>>,
}

impl<F: Scalar> TtpInstance<F> {
    /// Builds and validates a base (generation 0) instance, deriving the
    /// distance matrix and the drop constant.
    pub fn new(
        name: impl Into<String>,
        cities: Vec<City<F>>,
        items: Vec<Item<F>>,
        capacity: F,
        params: ThiefParams<F>,
    ) -> Result<Self> {
        let distances = compute_distances(&cities)?;
        let drop_constant = compute_drop_constant(&distances, &items, &params)?;
        let inst = Self::assemble(name.into(), cities, items, capacity, params, drop_constant, distances)?;
        if let Some(item) = inst.items.iter().find(|i| i.city == 1) {
            return Err(Error::InvalidInstance(format!(
                "item {} is assigned to the start city",
                item.id
            )));
        }
        Ok(inst)
    }

    /// Like [`TtpInstance::new`] but with an externally supplied drop constant
    /// that must agree with the recomputed one.
    pub fn with_drop_constant(
        name: impl Into<String>,
        cities: Vec<City<F>>,
        items: Vec<Item<F>>,
        capacity: F,
        params: ThiefParams<F>,
        drop_constant: F,
    ) -> Result<Self> {
        let mut inst = Self::new(name, cities, items, capacity, params)?;
        let diff = (inst.drop_constant - drop_constant).abs();
        let tol = F::lit(DERIVED_TOLERANCE) * F::one().max(inst.drop_constant.abs());
        if !(diff <= tol) {
            return Err(Error::InvalidInstance(format!(
                "stored drop constant {drop_constant} disagrees with recomputed {}",
                inst.drop_constant
            )));
        }
        inst.drop_constant = drop_constant;
        Ok(inst)
    }

    fn assemble(
        name: String,
        cities: Vec<City<F>>,
        items: Vec<Item<F>>,
        capacity: F,
        params: ThiefParams<F>,
        drop_constant: F,
        distances: DistanceMatrix<F>,
    ) -> Result<Self> {
        for (k, c) in cities.iter().enumerate() {
            if c.id != k + 1 {
                return Err(Error::InvalidInstance(format!(
                    "city ids must be 1..N in order; found {} at position {}",
                    c.id,
                    k + 1
                )));
            }
            if c.x < F::zero() || c.y < F::zero() {
                return Err(Error::InvalidInstance(format!(
                    "city {} has a negative coordinate",
                    c.id
                )));
            }
        }
        let n = cities.len();
        let mut items_at_city = vec![Vec::new(); n];
        let mut total_weight = F::zero();
        for (k, it) in items.iter().enumerate() {
            if it.id != k + 1 {
                return Err(Error::InvalidInstance(format!(
                    "item ids must be 1..m in order; found {} at position {}",
                    it.id,
                    k + 1
                )));
            }
            if !(it.profit > F::zero()) || !it.profit.is_finite() {
                return Err(Error::InvalidInstance(format!("item {} has non-positive profit", it.id)));
            }
            if !(it.weight > F::zero()) || !it.weight.is_finite() {
                return Err(Error::InvalidInstance(format!("item {} has non-positive weight", it.id)));
            }
            if it.city == 0 || it.city > n {
                return Err(Error::InvalidInstance(format!(
                    "item {} references unknown city {}",
                    it.id, it.city
                )));
            }
            items_at_city[it.city - 1].push(k);
            total_weight = total_weight + it.weight;
        }
        if !(capacity > F::zero()) || !(capacity < total_weight) {
            return Err(Error::InvalidInstance(format!(
                "capacity {capacity} must be positive and below the total item weight {total_weight}"
            )));
        }
        if !(params.v_min > F::zero()) || !(params.v_min < params.v_max) {
            return Err(Error::InvalidInstance("speeds must satisfy 0 < v_min < v_max".into()));
        }
        if !(params.drop_rate > F::zero()) || !(params.drop_rate < F::one()) {
            return Err(Error::InvalidInstance("drop rate must lie in (0, 1)".into()));
        }
        Ok(TtpInstance {
            name,
            cities,
            items,
            capacity,
            params,
            drop_constant,
            distances,
            items_at_city,
        })
    }

    /// Rebuilds derived lookups after a dynamic change. The drop constant and
    /// every scalar parameter are carried over unchanged.
    pub(crate) fn changed(
        &self,
        cities: Vec<City<F>>,
        items: Vec<Item<F>>,
        distances: DistanceMatrix<F>,
    ) -> Result<Self> {
        Self::assemble(
            self.name.clone(),
            cities,
            items,
            self.capacity,
            self.params,
            self.drop_constant,
            distances,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cities(&self) -> &[City<F>] {
        &self.cities
    }

    pub fn items(&self) -> &[Item<F>] {
        &self.items
    }

    pub fn num_cities(&self) -> usize {
        self.cities.len()
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    pub fn capacity(&self) -> F {
        self.capacity
    }

    pub fn params(&self) -> &ThiefParams<F> {
        &self.params
    }

    pub fn drop_constant(&self) -> F {
        self.drop_constant
    }

    pub fn distances(&self) -> &DistanceMatrix<F> {
        &self.distances
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> F {
        self.distances.get(i, j)
    }

    /// 0-based indices of the items available at city index `city`.
    pub fn items_at(&self, city: usize) -> &[usize] {
        &self.items_at_city[city]
    }

    pub fn total_weight(&self) -> F {
        self.items.iter().map(|i| i.weight).sum()
    }
}
