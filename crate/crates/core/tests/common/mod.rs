//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's evaluation, solver or metric code.
#![allow(dead_code)]

use dttp::instance::{City, Item, ThiefParams, TtpInstance};
use dttp::metrics::{NadirPoint, Point};
use dttp::{Instance, Scalar};
use rand::Rng;

/// Plain description of an instance: coordinates, `(profit, weight,
/// 1-based city)` items and capacity.
#[derive(Debug, Clone)]
pub struct Raw {
    pub xy: Vec<(f64, f64)>,
    pub items: Vec<(f64, f64, usize)>,
    pub capacity: f64,
}

impl Raw {
    pub fn build(&self) -> Instance {
        self.build_as()
    }

    pub fn build_as<F: Scalar>(&self) -> TtpInstance<F> {
        let cities = self
            .xy
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| City { id: k + 1, x: F::lit(x), y: F::lit(y) })
            .collect();
        let items = self
            .items
            .iter()
            .enumerate()
            .map(|(k, &(profit, weight, city))| Item {
                id: k + 1,
                profit: F::lit(profit),
                weight: F::lit(weight),
                city,
            })
            .collect();
        TtpInstance::new("oracle", cities, items, F::lit(self.capacity), ThiefParams::default()).unwrap()
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (xa, ya) = self.xy[a - 1];
        let (xb, yb) = self.xy[b - 1];
        ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
    }

    pub fn drop_constant(&self) -> f64 {
        let n = self.xy.len();
        let mut shortest = f64::INFINITY;
        for a in 1..=n {
            for b in a + 1..=n {
                shortest = shortest.min(self.dist(a, b));
            }
        }
        let lo = self.items.iter().map(|i| i.0).fold(f64::INFINITY, f64::min);
        let hi = self.items.iter().map(|i| i.0).fold(0.0, f64::max);
        0.9f64.ln() * shortest / (0.1 * (0.45 * lo / hi).ln())
    }
}

/// Random instance with `n` cities in a 100 x 100 square and `m` items on
/// cities 2..n; capacity is a random binding fraction of the total weight.
pub fn random_raw(rng: &mut impl Rng, n: usize, m: usize) -> Raw {
    let xy = (0..n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let items: Vec<(f64, f64, usize)> = (0..m)
        .map(|_| {
            (
                rng.gen_range(1..=100) as f64,
                rng.gen_range(1..=50) as f64,
                rng.gen_range(2..=n),
            )
        })
        .collect();
    let total: f64 = items.iter().map(|i| i.1).sum();
    let capacity = (total * rng.gen_range(0.3..0.9)).floor().max(1.0).min(total - 1.0);
    Raw { xy, items, capacity }
}

/// Step-by-step thief simulation: walk the tour, load the picked items of
/// each city before leaving it, and decay every item by its carry time.
pub fn oracle_evaluate(raw: &Raw, tour: &[usize], picks: &[bool]) -> (f64, f64) {
    let (v_min, v_max, dr) = (0.1, 1.0, 0.9f64);
    let mut clock = 0.0;
    let mut load = 0.0;
    let mut loaded_at = vec![0.0; raw.items.len()];
    for k in 0..tour.len() {
        let here = tour[k];
        for (i, item) in raw.items.iter().enumerate() {
            if picks[i] && item.2 == here {
                load += item.1;
                loaded_at[i] = clock;
            }
        }
        let next = tour[(k + 1) % tour.len()];
        let speed = v_max - load * (v_max - v_min) / raw.capacity;
        clock += raw.dist(here, next) / speed;
    }
    let c = raw.drop_constant();
    let mut profit = 0.0;
    for (i, item) in raw.items.iter().enumerate() {
        if picks[i] {
            profit += item.0 * dr.powf(((clock - loaded_at[i]) / c).ceil());
        }
    }
    (clock, profit)
}

/// Every tour over cities 1..=n that starts at city 1.
pub fn all_tours(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let c = rest.remove(k);
            prefix.push(c);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(k, c);
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![1], &mut (2..=n).collect(), &mut out);
    out
}

pub fn tour_length(raw: &Raw, tour: &[usize]) -> f64 {
    (0..tour.len())
        .map(|k| raw.dist(tour[k], tour[(k + 1) % tour.len()]))
        .sum()
}

pub fn brute_force_tour(raw: &Raw) -> f64 {
    all_tours(raw.xy.len())
        .iter()
        .map(|t| tour_length(raw, t))
        .fold(f64::INFINITY, f64::min)
}

/// Best knapsack value by enumerating every subset.
pub fn enumerate_knapsack(profits: &[f64], weights: &[f64], capacity: f64) -> f64 {
    let m = profits.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << m) {
        let (mut p, mut w) = (0.0, 0.0);
        for i in 0..m {
            if mask >> i & 1 == 1 {
                p += profits[i];
                w += weights[i];
            }
        }
        if w <= capacity {
            best = best.max(p);
        }
    }
    best
}

/// Area estimate of the region dominated by `points` inside the box
/// `[min time, nadir time] x [0, max profit]`.
pub fn monte_carlo_hv(points: &[Point<f64>], nadir: &NadirPoint<f64>, samples: usize, rng: &mut impl Rng) -> f64 {
    let t0 = points.iter().map(|p| p.time).fold(f64::INFINITY, f64::min).min(nadir.tour_bound);
    let g1 = points.iter().map(|p| p.profit).fold(nadir.profit_bound, f64::max);
    let area = (nadir.tour_bound - t0) * (g1 - nadir.profit_bound);
    if area <= 0.0 {
        return 0.0;
    }
    let mut hits = 0usize;
    for _ in 0..samples {
        let t = rng.gen_range(t0..nadir.tour_bound);
        let g = rng.gen_range(nadir.profit_bound..g1);
        if points.iter().any(|p| p.time <= t && p.profit >= g) {
            hits += 1;
        }
    }
    area * hits as f64 / samples as f64
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
