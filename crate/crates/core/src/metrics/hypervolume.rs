use crate::instance::TtpInstance;
use crate::scalar::Scalar;

use super::{nondominated_indices, Point};

/// Reference point for hypervolume: `(mean distance x N, 0)` of the base
/// instance, shared by every dynamic interval and strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NadirPoint<F> {
    pub tour_bound: F,
    pub profit_bound: F,
}

pub fn nadir<F: Scalar>(base: &TtpInstance<F>) -> NadirPoint<F> {
    let n = F::lit(base.num_cities() as f64);
    NadirPoint {
        tour_bound: base.distances().mean_off_diagonal() * n,
        profit_bound: F::zero(),
    }
}

/// Area dominated by `points` and bounded by the nadir. Points that do not
/// strictly dominate the nadir contribute nothing.
pub fn hypervolume<F: Scalar>(points: &[Point<F>], nadir: &NadirPoint<F>) -> F {
    let mut useful: Vec<Point<F>> = points
        .iter()
        .copied()
        .filter(|p| p.time < nadir.tour_bound && p.profit > nadir.profit_bound)
        .collect();
    if useful.is_empty() {
        return F::zero();
    }
    // time ascending, profit descending among equal times
    useful.sort_by(|a, b| {
        a.time
            .partial_cmp(&b.time)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.profit.partial_cmp(&a.profit).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut area = F::zero();
    let mut level = nadir.profit_bound;
    for p in useful {
        if p.profit > level {
            area = area + (nadir.tour_bound - p.time) * (p.profit - level);
            level = p.profit;
        }
    }
    area
}

/// Area that `p` adds to the region dominated by the non-dominated set
/// `front`. Every term of the sweep is non-negative, so accumulating gains
/// never decreases under rounding.
pub fn hypervolume_gain<F: Scalar>(front: &[Point<F>], p: &Point<F>, nadir: &NadirPoint<F>) -> F {
    if !(p.time < nadir.tour_bound && p.profit > nadir.profit_bound)
        || front.iter().any(|q| q == p || q.dominates(p))
    {
        return F::zero();
    }
    let mut level = nadir.profit_bound;
    let mut end = nadir.tour_bound;
    let mut covered: Vec<Point<F>> = Vec::new();
    for q in front {
        if q.time <= p.time {
            level = level.max(q.profit);
        } else if q.profit > p.profit {
            end = end.min(q.time);
        } else {
            covered.push(*q);
        }
    }
    covered.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap_or(std::cmp::Ordering::Equal));
    let mut area = F::zero();
    let mut t = p.time;
    for q in covered.iter().take_while(|q| q.time < end) {
        area = area + (q.time - t) * (p.profit - level);
        t = q.time;
        level = level.max(q.profit);
    }
    area + (end - t) * (p.profit - level)
}

/// Diagonal of the bounding box of the non-dominated subset.
pub fn max_spread<F: Scalar>(points: &[Point<F>]) -> F {
    let front = nondominated_indices(points);
    if front.is_empty() {
        return F::zero();
    }
    let mut t = (F::infinity(), F::neg_infinity());
    let mut g = (F::infinity(), F::neg_infinity());
    for i in front {
        let p = points[i];
        t = (t.0.min(p.time), t.1.max(p.time));
        g = (g.0.min(p.profit), g.1.max(p.profit));
    }
    let dt = t.1 - t.0;
    let dg = g.1 - g.0;
    (dt * dt + dg * dg).sqrt()
}
