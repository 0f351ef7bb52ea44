//! Bi-objective measurement: the fixed nadir reference, hypervolume,
//! maximum spread and rank aggregation across strategies.

mod hypervolume;
mod ranking;

pub use hypervolume::{hypervolume, hypervolume_gain, max_spread, nadir, NadirPoint};
pub use ranking::{median, rank_strategies, RankEntry, RankMetric, RankTable, SnapshotRow};

use crate::instance::Evaluation;
use crate::scalar::Scalar;

/// A point in objective space: tour time (minimised) and final profit
/// (maximised).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<F> {
    pub time: F,
    pub profit: F,
}

impl<F: Scalar> Point<F> {
    pub fn new(time: F, profit: F) -> Self {
        Point { time, profit }
    }

    /// Pareto dominance for (min time, max profit).
    pub fn dominates(&self, other: &Point<F>) -> bool {
        self.time <= other.time
            && self.profit >= other.profit
            && (self.time < other.time || self.profit > other.profit)
    }
}

impl<F: Scalar> From<Evaluation<F>> for Point<F> {
    fn from(e: Evaluation<F>) -> Self {
        Point::new(e.tour_time, e.final_profit)
    }
}

impl<F: Scalar> From<&Evaluation<F>> for Point<F> {
    fn from(e: &Evaluation<F>) -> Self {
        Point::new(e.tour_time, e.final_profit)
    }
}

/// Indices of the points that no other point dominates.
pub fn nondominated_indices<F: Scalar>(points: &[Point<F>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| q.dominates(&points[i])))
        .collect()
}

/// Non-dominated archive used to track the best front seen within one
/// dynamic interval. Equal points are stored once.
#[derive(Debug, Clone, Default)]
pub struct Archive<F> {
    points: Vec<Point<F>>,
}

impl<F: Scalar> Archive<F> {
    pub fn new() -> Self {
        Archive { points: Vec::new() }
    }

    /// Inserts `p` unless it is dominated by or equal to a stored point;
    /// returns whether the archive changed.
    pub fn insert(&mut self, p: Point<F>) -> bool {
        if self.points.iter().any(|q| q.dominates(&p) || *q == p) {
            return false;
        }
        self.points.retain(|q| !p.dominates(q));
        self.points.push(p);
        true
    }

    pub fn extend<I: IntoIterator<Item = Point<F>>>(&mut self, pts: I) -> bool {
        let mut changed = false;
        for p in pts {
            changed |= self.insert(p);
        }
        changed
    }

    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }

    pub fn clear(&mut self) {
        self.points.clear();
    }
}
