use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One end-of-interval measurement of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub strategy: String,
    pub schedule: usize,
    pub repeat: usize,
    pub interval: usize,
    pub hypervolume: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMetric {
    Hv,
    Spread,
}

impl RankMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMetric::Hv => "hv",
            RankMetric::Spread => "spread",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub strategy: String,
    pub interval: usize,
    pub metric: RankMetric,
    pub median_rank: f64,
}

/// Median ranks per (strategy, interval, metric). Strategies appear in the
/// order they were first seen in the input.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankTable {
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn get(&self, strategy: &str, interval: usize, metric: RankMetric) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.strategy == strategy && e.interval == interval && e.metric == metric)
            .map(|e| e.median_rank)
    }

    /// All per-interval median ranks of one strategy for one metric.
    pub fn ranks_of(&self, strategy: &str, metric: RankMetric) -> Vec<f64> {
        self.entries
            .iter()
            .filter(|e| e.strategy == strategy && e.metric == metric)
            .map(|e| e.median_rank)
            .collect()
    }

    pub fn strategies(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.strategy) {
                out.push(e.strategy.clone());
            }
        }
        out
    }
}

pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Ranks with 1 = largest value; equal values share the average of the
/// positions they span.
fn descending_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Mean over repeats, rank across strategies within each (schedule,
/// interval), then median across schedules.
///
/// The grid must be complete: every strategy needs every (schedule,
/// interval, repeat) combination present in the input, exactly once.
pub fn rank_strategies(rows: &[SnapshotRow]) -> Result<RankTable> {
    let mut strategies: Vec<String> = Vec::new();
    let mut schedules = BTreeSet::new();
    let mut intervals = BTreeSet::new();
    let mut repeats = BTreeSet::new();
    let mut cells: BTreeMap<(String, usize, usize, usize), (f64, f64)> = BTreeMap::new();
    for r in rows {
        if !strategies.contains(&r.strategy) {
            strategies.push(r.strategy.clone());
        }
        schedules.insert(r.schedule);
        intervals.insert(r.interval);
        repeats.insert(r.repeat);
        let key = (r.strategy.clone(), r.schedule, r.interval, r.repeat);
        if cells.insert(key, (r.hypervolume, r.spread)).is_some() {
            return Err(Error::IncompleteGrid(format!(
                "duplicate row for {} schedule {} interval {} repeat {}",
                r.strategy, r.schedule, r.interval, r.repeat
            )));
        }
    }
    if strategies.is_empty() {
        return Err(Error::IncompleteGrid("no snapshot rows".into()));
    }
    let expected = strategies.len() * schedules.len() * intervals.len() * repeats.len();
    if cells.len() != expected {
        for s in &strategies {
            for &k in &schedules {
                for &i in &intervals {
                    for &r in &repeats {
                        if !cells.contains_key(&(s.clone(), k, i, r)) {
                            return Err(Error::IncompleteGrid(format!(
                                "missing {s} schedule {k} interval {i} repeat {r}"
                            )));
                        }
                    }
                }
            }
        }
    }

    let n_rep = repeats.len() as f64;
    let mut entries = Vec::new();
    // ranks[(strategy index, interval)] -> per-schedule ranks
    let mut hv_ranks: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut sp_ranks: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for &k in &schedules {
        for &i in &intervals {
            let mut hv = Vec::with_capacity(strategies.len());
            let mut sp = Vec::with_capacity(strategies.len());
            for s in &strategies {
                let (mut h, mut p) = (0.0, 0.0);
                for &r in &repeats {
                    let (a, b) = cells[&(s.clone(), k, i, r)];
                    h += a;
                    p += b;
                }
                hv.push(h / n_rep);
                sp.push(p / n_rep);
            }
            for (si, rank) in descending_ranks(&hv).into_iter().enumerate() {
                hv_ranks.entry((si, i)).or_default().push(rank);
            }
            for (si, rank) in descending_ranks(&sp).into_iter().enumerate() {
                sp_ranks.entry((si, i)).or_default().push(rank);
            }
        }
    }
    for (si, s) in strategies.iter().enumerate() {
        for metric in [RankMetric::Hv, RankMetric::Spread] {
            let table = if metric == RankMetric::Hv { &hv_ranks } else { &sp_ranks };
            for &i in &intervals {
                entries.push(RankEntry {
                    strategy: s.clone(),
                    interval: i,
                    metric,
                    median_rank: median(&table[&(si, i)]),
                });
            }
        }
    }
    Ok(RankTable { entries })
}
