use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{evolve_static, packing_conservation, tour_conservation, EaConfig, StrategyId};
use crate::instance::TtpInstance;
use crate::metrics::{nondominated_indices, Point};
use crate::rng::DttpRng;

/// One final solution of a static run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticRow {
    pub combo: String,
    pub solution: usize,
    pub tour_time: f64,
    pub profit: f64,
    pub tour_conservation: f64,
    pub packing_conservation: f64,
}

#[derive(Debug, Clone)]
pub struct StaticReport {
    pub combo: StrategyId,
    pub rows: Vec<StaticRow>,
}

impl StaticReport {
    pub fn points(&self) -> Vec<Point<f64>> {
        self.rows
            .iter()
            .map(|r| Point::new(r.tour_time, r.profit))
            .collect()
    }

    pub fn min_tour_time(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.tour_time)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mean_tour_conservation(&self) -> f64 {
        self.rows.iter().map(|r| r.tour_conservation).sum::<f64>() / self.rows.len() as f64
    }
}

/// Evolves a static combination for `config.generations_static`
/// generations and reports every final solution with its conservation
/// against the combination's seed.
pub fn run_static(
    inst: &TtpInstance<f64>,
    combo: StrategyId,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<StaticReport> {
    if !matches!(combo, StrategyId::Static(..)) {
        return Err(Error::Config(format!("'{combo}' is not a static combination")));
    }
    let outcome = evolve_static(inst, combo, config, rng)?;
    let label = combo.label();
    let rows = outcome
        .final_population
        .members
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let seed = outcome
                .initial
                .seed_for(m.origin)
                .expect("every origin has a seed");
            StaticRow {
                combo: label.clone(),
                solution: k,
                tour_time: m.eval.tour_time,
                profit: m.eval.final_profit,
                tour_conservation: tour_conservation(&seed.tour, &m.solution.tour),
                packing_conservation: packing_conservation(&seed.packing, &m.solution.packing, inst),
            }
        })
        .collect();
    Ok(StaticReport { combo, rows })
}

/// Union of the final populations, reduced to its distinct mutually
/// non-dominated points. Each point keeps the label of the first report
/// that produced it.
pub fn composite_front(reports: &[StaticReport]) -> Vec<(String, Point<f64>)> {
    let mut all: Vec<(String, Point<f64>)> = Vec::new();
    for r in reports {
        for p in r.points() {
            if !all.iter().any(|(_, q)| *q == p) {
                all.push((r.combo.label(), p));
            }
        }
    }
    let pts: Vec<Point<f64>> = all.iter().map(|(_, p)| *p).collect();
    nondominated_indices(&pts)
        .into_iter()
        .map(|i| all[i].clone())
        .collect()
}

pub fn write_static_csv(report: &StaticReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    for r in &report.rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
