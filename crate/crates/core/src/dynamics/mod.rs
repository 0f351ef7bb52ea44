//! Dynamic changes: city relocation (`Loc`), item reassignment (`Ava`) and
//! item value drift (`Val`).
//!
//! A [`ChangeSchedule`] is generated once from `(instance, config, seed)`
//! and then stored with every random draw expanded, so all strategies run
//! against one schedule file see exactly the same sequence of instances.

mod apply;
mod generate;
mod schedule;

pub use apply::{apply_change, apply_schedule_until};
pub use generate::{feasible_region, generate_schedule, Region};
pub use schedule::{
    load_schedule, save_schedule, ChangeEvent, ChangePayload, ChangeSchedule, CityMove,
    InstanceShape, Reassignment, ValueAdjustment,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DynamicsKind {
    Loc,
    Ava,
    Val,
}

impl DynamicsKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DynamicsKind::Loc => "loc",
            DynamicsKind::Ava => "ava",
            DynamicsKind::Val => "val",
        }
    }
}

impl std::str::FromStr for DynamicsKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "loc" => Ok(DynamicsKind::Loc),
            "ava" => Ok(DynamicsKind::Ava),
            "val" => Ok(DynamicsKind::Val),
            other => Err(Error::Config(format!("unknown dynamics kind '{other}'"))),
        }
    }
}

/// Parameters of one dynamics type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub kind: DynamicsKind,
    /// `Loc`: number of cities moved per event. `Ava`/`Val`: percentage of
    /// the items touched per event.
    pub magnitude: f64,
    /// Relative profit change for `Val` events.
    pub change_factor: f64,
    /// Generations between consecutive events.
    pub period: usize,
    pub n_changes: usize,
}

impl DynamicsConfig {
    /// Defaults: 2 cities or 5% of items, 2% value change, every 200
    /// generations, 5 events.
    pub fn new(kind: DynamicsKind) -> Self {
        DynamicsConfig {
            kind,
            magnitude: match kind {
                DynamicsKind::Loc => 2.0,
                DynamicsKind::Ava | DynamicsKind::Val => 5.0,
            },
            change_factor: 0.02,
            period: 200,
            n_changes: 5,
        }
    }

    /// Total number of generations in a run: the change-free interval plus
    /// one interval after every event.
    pub fn total_generations(&self) -> usize {
        self.period * (self.n_changes + 1)
    }

    /// Generations at which events fire.
    pub fn event_generations(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n_changes).map(move |k| k * self.period)
    }

    /// Number of targets touched by each event on an instance of the given
    /// shape. Percentages are converted with round-half-to-even.
    pub fn targets_per_event(&self, num_cities: usize, num_items: usize) -> Result<usize> {
        self.validate()?;
        match self.kind {
            DynamicsKind::Loc => {
                let d = self.magnitude;
                if d.fract() != 0.0 || d < 1.0 || d >= num_cities as f64 {
                    return Err(Error::Config(format!(
                        "Loc magnitude must be an integer in [1, {num_cities}), got {d}"
                    )));
                }
                Ok(d as usize)
            }
            DynamicsKind::Ava | DynamicsKind::Val => {
                let count = round_half_even(self.magnitude * num_items as f64 / 100.0);
                if count < 1.0 {
                    return Err(Error::Config(format!(
                        "{}% of {num_items} items rounds to zero",
                        self.magnitude
                    )));
                }
                Ok(count as usize)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.period < 1 || self.n_changes < 1 {
            return Err(Error::Config("period and n_changes must be at least 1".into()));
        }
        if !self.magnitude.is_finite() || self.magnitude <= 0.0 {
            return Err(Error::Config("magnitude must be positive".into()));
        }
        if matches!(self.kind, DynamicsKind::Ava | DynamicsKind::Val) && self.magnitude > 100.0 {
            return Err(Error::Config("percentage magnitude must be at most 100".into()));
        }
        if self.kind == DynamicsKind::Val && !(self.change_factor > 0.0 && self.change_factor < 1.0) {
            return Err(Error::Config("change factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

pub(crate) fn round_half_even(x: f64) -> f64 {
    let r = x.round();
    if (x - x.trunc()).abs() == 0.5 {
        2.0 * (x / 2.0).round()
    } else {
        r
    }
}
