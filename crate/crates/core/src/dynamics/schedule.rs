use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::TtpInstance;
use crate::rng::sha256_hex;
use crate::scalar::Scalar;

use super::{DynamicsConfig, DynamicsKind};

/// New position for a city (1-based id).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CityMove {
    pub city: usize,
    pub x: f64,
    pub y: f64,
}

/// New collection city (1-based ids).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reassignment {
    pub item: usize,
    pub city: usize,
}

/// Profit drift direction for one item (1-based id); `sign` is -1 or +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueAdjustment {
    pub item: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChangePayload {
    Loc { moves: Vec<CityMove> },
    Ava { reassignments: Vec<Reassignment> },
    Val { change_factor: f64, adjustments: Vec<ValueAdjustment> },
}

impl ChangePayload {
    pub fn kind(&self) -> DynamicsKind {
        match self {
            ChangePayload::Loc { .. } => DynamicsKind::Loc,
            ChangePayload::Ava { .. } => DynamicsKind::Ava,
            ChangePayload::Val { .. } => DynamicsKind::Val,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ChangePayload::Loc { moves } => moves.len(),
            ChangePayload::Ava { reassignments } => reassignments.len(),
            ChangePayload::Val { adjustments, .. } => adjustments.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeEvent {
    pub at_generation: usize,
    pub payload: ChangePayload,
}

/// Dimensions of the instance a schedule was generated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceShape {
    pub cities: usize,
    pub items: usize,
}

impl InstanceShape {
    pub fn of<F: Scalar>(inst: &TtpInstance<F>) -> Self {
        InstanceShape {
            cities: inst.num_cities(),
            items: inst.num_items(),
        }
    }
}

/// A fully expanded, replayable sequence of change events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeSchedule {
    pub kind: DynamicsKind,
    pub seed: u64,
    pub config: DynamicsConfig,
    pub instance: InstanceShape,
    pub events: Vec<ChangeEvent>,
}

impl ChangeSchedule {
    /// Checks internal consistency: event ordering, payload kinds and id
    /// ranges against the recorded instance shape.
    pub fn validate(&self) -> Result<()> {
        if self.config.kind != self.kind {
            return Err(Error::Config("schedule kind disagrees with its config".into()));
        }
        let mut last = 0;
        for ev in &self.events {
            if ev.at_generation <= last {
                return Err(Error::Config(format!(
                    "event generations must be positive and strictly increasing (got {} after {last})",
                    ev.at_generation
                )));
            }
            last = ev.at_generation;
            if ev.payload.kind() != self.kind {
                return Err(Error::Config(format!(
                    "{} event in a {} schedule",
                    ev.payload.kind().as_str(),
                    self.kind.as_str()
                )));
            }
            check_ids(&ev.payload, self.instance)?;
        }
        Ok(())
    }

    /// Validates the schedule against a concrete instance.
    pub fn validate_for<F: Scalar>(&self, inst: &TtpInstance<F>) -> Result<()> {
        let shape = InstanceShape::of(inst);
        if shape != self.instance {
            return Err(Error::ScheduleMismatch(format!(
                "schedule was built for {} cities / {} items, instance has {} / {}",
                self.instance.cities, self.instance.items, shape.cities, shape.items
            )));
        }
        self.validate()
    }

    /// Content digest (SHA-256 of the canonical JSON), used to prove that
    /// different strategies consumed the same schedule.
    pub fn digest(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("schedule serializes"))
    }
}

pub(crate) fn check_ids(payload: &ChangePayload, shape: InstanceShape) -> Result<()> {
    let bad = |what: String| Err(Error::ScheduleMismatch(what));
    match payload {
        ChangePayload::Loc { moves } => {
            for m in moves {
                if m.city == 0 || m.city > shape.cities {
                    return bad(format!("city {} out of range 1..={}", m.city, shape.cities));
                }
                if !m.x.is_finite() || !m.y.is_finite() || m.x < 0.0 || m.y < 0.0 {
                    return bad(format!("city {} moved to an invalid position", m.city));
                }
            }
        }
        ChangePayload::Ava { reassignments } => {
            for r in reassignments {
                if r.item == 0 || r.item > shape.items {
                    return bad(format!("item {} out of range 1..={}", r.item, shape.items));
                }
                if r.city == 0 || r.city > shape.cities {
                    return bad(format!("city {} out of range 1..={}", r.city, shape.cities));
                }
            }
        }
        ChangePayload::Val { adjustments, change_factor } => {
            if !(*change_factor > 0.0 && *change_factor < 1.0) {
                return bad(format!("change factor {change_factor} outside (0, 1)"));
            }
            for a in adjustments {
                if a.item == 0 || a.item > shape.items {
                    return bad(format!("item {} out of range 1..={}", a.item, shape.items));
                }
                if a.sign != 1 && a.sign != -1 {
                    return bad(format!("sign {} is not +1 or -1", a.sign));
                }
            }
        }
    }
    Ok(())
}

pub fn save_schedule(schedule: &ChangeSchedule, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(schedule)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_schedule(path: impl AsRef<Path>) -> Result<ChangeSchedule> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let schedule: ChangeSchedule = serde_json::from_str(&text)?;
    schedule.validate()?;
    Ok(schedule)
}
