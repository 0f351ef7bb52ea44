use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::instance::TtpInstance;
use crate::rng::rng_from_bytes;
use crate::scalar::Scalar;

use super::{
    ChangeEvent, ChangePayload, ChangeSchedule, CityMove, DynamicsConfig, DynamicsKind,
    InstanceShape, Reassignment, ValueAdjustment,
};

/// Axis-aligned rectangle that relocated cities are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

/// Initial coordinate range widened by 5% of its length on both sides,
/// with the lower bound clamped at zero. A degenerate axis stays a point.
pub fn feasible_region<F: Scalar>(initial: &TtpInstance<F>) -> Region {
    let widen = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        let len = hi - lo;
        ((lo - 0.05 * len).max(0.0), hi + 0.05 * len)
    };
    let cities = initial.cities();
    Region {
        x: widen(&mut cities.iter().map(|c| c.x.as_f64())),
        y: widen(&mut cities.iter().map(|c| c.y.as_f64())),
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    let u: f64 = rng.gen();
    (lo + (hi - lo) * u).min(hi)
}

fn schedule_rng(seed: u64, config: &DynamicsConfig, shape: InstanceShape) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"dttp-schedule");
    h.update(seed.to_le_bytes());
    h.update(serde_json::to_vec(config).expect("config serializes"));
    h.update(serde_json::to_vec(&shape).expect("shape serializes"));
    rng_from_bytes(h.finalize().into())
}

/// Draws a reproducible schedule.
///
/// Draw order per event: the target set (uniform without replacement), then
/// one payload draw per target in ascending id order.
pub fn generate_schedule<F: Scalar>(
    instance: &TtpInstance<F>,
    config: &DynamicsConfig,
    seed: u64,
) -> Result<ChangeSchedule> {
    let n = instance.num_cities();
    let m = instance.num_items();
    let count = config.targets_per_event(n, m)?;
    let shape = InstanceShape::of(instance);
    let region = feasible_region(instance);
    let mut rng = schedule_rng(seed, config, shape);

    let mut events = Vec::with_capacity(config.n_changes);
    for at_generation in config.event_generations() {
        let population = if config.kind == DynamicsKind::Loc { n } else { m };
        let mut targets = sample(&mut rng, population, count).into_vec();
        targets.sort_unstable();
        let payload = match config.kind {
            DynamicsKind::Loc => ChangePayload::Loc {
                moves: targets
                    .iter()
                    .map(|&c| {
                        let x = uniform_in(&mut rng, region.x);
                        let y = uniform_in(&mut rng, region.y);
                        CityMove { city: c + 1, x, y }
                    })
                    .collect(),
            },
            DynamicsKind::Ava => ChangePayload::Ava {
                reassignments: targets
                    .iter()
                    .map(|&i| Reassignment {
                        item: i + 1,
                        city: rng.gen_range(1..=n),
                    })
                    .collect(),
            },
            DynamicsKind::Val => ChangePayload::Val {
                change_factor: config.change_factor,
                adjustments: targets
                    .iter()
                    .map(|&i| ValueAdjustment {
                        item: i + 1,
                        sign: if rng.gen::<bool>() { 1 } else { -1 },
                    })
                    .collect(),
            },
        };
        events.push(ChangeEvent {
            at_generation,
            payload,
        });
    }
    Ok(ChangeSchedule {
        kind: config.kind,
        seed,
        config: *config,
        instance: shape,
        events,
    })
}
