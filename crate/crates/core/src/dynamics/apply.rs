use crate::error::{Error, Result};
use crate::instance::TtpInstance;
use crate::scalar::Scalar;

use super::schedule::check_ids;
use super::{ChangeEvent, ChangePayload, ChangeSchedule, InstanceShape};

/// Produces the instance of the next dynamic interval. The input is left
/// untouched; capacity, speeds, drop rate and drop constant carry over.
pub fn apply_change<F: Scalar>(inst: &TtpInstance<F>, event: &ChangeEvent) -> Result<TtpInstance<F>> {
    check_ids(&event.payload, InstanceShape::of(inst))?;
    let mut cities = inst.cities().to_vec();
    let mut items = inst.items().to_vec();
    let mut distances = inst.distances().clone();
    match &event.payload {
        ChangePayload::Loc { moves } => {
            for mv in moves {
                let k = mv.city - 1;
                cities[k].x = F::lit(mv.x);
                cities[k].y = F::lit(mv.y);
            }
            for mv in moves {
                distances.refresh_city(mv.city - 1, &cities);
            }
        }
        ChangePayload::Ava { reassignments } => {
            for r in reassignments {
                items[r.item - 1].city = r.city;
            }
        }
        ChangePayload::Val {
            change_factor,
            adjustments,
        } => {
            for a in adjustments {
                let item = &mut items[a.item - 1];
                let factor = F::one() + F::lit(f64::from(a.sign) * change_factor);
                let profit = factor * item.profit;
                if !(profit > F::zero()) {
                    return Err(Error::Config(format!(
                        "value change drives item {} to non-positive profit {profit}",
                        a.item
                    )));
                }
                item.profit = profit;
            }
        }
    }
    inst.changed(cities, items, distances)
}

/// Applies every event of `schedule` with `at_generation <= generation`.
pub fn apply_schedule_until<F: Scalar>(
    base: &TtpInstance<F>,
    schedule: &ChangeSchedule,
    generation: usize,
) -> Result<TtpInstance<F>> {
    schedule.validate_for(base)?;
    let mut current = base.clone();
    for ev in schedule.events.iter().take_while(|e| e.at_generation <= generation) {
        current = apply_change(&current, ev)?;
    }
    Ok(current)
}
