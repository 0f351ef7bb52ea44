//! NSGA-II style engine, the static initialisation combinations and the
//! dynamic response strategies.

mod conservation;
mod engine;
mod operators;
mod sorting;
mod strategy;

pub use conservation::{packing_conservation, tour_conservation};
pub use engine::{
    evolve_static, initialize, reevaluate, respond_to_change, run_dynamic, step_generation,
    EaConfig, GenerationRecord, Individual, InitialPopulation, IntervalSnapshot, Origin,
    Population, RunTrace, StaticOutcome,
};
pub use operators::{mutate, one_point_crossover, order_crossover};
pub use sorting::{crowding_distance, nondominated_sort, rank_and_crowding, select_survivors};
pub use strategy::StrategyId;
