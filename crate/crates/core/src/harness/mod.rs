//! Instance generation, experiment orchestration and CSV artifacts.

mod experiment;
mod fixtures;
mod generate;
mod static_run;

pub use experiment::{
    load_plan, rank_snapshots, read_snapshot_csv, run_experiment, run_id, run_seed, save_plan, schedule_seed,
    write_ranks_csv, ExperimentOutcome, ExperimentPlan, Manifest, RunRecord, RunStatus,
    ScheduleRecord,
};
pub use fixtures::{builtin_coordinates, BUILTIN_FIXTURES};
pub use generate::{generate_instance, load_coordinates, parse_coordinates, InstanceSpec, KpType};
pub use static_run::{composite_front, run_static, write_static_csv, StaticReport, StaticRow};
