use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{generate_schedule, load_schedule, save_schedule, ChangeSchedule, DynamicsConfig};
use crate::error::{Error, Result};
use crate::evolve::{run_dynamic, EaConfig, RunTrace, StrategyId};
use crate::instance::{format_instance, TtpInstance};
use crate::metrics::{rank_strategies, RankTable, SnapshotRow};
use crate::rng::{derive_seed, rng_from_seed, sha256_hex};

use super::generate::{generate_instance, InstanceSpec};

fn default_schedules() -> usize {
    10
}

fn default_repeats() -> usize {
    30
}

fn default_strategies() -> Vec<StrategyId> {
    StrategyId::DYNAMIC.to_vec()
}

/// Everything needed to reproduce one strategy × schedule × repeat grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub instance: InstanceSpec,
    pub dynamics: DynamicsConfig,
    #[serde(default = "default_schedules")]
    pub n_schedules: usize,
    #[serde(default = "default_repeats")]
    pub n_repeats: usize,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<StrategyId>,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub ea: EaConfig,
}

impl ExperimentPlan {
    pub fn new(instance: InstanceSpec, dynamics: DynamicsConfig, master_seed: u64, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentPlan {
            instance,
            dynamics,
            n_schedules: default_schedules(),
            n_repeats: default_repeats(),
            strategies: default_strategies(),
            master_seed,
            output_dir: output_dir.into(),
            ea: EaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_schedules < 1 || self.n_repeats < 1 {
            return Err(Error::Config("n_schedules and n_repeats must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("plan lists no strategies".into()));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            if self.strategies[..i].contains(s) {
                return Err(Error::Config(format!("strategy '{s}' listed twice")));
            }
        }
        self.dynamics.validate()?;
        self.ea.validate()
    }

    fn digest(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("plan serializes"))
    }
}

pub fn load_plan(path: impl AsRef<Path>) -> Result<ExperimentPlan> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let plan: ExperimentPlan = serde_json::from_str(&text)?;
    plan.validate()?;
    Ok(plan)
}

pub fn save_plan(plan: &ExperimentPlan, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(plan)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Seed of schedule `index`.
pub fn schedule_seed(master: u64, index: usize) -> u64 {
    derive_seed("dttp-plan-schedule", &[&master.to_le_bytes(), &(index as u64).to_le_bytes()])
}

/// Seed of one run; a pure function of the grid coordinates.
pub fn run_seed(master: u64, schedule: usize, repeat: usize, strategy: StrategyId) -> u64 {
    derive_seed(
        "dttp-plan-run",
        &[
            &master.to_le_bytes(),
            &(schedule as u64).to_le_bytes(),
            &(repeat as u64).to_le_bytes(),
            strategy.label().as_bytes(),
        ],
    )
}

/// `{strategy}-s{schedule}-r{repeat}`.
pub fn run_id(strategy: StrategyId, schedule: usize, repeat: usize) -> String {
    format!("{}-s{schedule}-r{repeat}", strategy.label())
}

fn parse_run_id(id: &str) -> Option<(String, usize, usize)> {
    let mut parts = id.rsplitn(3, '-');
    let repeat = parts.next()?.strip_prefix('r')?.parse().ok()?;
    let schedule = parts.next()?.strip_prefix('s')?.parse().ok()?;
    let strategy = parts.next()?;
    (!strategy.is_empty()).then(|| (strategy.to_string(), schedule, repeat))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub index: usize,
    pub seed: u64,
    pub file: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", content = "message", rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub strategy: StrategyId,
    pub schedule: usize,
    pub repeat: usize,
    pub seed: u64,
    pub trace_file: String,
    pub status: RunStatus,
}

/// Seeds, digests and per-run status of one experiment. Contains no
/// timestamps so identical plans give identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub plan: ExperimentPlan,
    pub plan_digest: String,
    pub instance_file: String,
    pub instance_digest: String,
    pub schedules: Vec<ScheduleRecord>,
    pub runs: Vec<RunRecord>,
    pub ranking: String,
}

impl Manifest {
    pub fn failed_runs(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter(|r| r.status != RunStatus::Ok)
    }
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub instance: TtpInstance<f64>,
    pub manifest: Manifest,
    /// Traces in manifest run order; `None` for failed runs.
    pub traces: Vec<Option<RunTrace<f64>>>,
    pub snapshots: Vec<SnapshotRow>,
    pub ranks: Option<RankTable>,
}

impl ExperimentOutcome {
    /// Fails if any run of the grid failed.
    pub fn ensure_complete(&self) -> Result<()> {
        let failed: Vec<&str> = self.manifest.failed_runs().map(|r| r.run_id.as_str()).collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::IncompleteGrid(format!("failed runs: {}", failed.join(", "))))
        }
    }
}

#[derive(Serialize)]
struct TraceRow<'a> {
    run_id: &'a str,
    strategy: &'a str,
    schedule_seed: u64,
    generation: usize,
    interval: usize,
    hypervolume: f64,
    spread: f64,
}

#[derive(Serialize, Deserialize)]
struct SnapshotCsvRow {
    run_id: String,
    interval: usize,
    end_hv: f64,
    end_spread: f64,
}

#[derive(Serialize)]
struct ProfileRow<'a> {
    strategy: &'a str,
    generation: usize,
    interval: usize,
    mean_hypervolume: f64,
    mean_spread: f64,
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish<W: std::io::Write>(mut w: csv::Writer<W>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_trace(path: &Path, id: &str, schedule_seed: u64, trace: &RunTrace<f64>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let label = trace.strategy.label();
    for r in &trace.records {
        w.serialize(TraceRow {
            run_id: id,
            strategy: &label,
            schedule_seed,
            generation: r.generation,
            interval: r.interval,
            hypervolume: r.hypervolume,
            spread: r.spread,
        })?;
    }
    finish(w, path)
}

/// Reads a snapshot table written by [`run_experiment`].
pub fn read_snapshot_csv(path: impl AsRef<Path>) -> Result<Vec<SnapshotRow>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rd = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for (k, rec) in rd.deserialize::<SnapshotCsvRow>().enumerate() {
        let rec = rec?;
        let (strategy, schedule, repeat) = parse_run_id(&rec.run_id).ok_or_else(|| {
            Error::parse(k + 2, format!("malformed run id '{}'", rec.run_id))
        })?;
        rows.push(SnapshotRow {
            strategy,
            schedule,
            repeat,
            interval: rec.interval,
            hypervolume: rec.end_hv,
            spread: rec.end_spread,
        });
    }
    Ok(rows)
}

/// Ranks strategies over the post-change intervals (interval 0 precedes
/// the first change and is not ranked).
pub fn rank_snapshots(rows: &[SnapshotRow]) -> Result<RankTable> {
    let post: Vec<SnapshotRow> = rows.iter().filter(|r| r.interval > 0).cloned().collect();
    rank_strategies(&post)
}

pub fn write_ranks_csv(table: &RankTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    for e in &table.entries {
        w.serialize(e)?;
    }
    finish(w, path)
}

struct Job {
    schedule: usize,
    strategy: StrategyId,
    repeat: usize,
}

/// Runs the full grid and writes every artifact under `plan.output_dir`:
/// `instance.ttp`, `schedules/`, `traces/`, `snapshots.csv`,
/// `profiles.csv`, `ranks.csv` (when ranking applies) and `manifest.json`.
///
/// Runs execute in parallel; a failing run is recorded in the manifest and
/// disables ranking instead of aborting the grid.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let dir = plan.output_dir.clone();
    for sub in ["schedules", "traces"] {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }

    let instance: TtpInstance<f64> = generate_instance(&plan.instance)?;
    let instance_text = format_instance(&instance);
    let instance_path = dir.join("instance.ttp");
    fs::write(&instance_path, &instance_text).map_err(|e| Error::io(&instance_path, e))?;

    let mut schedules: Vec<ChangeSchedule> = Vec::with_capacity(plan.n_schedules);
    let mut schedule_records = Vec::with_capacity(plan.n_schedules);
    for k in 0..plan.n_schedules {
        let seed = schedule_seed(plan.master_seed, k);
        let generated = generate_schedule(&instance, &plan.dynamics, seed)?;
        let file = format!("schedules/schedule_{k}.json");
        save_schedule(&generated, dir.join(&file))?;
        // every run consumes the file as written
        let loaded = load_schedule(dir.join(&file))?;
        let digest = loaded.digest();
        if digest != generated.digest() {
            return Err(Error::ScheduleMismatch(format!("{file} does not round-trip")));
        }
        schedule_records.push(ScheduleRecord { index: k, seed, file, digest });
        schedules.push(loaded);
    }

    let mut jobs = Vec::new();
    for schedule in 0..plan.n_schedules {
        for &strategy in &plan.strategies {
            for repeat in 0..plan.n_repeats {
                jobs.push(Job { schedule, strategy, repeat });
            }
        }
    }

    let results: Vec<(RunRecord, Option<RunTrace<f64>>)> = jobs
        .par_iter()
        .map(|job| {
            let id = run_id(job.strategy, job.schedule, job.repeat);
            let seed = run_seed(plan.master_seed, job.schedule, job.repeat, job.strategy);
            let trace_file = format!("traces/{id}.csv");
            let run = || -> Result<RunTrace<f64>> {
                let mut rng = rng_from_seed(seed);
                let trace = run_dynamic(&instance, &schedules[job.schedule], job.strategy, &plan.ea, &mut rng)?;
                let sched_seed = schedule_records[job.schedule].seed;
                write_trace(&dir.join(&trace_file), &id, sched_seed, &trace)?;
                Ok(trace)
            };
            let (status, trace) = match run() {
                Ok(t) => (RunStatus::Ok, Some(t)),
                Err(e) => (RunStatus::Failed(e.to_string()), None),
            };
            let record = RunRecord {
                run_id: id,
                strategy: job.strategy,
                schedule: job.schedule,
                repeat: job.repeat,
                seed,
                trace_file,
                status,
            };
            (record, trace)
        })
        .collect();
    let (runs, traces): (Vec<RunRecord>, Vec<Option<RunTrace<f64>>>) = results.into_iter().unzip();

    let snap_path = dir.join("snapshots.csv");
    let mut w = csv_writer(&snap_path)?;
    let mut snapshots = Vec::new();
    for (rec, trace) in runs.iter().zip(&traces) {
        let Some(trace) = trace else { continue };
        for s in &trace.snapshots {
            w.serialize(SnapshotCsvRow {
                run_id: rec.run_id.clone(),
                interval: s.interval,
                end_hv: s.hypervolume,
                end_spread: s.spread,
            })?;
            snapshots.push(SnapshotRow {
                strategy: rec.strategy.label(),
                schedule: rec.schedule,
                repeat: rec.repeat,
                interval: s.interval,
                hypervolume: s.hypervolume,
                spread: s.spread,
            });
        }
    }
    finish(w, &snap_path)?;

    write_profiles(&dir.join("profiles.csv"), plan, &runs, &traces)?;

    let ranks_path = dir.join("ranks.csv");
    let n_failed = runs.iter().filter(|r| r.status != RunStatus::Ok).count();
    let (ranks, ranking) = if n_failed > 0 {
        (None, format!("refused: {n_failed} failed runs leave the grid incomplete"))
    } else if plan.strategies.len() < 2 {
        (None, "skipped: a single strategy cannot be ranked".to_string())
    } else {
        let table = rank_snapshots(&snapshots)?;
        write_ranks_csv(&table, &ranks_path)?;
        (Some(table), "complete".to_string())
    };
    if ranks.is_none() && ranks_path.exists() {
        fs::remove_file(&ranks_path).map_err(|e| Error::io(&ranks_path, e))?;
    }

    let manifest = Manifest {
        plan: plan.clone(),
        plan_digest: plan.digest(),
        instance_file: "instance.ttp".into(),
        instance_digest: sha256_hex(instance_text.as_bytes()),
        schedules: schedule_records,
        runs,
        ranking,
    };
    let manifest_path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&manifest_path, text).map_err(|e| Error::io(&manifest_path, e))?;

    Ok(ExperimentOutcome {
        dir,
        instance,
        manifest,
        traces,
        snapshots,
        ranks,
    })
}

/// Mean hypervolume and spread per strategy and generation over all
/// successful runs.
fn write_profiles(
    path: &Path,
    plan: &ExperimentPlan,
    runs: &[RunRecord],
    traces: &[Option<RunTrace<f64>>],
) -> Result<()> {
    let mut w = csv_writer(path)?;
    for &strategy in &plan.strategies {
        let own: Vec<&RunTrace<f64>> = runs
            .iter()
            .zip(traces)
            .filter(|(r, _)| r.strategy == strategy)
            .filter_map(|(_, t)| t.as_ref())
            .collect();
        let Some(first) = own.first() else { continue };
        let label = strategy.label();
        let n = own.len() as f64;
        for (g, rec) in first.records.iter().enumerate() {
            let hv: f64 = own.iter().map(|t| t.records[g].hypervolume).sum();
            let sp: f64 = own.iter().map(|t| t.records[g].spread).sum();
            w.serialize(ProfileRow {
                strategy: &label,
                generation: rec.generation,
                interval: rec.interval,
                mean_hypervolume: hv / n,
                mean_spread: sp / n,
            })?;
        }
    }
    finish(w, path)
}
