use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dttp::dynamics::{generate_schedule, save_schedule, DynamicsConfig, DynamicsKind};
use dttp::evolve::{EaConfig, StrategyId};
use dttp::harness::{
    generate_instance, load_plan, rank_snapshots, read_snapshot_csv, run_experiment, run_static,
    write_ranks_csv, write_static_csv, InstanceSpec, KpType,
};
use dttp::instance::{read_instance, write_instance};
use dttp::rng::rng_from_seed;
use dttp::{Error, Instance};

#[derive(Parser)]
#[command(name = "dttp", version, about = "Dynamic travelling thief problem laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a thief instance from a coordinate source.
    GenInstance {
        /// Bundled fixture name (e.g. berlin52) or coordinate file.
        #[arg(long)]
        tsp: String,
        #[arg(long = "type", value_parser = parse_kp_type)]
        kp_type: KpType,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a change schedule for an instance.
    GenSchedule {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        kind: DynamicsKind,
        /// Cities moved (loc) or percentage of items touched (ava, val).
        #[arg(long)]
        dn: Option<f64>,
        /// Relative profit change for val.
        #[arg(long, default_value_t = 0.02)]
        cf: f64,
        #[arg(long, default_value_t = 200)]
        period: usize,
        #[arg(long, default_value_t = 5)]
        changes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the experiment grid described by a plan file.
    Run {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Evolve one static initialisation combination without changes.
    RunStatic {
        #[arg(long)]
        instance: PathBuf,
        /// Combination ss, sg, sr, gs, gg, gr, rs, rg or rr.
        #[arg(long, value_parser = parse_strategy)]
        combo: StrategyId,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        generations: usize,
        #[arg(long, default_value_t = 60)]
        pop: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank strategies from a snapshot table.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_kp_type(s: &str) -> Result<KpType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<DynamicsKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<StrategyId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn execute(command: Command) -> dttp::Result<()> {
    match command {
        Command::GenInstance { tsp, kp_type, seed, out } => {
            let inst: Instance = generate_instance(&InstanceSpec::new(tsp, kp_type, seed))?;
            write_instance(&inst, &out)?;
            println!(
                "{}: {} cities, {} items, capacity {}",
                out.display(),
                inst.num_cities(),
                inst.num_items(),
                inst.capacity()
            );
        }
        Command::GenSchedule { instance, kind, dn, cf, period, changes, seed, out } => {
            let inst: Instance = read_instance(&instance)?;
            let mut config = DynamicsConfig::new(kind);
            if let Some(dn) = dn {
                config.magnitude = dn;
            }
            config.change_factor = cf;
            config.period = period;
            config.n_changes = changes;
            let schedule = generate_schedule(&inst, &config, seed)?;
            save_schedule(&schedule, &out)?;
            println!("{}: {} events, digest {}", out.display(), schedule.events.len(), schedule.digest());
        }
        Command::Run { plan } => {
            let plan = load_plan(&plan)?;
            let outcome = run_experiment(&plan)?;
            println!(
                "{}: {} runs, ranking {}",
                outcome.dir.display(),
                outcome.manifest.runs.len(),
                outcome.manifest.ranking
            );
            outcome.ensure_complete()?;
        }
        Command::RunStatic { instance, combo, seed, generations, pop, out } => {
            let inst: Instance = read_instance(&instance)?;
            let config = EaConfig {
                pop_size: pop,
                generations_static: generations,
                ..EaConfig::default()
            };
            let report = run_static(&inst, combo, &config, &mut rng_from_seed(seed))?;
            write_static_csv(&report, &out)?;
            println!(
                "{}: {} solutions, min tour time {:.3}",
                out.display(),
                report.rows.len(),
                report.min_tour_time()
            );
        }
        Command::Rank { input, out } => {
            let table = rank_snapshots(&read_snapshot_csv(&input)?)?;
            write_ranks_csv(&table, &out)?;
            println!("{}: {} entries", out.display(), table.entries.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
