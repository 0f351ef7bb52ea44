use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{apply_change, ChangeSchedule};
use crate::error::{Error, Result};
use crate::instance::{evaluate_solution, Evaluation, PackingPlan, Solution, Tour, TtpInstance};
use crate::metrics::{hypervolume, hypervolume_gain, max_spread, nadir, Archive, NadirPoint, Point};
use crate::rng::DttpRng;
use crate::scalar::Scalar;
use crate::solvers::{
    construct_packing, construct_tour, expand_into, random_packing, random_tour, ComponentMethod,
};

use super::operators::{mutate, one_point_crossover, order_crossover};
use super::sorting::{rank_and_crowding, select_survivors};
use super::strategy::StrategyId;

/// Consecutive duplicate draws tolerated while filling a random cell.
const MAX_RANDOM_RETRIES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EaConfig {
    pub pop_size: usize,
    /// Generations of a static (change-free) run.
    pub generations_static: usize,
    pub crossover_rate: f64,
    /// Probability of one single-swap mutation per offspring tour.
    pub tour_swap_rate: f64,
    /// Per-item flip probability; `None` means `1 / m`.
    pub bitflip_rate: Option<f64>,
    pub tournament_size: usize,
}

impl Default for EaConfig {
    fn default() -> Self {
        EaConfig {
            pop_size: 60,
            generations_static: 1000,
            crossover_rate: 0.9,
            tour_swap_rate: 0.2,
            bitflip_rate: None,
            tournament_size: 2,
        }
    }
}

impl EaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "population size must be even and at least 4, got {}",
                self.pop_size
            )));
        }
        let probs = [
            ("crossover_rate", Some(self.crossover_rate)),
            ("tour_swap_rate", Some(self.tour_swap_rate)),
            ("bitflip_rate", self.bitflip_rate),
        ];
        for (name, p) in probs {
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
                }
            }
        }
        if self.tournament_size < 1 {
            return Err(Error::Config("tournament size must be at least 1".into()));
        }
        Ok(())
    }

    fn flip_rate(&self, num_items: usize) -> f64 {
        self.bitflip_rate
            .unwrap_or(if num_items == 0 { 0.0 } else { 1.0 / num_items as f64 })
    }
}

/// Which construction cell a solution descends from. Informational only;
/// selection never looks at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub tour: ComponentMethod,
    pub packing: ComponentMethod,
}

impl Origin {
    pub fn label(&self) -> String {
        format!("{}{}", self.tour.letter(), self.packing.letter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<F> {
    pub solution: Solution,
    pub eval: Evaluation<F>,
    pub origin: Origin,
}

impl<F: Scalar> Individual<F> {
    pub fn new(inst: &TtpInstance<F>, solution: Solution, origin: Origin) -> Result<Self> {
        let eval = evaluate_solution(inst, &solution)?;
        Ok(Individual {
            solution,
            eval,
            origin,
        })
    }

    pub fn point(&self) -> Point<F> {
        Point::from(self.eval)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population<F> {
    pub members: Vec<Individual<F>>,
}

impl<F: Scalar> Population<F> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn points(&self) -> Vec<Point<F>> {
        self.members.iter().map(Individual::point).collect()
    }

    pub fn check_feasible(&self, inst: &TtpInstance<F>) -> Result<()> {
        for (k, m) in self.members.iter().enumerate() {
            if !m.solution.is_feasible(inst) {
                return Err(Error::Infeasible(format!("population member {k} is infeasible")));
            }
        }
        Ok(())
    }
}

/// A freshly built population together with the seed solution of every
/// construction cell (the unperturbed constructed solution, or the first
/// member for fully random cells).
#[derive(Debug, Clone)]
pub struct InitialPopulation<F> {
    pub population: Population<F>,
    pub seeds: Vec<(Origin, Solution)>,
}

impl<F> InitialPopulation<F> {
    pub fn seed_for(&self, origin: Origin) -> Option<&Solution> {
        self.seeds.iter().find(|(o, _)| *o == origin).map(|(_, s)| s)
    }
}

#[derive(Default)]
struct ComponentCache {
    tours: HashMap<ComponentMethod, Tour>,
    packings: HashMap<ComponentMethod, PackingPlan>,
}

impl ComponentCache {
    fn tour<F: Scalar>(&mut self, m: ComponentMethod, inst: &TtpInstance<F>, rng: &mut DttpRng) -> Tour {
        if m == ComponentMethod::Random {
            return random_tour(inst, rng);
        }
        self.tours
            .entry(m)
            .or_insert_with(|| construct_tour(m, inst, rng))
            .clone()
    }

    fn packing<F: Scalar>(
        &mut self,
        m: ComponentMethod,
        inst: &TtpInstance<F>,
        rng: &mut DttpRng,
    ) -> Result<PackingPlan> {
        if m == ComponentMethod::Random {
            return construct_packing(m, inst, rng);
        }
        if let Some(p) = self.packings.get(&m) {
            return Ok(p.clone());
        }
        let p = construct_packing(m, inst, rng)?;
        self.packings.insert(m, p.clone());
        Ok(p)
    }
}

fn random_solution<F: Scalar>(inst: &TtpInstance<F>, rng: &mut DttpRng) -> Result<Solution> {
    let tour = random_tour(inst, rng);
    let sel = random_packing(inst, rng);
    Ok(Solution::new(tour, PackingPlan::from_indices(inst.num_items(), &sel)?))
}

/// Builds `pop_size` unique solutions following the strategy's cells.
///
/// A cell with both components random is filled with independent random
/// solutions. Any other cell constructs one seed (drawing its random
/// component once, if any) and expands it by minimal mutation.
pub fn initialize<F: Scalar>(
    strategy: StrategyId,
    inst: &TtpInstance<F>,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<InitialPopulation<F>> {
    config.validate()?;
    let mut cache = ComponentCache::default();
    let mut seen: HashSet<Solution> = HashSet::new();
    let mut members = Vec::with_capacity(config.pop_size);
    let mut seeds = Vec::new();
    for ((tm, pm), share) in strategy.cells().into_iter().zip(strategy.shares(config.pop_size)) {
        if share == 0 {
            continue;
        }
        let origin = Origin { tour: tm, packing: pm };
        if tm == ComponentMethod::Random && pm == ComponentMethod::Random {
            let mut added = 0;
            let mut retries = 0;
            let mut first = None;
            while added < share {
                let s = random_solution(inst, rng)?;
                if seen.insert(s.clone()) {
                    first.get_or_insert_with(|| s.clone());
                    members.push(Individual::new(inst, s, origin)?);
                    added += 1;
                    retries = 0;
                } else {
                    retries += 1;
                    if retries > MAX_RANDOM_RETRIES {
                        return Err(Error::UniquenessUnreachable {
                            wanted: config.pop_size,
                            found: members.len(),
                        });
                    }
                }
            }
            seeds.push((origin, first.expect("share > 0")));
        } else {
            let tour = cache.tour(tm, inst, rng);
            let packing = cache.packing(pm, inst, rng)?;
            let seed = Solution::new(tour, packing);
            for s in expand_into(inst, &seed, share, rng, &mut seen)? {
                members.push(Individual::new(inst, s, origin)?);
            }
            seeds.push((origin, seed));
        }
    }
    Ok(InitialPopulation {
        population: Population { members },
        seeds,
    })
}

fn tournament<F: Scalar>(rank: &[usize], crowd: &[F], size: usize, rng: &mut DttpRng) -> usize {
    let n = rank.len();
    let mut best = rng.gen_range(0..n);
    for _ in 1..size {
        let c = rng.gen_range(0..n);
        if rank[c] < rank[best] || (rank[c] == rank[best] && crowd[c] > crowd[best]) {
            best = c;
        }
    }
    best
}

/// Keeps `keep` candidates: unique genotypes first (non-dominated sorting
/// plus crowding), topped up with duplicates in input order only when there
/// are not enough unique ones. Input order is preserved.
fn environmental_selection<F: Scalar>(candidates: Vec<Individual<F>>, keep: usize) -> Vec<Individual<F>> {
    let mut seen = HashSet::new();
    let mut unique = Vec::new();
    let mut dups = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if seen.insert(&c.solution) {
            unique.push(i);
        } else {
            dups.push(i);
        }
    }
    let mut chosen: Vec<usize> = if unique.len() >= keep {
        let pts: Vec<Point<F>> = unique.iter().map(|&i| candidates[i].point()).collect();
        select_survivors(&pts, keep).into_iter().map(|k| unique[k]).collect()
    } else {
        let mut c = unique;
        c.extend(dups.iter().take(keep - c.len()));
        c
    };
    chosen.sort_unstable();
    let mut slots: Vec<Option<Individual<F>>> = candidates.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}

/// One generation: tournament selection, crossover, mutation, evaluation
/// and elitist truncation of parents plus offspring.
pub fn step_generation<F: Scalar>(
    pop: &Population<F>,
    inst: &TtpInstance<F>,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<Population<F>> {
    let n = pop.len();
    if n == 0 {
        return Ok(pop.clone());
    }
    let (rank, crowd) = rank_and_crowding(&pop.points());
    let flip = config.flip_rate(inst.num_items());
    let mut offspring = Vec::with_capacity(n + 1);
    while offspring.len() < n {
        let a = &pop.members[tournament(&rank, &crowd, config.tournament_size, rng)];
        let b = &pop.members[tournament(&rank, &crowd, config.tournament_size, rng)];
        let (mut c1, mut c2) = if rng.gen::<f64>() < config.crossover_rate {
            let t1 = order_crossover(&a.solution.tour, &b.solution.tour, rng);
            let t2 = order_crossover(&b.solution.tour, &a.solution.tour, rng);
            let (p1, p2) = one_point_crossover(&a.solution.packing, &b.solution.packing, rng);
            (Solution::new(t1, p1), Solution::new(t2, p2))
        } else {
            (a.solution.clone(), b.solution.clone())
        };
        mutate(&mut c1, inst, config.tour_swap_rate, flip, rng);
        mutate(&mut c2, inst, config.tour_swap_rate, flip, rng);
        offspring.push(Individual::new(inst, c1, a.origin)?);
        offspring.push(Individual::new(inst, c2, b.origin)?);
    }
    offspring.truncate(n);
    let mut merged = pop.members.clone();
    merged.extend(offspring);
    Ok(Population {
        members: environmental_selection(merged, n),
    })
}

/// Re-evaluates every member against `inst`.
pub fn reevaluate<F: Scalar>(pop: &Population<F>, inst: &TtpInstance<F>) -> Result<Population<F>> {
    let members = pop
        .members
        .iter()
        .map(|m| Individual::new(inst, m.solution.clone(), m.origin))
        .collect::<Result<Vec<_>>>()?;
    Ok(Population { members })
}

/// Response to a change: survivors are re-evaluated on the new instance;
/// responsive strategies then build a full new population with their
/// construction recipe and keep the best `pop_size` of the union.
pub fn respond_to_change<F: Scalar>(
    strategy: StrategyId,
    new_inst: &TtpInstance<F>,
    pop: &Population<F>,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<Population<F>> {
    let survivors = reevaluate(pop, new_inst)?;
    if !strategy.responds() {
        return Ok(survivors);
    }
    let fresh = initialize(strategy, new_inst, config, rng)?.population;
    let mut merged = survivors.members;
    merged.extend(fresh.members);
    Ok(Population {
        members: environmental_selection(merged, config.pop_size),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord<F> {
    pub generation: usize,
    pub interval: usize,
    pub hypervolume: F,
    pub spread: F,
    /// Hypervolume of every non-dominated point seen since the interval
    /// started, accumulated from per-insertion gains.
    pub archive_hypervolume: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSnapshot<F> {
    pub interval: usize,
    /// Last generation of the interval (the one right before the change).
    pub generation: usize,
    pub hypervolume: F,
    pub spread: F,
    pub points: Vec<Point<F>>,
}

#[derive(Debug, Clone)]
pub struct RunTrace<F> {
    pub strategy: StrategyId,
    pub nadir: NadirPoint<F>,
    pub records: Vec<GenerationRecord<F>>,
    pub snapshots: Vec<IntervalSnapshot<F>>,
    pub final_population: Population<F>,
}

struct Recorder<F> {
    nadir: NadirPoint<F>,
    archive: Archive<F>,
    archive_hv: F,
    records: Vec<GenerationRecord<F>>,
}

impl<F: Scalar> Recorder<F> {
    fn record(&mut self, generation: usize, interval: usize, pop: &Population<F>) {
        let pts = pop.points();
        for p in &pts {
            let gain = hypervolume_gain(self.archive.points(), p, &self.nadir);
            if self.archive.insert(*p) {
                self.archive_hv = self.archive_hv + gain;
            }
        }
        self.records.push(GenerationRecord {
            generation,
            interval,
            hypervolume: hypervolume(&pts, &self.nadir),
            spread: max_spread(&pts),
            archive_hypervolume: self.archive_hv,
        });
    }

    fn new_interval(&mut self) {
        self.archive.clear();
        self.archive_hv = F::zero();
    }

    fn snapshot(&self, interval: usize, generation: usize, pop: &Population<F>) -> IntervalSnapshot<F> {
        let points = pop.points();
        IntervalSnapshot {
            interval,
            generation,
            hypervolume: hypervolume(&points, &self.nadir),
            spread: max_spread(&points),
            points,
        }
    }
}

/// Evolves through every interval of `schedule`.
///
/// Generation 0 is the initial population. At each event generation the
/// pre-change population is snapshotted, the change is applied, the
/// strategy responds, and one evolution step produces the recorded
/// population of that generation. Metrics always use the current instance
/// and the nadir of the base instance.
pub fn run_dynamic<F: Scalar>(
    base: &TtpInstance<F>,
    schedule: &ChangeSchedule,
    strategy: StrategyId,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<RunTrace<F>> {
    schedule.validate_for(base)?;
    let total = schedule.config.total_generations();
    if schedule.events.iter().any(|e| e.at_generation > total) {
        return Err(Error::ScheduleMismatch(format!(
            "schedule has events beyond generation {total}"
        )));
    }
    let mut rec = Recorder {
        nadir: nadir(base),
        archive: Archive::new(),
        archive_hv: F::zero(),
        records: Vec::with_capacity(total + 1),
    };
    let mut inst = base.clone();
    let mut pop = initialize(strategy, &inst, config, rng)?.population;
    let mut interval = 0;
    let mut snapshots = Vec::with_capacity(schedule.events.len() + 1);
    let mut events = schedule.events.iter().peekable();
    rec.record(0, interval, &pop);
    for generation in 1..=total {
        if let Some(ev) = events.next_if(|e| e.at_generation == generation) {
            snapshots.push(rec.snapshot(interval, generation - 1, &pop));
            inst = apply_change(&inst, ev)?;
            pop = respond_to_change(strategy, &inst, &pop, config, rng)?;
            interval += 1;
            rec.new_interval();
        }
        pop = step_generation(&pop, &inst, config, rng)?;
        if cfg!(debug_assertions) {
            pop.check_feasible(&inst)?;
        }
        rec.record(generation, interval, &pop);
    }
    snapshots.push(rec.snapshot(interval, total, &pop));
    Ok(RunTrace {
        strategy,
        nadir: rec.nadir,
        records: rec.records,
        snapshots,
        final_population: pop,
    })
}

/// Result of a change-free run.
#[derive(Debug, Clone)]
pub struct StaticOutcome<F> {
    pub initial: InitialPopulation<F>,
    pub final_population: Population<F>,
}

/// Initialises with `strategy` and evolves `config.generations_static`
/// generations on a fixed instance.
pub fn evolve_static<F: Scalar>(
    inst: &TtpInstance<F>,
    strategy: StrategyId,
    config: &EaConfig,
    rng: &mut DttpRng,
) -> Result<StaticOutcome<F>> {
    let initial = initialize(strategy, inst, config, rng)?;
    let mut pop = initial.population.clone();
    for _ in 0..config.generations_static {
        pop = step_generation(&pop, inst, config, rng)?;
    }
    Ok(StaticOutcome {
        initial,
        final_population: pop,
    })
}
