//! Multi-objective evolutionary algorithms sharing one generational loop.
//!
//! Every algorithm creates offspring with SBX and polynomial mutation; they
//! differ in mating selection and in how the parent-plus-offspring pool is
//! cut back to `mu` survivors.

mod age;
mod archive;
mod ibea;
mod nsga2;
pub mod operators;
pub mod sorting;
mod smsemoa;
mod spea2;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use age::age_removal_order;
pub use archive::Archive;
pub use operators::{binary_tournament, polynomial_mutation, sbx_crossover};
pub use sorting::{crowding_distance, fast_nondominated_sort, ranks_from_fronts};
pub use smsemoa::least_contributor;

use crate::error::{Error, Result};
use crate::problems::Evaluator;
use crate::rng::RngHandle;
use crate::types::{DecisionVector, Individual};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Nsga2,
    Spea2,
    Ibea,
    SmsEmoa,
    Age,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Age,
        Algorithm::Ibea,
        Algorithm::Nsga2,
        Algorithm::SmsEmoa,
        Algorithm::Spea2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Spea2 => "spea2",
            Algorithm::Ibea => "ibea",
            Algorithm::SmsEmoa => "smsemoa",
            Algorithm::Age => "age",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "nsga2" | "nsgaii" => Ok(Algorithm::Nsga2),
            "spea2" => Ok(Algorithm::Spea2),
            "ibea" => Ok(Algorithm::Ibea),
            "smsemoa" | "sms" => Ok(Algorithm::SmsEmoa),
            "age" => Ok(Algorithm::Age),
            _ => Err(Error::UnknownAlgorithm(String::from(s))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    pub mu: usize,
    pub lambda: usize,
    pub p_crossover: f64,
    pub eta_crossover: f64,
    /// Per-variable mutation probability; `None` means 1/n.
    pub p_mutation: Option<f64>,
    pub eta_mutation: f64,
    pub ibea_kappa: f64,
    pub smsemoa_ref_offset: f64,
}

impl AlgorithmConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            mu: 100,
            lambda: 100,
            p_crossover: 0.9,
            eta_crossover: 20.0,
            p_mutation: None,
            eta_mutation: 20.0,
            ibea_kappa: 0.05,
            smsemoa_ref_offset: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.mu < 2 || self.lambda < 1 {
            return Err(Error::Config("mu must be at least 2 and lambda at least 1".into()));
        }
        if !prob(self.p_crossover) || !self.p_mutation.is_none_or(prob) {
            return Err(Error::Config("probabilities must lie in [0, 1]".into()));
        }
        if !(self.eta_crossover > 0.0 && self.eta_mutation > 0.0) {
            return Err(Error::Config("distribution indices must be positive".into()));
        }
        if !(self.ibea_kappa > 0.0) || !(self.smsemoa_ref_offset > 0.0) {
            return Err(Error::Config("kappa and reference offset must be positive".into()));
        }
        Ok(())
    }

    /// Offspring per generation; the steady-state algorithm makes one.
    pub fn offspring_per_step(&self) -> usize {
        match self.algorithm {
            Algorithm::SmsEmoa => 1,
            _ => self.lambda,
        }
    }
}

/// Polled once per generation; `true` ends the run after the generation in
/// flight.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// A deadline that never expires.
pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Budget,
    WallClock,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Budget => "budget",
            Termination::WallClock => "wallclock",
        }
    }
}

/// State handed to the metric hook.
pub struct Snapshot<'a> {
    pub evaluations: u64,
    pub generation: u64,
    pub population: &'a [Individual],
    pub archive: Option<&'a Archive>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    /// Cap on the evaluator's total count, initial fill included.
    pub budget: u64,
    /// The hook fires whenever the count reaches a new multiple of this.
    pub metric_every: u64,
    /// Keep an archive of every non-dominated point seen.
    pub track_archive: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub population: Vec<Individual>,
    pub archive: Option<Archive>,
    pub evaluations: u64,
    pub generations: u64,
    pub termination: Termination,
}

/// Per-algorithm mating and survival.
pub(crate) trait Strategy {
    /// Recomputes mating information for a fresh population.
    fn prepare(&mut self, population: &[Individual], rng: &mut RngHandle);
    fn parent(&mut self, population: &[Individual], rng: &mut RngHandle) -> usize;
    /// Cuts `pool` down to `mu` and leaves mating information for the
    /// survivors in place.
    fn survive(
        &mut self,
        pool: Vec<Individual>,
        mu: usize,
        archive: Option<&Archive>,
        rng: &mut RngHandle,
    ) -> Vec<Individual>;
}

fn strategy(cfg: &AlgorithmConfig) -> Box<dyn Strategy> {
    match cfg.algorithm {
        Algorithm::Nsga2 => Box::new(nsga2::Nsga2::default()),
        Algorithm::Spea2 => Box::new(spea2::Spea2::default()),
        Algorithm::Ibea => Box::new(ibea::Ibea::new(cfg.ibea_kappa)),
        Algorithm::SmsEmoa => Box::new(smsemoa::SmsEmoa::new(cfg.smsemoa_ref_offset)),
        Algorithm::Age => Box::new(age::Age),
    }
}

/// Runs `cfg.algorithm` from `init` until the evaluator has spent
/// `settings.budget` evaluations or the deadline passes.
///
/// Evaluations already on the evaluator (the random part of the initial
/// population) count against the budget. The hook sees the starting
/// population, every cadence crossing and the final state, with strictly
/// increasing evaluation counts except that the start and a zero-generation
/// end coincide and are reported once.
pub fn run_algorithm(
    cfg: &AlgorithmConfig,
    evaluator: &mut Evaluator<'_>,
    init: Vec<Individual>,
    settings: &RunSettings,
    deadline: &dyn Deadline,
    hook: &mut dyn FnMut(&Snapshot<'_>),
    rng: &mut RngHandle,
) -> Result<RunOutcome> {
    cfg.validate()?;
    if init.len() != cfg.mu {
        return Err(Error::Config(alloc::format!(
            "initial population has {} members, expected {}",
            init.len(),
            cfg.mu
        )));
    }
    if evaluator.used() > settings.budget {
        return Err(Error::Config(alloc::format!(
            "budget {} is below the {} evaluations of the initial population",
            settings.budget,
            evaluator.used()
        )));
    }
    let problem = evaluator.problem();
    let bounds = problem.bounds().clone();
    let n = problem.num_variables();
    let p_m = cfg.p_mutation.unwrap_or(1.0 / n as f64);
    let cadence = settings.metric_every.max(1);

    let mut archive = (settings.track_archive || cfg.algorithm == Algorithm::Age).then(|| {
        let mut a = Archive::new();
        for ind in &init {
            a.insert(ind);
        }
        a
    });
    let mut population = init;
    let mut strategy = strategy(cfg);
    strategy.prepare(&population, rng);

    let mut generations = 0u64;
    let mut reported = evaluator.used();
    hook(&Snapshot {
        evaluations: reported,
        generation: 0,
        population: &population,
        archive: archive.as_ref(),
    });

    let termination = loop {
        let used = evaluator.used();
        if used >= settings.budget {
            break Termination::Budget;
        }
        if deadline.expired() {
            break Termination::WallClock;
        }
        let count = (settings.budget - used).min(cfg.offspring_per_step() as u64) as usize;
        let mut pool = population;
        let mu = pool.len();
        let mut children: Vec<Vec<f64>> = Vec::with_capacity(count + 1);
        while children.len() < count {
            let a = strategy.parent(&pool[..mu], rng);
            let b = strategy.parent(&pool[..mu], rng);
            let (c1, c2) = sbx_crossover(
                &pool[a].decision,
                &pool[b].decision,
                cfg.eta_crossover,
                cfg.p_crossover,
                &bounds,
                rng,
            );
            children.push(c1);
            children.push(c2);
        }
        children.truncate(count);
        for mut child in children {
            polynomial_mutation(&mut child, cfg.eta_mutation, p_m, &bounds, rng);
            let ind = evaluator.evaluate(DecisionVector::from_raw(child))?;
            if let Some(a) = archive.as_mut() {
                a.insert(&ind);
            }
            pool.push(ind);
        }
        population = strategy.survive(pool, cfg.mu, archive.as_ref(), rng);
        generations += 1;

        let used = evaluator.used();
        if used / cadence > reported / cadence {
            reported = used;
            hook(&Snapshot {
                evaluations: used,
                generation: generations,
                population: &population,
                archive: archive.as_ref(),
            });
        }
    };
    if evaluator.used() > reported {
        hook(&Snapshot {
            evaluations: evaluator.used(),
            generation: generations,
            population: &population,
            archive: archive.as_ref(),
        });
    }
    Ok(RunOutcome {
        population,
        archive,
        evaluations: evaluator.used(),
        generations,
        termination,
    })
}
