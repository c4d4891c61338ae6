//! Repetition management and budget accounting.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use moseed_core::metrics::additive_approximation_min;
use moseed_core::moea::{run_algorithm, RunSettings, Snapshot, Termination};
use moseed_core::problems::{Benchmark, Evaluator};
use moseed_core::seeding::{generate_seeds, initialize_population, SeedOptions, SeedSet};
use moseed_core::{Individual, ObjectiveVector, RngHandle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::formats;
use crate::front::front_sample;

/// Outcome of one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub fingerprint: String,
    pub problem: String,
    pub algorithm: String,
    pub scheme: String,
    pub rep: usize,
    pub seed: u64,
    /// `(evaluations, alpha)`; seeded runs are shifted by `offset` and start
    /// with the seed set's own alpha.
    pub trajectory: Vec<(u64, f64)>,
    pub seed_alpha: Option<f64>,
    pub seeding_evals: u64,
    /// Evaluations deducted from the total for seeding.
    pub offset: u64,
    pub moea_budget: u64,
    pub moea_evals: u64,
    pub generations: u64,
    pub termination: String,
    /// Wall-clock terminated runs depend on machine speed.
    pub nondeterministic: bool,
    pub final_alpha: f64,
    pub final_objectives: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub rep: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Experiment {
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

/// Generator seed of repetition `rep`.
pub fn rep_seed(base: u64, rep: usize) -> u64 {
    base ^ rep as u64
}

fn alpha<T: AsRef<[f64]>>(front: &[ObjectiveVector], set: &[T]) -> f64 {
    additive_approximation_min(front, set)
        .expect("front and population are non-empty")
        .alpha
}

fn objectives(pop: &[Individual]) -> Vec<&[f64]> {
    pop.iter().map(|i| i.objectives.as_slice()).collect()
}

/// Seeds for one repetition, drawn from the repetition's seeding stream.
pub fn seeds_for(cfg: &ExperimentConfig, problem: &Benchmark, rep: usize) -> Result<SeedSet> {
    let mut rng = RngHandle::new(rep_seed(cfg.base_seed, rep));
    let mut seed_rng = rng.fork();
    let options = SeedOptions {
        total_budget: cfg.seeding_evals,
        scale: cfg.seeding_scale.clone(),
    };
    Ok(generate_seeds(problem, cfg.scheme, &mut seed_rng, &options)?)
}

/// Runs repetition `rep` of `cfg` against the reference `front`.
pub fn run_repetition(
    cfg: &ExperimentConfig,
    problem: &Benchmark,
    front: &[ObjectiveVector],
    rep: usize,
) -> Result<(RunRecord, SeedSet)> {
    let started = Instant::now();
    let seed = rep_seed(cfg.base_seed, rep);
    let mut rng = RngHandle::new(seed);
    let _seeding_stream = rng.fork();
    let mut init_rng = rng.fork();
    let mut run_rng = rng.fork();

    let seeds = seeds_for(cfg, problem, rep)?;
    if seeds.evals_consumed > cfg.total_budget {
        return Err(HarnessError::Config(format!(
            "seeding consumed {} evaluations, more than the total budget {}",
            seeds.evals_consumed, cfg.total_budget
        )));
    }
    let moea_budget = cfg.moea_budget(seeds.evals_consumed);
    let offset = cfg.total_budget - moea_budget;
    let algo = cfg.algorithm_config();

    let mut evaluator = Evaluator::new(problem);
    let init = initialize_population(&seeds, algo.mu, &mut evaluator, &mut init_rng)?;

    let mut trajectory: Vec<(u64, f64)> = Vec::new();
    let seed_alpha = (!seeds.is_empty()).then(|| {
        let pts: Vec<&[f64]> = seeds.seeds.iter().map(|s| s.objectives.as_slice()).collect();
        alpha(front, &pts)
    });
    if let Some(a) = seed_alpha {
        trajectory.push((offset, a));
    }
    let mut hook = |s: &Snapshot<'_>| {
        let at = offset + s.evaluations;
        if trajectory.last().is_none_or(|&(e, _)| at > e) {
            trajectory.push((at, alpha(front, &objectives(s.population))));
        }
    };
    let deadline = || started.elapsed() >= cfg.wallclock;
    let settings = RunSettings {
        budget: moea_budget,
        metric_every: cfg.metric_every,
        track_archive: false,
    };
    let outcome = run_algorithm(
        &algo,
        &mut evaluator,
        init,
        &settings,
        &deadline,
        &mut hook,
        &mut run_rng,
    )?;

    let final_alpha = trajectory.last().map(|t| t.1).unwrap_or(f64::NAN);
    let record = RunRecord {
        fingerprint: cfg.fingerprint(),
        problem: cfg.problem.clone(),
        algorithm: cfg.algorithm.to_string(),
        scheme: cfg.scheme.to_string(),
        rep,
        seed,
        trajectory,
        seed_alpha,
        seeding_evals: seeds.evals_consumed,
        offset,
        moea_budget,
        moea_evals: outcome.evaluations,
        generations: outcome.generations,
        termination: outcome.termination.as_str().to_string(),
        nondeterministic: outcome.termination == Termination::WallClock,
        final_alpha,
        final_objectives: outcome
            .population
            .iter()
            .map(|i| i.objectives.to_vec())
            .collect(),
    };
    Ok((record, seeds))
}

/// Runs every repetition of `cfg`, in parallel when workers allow. Records
/// come back in repetition order. A failing repetition is reported in
/// `failures` and does not stop the others. With an output directory each
/// repetition's record and seed set are written by its worker.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let problem = cfg.benchmark()?;
    let front: Arc<[ObjectiveVector]> = front_sample(&problem, cfg.front_sample_size()?);
    let dir = cfg.out_dir.as_ref().map(|d| formats::run_dir(d, cfg));

    let one = |rep: usize| -> std::result::Result<RunRecord, RunFailure> {
        let fail = |e: HarnessError| RunFailure {
            rep,
            seed: rep_seed(cfg.base_seed, rep),
            message: e.to_string(),
        };
        let (record, seeds) = run_repetition(cfg, &problem, &front, rep).map_err(fail)?;
        if let Some(dir) = &dir {
            persist_repetition(dir, cfg, &record, &seeds).map_err(fail)?;
        }
        Ok(record)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let results: Vec<_> = pool.install(|| (0..cfg.repetitions).into_par_iter().map(one).collect());

    let mut out = Experiment::default();
    for r in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(f) => out.failures.push(f),
        }
    }
    if let Some(dir) = &dir {
        formats::write_experiment(dir, cfg, &out)?;
    }
    Ok(out)
}

fn persist_repetition(dir: &Path, cfg: &ExperimentConfig, record: &RunRecord, seeds: &SeedSet) -> Result<()> {
    let json = serde_json::to_string(record).expect("records serialize");
    formats::atomic_write(&dir.join(format!("reps/rep_{:04}.json", record.rep)), json.as_bytes())?;
    if !seeds.is_empty() {
        let problem = cfg.benchmark()?;
        let text = formats::seed_set_to_csv(seeds, &problem);
        formats::atomic_write(&dir.join(format!("seeds/rep_{:04}.csv", record.rep)), text.as_bytes())?;
    }
    Ok(())
}
