//! Initial-population seeding from scalarized single-objective runs.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cmaes::cma_minimize;
use crate::error::{Error, Result};
use crate::problems::{Evaluator, Problem};
use crate::rng::RngHandle;
use crate::types::Individual;

/// Non-negative coefficients of a weighted sum of objectives.
pub type WeightVector = Vec<f64>;

/// Total CMA-ES budget of the corners-and-centre scheme.
pub const CORNERS_BUDGET: u64 = 10_000;
/// Seed count and total CMA-ES budget of the linear-combinations scheme.
pub const LINEAR_SEEDS: usize = 100;
pub const LINEAR_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    NoSeed,
    CornersAndCentre,
    LinearCombinations,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [
        Scheme::NoSeed,
        Scheme::CornersAndCentre,
        Scheme::LinearCombinations,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::NoSeed => "noseed",
            Scheme::CornersAndCentre => "cac",
            Scheme::LinearCombinations => "lc",
        }
    }

    /// Default total CMA-ES budget.
    pub fn default_budget(self) -> u64 {
        match self {
            Scheme::NoSeed => 0,
            Scheme::CornersAndCentre => CORNERS_BUDGET,
            Scheme::LinearCombinations => LINEAR_BUDGET,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "noseed" | "none" => Ok(Scheme::NoSeed),
            "cac" | "cornersandcentre" | "corners" => Ok(Scheme::CornersAndCentre),
            "lc" | "linearcombinations" | "linear" => Ok(Scheme::LinearCombinations),
            _ => Err(Error::UnknownScheme(String::from(s))),
        }
    }
}

/// Weighted sum `Σ wᵢ fᵢ`.
pub fn scalarize(w: &[f64], f: &[f64]) -> Result<f64> {
    if w.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: f.len(),
        });
    }
    Ok(w.iter().zip(f).map(|(a, b)| a * b).sum())
}

/// One vector per objective with 10 on that objective and 1 elsewhere,
/// followed by the all-ones vector.
pub fn corners_and_centre_weights(d: usize) -> Vec<WeightVector> {
    let mut out: Vec<WeightVector> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 10.0 } else { 1.0 }).collect())
        .collect();
    out.push(alloc::vec![1.0; d]);
    out
}

/// Deterministic enumeration of `count` weight vectors: all 0/1 vectors by
/// number of ones, then vectors over the value sets {0,1,2}, {0,1,3},
/// {0,2,3}, {0,1,4}, ... that use the set's largest value. Lexicographically
/// descending within each group; positive multiples of earlier vectors are
/// skipped.
pub fn linear_combination_weights(d: usize, count: usize) -> Vec<WeightVector> {
    let mut out: Vec<Vec<u64>> = Vec::with_capacity(count);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut push = |v: Vec<u64>, out: &mut Vec<Vec<u64>>| {
        let g = v.iter().fold(0, |g, &x| num_integer::gcd(g, x));
        if g == 0 {
            return;
        }
        let primitive: Vec<u64> = v.iter().map(|x| x / g).collect();
        if seen.insert(primitive) {
            out.push(v);
        }
    };

    for k in 1..=d {
        for v in descending_vectors(d, &[1, 0]) {
            if out.len() >= count {
                break;
            }
            if v.iter().filter(|&&x| x == 1).count() == k {
                push(v, &mut out);
            }
        }
    }
    let mut m = 2u64;
    // Every value set contributes at least one fresh primitive vector, so
    // this terminates.
    while out.len() < count {
        for p in 1..m {
            for v in descending_vectors(d, &[m, p, 0]) {
                if out.len() >= count {
                    break;
                }
                if v.contains(&m) {
                    push(v, &mut out);
                }
            }
        }
        m += 1;
    }
    out.truncate(count);
    out.into_iter()
        .map(|v| v.into_iter().map(|x| x as f64).collect())
        .collect()
}

/// All length-`d` vectors over `values` (given in descending order), in
/// lexicographically descending order.
fn descending_vectors(d: usize, values: &[u64]) -> Vec<Vec<u64>> {
    let b = values.len();
    let total = b.pow(d as u32);
    (0..total)
        .map(|mut code| {
            let mut v = alloc::vec![0; d];
            for slot in v.iter_mut().rev() {
                *slot = values[code % b];
                code /= b;
            }
            v
        })
        .collect()
}

/// Tunables for [`generate_seeds`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeedOptions {
    /// Total CMA-ES budget across all seeds; the scheme default when `None`.
    pub total_budget: Option<u64>,
    /// Per-objective factors multiplied into every weight vector.
    pub scale: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedSet {
    pub scheme: Scheme,
    pub seeds: Vec<Individual>,
    pub weight_vectors: Vec<WeightVector>,
    /// CMA-ES evaluations plus one re-evaluation per seed.
    pub evals_consumed: u64,
}

impl SeedSet {
    pub fn empty() -> Self {
        Self {
            scheme: Scheme::NoSeed,
            seeds: Vec::new(),
            weight_vectors: Vec::new(),
            evals_consumed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }
}

/// Splits `total` evenly over `parts`, the remainder going to the last.
pub fn split_budget(total: u64, parts: usize) -> Vec<u64> {
    let share = total / parts as u64;
    let mut out = alloc::vec![share; parts];
    if let Some(last) = out.last_mut() {
        *last += total % parts as u64;
    }
    out
}

/// The weight vectors a scheme optimizes for, in seed order.
pub fn scheme_weights(scheme: Scheme, d: usize) -> Vec<WeightVector> {
    match scheme {
        Scheme::NoSeed => Vec::new(),
        Scheme::CornersAndCentre => corners_and_centre_weights(d),
        Scheme::LinearCombinations => linear_combination_weights(d, LINEAR_SEEDS),
    }
}

/// Runs one CMA-ES per weight vector of `scheme` and re-evaluates each best
/// point as a full individual. Each seed gets its own forked generator.
pub fn generate_seeds(
    problem: &dyn Problem,
    scheme: Scheme,
    rng: &mut RngHandle,
    options: &SeedOptions,
) -> Result<SeedSet> {
    let d = problem.num_objectives();
    let mut weights = scheme_weights(scheme, d);
    if weights.is_empty() {
        return Ok(SeedSet::empty());
    }
    if let Some(scale) = &options.scale {
        if scale.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: scale.len(),
            });
        }
        for w in &mut weights {
            for (a, s) in w.iter_mut().zip(scale) {
                *a *= s;
            }
        }
    }
    let total = options.total_budget.unwrap_or(scheme.default_budget());
    let budgets = split_budget(total, weights.len());

    let mut evaluator = Evaluator::new(problem);
    let mut seeds = Vec::with_capacity(weights.len());
    let mut consumed = 0;
    for (w, &budget) in weights.iter().zip(&budgets) {
        let mut child = rng.fork();
        let objective = |x: &[f64]| match problem.evaluate(x) {
            Ok(f) => scalarize(w, &f).unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        };
        let result = cma_minimize(objective, problem.bounds(), budget, &mut child)?;
        consumed += result.evals_used;
        seeds.push(evaluator.evaluate(result.best_x)?);
    }
    Ok(SeedSet {
        scheme,
        seeds,
        weight_vectors: weights,
        evals_consumed: consumed + evaluator.used(),
    })
}

/// Fills a population of `popsize` with the seeds and uniform random points.
/// Random points are evaluated through `evaluator`, so they are counted
/// against whatever budget it tracks.
pub fn initialize_population(
    seeds: &SeedSet,
    popsize: usize,
    evaluator: &mut Evaluator<'_>,
    rng: &mut RngHandle,
) -> Result<Vec<Individual>> {
    if seeds.len() > popsize {
        return Err(Error::Config(alloc::format!(
            "{} seeds exceed population size {popsize}",
            seeds.len()
        )));
    }
    let mut population = seeds.seeds.clone();
    while population.len() < popsize {
        let x = evaluator.problem().bounds().sample(rng);
        population.push(evaluator.evaluate(x)?);
    }
    Ok(population)
}
