//! Benchmark problems: ZDT1–4, ZDT6, DTLZ1–4 and LZ09 F1–F2, each with an
//! evaluator and a sampler for its known Pareto front.
//!
//! Instances are looked up by name through [`benchmark`]; the [`Problem`]
//! trait is the extension point for further families.

mod dtlz;
mod lz09;
mod zdt;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RngHandle;
use crate::types::{Bounds, DecisionVector, Individual, ObjectiveVector};

pub use zdt::{zdt3_front_segments, zdt6_min_f1};

/// A box-constrained multi-objective minimization problem.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;
    fn num_variables(&self) -> usize;
    fn num_objectives(&self) -> usize;
    fn bounds(&self) -> &Bounds;

    /// Objective values of an in-bounds decision vector. Out-of-bounds or
    /// wrongly sized inputs are rejected; callers clamp first.
    fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector>;

    /// `count` points drawn from the Pareto front.
    fn sample_front(&self, count: usize, rng: &mut RngHandle) -> Vec<ObjectiveVector>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Lz09F1,
    Lz09F2,
}

/// A built-in benchmark instance.
#[derive(Debug, Clone)]
pub struct Benchmark {
    name: String,
    family: Family,
    d: usize,
    bounds: Bounds,
}

/// Variable count of every DTLZ instance.
pub const DTLZ_VARIABLES: usize = 30;
/// Objective counts registered for DTLZ.
pub const DTLZ_OBJECTIVES: [usize; 4] = [2, 4, 6, 8];

impl Benchmark {
    pub fn new(family: Family, d: usize) -> Result<Self> {
        use Family::*;
        let (name, n, bounds) = match family {
            Zdt1 | Zdt2 | Zdt3 | Zdt4 | Zdt6 | Lz09F1 | Lz09F2 if d != 2 => {
                return Err(Error::Config(format!(
                    "{family:?} has two objectives, not {d}"
                )))
            }
            Zdt1 | Zdt2 | Zdt3 => {
                let name = match family {
                    Zdt1 => "zdt1",
                    Zdt2 => "zdt2",
                    _ => "zdt3",
                };
                (String::from(name), 30, Bounds::uniform(30, 0.0, 1.0)?)
            }
            Zdt4 => {
                let mut lower = alloc::vec![-5.0; 10];
                let mut upper = alloc::vec![5.0; 10];
                lower[0] = 0.0;
                upper[0] = 1.0;
                (String::from("zdt4"), 10, Bounds::new(lower, upper)?)
            }
            Zdt6 => (String::from("zdt6"), 10, Bounds::uniform(10, 0.0, 1.0)?),
            Dtlz1 | Dtlz2 | Dtlz3 | Dtlz4 => {
                if !(2..DTLZ_VARIABLES).contains(&d) {
                    return Err(Error::Config(format!("DTLZ needs 2 <= d < 30, got {d}")));
                }
                let k = match family {
                    Dtlz1 => 1,
                    Dtlz2 => 2,
                    Dtlz3 => 3,
                    _ => 4,
                };
                (
                    format!("dtlz{k}_d{d}"),
                    DTLZ_VARIABLES,
                    Bounds::uniform(DTLZ_VARIABLES, 0.0, 1.0)?,
                )
            }
            Lz09F1 => (String::from("lz09_f1"), 30, Bounds::uniform(30, 0.0, 1.0)?),
            Lz09F2 => {
                let mut lower = alloc::vec![-1.0; 30];
                lower[0] = 0.0;
                (String::from("lz09_f2"), 30, Bounds::new(lower, alloc::vec![1.0; 30])?)
            }
        };
        debug_assert_eq!(bounds.len(), n);
        Ok(Self {
            name,
            family,
            d,
            bounds,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }
}

impl Problem for Benchmark {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_variables(&self) -> usize {
        self.bounds.len()
    }

    fn num_objectives(&self) -> usize {
        self.d
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        self.bounds.check(x)?;
        use Family::*;
        let f = match self.family {
            Zdt1 => zdt::zdt1(x),
            Zdt2 => zdt::zdt2(x),
            Zdt3 => zdt::zdt3(x),
            Zdt4 => zdt::zdt4(x),
            Zdt6 => zdt::zdt6(x),
            Dtlz1 => dtlz::dtlz1(x, self.d),
            Dtlz2 => dtlz::dtlz2(x, self.d),
            Dtlz3 => dtlz::dtlz3(x, self.d),
            Dtlz4 => dtlz::dtlz4(x, self.d),
            Lz09F1 => lz09::f1(x),
            Lz09F2 => lz09::f2(x),
        };
        Ok(ObjectiveVector::from(f))
    }

    fn sample_front(&self, count: usize, rng: &mut RngHandle) -> Vec<ObjectiveVector> {
        use Family::*;
        let points = match self.family {
            Zdt1 | Zdt4 | Lz09F1 | Lz09F2 => zdt::sample_convex(count, rng),
            Zdt2 => zdt::sample_concave(count, 0.0, rng),
            Zdt6 => zdt::sample_concave(count, zdt6_min_f1(), rng),
            Zdt3 => zdt::sample_zdt3(count, rng),
            Dtlz1 => dtlz::sample_simplex(count, self.d, rng),
            Dtlz2 | Dtlz3 | Dtlz4 => dtlz::sample_sphere(count, self.d, rng),
        };
        points.into_iter().map(ObjectiveVector::from).collect()
    }
}

/// Looks up a registered instance: `zdt1`, `zdt2`, `zdt3`, `zdt4`, `zdt6`,
/// `dtlz{1..4}_d{2,4,6,8}`, `lz09_f1`, `lz09_f2`.
pub fn benchmark(name: &str) -> Result<Benchmark> {
    let unknown = || Error::UnknownProblem(String::from(name));
    let family = match name {
        "zdt1" => Family::Zdt1,
        "zdt2" => Family::Zdt2,
        "zdt3" => Family::Zdt3,
        "zdt4" => Family::Zdt4,
        "zdt6" => Family::Zdt6,
        "lz09_f1" => Family::Lz09F1,
        "lz09_f2" => Family::Lz09F2,
        _ => {
            let rest = name.strip_prefix("dtlz").ok_or_else(unknown)?;
            let (k, d) = rest.split_once("_d").ok_or_else(unknown)?;
            let d: usize = d.parse().map_err(|_| unknown())?;
            if !DTLZ_OBJECTIVES.contains(&d) {
                return Err(unknown());
            }
            let family = match k {
                "1" => Family::Dtlz1,
                "2" => Family::Dtlz2,
                "3" => Family::Dtlz3,
                "4" => Family::Dtlz4,
                _ => return Err(unknown()),
            };
            return Benchmark::new(family, d);
        }
    };
    Benchmark::new(family, 2)
}

/// Every name accepted by [`benchmark`].
pub fn registry_names() -> Vec<String> {
    let mut names: Vec<String> = ["zdt1", "zdt2", "zdt3", "zdt4", "zdt6"]
        .iter()
        .map(|s| String::from(*s))
        .collect();
    for k in 1..=4 {
        for d in DTLZ_OBJECTIVES {
            names.push(format!("dtlz{k}_d{d}"));
        }
    }
    names.push(String::from("lz09_f1"));
    names.push(String::from("lz09_f2"));
    names
}

/// Wraps a problem and counts every evaluation performed through it.
pub struct Evaluator<'p> {
    problem: &'p dyn Problem,
    used: u64,
}

impl<'p> Evaluator<'p> {
    pub fn new(problem: &'p dyn Problem) -> Self {
        Self { problem, used: 0 }
    }

    pub fn problem(&self) -> &'p dyn Problem {
        self.problem
    }

    /// Evaluations performed so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn evaluate(&mut self, x: DecisionVector) -> Result<Individual> {
        let objectives = self.problem.evaluate(&x)?;
        self.used += 1;
        Ok(Individual::new(x, objectives))
    }

    /// Raw objective evaluation, counted like [`Evaluator::evaluate`].
    pub fn objectives(&mut self, x: &[f64]) -> Result<ObjectiveVector> {
        let objectives = self.problem.evaluate(x)?;
        self.used += 1;
        Ok(objectives)
    }
}
