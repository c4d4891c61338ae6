//! Experiment configuration as flat `key=value` text.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use moseed_core::moea::{Algorithm, AlgorithmConfig};
use moseed_core::problems::{benchmark, Benchmark, Family, Problem};
use moseed_core::seeding::Scheme;
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

/// Desk default for the wall-clock limit of one run.
pub const DEFAULT_WALLCLOCK: Duration = Duration::from_secs(60);
/// The four-hour limit of the original campaign, selected by `preset=paper`.
pub const CAMPAIGN_WALLCLOCK: Duration = Duration::from_secs(4 * 3600);

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: String,
    pub algorithm: Algorithm,
    pub scheme: Scheme,
    pub total_budget: u64,
    /// Evaluations deducted from the MOEA budget for seeding; `None` means
    /// ⌈10 %⌉ of the total for seeded schemes and 0 without seeding.
    pub seeding_charge: Option<u64>,
    /// Deduct what seeding actually consumed instead of the charge.
    pub charge_actual: bool,
    /// Total CMA-ES budget of the scheme; `None` keeps the scheme default.
    pub seeding_evals: Option<u64>,
    pub seeding_scale: Option<Vec<f64>>,
    pub wallclock: Duration,
    pub repetitions: usize,
    pub base_seed: u64,
    pub metric_every: u64,
    /// Reference-front sample size; `None` picks the problem default.
    pub front_sample: Option<usize>,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub mu: usize,
    pub lambda: usize,
    pub ibea_kappa: f64,
    pub smsemoa_ref_offset: f64,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let alg = AlgorithmConfig::new(Algorithm::Nsga2);
        Self {
            problem: "zdt1".into(),
            algorithm: Algorithm::Nsga2,
            scheme: Scheme::NoSeed,
            total_budget: 1_000_000,
            seeding_charge: None,
            charge_actual: false,
            seeding_evals: None,
            seeding_scale: None,
            wallclock: DEFAULT_WALLCLOCK,
            repetitions: 100,
            base_seed: 0,
            metric_every: 1000,
            front_sample: None,
            workers: 0,
            mu: alg.mu,
            lambda: alg.lambda,
            ibea_kappa: alg.ibea_kappa,
            smsemoa_ref_offset: alg.smsemoa_ref_offset,
            out_dir: None,
        }
    }
}

fn bad(key: &str, value: &str) -> HarnessError {
    HarnessError::Config(format!("invalid value {value:?} for {key}"))
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| bad(key, value))
}

fn optional<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    match value.trim() {
        "" | "auto" | "default" => Ok(None),
        v => number(key, v).map(Some),
    }
}

/// Default reference-front sample size for a problem.
pub fn default_front_sample(problem: &Benchmark) -> usize {
    match problem.family() {
        Family::Dtlz1 | Family::Dtlz2 | Family::Dtlz3 | Family::Dtlz4 => 1_000_000,
        _ => 10_000,
    }
}

impl ExperimentConfig {
    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", n + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "problem" => {
                benchmark(value)?;
                self.problem = value.to_string();
            }
            "algorithm" => self.algorithm = value.parse()?,
            "scheme" => self.scheme = value.parse()?,
            "total_budget" => self.total_budget = number(key, value)?,
            "seeding_charge" => self.seeding_charge = optional(key, value)?,
            "charge_actual" => self.charge_actual = number(key, value)?,
            "seeding_evals" => self.seeding_evals = optional(key, value)?,
            "seeding_scale" => {
                self.seeding_scale = if value.is_empty() {
                    None
                } else {
                    Some(
                        value
                            .split(',')
                            .map(|v| number(key, v))
                            .collect::<Result<_>>()?,
                    )
                }
            }
            "wallclock_secs" => {
                let secs: f64 = number(key, value)?;
                if !(secs > 0.0 && secs.is_finite()) {
                    return Err(bad(key, value));
                }
                self.wallclock = Duration::from_secs_f64(secs);
            }
            "preset" => match value {
                "paper" => {
                    self.wallclock = CAMPAIGN_WALLCLOCK;
                    self.total_budget = 1_000_000;
                    self.repetitions = 100;
                }
                "desk" => self.wallclock = DEFAULT_WALLCLOCK,
                _ => return Err(bad(key, value)),
            },
            "repetitions" => self.repetitions = number(key, value)?,
            "base_seed" => self.base_seed = number(key, value)?,
            "metric_every" => self.metric_every = number(key, value)?,
            "front_sample" => self.front_sample = optional(key, value)?,
            "workers" => self.workers = number(key, value)?,
            "mu" => self.mu = number(key, value)?,
            "lambda" => self.lambda = number(key, value)?,
            "ibea_kappa" => self.ibea_kappa = number(key, value)?,
            "smsemoa_ref_offset" => self.smsemoa_ref_offset = number(key, value)?,
            "out_dir" => self.out_dir = (!value.is_empty()).then(|| PathBuf::from(value)),
            _ => return Err(HarnessError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<'a>(&mut self, pairs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("expected key=value, got {pair:?}")))?;
            self.set(k.trim(), v.trim())?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let problem = self.benchmark()?;
        self.algorithm_config().validate()?;
        if self.repetitions == 0 {
            return Err(HarnessError::Config("repetitions must be at least 1".into()));
        }
        if self.charge() >= self.total_budget {
            return Err(HarnessError::Config(format!(
                "seeding charge {} must be below the total budget {}",
                self.charge(),
                self.total_budget
            )));
        }
        if let Some(scale) = &self.seeding_scale {
            if scale.len() != problem.num_objectives() {
                return Err(HarnessError::Config(format!(
                    "seeding_scale needs {} factors",
                    problem.num_objectives()
                )));
            }
        }
        if self.metric_every == 0 {
            return Err(HarnessError::Config("metric_every must be positive".into()));
        }
        Ok(())
    }

    pub fn benchmark(&self) -> Result<Benchmark> {
        Ok(benchmark(&self.problem)?)
    }

    pub fn algorithm_config(&self) -> AlgorithmConfig {
        let mut a = AlgorithmConfig::new(self.algorithm);
        a.mu = self.mu;
        a.lambda = self.lambda;
        a.ibea_kappa = self.ibea_kappa;
        a.smsemoa_ref_offset = self.smsemoa_ref_offset;
        a
    }

    /// Nominal seeding charge.
    pub fn charge(&self) -> u64 {
        match (self.scheme, self.seeding_charge) {
            (Scheme::NoSeed, _) => 0,
            (_, Some(c)) => c,
            (_, None) => self.total_budget.div_ceil(10),
        }
    }

    /// Evaluations left to the MOEA once seeding consumed `actual`. Never
    /// less than what seeding really used, so the two never exceed the total.
    pub fn moea_budget(&self, actual: u64) -> u64 {
        let deducted = if self.charge_actual {
            actual
        } else {
            self.charge().max(actual)
        };
        self.total_budget.saturating_sub(deducted)
    }

    pub fn front_sample_size(&self) -> Result<usize> {
        Ok(match self.front_sample {
            Some(n) => n,
            None => default_front_sample(&self.benchmark()?),
        })
    }

    /// Canonical `key=value` text; parsing it gives back this config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<u64>| v.map_or("auto".to_string(), |v| v.to_string());
        let _ = writeln!(s, "problem={}", self.problem);
        let _ = writeln!(s, "algorithm={}", self.algorithm);
        let _ = writeln!(s, "scheme={}", self.scheme);
        let _ = writeln!(s, "total_budget={}", self.total_budget);
        let _ = writeln!(s, "seeding_charge={}", opt(self.seeding_charge));
        let _ = writeln!(s, "charge_actual={}", self.charge_actual);
        let _ = writeln!(s, "seeding_evals={}", opt(self.seeding_evals));
        let scale = self
            .seeding_scale
            .as_ref()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .unwrap_or_default();
        let _ = writeln!(s, "seeding_scale={scale}");
        let _ = writeln!(s, "wallclock_secs={}", self.wallclock.as_secs_f64());
        let _ = writeln!(s, "repetitions={}", self.repetitions);
        let _ = writeln!(s, "base_seed={}", self.base_seed);
        let _ = writeln!(s, "metric_every={}", self.metric_every);
        let _ = writeln!(s, "front_sample={}", opt(self.front_sample.map(|v| v as u64)));
        let _ = writeln!(s, "workers={}", self.workers);
        let _ = writeln!(s, "mu={}", self.mu);
        let _ = writeln!(s, "lambda={}", self.lambda);
        let _ = writeln!(s, "ibea_kappa={}", self.ibea_kappa);
        let _ = writeln!(s, "smsemoa_ref_offset={}", self.smsemoa_ref_offset);
        s
    }

    /// SHA-256 of the settings that determine results. Worker count, output
    /// location and repetition count are left out so records from partial
    /// and full campaigns compare equal.
    pub fn fingerprint(&self) -> String {
        let text: String = self
            .to_text()
            .lines()
            .filter(|l| !l.starts_with("workers=") && !l.starts_with("repetitions="))
            .map(|l| format!("{l}\n"))
            .collect();
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_charge() {
        let mut c = ExperimentConfig::default();
        assert_eq!(c.charge(), 0);
        assert_eq!(c.moea_budget(0), 1_000_000);
        c.scheme = Scheme::CornersAndCentre;
        assert_eq!(c.charge(), 100_000);
        assert_eq!(c.moea_budget(10_003), 900_000);
        c.charge_actual = true;
        assert_eq!(c.moea_budget(10_003), 989_997);
        c.charge_actual = false;
        c.scheme = Scheme::LinearCombinations;
        // seeding used more than the charge
        assert_eq!(c.moea_budget(100_100), 899_900);
        c.total_budget = 5;
        assert_eq!(c.charge(), 1);
    }

    #[test]
    fn parse_and_round_trip() {
        let text = "problem = dtlz4_d2\nalgorithm=SMS-EMOA # steady state\nscheme=cac\n\
                    total_budget=50000\nrepetitions=3\nseeding_scale=1,2\nwallclock_secs=2.5\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.problem, "dtlz4_d2");
        assert_eq!(c.algorithm, Algorithm::SmsEmoa);
        assert_eq!(c.charge(), 5000);
        assert_eq!(c.wallclock, Duration::from_millis(2500));
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "problem=zdt5",
            "algorithm=moead",
            "scheme=random",
            "colour=blue",
            "repetitions=0",
            "scheme=cac\ntotal_budget=100\nseeding_charge=100",
            "total_budget=lots",
            "problem=zdt1\nseeding_scale=1,2,3",
            "just a line",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn presets_and_overrides() {
        let mut c = ExperimentConfig::parse("preset=paper").unwrap();
        assert_eq!(c.wallclock, CAMPAIGN_WALLCLOCK);
        c.apply_overrides(["repetitions=5", "scheme=lc"]).unwrap();
        assert_eq!((c.repetitions, c.scheme), (5, Scheme::LinearCombinations));
        assert!(c.apply_overrides(["nonsense"]).is_err());
    }

    #[test]
    fn fingerprint_tracks_settings() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.workers = 7;
        b.repetitions = 2;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.base_seed = 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }

    #[test]
    fn front_sample_defaults() {
        let mut c = ExperimentConfig::default();
        assert_eq!(c.front_sample_size().unwrap(), 10_000);
        c.problem = "dtlz1_d4".into();
        assert_eq!(c.front_sample_size().unwrap(), 1_000_000);
    }
}
