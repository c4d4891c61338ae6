//! On-disk formats. All numbers use Rust's shortest round-trip decimal
//! form, so reading a file back reproduces every value exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use moseed_core::problems::{Benchmark, Problem};
use moseed_core::seeding::{Scheme, SeedSet};
use moseed_core::ObjectiveVector;

use crate::config::ExperimentConfig;
use crate::error::{io_err, HarnessError, Result};
use crate::harness::{Experiment, RunRecord};

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io_err(parent))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

/// `<root>/<problem>/<algorithm>/<scheme>`.
pub fn run_dir(root: &Path, cfg: &ExperimentConfig) -> PathBuf {
    root.join(&cfg.problem)
        .join(cfg.algorithm.as_str())
        .join(cfg.scheme.as_str())
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

fn format_err(path: &str, line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Format {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_row(line: &str, path: &str, n: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format_err(path, n, format!("bad number {v:?}"))))
        .collect()
}

/// Header line `scheme,problem,d,n`, then per seed the weights, decision
/// values and objective values on one line.
pub fn seed_set_to_csv(set: &SeedSet, problem: &Benchmark) -> String {
    let mut s = format!(
        "{},{},{},{}\n",
        set.scheme,
        problem.name(),
        problem.num_objectives(),
        problem.num_variables()
    );
    for (ind, w) in set.seeds.iter().zip(&set.weight_vectors) {
        let _ = writeln!(s, "{},{},{}", join(w), join(&ind.decision), join(&ind.objectives));
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedFile {
    pub scheme: Scheme,
    pub problem: String,
    pub weights: Vec<Vec<f64>>,
    pub decisions: Vec<Vec<f64>>,
    pub objectives: Vec<Vec<f64>>,
}

pub fn parse_seed_set(text: &str, path: &str) -> Result<SeedFile> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| format_err(path, 1, "empty file"))?;
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() != 4 {
        return Err(format_err(path, 1, "expected scheme,problem,d,n"));
    }
    let scheme: Scheme = fields[0].parse()?;
    let d: usize = fields[2].parse().map_err(|_| format_err(path, 1, "bad d"))?;
    let n: usize = fields[3].parse().map_err(|_| format_err(path, 1, "bad n"))?;
    let mut out = SeedFile {
        scheme,
        problem: fields[1].to_string(),
        weights: Vec::new(),
        decisions: Vec::new(),
        objectives: Vec::new(),
    };
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = parse_row(line, path, i + 2)?;
        if row.len() != 2 * d + n {
            return Err(format_err(path, i + 2, format!("expected {} values", 2 * d + n)));
        }
        out.weights.push(row[..d].to_vec());
        out.decisions.push(row[d..d + n].to_vec());
        out.objectives.push(row[d + n..].to_vec());
    }
    Ok(out)
}

/// Header `f1,...,fd`, one point per line.
pub fn front_to_csv(points: &[ObjectiveVector]) -> String {
    let d = points.first().map_or(0, |p| p.len());
    let mut s = (1..=d).map(|i| format!("f{i}")).collect::<Vec<_>>().join(",");
    s.push('\n');
    for p in points {
        s.push_str(&join(p));
        s.push('\n');
    }
    s
}

pub fn parse_front(text: &str, path: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_row(l, path, i + 1))
        .collect()
}

pub const TRAJECTORY_HEADER: &str = "problem,algorithm,scheme,rep,evals,alpha";

/// One row per trajectory sample.
pub fn trajectory_csv(records: &[RunRecord]) -> String {
    let mut s = String::from(TRAJECTORY_HEADER);
    s.push('\n');
    for r in records {
        for (e, a) in &r.trajectory {
            let _ = writeln!(s, "{},{},{},{},{e},{a:?}", r.problem, r.algorithm, r.scheme, r.rep);
        }
    }
    s
}

/// Mean alpha over the repetitions at every evaluation count that all of
/// them sampled.
pub fn mean_series(records: &[RunRecord]) -> Vec<(u64, f64)> {
    let mut grid: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for r in records {
        for &(e, a) in &r.trajectory {
            let slot = grid.entry(e).or_insert((0.0, 0));
            slot.0 += a;
            slot.1 += 1;
        }
    }
    grid.into_iter()
        .filter(|(_, (_, n))| *n == records.len())
        .map(|(e, (sum, n))| (e, sum / n as f64))
        .collect()
}

pub fn mean_series_csv(records: &[RunRecord]) -> String {
    let mut s = String::from("problem,algorithm,scheme,evals,mean_alpha,reps\n");
    if let Some(r) = records.first() {
        for (e, a) in mean_series(records) {
            let _ = writeln!(s, "{},{},{},{e},{a:?},{}", r.problem, r.algorithm, r.scheme, records.len());
        }
    }
    s
}

pub fn records_to_jsonl(records: &[RunRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

pub fn parse_jsonl(text: &str, path: &str) -> Result<Vec<RunRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| format_err(path, i + 1, e.to_string())))
        .collect()
}

/// Final files of a finished experiment.
pub fn write_experiment(dir: &Path, cfg: &ExperimentConfig, exp: &Experiment) -> Result<()> {
    atomic_write(&dir.join("config.txt"), cfg.to_text().as_bytes())?;
    atomic_write(&dir.join("runs.jsonl"), records_to_jsonl(&exp.records).as_bytes())?;
    atomic_write(&dir.join("trajectory.csv"), trajectory_csv(&exp.records).as_bytes())?;
    atomic_write(&dir.join("mean.csv"), mean_series_csv(&exp.records).as_bytes())?;
    let failures: String = exp
        .failures
        .iter()
        .map(|f| format!("rep {} seed {}: {}\n", f.rep, f.seed, f.message))
        .collect();
    let path = dir.join("failures.txt");
    if failures.is_empty() {
        if path.exists() {
            std::fs::remove_file(&path).map_err(io_err(&path))?;
        }
    } else {
        atomic_write(&path, failures.as_bytes())?;
    }
    Ok(())
}

/// Every record in `runs.jsonl` files below `root`, in path order.
pub fn load_records(root: &Path) -> Result<Vec<RunRecord>> {
    let mut files = Vec::new();
    collect(root, &mut files)?;
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(parse_jsonl(&read_text(&f)?, &f.display().to_string())?);
    }
    Ok(out)
}

fn collect(dir: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.is_dir() {
            collect(&path, files)?;
        } else if path.file_name().is_some_and(|n| n == "runs.jsonl") {
            files.push(path);
        }
    }
    Ok(())
}
