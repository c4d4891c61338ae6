//! Comparison tables and the aggregate rank report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use moseed_core::moea::Algorithm;
use moseed_core::problems::registry_names;
use moseed_core::seeding::Scheme;
use moseed_core::stats::{compare, ranksum_test, ComparisonCell, RankSumResult, Symbol, TableCell, SIGNIFICANCE};

use crate::error::{HarnessError, Result};
use crate::harness::RunRecord;

/// Marker for a cell whose runs never completed a generation.
pub const NOT_RUN: &str = "\u{2014}";

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub problem: String,
    pub algorithm: String,
    pub cell: TableCell,
}

/// `2.00 >`, `0.50 <`, `1.00 =` or the not-run dash.
pub fn format_cell(cell: &TableCell) -> String {
    match cell {
        TableCell::Compared(c) => format!("{:.2} {}", c.ratio, c.symbol),
        TableCell::NotRun => NOT_RUN.to_string(),
    }
}

fn problem_order(name: &str) -> usize {
    registry_names().iter().position(|n| n == name).unwrap_or(usize::MAX)
}

fn algorithm_order(name: &str) -> usize {
    Algorithm::ALL
        .iter()
        .position(|a| a.as_str() == name)
        .unwrap_or(usize::MAX)
}

/// Unseeded and seeded runs of one problem/algorithm pairing.
type Arms<'a> = (Vec<&'a RunRecord>, Vec<&'a RunRecord>);

/// One cell per (problem, algorithm) that has records of `seeded`,
/// comparing final alphas against the unseeded runs.
pub fn build_table(records: &[RunRecord], seeded: Scheme) -> Result<Vec<TableRow>> {
    let mut groups: BTreeMap<(String, String), Arms<'_>> = BTreeMap::new();
    for r in records {
        let key = (r.problem.clone(), r.algorithm.clone());
        if r.scheme == Scheme::NoSeed.as_str() {
            groups.entry(key).or_default().0.push(r);
        } else if r.scheme == seeded.as_str() {
            groups.entry(key).or_default().1.push(r);
        }
    }
    let mut rows = Vec::new();
    for ((problem, algorithm), (plain, seeded_runs)) in groups {
        let ran = |v: &[&RunRecord]| v.iter().any(|r| r.generations > 0);
        let cell = if ran(&plain) && ran(&seeded_runs) {
            let a: Vec<f64> = plain.iter().map(|r| r.final_alpha).collect();
            let b: Vec<f64> = seeded_runs.iter().map(|r| r.final_alpha).collect();
            TableCell::Compared(compare(&a, &b)?)
        } else {
            TableCell::NotRun
        };
        rows.push(TableRow {
            problem,
            algorithm,
            cell,
        });
    }
    rows.sort_by_key(|r| (problem_order(&r.problem), r.problem.clone(), algorithm_order(&r.algorithm)));
    Ok(rows)
}

/// Problems down, algorithms across.
pub fn emit_table_text(rows: &[TableRow]) -> String {
    let mut algorithms: Vec<&str> = rows.iter().map(|r| r.algorithm.as_str()).collect();
    algorithms.sort_by_key(|a| (algorithm_order(a), a.to_string()));
    algorithms.dedup();
    let mut problems: Vec<&str> = Vec::new();
    for r in rows {
        if !problems.contains(&r.problem.as_str()) {
            problems.push(&r.problem);
        }
    }
    let width = problems.iter().map(|p| p.len()).max().unwrap_or(0).max(8);
    let mut s = format!("{:<width$}", "problem");
    for a in &algorithms {
        let _ = write!(s, " {a:>10}");
    }
    s.push('\n');
    for p in problems {
        let _ = write!(s, "{p:<width$}");
        for a in &algorithms {
            let text = rows
                .iter()
                .find(|r| r.problem == p && r.algorithm == *a)
                .map_or(String::new(), |r| format_cell(&r.cell));
            let _ = write!(s, " {text:>10}");
        }
        s.push('\n');
    }
    s
}

pub const TABLE_HEADER: &str = "problem,algorithm,ratio,symbol,p_value,n_unseeded,n_seeded";

/// Machine-readable table; [`parse_table_csv`] reads it back exactly.
pub fn emit_table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        match &r.cell {
            TableCell::Compared(c) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.problem, r.algorithm, c.ratio, c.symbol, c.p_value, c.n_unseeded, c.n_seeded
                );
            }
            TableCell::NotRun => {
                let _ = writeln!(s, "{},{},,{NOT_RUN},,,", r.problem, r.algorithm);
            }
        }
    }
    s
}

pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let bad = |line: usize, msg: &str| HarnessError::Format {
        path: "table".into(),
        line,
        message: msg.into(),
    };
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(bad(i + 1, "expected 7 fields"));
        }
        let cell = if f[3] == NOT_RUN {
            TableCell::NotRun
        } else {
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(i + 1, "bad number"));
            let count = |v: &str| v.parse::<usize>().map_err(|_| bad(i + 1, "bad count"));
            TableCell::Compared(ComparisonCell {
                ratio: num(f[2])?,
                symbol: f[3].parse::<Symbol>().map_err(|_| bad(i + 1, "bad symbol"))?,
                p_value: num(f[4])?,
                n_unseeded: count(f[5])?,
                n_seeded: count(f[6])?,
            })
        };
        rows.push(TableRow {
            problem: f[0].to_string(),
            algorithm: f[1].to_string(),
            cell,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SeedingImproves,
    SeedingWorsens,
    NoDifference,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SeedingImproves => "seeding improves",
            Verdict::SeedingWorsens => "seeding worsens",
            Verdict::NoDifference => "no significant difference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub pairs: usize,
    pub mean_rank_unseeded: f64,
    pub mean_rank_seeded: f64,
    pub test: RankSumResult,
    pub verdict: Verdict,
}

/// Within each `(unseeded, seeded)` pair of final alphas the better run
/// gets rank 1, the other 2, and a tie 1.5 each; the two rank samples are
/// then compared with the rank-sum test.
pub fn aggregate_rank_report(pairs: &[(f64, f64)]) -> Result<RankReport> {
    if pairs.is_empty() {
        return Err(HarnessError::Config("no matched runs to rank".into()));
    }
    let mut plain = Vec::with_capacity(pairs.len());
    let mut seeded = Vec::with_capacity(pairs.len());
    for &(u, s) in pairs {
        let (ru, rs) = if s < u {
            (2.0, 1.0)
        } else if u < s {
            (1.0, 2.0)
        } else {
            (1.5, 1.5)
        };
        plain.push(ru);
        seeded.push(rs);
    }
    let test = ranksum_test(&plain, &seeded)?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mu, ms) = (mean(&plain), mean(&seeded));
    let verdict = if test.p_value >= SIGNIFICANCE || mu == ms {
        Verdict::NoDifference
    } else if ms < mu {
        Verdict::SeedingImproves
    } else {
        Verdict::SeedingWorsens
    };
    Ok(RankReport {
        pairs: pairs.len(),
        mean_rank_unseeded: mu,
        mean_rank_seeded: ms,
        test,
        verdict,
    })
}

/// Matches unseeded and `seeded` runs by (problem, algorithm, repetition).
/// Any run without a partner is an error.
pub fn match_pairs(records: &[RunRecord], seeded: Scheme) -> Result<Vec<(f64, f64)>> {
    let mut plain: BTreeMap<(&str, &str, usize), f64> = BTreeMap::new();
    let mut with: BTreeMap<(&str, &str, usize), f64> = BTreeMap::new();
    for r in records {
        let key = (r.problem.as_str(), r.algorithm.as_str(), r.rep);
        if r.scheme == Scheme::NoSeed.as_str() {
            plain.insert(key, r.final_alpha);
        } else if r.scheme == seeded.as_str() {
            with.insert(key, r.final_alpha);
        }
    }
    if let Some(k) = plain.keys().find(|k| !with.contains_key(*k)).or_else(|| with.keys().find(|k| !plain.contains_key(*k))) {
        return Err(HarnessError::Config(format!(
            "run {}/{}/rep {} has no counterpart",
            k.0, k.1, k.2
        )));
    }
    Ok(plain.iter().map(|(k, &u)| (u, with[k])).collect())
}
