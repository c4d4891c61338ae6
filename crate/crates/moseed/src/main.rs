use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use moseed::config::ExperimentConfig;
use moseed::formats::{self, atomic_write};
use moseed::front::front_sample;
use moseed::harness::seeds_for;
use moseed::report;
use moseed_core::problems::benchmark;
use moseed_core::seeding::Scheme;

#[derive(Parser)]
#[command(name = "moseed", version, about = "Seeded multi-objective optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seed set and write it as CSV.
    Seed {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total CMA-ES budget; the scheme default when omitted.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment.
    Run(RunArgs),
    /// Build the seeded-versus-unseeded comparison table from run directories.
    Table {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long, default_value = "cac")]
        scheme: String,
        /// Write the machine-readable CSV instead of the text table.
        #[arg(long)]
        csv: bool,
    },
    /// Export a reference front sample.
    Front {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 10_000)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pooled rank test of seeded against unseeded final values.
    Rank {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long, default_value = "cac")]
        scheme: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key=value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Field override, repeatable: `--set total_budget=50000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::parse(&formats::read_text(path)?)
            .with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    let mut pairs: Vec<String> = Vec::new();
    let mut flag = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            pairs.push(format!("{k}={v}"));
        }
    };
    flag("problem", args.problem);
    flag("algorithm", args.algorithm);
    flag("scheme", args.scheme);
    flag("repetitions", args.repetitions.map(|v| v.to_string()));
    flag("base_seed", args.base_seed.map(|v| v.to_string()));
    flag("out_dir", args.out.map(|p| p.display().to_string()));
    pairs.extend(args.overrides);
    cfg.apply_overrides(pairs.iter().map(String::as_str))?;
    if cfg.out_dir.is_none() {
        bail!("no output directory: pass --out or set out_dir");
    }

    let exp = moseed::run_experiment(&cfg)?;
    let dir = formats::run_dir(cfg.out_dir.as_ref().expect("checked above"), &cfg);
    println!(
        "{} runs, {} failed -> {}",
        exp.records.len(),
        exp.failures.len(),
        dir.display()
    );
    for f in &exp.failures {
        eprintln!("rep {}: {}", f.rep, f.message);
    }
    if exp.records.is_empty() {
        bail!("every repetition failed");
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Seed {
            problem,
            scheme,
            seed,
            budget,
            out,
        } => {
            let mut cfg = ExperimentConfig::default();
            cfg.apply_overrides([
                format!("problem={problem}").as_str(),
                format!("scheme={scheme}").as_str(),
                format!("base_seed={seed}").as_str(),
            ])?;
            cfg.seeding_evals = budget;
            let p = benchmark(&problem)?;
            let set = seeds_for(&cfg, &p, 0)?;
            atomic_write(&out, formats::seed_set_to_csv(&set, &p).as_bytes())?;
            println!("{} seeds, {} evaluations -> {}", set.len(), set.evals_consumed, out.display());
        }
        Command::Run(args) => run(args)?,
        Command::Table { runs, scheme, csv } => {
            let scheme: Scheme = scheme.parse()?;
            let rows = report::build_table(&formats::load_records(&runs)?, scheme)?;
            if csv {
                print!("{}", report::emit_table_csv(&rows));
            } else {
                print!("{}", report::emit_table_text(&rows));
            }
        }
        Command::Front { problem, size, out } => {
            let p = benchmark(&problem)?;
            let front = front_sample(&p, size);
            atomic_write(&out, formats::front_to_csv(&front).as_bytes())?;
        }
        Command::Rank { runs, scheme } => {
            let scheme: Scheme = scheme.parse()?;
            let pairs = report::match_pairs(&formats::load_records(&runs)?, scheme)?;
            let r = report::aggregate_rank_report(&pairs)?;
            println!("pairs {}", r.pairs);
            println!("mean rank unseeded {:.4}", r.mean_rank_unseeded);
            println!("mean rank seeded {:.4}", r.mean_rank_seeded);
            println!("p-value {:e}", r.test.p_value);
            println!("verdict: {}", r.verdict.as_str());
        }
    }
    Ok(())
}
