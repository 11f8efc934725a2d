use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use scales::core::offline_adjacency::{build_adjacency_plan, solve_adjacency};
use scales::core::offline_recursive::{build_recursive_plan, offline_lower_bound, solve_recursive};
use scales::core::{Oracle, Query, ScaleSpec};
use scales::io::{
    ids, load_order, raw, read_json, transcript_from, write_json, EntryDto, PlanFile, ResultsFile,
    SortResultDto,
};
use scales::rng::seeded_order;
use scales::{
    bench_sweep, run_experiment, verify_exhaustive, write_csv, Algorithm, HarnessError, OrderSource,
};

#[derive(Parser)]
#[command(name = "scales", version, about = "Sort with k-ary rank scales")]
struct Cli {
    /// Record wall time in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Scale as `k:t1,t2,...`.
    #[arg(long)]
    scale: ScaleSpec,
    #[arg(long)]
    n: usize,
    /// Seed for a ChaCha8 shuffle of the hidden order.
    #[arg(long, conflicts_with = "order", default_value_t = 0)]
    seed: u64,
    /// JSON array of ranks, entry i being the rank of element i.
    #[arg(long)]
    order: Option<PathBuf>,
}

impl Input {
    fn source(&self) -> Result<OrderSource, HarnessError> {
        Ok(match &self.order {
            Some(p) => OrderSource::Explicit(load_order(p)?),
            None => OrderSource::Seed(self.seed),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sort adaptively against a simulated scale.
    SortOnline(Input),
    /// Sort with one non-adaptive batch.
    SortOffline {
        #[arg(long)]
        algo: Algorithm,
        #[command(flatten)]
        input: Input,
    },
    /// Write the batch an offline algorithm needs answered.
    Plan {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        scale: ScaleSpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a plan file from a simulated order.
    Answer {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, conflicts_with = "order", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the order from an answered plan.
    Solve {
        #[arg(long)]
        results: PathBuf,
    },
    /// Run the online algorithm on every order up to `--max-n`.
    Verify {
        #[arg(long, required = true)]
        exhaustive: bool,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Smallest batch any offline algorithm can use.
    LowerBound {
        #[arg(long)]
        scale: ScaleSpec,
        #[arg(long)]
        n: usize,
    },
    /// Sweep sizes and seeds, writing one CSV row per run.
    Bench {
        #[arg(long)]
        scale: ScaleSpec,
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, value_delimiter = ',', default_value = "online")]
        algos: Vec<Algorithm>,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn print<T: Serialize>(value: &T) -> Result<(), HarnessError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn plan_queries(algo: Algorithm, spec: &ScaleSpec, n: usize) -> Result<Vec<Query>, HarnessError> {
    Ok(match algo {
        Algorithm::OfflineAdjacency => build_adjacency_plan(n, spec)?.queries().cloned().collect(),
        Algorithm::OfflineRecursive => build_recursive_plan(n, spec)?.queries().cloned().collect(),
        Algorithm::Online => {
            return Err(HarnessError::BadInput(
                "the online algorithm has no plan".into(),
            ))
        }
    })
}

fn parse_scale(text: &str) -> Result<ScaleSpec, HarnessError> {
    Ok(text.parse()?)
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::SortOnline(input) => {
            let report = run_experiment(
                &input.scale,
                input.n,
                input.source()?,
                Algorithm::Online,
                cli.timing,
            )?;
            print(&report)?;
            Ok(report.passed())
        }
        Command::SortOffline { algo, input } => {
            if algo == Algorithm::Online {
                return Err(HarnessError::BadInput("use sort-online".into()));
            }
            let report = run_experiment(&input.scale, input.n, input.source()?, algo, cli.timing)?;
            print(&report)?;
            Ok(report.passed())
        }
        Command::Plan {
            algo,
            scale,
            n,
            out,
        } => {
            let queries = plan_queries(algo, &scale, n)?;
            let file = PlanFile {
                algorithm: algo,
                scale: scale.to_string(),
                n,
                queries: queries.iter().map(|q| raw(q.elements())).collect(),
            };
            write_json(&out, &file)?;
            print(
                &serde_json::json!({ "algorithm": algo, "scale": file.scale, "n": n, "queries": file.queries.len() }),
            )?;
            Ok(true)
        }
        Command::Answer {
            plan,
            seed,
            order,
            out,
        } => {
            let plan: PlanFile = read_json(&plan)?;
            let spec = parse_scale(&plan.scale)?;
            let order = match order {
                Some(p) => load_order(&p)?,
                None => seeded_order(plan.n, seed),
            };
            let mut oracle = Oracle::new(spec.clone(), order);
            let queries = plan
                .queries
                .iter()
                .map(|q| Query::new(ids(q), spec.k()))
                .collect::<Result<Vec<_>, _>>()?;
            oracle.evaluate_batch(&queries)?;
            let file = ResultsFile {
                algorithm: plan.algorithm,
                scale: plan.scale,
                n: plan.n,
                entries: oracle.transcript().iter().map(EntryDto::from).collect(),
            };
            write_json(&out, &file)?;
            Ok(true)
        }
        Command::Solve { results } => {
            let file: ResultsFile = read_json(&results)?;
            let spec = parse_scale(&file.scale)?;
            let transcript = transcript_from(&file.entries, spec.k())?;
            let result = match file.algorithm {
                Algorithm::OfflineAdjacency => {
                    solve_adjacency(&build_adjacency_plan(file.n, &spec)?, &transcript)?
                }
                Algorithm::OfflineRecursive => {
                    solve_recursive(&build_recursive_plan(file.n, &spec)?, &transcript.answers())?
                }
                Algorithm::Online => {
                    return Err(HarnessError::BadInput(
                        "the online algorithm has no plan".into(),
                    ))
                }
            };
            print(&SortResultDto::from(&result))?;
            Ok(true)
        }
        Command::Verify {
            exhaustive: _,
            max_n,
        } => {
            let summary = verify_exhaustive(max_n)?;
            print(&summary)?;
            Ok(summary.failures.is_empty())
        }
        Command::LowerBound { scale, n } => {
            if !scale.is_singleton() {
                return Err(HarnessError::BadInput(
                    "the lower bound is for singleton scales".into(),
                ));
            }
            let bound = offline_lower_bound(n, scale.k(), scale.t1())?;
            print(
                &serde_json::json!({ "scale": scale.to_string(), "n": n, "lower_bound": bound }),
            )?;
            Ok(true)
        }
        Command::Bench {
            scale,
            n_list,
            trials,
            algos,
            csv,
        } => {
            let rows = bench_sweep(&scale, &n_list, trials, &algos, cli.timing)?;
            write_csv(&rows, BufWriter::new(File::create(&csv)?))?;
            let failed = rows.iter().filter(|r| !r.passed()).count();
            print(&serde_json::json!({ "rows": rows.len(), "failed": failed, "csv": csv }))?;
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
