use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use twostage::harness::{
    eval_budget, run_bench, write_csv, BenchEntry, FEvalMode, Timing, TrialRecord,
};
use twostage::reference::greedy_subset;
use twostage::{
    evaluate_f_exact, generate_instance, parse_instance, run_experiment, Algorithm, Error,
    GeneratorKind, ItemSet, Problem, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "twostage",
    version,
    about = "Two-stage submodular ground set reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance as JSON.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an algorithm on an instance and write per-trial CSV.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "f-eval", default_value = "auto")]
        f_eval: FEvalMode,
        #[arg(long)]
        out: PathBuf,
        /// Leave `wall_ms` empty so output is reproducible byte for byte.
        #[arg(long)]
        omit_timing: bool,
    },
    /// Print F of a reduced set and its per-function witnesses as JSON.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated item ids, e.g. "0,3,5".
        #[arg(long)]
        set: String,
        #[arg(long = "f-eval", default_value = "auto")]
        f_eval: FEvalMode,
    },
    /// Run a JSON list of experiment entries.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        omit_timing: bool,
    },
}

fn read_instance(path: &Path) -> Result<Problem, Error> {
    let bytes = fs::read(path)?;
    Problem::new(&parse_instance(&bytes)?)
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

fn parse_set(text: &str) -> Result<ItemSet, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Validation(format!("bad item id `{s}` in --set")))
        })
        .collect()
}

fn timing(omit: bool) -> Timing {
    if omit {
        Timing::Omit
    } else {
        Timing::Include
    }
}

fn write_records(path: &Path, records: &[TrialRecord], omit: bool) -> Result<(), Error> {
    let file = io::BufWriter::new(fs::File::create(path)?);
    write_csv(file, records, timing(omit))
}

fn summarize(problem: &Problem, records: &[TrialRecord]) {
    let n = records.len() as f64;
    let mean_f = records.iter().map(|r| r.f_reported).sum::<f64>() / n;
    let max_evals = records.iter().map(|r| r.evals).max().unwrap_or(0);
    eprint!("trials={} mean_F={mean_f:.6}", records.len());
    if let Some(ratios) = records.iter().map(|r| r.ratio).collect::<Option<Vec<_>>>() {
        eprint!(" mean_ratio={:.6}", ratios.iter().sum::<f64>() / n);
    }
    eprintln!(" max_evals={max_evals} budget={}", eval_budget(problem));
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            m,
            k,
            l,
            seed,
            out,
        } => {
            let instance = generate_instance(kind, n, m, k, l, seed)?;
            fs::write(out, instance.to_json() + "\n")?;
        }
        Command::Solve {
            instance,
            algo,
            trials,
            seed,
            f_eval,
            out,
            omit_timing,
        } => {
            let problem = read_instance(&instance)?;
            let config = RunConfig {
                algorithm: algo,
                trials,
                base_seed: seed,
                f_eval_mode: f_eval,
            };
            let records = run_experiment(&instance_id(&instance), &problem, &config)?;
            write_records(&out, &records, omit_timing)?;
            summarize(&problem, &records);
        }
        Command::Eval {
            instance,
            set,
            f_eval,
        } => {
            let problem = read_instance(&instance)?;
            let set = parse_set(&set)?;
            let exact = match f_eval {
                FEvalMode::Greedy => None,
                FEvalMode::Exact => Some(evaluate_f_exact(&problem, &set)?),
                FEvalMode::Auto => match evaluate_f_exact(&problem, &set) {
                    Ok(r) => Some(r),
                    Err(Error::GuardExceeded { .. }) => None,
                    Err(e) => return Err(e),
                },
            };
            let body = match exact {
                Some(r) => json!({
                    "F": r.value,
                    "mode": "exact",
                    "set": r.reduced_set,
                    "witnesses": r.witnesses,
                }),
                None => {
                    let pool = set.real_items(problem.n);
                    if let Some(x) = set.iter().find(|x| x.0 >= problem.n + problem.l) {
                        return Err(Error::ItemOutOfRange {
                            item: x.0,
                            limit: problem.n + problem.l,
                        });
                    }
                    let mut value = 0.0;
                    let mut witnesses = Vec::new();
                    for f in problem.oracles() {
                        let w = greedy_subset(f, &pool, problem.k)?;
                        value += f.eval(&w)?;
                        witnesses.push(w);
                    }
                    json!({
                        "F": value,
                        "mode": "greedy",
                        "set": pool,
                        "witnesses": witnesses,
                    })
                }
            };
            let mut stdout = io::stdout().lock();
            serde_json::to_writer_pretty(&mut stdout, &body).map_err(io::Error::other)?;
            writeln!(stdout)?;
        }
        Command::Bench {
            config,
            out,
            omit_timing,
        } => {
            let entries: Vec<BenchEntry> = serde_json::from_slice(&fs::read(&config)?)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let records = run_bench(&entries, base)?;
            write_records(&out, &records, omit_timing)?;
            eprintln!("{} records written to {}", records.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
