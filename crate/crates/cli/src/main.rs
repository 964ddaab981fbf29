//! `cutpaste` command-line front end.
//!
//! Exit status: 0 success, 1 input error, 2 internal diagnostic (a sorter
//! invariant failed), 3 resource-guard refusal.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cutpaste::bench;
use cutpaste::metrics::{certify_lower_bound, hard_witnesses, parity_adjacencies};
use cutpaste::oracle::{
    bfs_distance, build_table_with, OracleError, OracleLimits, DEFAULT_WITNESS_CAP,
};
use cutpaste::perm::{adjacencies, Permutation, Trace};
use cutpaste::sorter::{sort_refined, Algorithm, SortError};
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "cutpaste",
    version,
    about = "Cut-and-paste sorting of permutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sort a permutation and print the annotated trace.
    Sort {
        #[arg(long, default_value = "refined")]
        algo: Algorithm,
        #[command(flatten)]
        input: PermInput,
        /// Also write the trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Replay a trace file (or standard input) and check it.
    Verify {
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Algorithm whose bound the move count is compared against.
        #[arg(long, default_value = "refined")]
        algo: Algorithm,
    },
    /// Exact distance by BFS, next to the certificate and the refined count.
    Distance {
        #[command(flatten)]
        input: PermInput,
        #[command(flatten)]
        guard: Guard,
    },
    /// Build the full distance table for one n.
    Table {
        #[arg(long)]
        n: usize,
        /// Table CSV path; witnesses go to `<out>.witnesses`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum number of witnesses kept.
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        limit: usize,
        #[command(flatten)]
        guard: Guard,
    },
    /// Permutations with the minimum number of parity adjacencies.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound certificate for a permutation.
    Bound {
        #[command(flatten)]
        input: PermInput,
    },
    /// Seeded move-count and timing runs, as CSV.
    Bench {
        /// Comma-separated lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Algorithms to run; all of them by default.
        #[arg(long, value_delimiter = ',')]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a uniformly random permutation.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PermInput {
    /// Permutation as space- or comma-separated values; read from standard
    /// input when absent.
    #[arg(long)]
    perm: Option<String>,
}

#[derive(Args)]
struct Guard {
    /// Permit n = 9 (needs a few GB of memory and minutes of time).
    #[arg(long)]
    allow_n9: bool,
}

impl Guard {
    fn limits(&self) -> OracleLimits {
        if self.allow_n9 {
            OracleLimits::allow_n9()
        } else {
            OracleLimits::default()
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
    #[error("{0} (pass --allow-n9 to permit n=9)")]
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SortError> for CliError {
    fn from(e: SortError) -> Self {
        CliError::Internal(format!(
            "{e}\nreproduce with: cutpaste sort --perm \"{}\"",
            e.perm
        ))
    }
}

fn read_perm(input: &PermInput) -> Result<Permutation, CliError> {
    let text = match &input.perm {
        Some(s) => s.clone(),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Permutation::parse(&text).map_err(|e| CliError::Input(format!("bad permutation: {e}")))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Returns the exit status for a command that ran to completion.
fn run(cli: Cli) -> Result<u8, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Sort { algo, input, trace } => {
            let p = read_perm(&input)?;
            let result = algo.sort(&p)?;
            let text = result.trace.to_string();
            if let Some(path) = trace {
                let mut f = create(&path)?;
                f.write_all(text.as_bytes())?;
                f.flush()?;
            }
            let ok = result.trace.replay().is_ok_and(|q| q.is_identity()) && result.within_bound();
            write!(out, "{text}")?;
            writeln!(
                out,
                "moves={} bound={} ok={ok}",
                result.move_count, result.bound
            )?;
            // A result that failed its own check is a diagnostic, not bad input.
            Ok(if ok { 0 } else { 2 })
        }
        Command::Verify { trace, algo } => {
            let text = match &trace {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let t = Trace::parse(&text)
                .map_err(|e| CliError::Input(format!("malformed trace: {e}")))?;
            let mut broken = Vec::new();
            t.replay_inspect(|idx, _, before, after| {
                let count = |v: &[u32]| {
                    adjacencies(&Permutation::new(v.to_vec()).expect("replay keeps a permutation"))
                };
                if count(after) < count(before) {
                    broken.push(idx);
                }
            })
            .map_err(|e| CliError::Input(format!("replay failed: {e}")))?;
            let last = t
                .replay()
                .map_err(|e| CliError::Input(format!("replay failed: {e}")))?;
            let bound = algo.bound(t.initial.len());
            let ok = last.is_identity();
            writeln!(out, "final={last}")?;
            writeln!(
                out,
                "moves={} bound={bound} ({algo}) within_bound={}",
                t.len(),
                t.len() <= bound
            )?;
            writeln!(
                out,
                "broken_adjacencies={}",
                if broken.is_empty() {
                    "none".into()
                } else {
                    format!("{broken:?}")
                }
            )?;
            writeln!(out, "ok={ok}")?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Distance { input, guard } => {
            let p = read_perm(&input)?;
            let d = bfs_distance(&p, guard.limits())?;
            let c = certify_lower_bound(&p);
            let r = sort_refined(&p)?;
            writeln!(out, "distance={d}")?;
            writeln!(
                out,
                "parity_bound={} adjacency_bound={} best={}",
                c.parity_bound, c.adjacency_bound, c.best
            )?;
            writeln!(out, "refined_moves={}", r.move_count)?;
            Ok(0)
        }
        Command::Table {
            n,
            out: path,
            limit,
            guard,
        } => {
            if n == 0 {
                return Err(CliError::Input("n must be at least 1".into()));
            }
            let table = build_table_with(n, guard.limits(), limit, |level, count| {
                eprintln!("level {level}: {count} states");
            })?;
            if let Some(path) = path {
                let mut f = create(&path)?;
                table.write_csv(&mut f)?;
                f.flush()?;
                let mut w = path.into_os_string();
                w.push(".witnesses");
                let mut f = create(Path::new(&w))?;
                table.write_witnesses(&mut f)?;
                f.flush()?;
            }
            let hist: Vec<String> = table.histogram().iter().map(usize::to_string).collect();
            writeln!(
                out,
                "n={n} fmax={} lower={} upper={}",
                table.fmax,
                n / 2,
                2 * n / 3
            )?;
            writeln!(out, "histogram={}", hist.join(","))?;
            writeln!(
                out,
                "witnesses={} (kept {})",
                table.witness_total,
                table.witnesses.len()
            )?;
            Ok(0)
        }
        Command::Witness {
            n,
            limit,
            seed,
            out: path,
        } => {
            if n < 2 {
                return Err(CliError::Input("witnesses need n >= 2".into()));
            }
            let ws = hard_witnesses(n, limit, seed);
            let mut text = String::new();
            for w in &ws {
                text.push_str(&format!("{w}\n"));
            }
            match path {
                Some(path) => {
                    let mut f = create(&path)?;
                    f.write_all(text.as_bytes())?;
                    f.flush()?;
                    writeln!(
                        out,
                        "wrote {} witnesses with parity_adjacencies={}",
                        ws.len(),
                        ws.first().map_or(0, parity_adjacencies)
                    )?;
                }
                None => write!(out, "{text}")?,
            }
            Ok(0)
        }
        Command::Bound { input } => {
            let p = read_perm(&input)?;
            let c = certify_lower_bound(&p);
            writeln!(
                out,
                "parity_bound={} adjacency_bound={} best={}",
                c.parity_bound, c.adjacency_bound, c.best
            )?;
            Ok(0)
        }
        Command::Bench {
            n,
            algo,
            reps,
            seed,
            out: path,
        } => {
            if n.contains(&0) || reps == 0 {
                return Err(CliError::Input("n values and reps must be positive".into()));
            }
            let algos = if algo.is_empty() {
                Algorithm::ALL.to_vec()
            } else {
                algo
            };
            let rows = bench::run(&n, &algos, reps, seed)?;
            let csv = bench::to_csv(&rows);
            match path {
                Some(path) => {
                    let mut f = create(&path)?;
                    f.write_all(csv.as_bytes())?;
                    f.flush()?;
                }
                None => write!(out, "{csv}")?,
            }
            Ok(if rows.iter().all(|r| r.max_moves <= r.bound) {
                0
            } else {
                2
            })
        }
        Command::Random { n, seed } => {
            if n == 0 {
                return Err(CliError::Input("n must be at least 1".into()));
            }
            writeln!(out, "{}", Permutation::random(n, seed))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
