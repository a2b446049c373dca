//! `nilgrade`: gradings, tori and cohopfian analysis of algebra files.

mod doc;
mod text;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use doc::{Failure, Settings, Timings};

#[derive(Parser)]
#[command(name = "nilgrade", version, about = "Exact gradings, split tori and cohopfian analysis of algebras over Q")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized torus candidates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Primes tried when certifying irreducible factors.
    #[arg(long, global = true, default_value_t = 64)]
    precision_budget: usize,
    /// Lattice points enumerated per systole computation.
    #[arg(long, global = true, default_value_t = nilgrade::nilgroup::systole::DEFAULT_ENUM_BUDGET)]
    enum_budget: u64,
    /// Largest nilpotency class accepted for group computations.
    #[arg(long, global = true, default_value_t = nilgrade::nilgroup::DEFAULT_CLASS_CAP)]
    class_cap: usize,
    /// Include stage timings in JSON output.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full structural report.
    Report { file: PathBuf },
    /// Decide whether the algebra admits a Carnot grading.
    Carnot { file: PathBuf },
    /// Maximal split torus of derivations and its weight decomposition.
    Torus { file: PathBuf },
    /// Cohopfian classification, optionally analysing an automorphism.
    Cohopf {
        file: PathBuf,
        /// JSON matrix (rows of rational strings) to analyse.
        #[arg(long)]
        automorphism: Option<PathBuf>,
    },
    /// Growth degree and homogeneous dimension.
    Growth { file: PathBuf },
    /// Dilations stabilizing a lattice, with their indices.
    Defendo { file: PathBuf },
    /// Systoles of the lattices dilated by m.
    Systole {
        file: PathBuf,
        /// Dilation factors.
        #[arg(long = "m", value_delimiter = ',', default_values_t = [2i64, 3, 4, 5, 6])]
        ms: Vec<i64>,
    },
    /// Report every algebra file of a directory.
    Batch { dir: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Report { .. } => "report",
            Command::Carnot { .. } => "carnot",
            Command::Torus { .. } => "torus",
            Command::Cohopf { .. } => "cohopf",
            Command::Growth { .. } => "growth",
            Command::Defendo { .. } => "defendo",
            Command::Systole { .. } => "systole",
            Command::Batch { .. } => "batch",
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize") + "\n"
}

/// Loads `file`, runs `f` and renders the outcome.
fn single<T: Serialize>(
    command: &'static str,
    file: &Path,
    s: &Settings,
    json: bool,
    f: impl FnOnce(&doc::Loaded, &mut Timings) -> nilgrade::Result<T>,
    render: impl FnOnce(&doc::InputInfo, &T) -> String,
) -> Result<String, Box<Failure>> {
    let loaded = doc::load(file).map_err(Box::new)?;
    let mut t = Timings::default();
    let result = f(&loaded, &mut t)
        .map_err(|error| Box::new(Failure { error, input: Some(loaded.info.clone()), violations: Vec::new() }))?;
    Ok(if json {
        to_json(&doc::document(command, s, loaded.info, result, t))
    } else {
        render(&loaded.info, &result)
    })
}

fn run(cli: Cli) -> ExitCode {
    let g = &cli.global;
    let s = Settings {
        seed: g.seed,
        precision_budget: g.precision_budget,
        enum_budget: g.enum_budget,
        class_cap: g.class_cap,
        timings: g.timings,
    };
    let command = cli.command.name();
    let outcome = match &cli.command {
        Command::Report { file } => {
            single(command, file, &s, g.json, |l, t| doc::report(&l.algebra, &s, t), text::report)
        }
        Command::Carnot { file } => single(command, file, &s, g.json, |l, t| doc::carnot(&l.algebra, t), text::carnot),
        Command::Torus { file } => {
            single(command, file, &s, g.json, |l, t| doc::torus(&l.algebra, &s, t), text::torus)
        }
        Command::Cohopf { file, automorphism } => single(
            command,
            file,
            &s,
            g.json,
            |l, t| {
                let xi = automorphism.as_deref().map(doc::read_matrix).transpose()?;
                doc::cohopf(&l.algebra, xi, &s, t)
            },
            text::cohopf,
        ),
        Command::Growth { file } => {
            single(command, file, &s, g.json, |l, t| doc::growth(&l.algebra, &s, t), text::growth)
        }
        Command::Defendo { file } => {
            single(command, file, &s, g.json, |l, t| doc::defendo(&l.algebra, &s, t), text::defendo)
        }
        Command::Systole { file, ms } => {
            single(command, file, &s, g.json, |l, t| doc::systole(&l.algebra, ms, &s, t), text::systole)
        }
        Command::Batch { dir } => return batch(dir, &s, g.json),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if g.json {
                print!("{}", to_json(&failure.document(command)));
            } else {
                eprintln!("nilgrade {command}: {}", failure.error);
                for v in failure.violations.iter().skip(1) {
                    eprintln!("  also: {v}");
                }
            }
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}

fn batch(dir: &Path, s: &Settings, json: bool) -> ExitCode {
    let files = match doc::batch_inputs(dir) {
        Ok(files) => files,
        Err(error) => {
            let failure = Failure::from(error);
            if json {
                print!("{}", to_json(&failure.document("batch")));
            } else {
                eprintln!("nilgrade batch: {}", failure.error);
            }
            return ExitCode::from(failure.exit_code() as u8);
        }
    };
    let entries: Vec<doc::BatchEntry> = files.par_iter().map(|p| doc::batch_entry(p, s)).collect();
    let code = entries.iter().map(|e| e.exit_code).max().unwrap_or(0);
    let document = doc::BatchDocument {
        schema_version: doc::SCHEMA_VERSION,
        tool: doc::tool(),
        command: "batch",
        seed: s.seed,
        files: entries,
    };
    if json {
        print!("{}", to_json(&document));
    } else {
        print!("{}", text::batch(&document));
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    run(Cli::parse())
}
