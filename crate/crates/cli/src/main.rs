//! Command-line front end: check, realize, verify, convert, enumerate and
//! generate hypertournament score lists.
//!
//! Every command writes one JSON document to standard output and notes to
//! standard error. Exit codes: 0 success, 1 invalid lists or witness, 2 input
//! error, 3 realization gap, 4 budget or capacity limit.

mod commands;
mod document;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypertournament::oracle::DEFAULT_BUDGET;
use hypertournament::Count;

use commands::{Emit, Method, Mode, Outcome};
use document::{InputFormat, Kind};

#[derive(Parser)]
#[command(
    name = "hypertournament",
    version,
    about = "Score lists of multipartite hypertournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file (`-` for standard input).
    file: PathBuf,
    /// Input format; detected from the first character when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Sort unsorted lists instead of rejecting them.
    #[arg(long)]
    sort: bool,
}

#[derive(Args)]
struct ShapeArgs {
    /// Part sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Part arities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the lists of an instance are realizable.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Worker threads for the prefix scan.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Build a witness hypertournament for valid lists.
    Realize {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Method::Inductive)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Emit::Losers)]
        emit: Emit,
    },
    /// Validate a witness and recompute its lists.
    Verify {
        /// Witness file (`-` for standard input).
        file: PathBuf,
    },
    /// Map score lists to losing lists or back.
    Convert {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// List every achievable list tuple of a shape by exhaustive enumeration.
    Enumerate {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Kind::Losing)]
        kind: Kind,
        /// Largest number of loser assignments to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: Count,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate a seeded random hypertournament.
    Random {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::LoserOnly)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Emit::Losers)]
        emit: Emit,
    },
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    match cli.command {
        Command::Check { instance, jobs } => {
            commands::check(&instance.file, instance.format, instance.sort, jobs)
        }
        Command::Realize {
            instance,
            method,
            emit,
        } => commands::realize(&instance.file, instance.format, instance.sort, method, emit),
        Command::Verify { file } => commands::verify(&file),
        Command::Convert { instance } => {
            commands::convert(&instance.file, instance.format, instance.sort)
        }
        Command::Enumerate {
            shape,
            kind,
            budget,
            jobs,
        } => commands::enumerate(
            &commands::shape_from_flags(&shape.n, &shape.alpha)?,
            kind,
            budget,
            jobs,
        ),
        Command::Random {
            shape,
            seed,
            mode,
            emit,
        } => commands::random(
            &commands::shape_from_flags(&shape.n, &shape.alpha)?,
            seed,
            mode,
            emit,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = run(cli).unwrap_or_else(|failure| failure);
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{}", outcome.document).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status as u8)
}
