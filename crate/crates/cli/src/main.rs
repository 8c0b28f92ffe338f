//! `testkg`: annotate, validate, query, check, evaluate and publish test
//! artifacts in a file-tree workspace.
//!
//! Exit status: 0 success, 1 input or parse error, 2 violations or a
//! failing verdict, 3 internal error.

mod commands;
mod error;
mod io;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{
    AnnotateArgs, CheckArgs, DiffArgs, EvaluateArgs, FixturesCommand, PublishArgs, QueryArgs, ValidateArgs, VocabCommand,
};
use crate::error::CliError;
use crate::workspace::Workspace;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON reports.
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "testkg", version, about = "Knowledge-graph tooling for energy-system test artifacts")]
struct Cli {
    /// Workspace root holding `testkg.toml`, `catalog.json` and default outputs.
    #[arg(long, global = true, default_value = ".")]
    workspace: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Suppress reports on standard output.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the annotation graph of a test campaign.
    Annotate(AnnotateArgs),
    /// Check Turtle files against the vocabulary shapes and configuration rules.
    Validate(ValidateArgs),
    /// Run a SELECT query over Turtle files.
    Query(QueryArgs),
    /// Compare two system configurations.
    Diff(DiffArgs),
    /// Score the reproducibility completeness of Turtle files.
    Check(CheckArgs),
    /// Evaluate a measurement log against a test sequence.
    Evaluate(EvaluateArgs),
    /// Copy files into the workspace catalog.
    Publish(PublishArgs),
    /// Re-check every catalog checksum.
    Verify,
    /// Vocabulary files.
    #[command(subcommand)]
    Vocab(VocabCommand),
    /// The generated fixture tree.
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

pub struct Out {
    pub format: Format,
    pub quiet: bool,
}

impl Out {
    pub fn report(&self, report: &testkg::report::Report) {
        if self.quiet {
            return;
        }
        match self.format {
            Format::Text => print!("{}", report.to_text()),
            Format::Structured => print!("{}", report.to_json()),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let ws = Workspace::open(&cli.workspace)?;
    let out = Out { format: cli.format, quiet: cli.quiet };
    match cli.command {
        Command::Annotate(a) => commands::annotate(&ws, &out, a),
        Command::Validate(a) => commands::validate(&out, a),
        Command::Query(a) => commands::query(&ws, &out, a),
        Command::Diff(a) => commands::diff(&out, a),
        Command::Check(a) => commands::check(&ws, &out, a),
        Command::Evaluate(a) => commands::evaluate(&ws, &out, a),
        Command::Publish(a) => commands::publish(&ws, &out, a),
        Command::Verify => commands::verify(&ws, &out),
        Command::Vocab(c) => commands::vocab(&ws, &out, c),
        Command::Fixtures(c) => commands::fixtures(&ws, &out, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(e)) => {
            eprintln!("testkg: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
