mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use cubing_core::automorphism::MapError;
use cubing_core::cubing::CubeError;
use cubing_core::io::LoadError;
use cubing_core::sfs::SfsError;
use cubing_core::GroupError;
use thiserror::Error;

use args::{Cli, Command, Format};
use commands::{Context, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Load(String, LoadError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Sfs(#[from] SfsError),
    #[error("{0}")]
    Usage(String),
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Context::new(cli.global.clone());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs as usize)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Group(c) => commands::group(&ctx, c),
        Command::Cube(c) => commands::cube(&ctx, c),
        Command::Sfs(c) => commands::sfs(&ctx, c),
        Command::Verify(c) => commands::verify(&ctx, c),
        Command::Search(c) => commands::search(&ctx, c),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.global.format {
        Format::Json => println!("{}", out.report.to_json()),
        Format::Csv => println!("{}", out.csv.as_deref().unwrap_or(&out.text)),
        Format::Text => println!("{}", out.text),
    }
    if out.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
