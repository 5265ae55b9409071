//! `punctum`: reproducible experiments for the punctured Laplacian.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on a
//! configuration or evaluation error.

mod commands;
mod config;
mod output;

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{Command, Env};
use config::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "punctum", version, about = "Green kernels and point-interaction spectra on the interval and the ball")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// `key = value` experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory receiving `<command>.csv`; the table goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write `<command>.json` next to the CSV.
    #[arg(long, requires = "out")]
    json: bool,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Treat warnings as failures.
    #[arg(long)]
    strict: bool,
}

enum Failure {
    Checks,
    Fatal(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn fatal(e: impl std::fmt::Display) -> Failure {
    Failure::Fatal(e.to_string())
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let defaults = cli.command.defaults();
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p, defaults).map_err(fatal)?,
        None => defaults,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let env = Env::new().map_err(fatal)?;
    let header = commands::header(&cfg, &env, cli.command);
    let mut run = commands::run(cli.command, &cfg, &env).map_err(fatal)?;

    if let Some(table) = &run.table {
        match &cli.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(fatal)?;
                let csv = dir.join(format!("{}.csv", cli.command.name()));
                let file = File::create(&csv).map_err(fatal)?;
                table.write_csv(&header, BufWriter::new(file)).map_err(fatal)?;
                if cli.json {
                    let path = dir.join(format!("{}.json", cli.command.name()));
                    let text = serde_json::to_string_pretty(&table.to_json(&header)).map_err(fatal)?;
                    fs::write(path, text + "\n").map_err(fatal)?;
                }
            }
            None => table.write_csv(&header, io::stdout().lock()).map_err(fatal)?,
        }
    }

    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    if cli.strict {
        run.failures.append(&mut run.warnings);
    }
    if run.failures.is_empty() {
        return Ok(());
    }
    for f in &run.failures {
        eprintln!("FAIL {f}");
    }
    Err(Failure::Checks)
}
