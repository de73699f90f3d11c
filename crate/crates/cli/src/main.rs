use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rigidcoh_cli::{prepare, run, CORPUS};

#[derive(Parser)]
#[command(name = "rigidcoh", version, about = "Run rigidcoh task documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a document.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Parse and validate a document without running it.
    Check { file: PathBuf },
    /// Print the bundled worked-examples document.
    Examples,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

const INPUT_ERROR: u8 = 2;

fn load(path: &PathBuf) -> Result<rigidcoh_cli::Prepared, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(INPUT_ERROR)
    })?;
    prepare(&text).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(INPUT_ERROR)
    })
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { file, jobs, format } => {
            let prepared = match load(&file) {
                Ok(p) => p,
                Err(code) => return code,
            };
            let results = run(&prepared, jobs as usize);
            match format {
                Format::Json => print!("{}", results.to_json()),
                Format::Text => print!("{}", results.to_text()),
            }
            if results.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Check { file } => match load(&file) {
            Ok(p) => {
                println!("ok: {} tasks", p.task_count());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Examples => {
            print!("{CORPUS}");
            ExitCode::SUCCESS
        }
    }
}
