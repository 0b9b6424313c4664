use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use timeop_cli::scenarios::SCENARIOS;
use timeop_cli::{run, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "timeop", version, about = "Run time-operator scenarios and write reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a config file and/or key=value overrides.
    Run {
        /// Config file with `key = value` lines.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a config key; repeatable, wins over the file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List registered scenarios.
    Scenarios,
}

fn run_command(config: Option<PathBuf>, set: &[String]) -> Result<(), CliError> {
    let mut cfg = match config {
        Some(path) => RunConfig::load(&path)?,
        None => RunConfig::default(),
    };
    for pair in set {
        cfg.apply_override(pair)?;
    }
    for path in run(&cfg)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Scenarios => {
            for s in &SCENARIOS {
                println!("{:<22} {}", s.name, s.description);
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, set } => match run_command(config, &set) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
