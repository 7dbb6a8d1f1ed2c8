//! Thin CLI over the experiment runner: one experiment per invocation.
//!
//! Exit codes: 0 success, 2 config error, 3 runtime math error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use folnerlab::experiment::{catalog, run, ExperimentConfig};
use folnerlab::Error;

#[derive(Parser, Debug)]
#[command(name = "folnerlab", version, about = "Batch experiment runner for computational ergodic theory")]
struct Cli {
    /// Path to a JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory for traces and reports.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker pool size; results are byte-identical for any value.
    #[arg(long)]
    threads: Option<usize>,

    /// List the experiment catalog and exit.
    #[arg(long)]
    list: bool,
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::InvalidSpec(_) | Error::Json(_) | Error::Io(_) => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.list {
        for entry in catalog() {
            println!("{:<16} {}", entry.name, entry.description);
        }
        return ExitCode::SUCCESS;
    }

    let config_path = match &cli.config {
        Some(p) => p,
        None => {
            eprintln!("error: --config is required (or use --list)");
            return ExitCode::from(2);
        }
    };
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Ok(budget) = std::env::var("FOLNERLAB_BUDGET") {
        match budget.parse::<usize>() {
            Ok(b) => config.budget = Some(b),
            Err(_) => {
                eprintln!("error: FOLNERLAB_BUDGET must be an integer");
                return ExitCode::from(2);
            }
        }
    }

    let execute = |config: &ExperimentConfig| -> Result<(), Error> {
        for path in run(config, &cli.out)? {
            println!("wrote {}", path.display());
        }
        Ok(())
    };

    let result = match cli.threads {
        Some(threads) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return ExitCode::from(2);
                }
            };
            pool.install(|| execute(&config))
        }
        None => execute(&config),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
