use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gpopt::cli::{run_campaigns, validate_config};

#[derive(Parser)]
#[command(name = "gpopt", version, about = "Gaussian-process hyperparameter search campaigns")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one campaign per configured seed and write traces and a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for the seed sweep (0 = one per core).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Parse and validate a config without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match &args.cmd {
        Cmd::Run { config, jobs } => run_campaigns(config, *jobs).map(|sweep| {
            for (seed, r) in &sweep.results {
                println!(
                    "seed {seed}: y_best={} theta_best={:?} iterations={} stop={}",
                    r.y_best,
                    r.theta_best,
                    r.iterations_used(),
                    r.stop_reason.as_str()
                );
            }
        }),
        Cmd::Validate { config } => validate_config(config).map(|plan| {
            println!("{}: ok ({} seeds)", config.display(), plan.seeds.len());
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.render());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
