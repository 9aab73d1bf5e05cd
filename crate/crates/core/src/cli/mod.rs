//! Campaign runner behind the `gpopt` binary.
//!
//! `run` loads a TOML config (see [`config`]), runs one campaign per seed,
//! and writes a trace per seed, optional posterior dumps, and a summary.
//! Seeds are independent and may run on several threads; outputs do not
//! depend on the thread count.

pub mod config;
pub mod output;

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::optimizer::{run_campaign_observed, CampaignError, CampaignResult, StopReason};

pub use config::{load_plan, RunConfigFile, RunPlan};
pub use output::{
    dump_posterior, read_trace, trace_csv, write_trace, SeedRow, Stats, SummaryReport,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Objective(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Objective(_) => 3,
            CliError::Io(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }

    /// Greppable prefix for the single error line.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) => "E_CONFIG",
            CliError::Objective(_) => "E_OBJECTIVE",
            CliError::Io(_) => "E_IO",
            CliError::Runtime(_) => "E_RUNTIME",
        }
    }

    /// `error[E_CODE]: message` on one line.
    pub fn render(&self) -> String {
        format!("error[{}]: {}", self.code(), self.to_string().replace('\n', " "))
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Results of a sweep, in config seed order.
#[derive(Debug)]
pub struct SweepOutcome {
    pub results: Vec<(u64, CampaignResult)>,
    pub summary: SummaryReport,
}

/// A finished campaign and, if its objective failed, the failure message.
type SeedOutcome = (u64, CampaignResult, Option<String>);

/// Parse and validate only.
pub fn validate_config(path: &Path) -> Result<RunPlan, CliError> {
    load_plan(path)
}

/// Run every seed of the config at `path` with up to `jobs` threads
/// (0 = one per core).
///
/// Traces and the summary are written even when some seeds hit an objective
/// failure; the failure is reported afterwards.
pub fn run_campaigns(path: &Path, jobs: usize) -> Result<SweepOutcome, CliError> {
    let plan = load_plan(path)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<SeedOutcome, CliError>> =
        pool.install(|| plan.seeds.par_iter().map(|&seed| run_seed(&plan, seed)).collect());

    let mut results = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        let (seed, result, failure) = outcome?;
        if let Some(msg) = failure {
            failures.push(format!("seed {seed}: {msg}"));
        }
        results.push((seed, result));
    }

    let summary = SummaryReport::new(
        results
            .iter()
            .map(|(seed, r)| SeedRow {
                seed: *seed,
                theta_best: r.theta_best.clone(),
                y_best: r.y_best,
                iterations_used: r.iterations_used(),
                stop_reason: r.stop_reason,
            })
            .collect(),
    );
    output::write_atomic(&plan.summary_path, summary.to_csv().as_bytes())
        .map_err(|e| io_err(&plan.summary_path, e))?;

    if !failures.is_empty() {
        return Err(CliError::Objective(failures.join("; ")));
    }
    Ok(SweepOutcome { results, summary })
}

fn run_seed(plan: &RunPlan, seed: u64) -> Result<SeedOutcome, CliError> {
    let mut cfg = plan.campaign.clone();
    cfg.seed = seed;
    let dump_dir = plan.posterior_dir_for(seed);
    let mut dump_error: Option<CliError> = None;
    let mut observer = |view: &crate::optimizer::IterationView<'_>| {
        if let (Some(dir), None) = (&dump_dir, &dump_error) {
            if let Err(e) = dump_posterior(view.grid, view.observations, view.iter, dir) {
                dump_error = Some(io_err(dir, e));
            }
        }
    };
    let outcome = run_campaign_observed(
        &plan.space,
        plan.objective.as_objective(),
        &plan.init,
        &cfg,
        &mut observer,
    );
    if let Some(e) = dump_error {
        return Err(e);
    }
    let (result, failure) = match outcome {
        Ok(r) => (r, None),
        Err(CampaignError::Objective { error, partial }) => (*partial, Some(error.to_string())),
        Err(CampaignError::InvalidConfig(m)) => return Err(CliError::Config(m)),
        Err(e) => return Err(CliError::Runtime(format!("seed {seed}: {e}"))),
    };
    debug_assert!(failure.is_none() || result.stop_reason == StopReason::ObjectiveFailure);
    if !result.trace.is_empty() {
        let path = plan.trace_path(seed);
        write_trace(&result.trace, &path).map_err(|e| io_err(&path, e))?;
    }
    Ok((seed, result, failure))
}
