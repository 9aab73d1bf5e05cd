//! Run configuration files.
//!
//! TOML, one objective section, every field checked before anything runs:
//!
//! ```toml
//! seeds = [1, 2, 3]
//!
//! [objective.sinc]
//!
//! [space]
//! lower = [-15.0]
//! upper = [15.0]
//! grid_points_per_dim = 301
//!
//! [algorithm]
//! kind = "hybrid"          # original | hybrid | variable_threshold
//! criterion = "ei"         # ei | pi | mean
//! tau = 0.8
//! max_iters = 20
//! init = [[5.9], [6.4], [6.9]]
//!
//! [output]
//! trace_path = "out/trace_{seed}.csv"
//! posterior_dir = "out/posterior"
//! summary_path = "out/summary.csv"
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::acquisition::Criterion;
use crate::gp::KernelKind;
use crate::objectives::{
    credit_surrogate_csv, Dataset, ExternalCommand, ForestConfig, ForestObjective, Objective,
    Sinc,
};
use crate::optimizer::{Algorithm, CampaignConfig};
use crate::space::ParamSpace;

use super::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub seeds: Vec<u64>,
    pub objective: ObjectiveSection,
    pub space: SpaceSection,
    #[serde(default)]
    pub algorithm: AlgorithmSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSection {
    pub sinc: Option<SincSection>,
    pub external: Option<ExternalSection>,
    pub forest: Option<ForestSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SincSection {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalSection {
    pub command: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestSection {
    /// Labeled CSV. When absent, the bundled 690-row surrogate is generated
    /// from `surrogate_seed`.
    pub csv_path: Option<PathBuf>,
    pub surrogate_seed: Option<u64>,
    pub label_column: String,
    #[serde(default)]
    pub data_seed: u64,
    pub max_depth: Option<usize>,
    pub min_leaf: Option<usize>,
    pub bootstrap: Option<bool>,
    pub rng_seed: Option<u64>,
    pub holdout_fraction: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub grid_points_per_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Original,
    Hybrid,
    VariableThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionName {
    Ei,
    Pi,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelName {
    SquaredExponential,
    Matern52,
}

/// Every field is optional; omitted ones take the library defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmSection {
    pub kind: AlgorithmKind,
    pub criterion: CriterionName,
    /// Defaults to 0.8 for `hybrid` and 1.0 for `variable_threshold`.
    pub tau: Option<f64>,
    pub max_iters: usize,
    pub ei_epsilon: f64,
    pub sigma_epsilon: f64,
    pub refit_hyperparams: bool,
    pub restarts: usize,
    pub kernel: KernelName,
    /// Initial points; defaults to the lower corner of the space.
    pub init: Option<Vec<Vec<f64>>>,
}

impl Default for AlgorithmSection {
    fn default() -> Self {
        let d = CampaignConfig::default();
        Self {
            kind: AlgorithmKind::Original,
            criterion: CriterionName::Ei,
            tau: None,
            max_iters: d.max_iters,
            ei_epsilon: d.ei_epsilon,
            sigma_epsilon: d.sigma_epsilon,
            refit_hyperparams: d.refit_hyperparams,
            restarts: d.restarts,
            kernel: KernelName::SquaredExponential,
            init: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// May contain `{seed}`; required when more than one seed runs.
    pub trace_path: String,
    pub posterior_dir: Option<PathBuf>,
    pub summary_path: PathBuf,
}

/// The objective a validated config builds.
pub enum ObjectiveSpec {
    Sinc,
    External(ExternalCommand),
    Forest(Box<ForestObjective>),
}

impl ObjectiveSpec {
    pub fn as_objective(&self) -> &dyn Objective {
        match self {
            ObjectiveSpec::Sinc => &Sinc,
            ObjectiveSpec::External(cmd) => cmd,
            ObjectiveSpec::Forest(f) => f.as_ref(),
        }
    }
}

/// A config that passed validation, with paths resolved and the objective
/// ready to evaluate.
pub struct RunPlan {
    pub source: PathBuf,
    pub seeds: Vec<u64>,
    pub space: ParamSpace,
    pub init: Vec<Vec<f64>>,
    pub campaign: CampaignConfig,
    pub objective: ObjectiveSpec,
    pub trace_template: PathBuf,
    pub posterior_dir: Option<PathBuf>,
    pub summary_path: PathBuf,
}

impl RunPlan {
    pub fn trace_path(&self, seed: u64) -> PathBuf {
        PathBuf::from(
            self.trace_template
                .to_string_lossy()
                .replace("{seed}", &seed.to_string()),
        )
    }

    /// Posterior dumps of one seed go to their own subdirectory.
    pub fn posterior_dir_for(&self, seed: u64) -> Option<PathBuf> {
        self.posterior_dir
            .as_ref()
            .map(|d| d.join(format!("seed_{seed}")))
    }
}

fn config_err(path: &Path, field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {field}: {message}", path.display()))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn parse_config(path: &Path, text: &str) -> Result<RunConfigFile, CliError> {
    toml::from_str(text).map_err(|e| {
        // toml's message already carries line and column
        CliError::Config(format!("{}: {}", path.display(), e.to_string().replace('\n', " ")))
    })
}

pub fn load_plan(path: &Path) -> Result<RunPlan, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("{}: cannot read config: {e}", path.display()))
    })?;
    let file = parse_config(path, &text)?;
    build_plan(path, file)
}

pub fn build_plan(path: &Path, file: RunConfigFile) -> Result<RunPlan, CliError> {
    let base = path.parent().unwrap_or(Path::new("."));
    let err = |field: &str, msg: String| config_err(path, field, msg);

    if file.seeds.is_empty() {
        return Err(err("seeds", "at least one seed is required".into()));
    }
    let mut sorted = file.seeds.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(err("seeds", "seeds must be distinct".into()));
    }

    let s = &file.space;
    let space = ParamSpace::new(s.lower.clone(), s.upper.clone(), s.grid_points_per_dim)
        .map_err(|e| err("space", e.to_string()))?;

    let a = &file.algorithm;
    let (algorithm, default_tau) = match a.kind {
        AlgorithmKind::Original => (Algorithm::Original, 0.8),
        AlgorithmKind::Hybrid => (Algorithm::Hybrid, 0.8),
        AlgorithmKind::VariableThreshold => (Algorithm::VariableThreshold, 1.0),
    };
    let campaign = CampaignConfig {
        algorithm,
        criterion: match a.criterion {
            CriterionName::Ei => Criterion::ExpectedImprovement,
            CriterionName::Pi => Criterion::ProbabilityOfImprovement,
            CriterionName::Mean => Criterion::MeanValue,
        },
        tau: a.tau.unwrap_or(default_tau),
        max_iters: a.max_iters,
        ei_epsilon: a.ei_epsilon,
        sigma_epsilon: a.sigma_epsilon,
        seed: 0,
        refit_hyperparams: a.refit_hyperparams,
        restarts: a.restarts,
        kernel: match a.kernel {
            KernelName::SquaredExponential => KernelKind::SquaredExponential,
            KernelName::Matern52 => KernelKind::Matern52,
        },
        initial_kernel: None,
    };
    match algorithm {
        Algorithm::Hybrid if !(0.0..=1.0).contains(&campaign.tau) => {
            return Err(err("algorithm.tau", format!("hybrid needs tau in [0, 1], got {}", campaign.tau)))
        }
        Algorithm::VariableThreshold if !(campaign.tau >= 0.0 && campaign.tau.is_finite()) => {
            return Err(err("algorithm.tau", format!("variable_threshold needs tau >= 0, got {}", campaign.tau)))
        }
        _ => {}
    }
    for (field, v) in [("algorithm.ei_epsilon", a.ei_epsilon), ("algorithm.sigma_epsilon", a.sigma_epsilon)] {
        if !(v > 0.0) {
            return Err(err(field, format!("must be positive, got {v}")));
        }
    }
    if a.refit_hyperparams && a.restarts == 0 {
        return Err(err("algorithm.restarts", "must be positive when refit_hyperparams = true".into()));
    }
    campaign
        .validate()
        .map_err(|e| err("algorithm", e.to_string()))?;

    let init = match &a.init {
        Some(points) if points.is_empty() => {
            return Err(err("algorithm.init", "needs at least one point".into()))
        }
        Some(points) => points.clone(),
        None => vec![space.candidate(0)],
    };
    for (i, theta) in init.iter().enumerate() {
        space
            .check_point(theta)
            .map_err(|e| err(&format!("algorithm.init[{i}]"), e.to_string()))?;
    }

    let objective = build_objective(path, base, &file.objective, &space)?;

    let out = &file.output;
    if file.seeds.len() > 1 && !out.trace_path.contains("{seed}") {
        return Err(err(
            "output.trace_path",
            "must contain `{seed}` when more than one seed runs".into(),
        ));
    }

    Ok(RunPlan {
        source: path.to_path_buf(),
        seeds: file.seeds,
        space,
        init,
        campaign,
        objective,
        trace_template: resolve(base, Path::new(&out.trace_path)),
        posterior_dir: out.posterior_dir.as_ref().map(|d| resolve(base, d)),
        summary_path: resolve(base, &out.summary_path),
    })
}

fn build_objective(
    path: &Path,
    base: &Path,
    section: &ObjectiveSection,
    space: &ParamSpace,
) -> Result<ObjectiveSpec, CliError> {
    let err = |field: &str, msg: String| config_err(path, field, msg);
    let present: Vec<&str> = [
        section.sinc.as_ref().map(|_| "sinc"),
        section.external.as_ref().map(|_| "external"),
        section.forest.as_ref().map(|_| "forest"),
    ]
    .into_iter()
    .flatten()
    .collect();
    match present.len() {
        0 => {
            return Err(err(
                "objective",
                "no objective section; expected one of [objective.sinc], [objective.external], [objective.forest]".into(),
            ))
        }
        1 => {}
        _ => {
            return Err(err(
                "objective",
                format!(
                    "conflicting objective sections [{}]; exactly one is allowed",
                    present.join(", ")
                ),
            ))
        }
    }

    if section.sinc.is_some() {
        if space.dims() != 1 {
            return Err(err("space", format!("sinc needs a 1-D space, got {} dimensions", space.dims())));
        }
        return Ok(ObjectiveSpec::Sinc);
    }
    if let Some(ext) = &section.external {
        if ext.command.trim().is_empty() {
            return Err(err("objective.external.command", "command is empty".into()));
        }
        return Ok(ObjectiveSpec::External(ExternalCommand::new(ext.command.clone())));
    }

    let f = section.forest.as_ref().expect("one section is present");
    if space.dims() != 1 {
        return Err(err(
            "space",
            format!("the forest objective tunes one tree count, got {} dimensions", space.dims()),
        ));
    }
    if space.lower()[0] < 0.5 {
        return Err(err("space.lower", "tree counts start at 1".into()));
    }
    let defaults = ForestConfig::default();
    let cfg = ForestConfig {
        n_trees: defaults.n_trees,
        max_depth: f.max_depth.unwrap_or(defaults.max_depth),
        min_leaf: f.min_leaf.unwrap_or(defaults.min_leaf),
        bootstrap: f.bootstrap.unwrap_or(defaults.bootstrap),
        rng_seed: f.rng_seed.unwrap_or(defaults.rng_seed),
        holdout_fraction: f.holdout_fraction.unwrap_or(defaults.holdout_fraction),
    };
    let data = match (&f.csv_path, f.surrogate_seed) {
        (Some(_), Some(_)) => {
            return Err(err(
                "objective.forest",
                "csv_path and surrogate_seed are mutually exclusive".into(),
            ))
        }
        (Some(p), None) => {
            let p = resolve(base, p);
            crate::objectives::load_csv_dataset(&p, &f.label_column, None)
                .map_err(|e| err("objective.forest.csv_path", e.to_string()))?
        }
        (None, seed) => Dataset::from_csv_str(&credit_surrogate_csv(seed.unwrap_or(0)), &f.label_column, None)
            .map_err(|e| err("objective.forest.label_column", e.to_string()))?,
    };
    let obj = ForestObjective::new(&data, cfg, f.data_seed)
        .map_err(|e| err("objective.forest", e.to_string()))?;
    Ok(ObjectiveSpec::Forest(Box::new(obj)))
}
