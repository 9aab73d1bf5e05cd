//! Campaign loops.
//!
//! Every iteration fits a Gaussian process to all observations, evaluates the
//! posterior on the grid, checks the stopping rule, and then evaluates one new
//! candidate:
//!
//! | algorithm | evaluates |
//! |---|---|
//! | `Original` | the acquisition maximizer `θ*` |
//! | `Hybrid` | `θ*` if `ρ < τ`, else the most uncertain candidate `θᵘ` |
//! | `VariableThreshold` | `θ*` if `ρ < ν·τ'` with `ν = PI(θᵘ)`, else `θᵘ` |
//!
//! Candidates that have already been evaluated are masked out of both
//! selections, so a trace never repeats a point.
//!
//! # Randomness
//!
//! A campaign owns one ChaCha8 generator seeded with `seed_from_u64(seed)`.
//! Stream 0 supplies the coin flips `ρ`; stream 1 supplies one `u64` per
//! hyperparameter refit, used as that search's seed. Within an iteration the
//! refit seed is drawn first, then `ρ`. Draws of exactly `0.0` are rejected,
//! so `ρ ∈ (0, 1)`. Keeping the two consumers on separate streams means an
//! `Original` campaign and a `Hybrid` campaign with `τ = 1` refit with the
//! same seeds and therefore evaluate the same sequence.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::acquisition::{
    max_uncertainty_excluding, posterior_over_grid, probability_of_improvement,
    select_next_excluding, Criterion, PosteriorGrid,
};
use crate::gp::{fit, learn_hyperparams, GpError, KernelConfig, KernelKind};
use crate::objectives::{Objective, ObjectiveError};
use crate::space::{Observation, ParamSpace, SpaceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Original,
    Hybrid,
    VariableThreshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub algorithm: Algorithm,
    pub criterion: Criterion,
    /// Exploit probability for `Hybrid` (in `[0, 1]`), basis threshold for
    /// `VariableThreshold` (in `[0, ∞)`). Ignored by `Original`.
    pub tau: f64,
    /// Evaluations after initialization.
    pub max_iters: usize,
    pub ei_epsilon: f64,
    pub sigma_epsilon: f64,
    pub seed: u64,
    pub refit_hyperparams: bool,
    pub restarts: usize,
    pub kernel: KernelKind,
    /// Starting hyperparameters. Derived from the initial data when absent.
    pub initial_kernel: Option<KernelConfig>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Original,
            criterion: Criterion::ExpectedImprovement,
            tau: 0.8,
            max_iters: 20,
            ei_epsilon: 1e-6,
            sigma_epsilon: 1e-4,
            seed: 0,
            refit_hyperparams: true,
            restarts: 5,
            kernel: KernelKind::SquaredExponential,
            initial_kernel: None,
        }
    }
}

impl CampaignConfig {
    pub fn original() -> Self {
        Self::default()
    }

    pub fn hybrid(tau: f64) -> Self {
        Self {
            algorithm: Algorithm::Hybrid,
            tau,
            ..Self::default()
        }
    }

    pub fn variable_threshold(tau: f64) -> Self {
        Self {
            algorithm: Algorithm::VariableThreshold,
            tau,
            ..Self::default()
        }
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_criterion(mut self, criterion: Criterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_kernel(mut self, kernel: KernelKind) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |m: String| Err(CampaignError::InvalidConfig(m));
        match self.algorithm {
            Algorithm::Hybrid if !(0.0..=1.0).contains(&self.tau) => {
                return bad(format!("hybrid tau must lie in [0, 1], got {}", self.tau))
            }
            Algorithm::VariableThreshold if !(self.tau >= 0.0 && self.tau.is_finite()) => {
                return bad(format!("variable-threshold tau must be >= 0, got {}", self.tau))
            }
            _ => {}
        }
        if !(self.ei_epsilon > 0.0) {
            return bad(format!("ei_epsilon must be positive, got {}", self.ei_epsilon));
        }
        if !(self.sigma_epsilon > 0.0) {
            return bad(format!("sigma_epsilon must be positive, got {}", self.sigma_epsilon));
        }
        if self.refit_hyperparams && self.restarts == 0 {
            return bad("restarts must be positive when refitting hyperparameters".into());
        }
        if let Some(k) = &self.initial_kernel {
            k.validate().map_err(CampaignError::Gp)?;
            if k.kind != self.kernel {
                return bad(format!(
                    "initial_kernel is {:?} but kernel is {:?}",
                    k.kind, self.kernel
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Init,
    Exploit,
    Explore,
}

impl Move {
    pub fn as_str(self) -> &'static str {
        match self {
            Move::Init => "Init",
            Move::Exploit => "Exploit",
            Move::Explore => "Explore",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub mv: Move,
    pub theta: Vec<f64>,
    pub y: f64,
    pub y_best: f64,
    pub acq_value: Option<f64>,
    pub max_std: Option<f64>,
    pub rho: Option<f64>,
    pub threshold_used: Option<f64>,
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Budget,
    Converged,
    GridExhausted,
    ObjectiveFailure,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Budget => "Budget",
            StopReason::Converged => "Converged",
            StopReason::GridExhausted => "GridExhausted",
            StopReason::ObjectiveFailure => "ObjectiveFailure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub theta_best: Vec<f64>,
    pub y_best: f64,
    pub trace: Vec<TraceRecord>,
    pub stop_reason: StopReason,
    /// Hyperparameters of the last fitted model, if any fit happened.
    pub final_kernel: Option<KernelConfig>,
}

impl CampaignResult {
    /// Evaluations after initialization.
    pub fn iterations_used(&self) -> usize {
        self.trace.iter().filter(|r| r.mv != Move::Init).count()
    }

    pub fn observations(&self) -> Vec<Observation> {
        self.trace
            .iter()
            .map(|r| Observation::new(r.theta.clone(), r.y))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
    #[error("initial point: {0}")]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error("objective failed: {error}")]
    Objective {
        error: ObjectiveError,
        partial: Box<CampaignResult>,
    },
}

/// What an observer sees each time the posterior is recomputed.
pub struct IterationView<'a> {
    /// Post-initialization evaluations completed so far.
    pub iter: usize,
    pub grid: &'a PosteriorGrid,
    pub observations: &'a [Observation],
    pub kernel: &'a KernelConfig,
    pub y_best: f64,
}

/// Stopping rule, checked once per iteration before selecting a point.
///
/// `Budget` once `iter ≥ max_iters`; `GridExhausted` when every candidate is
/// masked; `Converged` when the largest expected improvement over the open
/// candidates is below `ei_epsilon` and, for the exploring variants, the
/// largest standard deviation is also below `sigma_epsilon`. A hybrid with
/// `τ ≥ 1` can never explore and uses the plain rule.
pub fn should_stop(
    grid: &PosteriorGrid,
    y_best: f64,
    cfg: &CampaignConfig,
    iter: usize,
    excluded: &[bool],
) -> Option<StopReason> {
    if iter >= cfg.max_iters {
        return Some(StopReason::Budget);
    }
    let Some(max_std) = grid.max_std(excluded) else {
        return Some(StopReason::GridExhausted);
    };
    let max_ei = grid.max_score(Criterion::ExpectedImprovement, y_best, excluded)?;
    let ei_done = max_ei < cfg.ei_epsilon;
    let needs_std = match cfg.algorithm {
        Algorithm::Original => false,
        Algorithm::Hybrid => cfg.tau < 1.0,
        Algorithm::VariableThreshold => true,
    };
    let converged = ei_done && (!needs_std || max_std < cfg.sigma_epsilon);
    converged.then_some(StopReason::Converged)
}

pub fn run_original(
    space: &ParamSpace,
    objective: &dyn Objective,
    init: &[Vec<f64>],
    cfg: &CampaignConfig,
) -> Result<CampaignResult, CampaignError> {
    let cfg = CampaignConfig {
        algorithm: Algorithm::Original,
        ..cfg.clone()
    };
    run_campaign(space, objective, init, &cfg)
}

pub fn run_hybrid(
    space: &ParamSpace,
    objective: &dyn Objective,
    init: &[Vec<f64>],
    cfg: &CampaignConfig,
) -> Result<CampaignResult, CampaignError> {
    let cfg = CampaignConfig {
        algorithm: Algorithm::Hybrid,
        ..cfg.clone()
    };
    run_campaign(space, objective, init, &cfg)
}

pub fn run_variable_threshold(
    space: &ParamSpace,
    objective: &dyn Objective,
    init: &[Vec<f64>],
    cfg: &CampaignConfig,
) -> Result<CampaignResult, CampaignError> {
    let cfg = CampaignConfig {
        algorithm: Algorithm::VariableThreshold,
        ..cfg.clone()
    };
    run_campaign(space, objective, init, &cfg)
}

/// Run the algorithm named in `cfg`.
pub fn run_campaign(
    space: &ParamSpace,
    objective: &dyn Objective,
    init: &[Vec<f64>],
    cfg: &CampaignConfig,
) -> Result<CampaignResult, CampaignError> {
    run_campaign_observed(space, objective, init, cfg, &mut |_| {})
}

struct CampaignRng {
    coin: ChaCha8Rng,
    refit: ChaCha8Rng,
}

impl CampaignRng {
    fn new(seed: u64) -> Self {
        let coin = ChaCha8Rng::seed_from_u64(seed);
        let mut refit = coin.clone();
        refit.set_stream(1);
        Self { coin, refit }
    }

    fn rho(&mut self) -> f64 {
        loop {
            let r: f64 = self.coin.random();
            if r > 0.0 && r < 1.0 {
                return r;
            }
        }
    }

    fn refit_seed(&mut self) -> u64 {
        self.refit.next_u64()
    }
}

struct State {
    observations: Vec<Observation>,
    trace: Vec<TraceRecord>,
    theta_best: Vec<f64>,
    y_best: f64,
    excluded: Vec<bool>,
    final_kernel: Option<KernelConfig>,
}

impl State {
    fn record(&mut self, mut rec: TraceRecord) {
        if self.trace.is_empty() || rec.y > self.y_best {
            self.y_best = rec.y;
            self.theta_best = rec.theta.clone();
        }
        rec.y_best = self.y_best;
        self.observations.push(Observation::new(rec.theta.clone(), rec.y));
        self.trace.push(rec);
    }

    fn finish(self, stop_reason: StopReason) -> CampaignResult {
        CampaignResult {
            theta_best: self.theta_best,
            y_best: self.y_best,
            trace: self.trace,
            stop_reason,
            final_kernel: self.final_kernel,
        }
    }
}

fn mask_point(space: &ParamSpace, excluded: &mut [bool], theta: &[f64]) {
    let n = space.grid_points_per_dim();
    let mut index = 0;
    for (d, &x) in theta.iter().enumerate() {
        let k = if n == 1 {
            0.0
        } else {
            (x - space.lower()[d]) / space.width(d) * (n - 1) as f64
        };
        let nearest = k.round();
        if (k - nearest).abs() > 1e-9 || nearest < 0.0 || nearest >= n as f64 {
            return;
        }
        index = index * n + nearest as usize;
    }
    let candidate = space.candidate(index);
    let on_grid = candidate
        .iter()
        .zip(theta)
        .enumerate()
        .all(|(d, (c, t))| (c - t).abs() <= 1e-9 * space.width(d));
    if on_grid {
        excluded[index] = true;
    }
}

/// [`run_campaign`] with a callback invoked after every posterior
/// evaluation, including the one that triggers a stop.
pub fn run_campaign_observed(
    space: &ParamSpace,
    objective: &dyn Objective,
    init: &[Vec<f64>],
    cfg: &CampaignConfig,
    observer: &mut dyn FnMut(&IterationView<'_>),
) -> Result<CampaignResult, CampaignError> {
    cfg.validate()?;
    if init.is_empty() {
        return Err(CampaignError::InvalidConfig(
            "at least one initial point is required".into(),
        ));
    }
    for theta in init {
        space.check_point(theta)?;
    }

    let mut rng = CampaignRng::new(cfg.seed);
    let mut state = State {
        observations: Vec::new(),
        trace: Vec::new(),
        theta_best: Vec::new(),
        y_best: f64::NEG_INFINITY,
        excluded: vec![false; space.len()],
        final_kernel: None,
    };

    for theta in init {
        let y = match objective.evaluate(theta) {
            Ok(y) => y,
            Err(error) => {
                return Err(CampaignError::Objective {
                    error,
                    partial: Box::new(state.finish(StopReason::ObjectiveFailure)),
                })
            }
        };
        mask_point(space, &mut state.excluded, theta);
        state.record(TraceRecord {
            iter: 0,
            mv: Move::Init,
            theta: theta.clone(),
            y,
            y_best: y,
            acq_value: None,
            max_std: None,
            rho: None,
            threshold_used: None,
            nu: None,
        });
    }

    let mut kernel = match &cfg.initial_kernel {
        Some(k) => k.clone(),
        None => KernelConfig::from_data(cfg.kernel, space, &state.observations),
    };
    let mut iter = 0;
    loop {
        if iter >= cfg.max_iters {
            return Ok(state.finish(StopReason::Budget));
        }
        if cfg.refit_hyperparams {
            let seed = rng.refit_seed();
            kernel = learn_hyperparams(space, &state.observations, &kernel, cfg.restarts, seed);
        }
        let gp = fit(space, &state.observations, &kernel)?;
        state.final_kernel = Some(kernel.clone());
        let grid = posterior_over_grid(&gp);
        observer(&IterationView {
            iter,
            grid: &grid,
            observations: &state.observations,
            kernel: &kernel,
            y_best: state.y_best,
        });
        if let Some(reason) = should_stop(&grid, state.y_best, cfg, iter, &state.excluded) {
            return Ok(state.finish(reason));
        }

        let y_best = state.y_best;
        let exploit = select_next_excluding(&grid, cfg.criterion, y_best, &state.excluded)
            .expect("should_stop reports an exhausted grid");
        let explore = max_uncertainty_excluding(&grid, cfg.criterion, &state.excluded)
            .expect("should_stop reports an exhausted grid");
        let max_std = explore.score;

        let (mv, rho, threshold, nu) = match cfg.algorithm {
            Algorithm::Original => (Move::Exploit, None, None, None),
            Algorithm::Hybrid => {
                let rho = rng.rho();
                let mv = if rho < cfg.tau { Move::Exploit } else { Move::Explore };
                (mv, Some(rho), Some(cfg.tau), None)
            }
            Algorithm::VariableThreshold => {
                let nu = probability_of_improvement(
                    grid.means[explore.index],
                    grid.stds[explore.index],
                    y_best,
                );
                let threshold = nu * cfg.tau;
                let rho = rng.rho();
                let mv = if rho < threshold { Move::Exploit } else { Move::Explore };
                (mv, Some(rho), Some(threshold), Some(nu))
            }
        };
        let chosen = if mv == Move::Exploit { &exploit } else { &explore };
        let acq_value = cfg
            .criterion
            .score(grid.means[chosen.index], grid.stds[chosen.index], y_best);

        let y = match objective.evaluate(&chosen.theta) {
            Ok(y) => y,
            Err(error) => {
                return Err(CampaignError::Objective {
                    error,
                    partial: Box::new(state.finish(StopReason::ObjectiveFailure)),
                })
            }
        };
        iter += 1;
        state.excluded[chosen.index] = true;
        state.record(TraceRecord {
            iter,
            mv,
            theta: chosen.theta.clone(),
            y,
            y_best,
            acq_value: Some(acq_value),
            max_std: Some(max_std),
            rho,
            threshold_used: threshold,
            nu,
        });
    }
}
