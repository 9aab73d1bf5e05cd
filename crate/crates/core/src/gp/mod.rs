//! Gaussian process regression on a [`ParamSpace`].
//!
//! Scores are centered on their sample mean before fitting, so far from the
//! data the posterior mean reverts to that mean and the posterior variance to
//! the kernel amplitude `α`. The Gram matrix is factored once by Cholesky;
//! if the factorization fails a diagonal jitter is escalated from `1e-10·α`
//! to `1e-4·α` by factors of ten before giving up with
//! [`GpError::SingularGram`].

mod hyper;
mod kernel;

use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

pub use hyper::{learn_hyperparams, HyperSearch};
pub use kernel::{gram_matrix, kernel_value, KernelConfig, KernelKind};

use crate::space::{Observation, ParamSpace, SpaceError};

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GpError {
    #[error("cannot fit a Gaussian process without observations")]
    NoObservations,
    #[error("invalid kernel configuration {0:?}")]
    InvalidKernel(KernelConfig),
    #[error("kernel has {kernel} length-scales but the space has {space} dimensions")]
    DimensionMismatch { kernel: usize, space: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("gram matrix is singular even with jitter {jitter:e}")]
    SingularGram { jitter: f64 },
}

/// A trained, immutable Gaussian process.
#[derive(Debug, Clone)]
pub struct FittedGP {
    space: ParamSpace,
    observations: Vec<Observation>,
    kernel: KernelConfig,
    chol: DMatrix<f64>,
    alpha_weights: DVector<f64>,
    y_mean: f64,
    jitter: f64,
}

/// Population variance of the observed scores.
pub fn score_variance(observations: &[Observation]) -> f64 {
    let n = observations.len() as f64;
    if observations.is_empty() {
        return 0.0;
    }
    let mean = observations.iter().map(|o| o.y).sum::<f64>() / n;
    observations.iter().map(|o| (o.y - mean).powi(2)).sum::<f64>() / n
}

/// Positive scale for the amplitude and noise search bounds. Constant scores
/// have zero variance, so a tiny floor keeps the bounds positive.
pub(crate) fn data_scale(observations: &[Observation]) -> f64 {
    score_variance(observations).max(1e-12)
}

impl KernelConfig {
    /// Starting hyperparameters derived from the data: `α = Var(y)` (1 for
    /// constant scores), each length-scale a tenth of the axis width, noise
    /// `1e-6·Var(y)`.
    pub fn from_data(kind: KernelKind, space: &ParamSpace, observations: &[Observation]) -> Self {
        let gammas = (0..space.dims()).map(|d| 0.1 * space.width(d)).collect();
        let var = score_variance(observations);
        Self::new(
            kind,
            if var > 0.0 { var } else { 1.0 },
            gammas,
            1e-6 * score_variance(observations),
        )
    }
}

fn check_inputs(
    space: &ParamSpace,
    observations: &[Observation],
    cfg: &KernelConfig,
) -> Result<(), GpError> {
    if observations.is_empty() {
        return Err(GpError::NoObservations);
    }
    cfg.validate()?;
    if cfg.dims() != space.dims() {
        return Err(GpError::DimensionMismatch {
            kernel: cfg.dims(),
            space: space.dims(),
        });
    }
    for obs in observations {
        space.check_point(&obs.theta)?;
    }
    Ok(())
}

/// Factor `C + (noise + jitter)·I`, escalating the jitter on failure.
fn factor(points: &[Vec<f64>], cfg: &KernelConfig) -> Result<(DMatrix<f64>, f64), GpError> {
    let mut jitter = JITTER_START * cfg.alpha;
    loop {
        let gram = gram_matrix(points, cfg, jitter);
        if let Some(chol) = Cholesky::new(gram) {
            let l = chol.unpack();
            if l.iter().all(|v| v.is_finite()) {
                return Ok((l, jitter));
            }
        }
        if jitter >= JITTER_MAX * cfg.alpha * (1.0 - 1e-9) {
            return Err(GpError::SingularGram { jitter });
        }
        jitter *= 10.0;
    }
}

fn solve_chol(l: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let z = l
        .solve_lower_triangular(rhs)
        .expect("cholesky factor has a positive diagonal");
    l.tr_solve_lower_triangular(&z)
        .expect("cholesky factor has a positive diagonal")
}

pub fn fit(
    space: &ParamSpace,
    observations: &[Observation],
    cfg: &KernelConfig,
) -> Result<FittedGP, GpError> {
    check_inputs(space, observations, cfg)?;
    let points: Vec<Vec<f64>> = observations.iter().map(|o| o.theta.clone()).collect();
    let (chol, jitter) = factor(&points, cfg)?;
    let y_mean = observations.iter().map(|o| o.y).sum::<f64>() / observations.len() as f64;
    let centered = DVector::from_iterator(observations.len(), observations.iter().map(|o| o.y - y_mean));
    let alpha_weights = solve_chol(&chol, &centered);
    Ok(FittedGP {
        space: space.clone(),
        observations: observations.to_vec(),
        kernel: cfg.clone(),
        chol,
        alpha_weights,
        y_mean,
        jitter,
    })
}

/// Gaussian log marginal likelihood of the centered scores:
/// `−½ yᵀC⁻¹y − ½ log|C| − (n/2) log 2π`.
pub fn log_evidence(
    space: &ParamSpace,
    observations: &[Observation],
    cfg: &KernelConfig,
) -> Result<f64, GpError> {
    Ok(fit(space, observations, cfg)?.log_evidence())
}

impl FittedGP {
    pub fn space(&self) -> &ParamSpace {
        &self.space
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    /// Lower-triangular Cholesky factor of the regularized Gram matrix.
    pub fn chol(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn alpha_weights(&self) -> &DVector<f64> {
        &self.alpha_weights
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    /// Jitter that was added to the diagonal on top of `noise_var`.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// The regularized Gram matrix the factor was computed from.
    pub fn regularized_gram(&self) -> DMatrix<f64> {
        let points: Vec<Vec<f64>> = self.observations.iter().map(|o| o.theta.clone()).collect();
        gram_matrix(&points, &self.kernel, self.jitter)
    }

    fn cross_cov(&self, theta: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.observations.len(),
            self.observations.iter().map(|o| self.kernel.value(theta, &o.theta)),
        )
    }

    pub fn predict_mean(&self, theta: &[f64]) -> f64 {
        self.y_mean + self.cross_cov(theta).dot(&self.alpha_weights)
    }

    /// Posterior variance of the latent function, clamped at zero.
    pub fn predict_var(&self, theta: &[f64]) -> f64 {
        self.predict(theta).1
    }

    /// Mean and variance in one pass.
    pub fn predict(&self, theta: &[f64]) -> (f64, f64) {
        let k = self.cross_cov(theta);
        let mean = self.y_mean + k.dot(&self.alpha_weights);
        let v = self
            .chol
            .solve_lower_triangular(&k)
            .expect("cholesky factor has a positive diagonal");
        let var = self.kernel.value(theta, theta) - v.dot(&v);
        (mean, var.max(0.0))
    }

    pub fn log_evidence(&self) -> f64 {
        let n = self.observations.len() as f64;
        let centered = DVector::from_iterator(
            self.observations.len(),
            self.observations.iter().map(|o| o.y - self.y_mean),
        );
        let fit_term = -0.5 * centered.dot(&self.alpha_weights);
        let half_log_det: f64 = self.chol.diagonal().iter().map(|d| d.ln()).sum();
        fit_term - half_log_det - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
    }

    /// Full-precision text rendering of the fitted state, for replay checks.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "kernel={:?} y_mean={:?} jitter={:?}\nweights=",
            self.kernel, self.y_mean, self.jitter
        );
        for w in self.alpha_weights.iter() {
            out.push_str(&format!("{w:?},"));
        }
        out
    }
}
