//! Score functions evaluated by a campaign.

mod dataset;
mod external;
mod forest;
mod sinc;
mod surrogate;
pub mod tree;

use thiserror::Error;

pub use dataset::{load_csv_dataset, Dataset, DatasetError, FeatureKind};
pub use external::ExternalCommand;
pub use forest::{train_forest, Forest, ForestConfig, ForestObjective};
pub use sinc::{sinc_score, Sinc};
pub use surrogate::credit_surrogate_csv;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("command `{command}` exited with status {status}; stdout: {stdout:?}; stderr: {stderr:?}")]
    CommandFailed {
        command: String,
        status: String,
        stdout: String,
        stderr: String,
    },
    #[error("command `{command}` printed no parseable score; stdout: {stdout:?}")]
    Unparseable { command: String, stdout: String },
    #[error("could not launch `{command}`: {message}")]
    Spawn { command: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// A score `Ψ(θ)` to maximize.
pub trait Objective: Sync {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError>;

    fn description(&self) -> String;

    fn deterministic(&self) -> bool {
        true
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        (**self).evaluate(theta)
    }

    fn description(&self) -> String {
        (**self).description()
    }

    fn deterministic(&self) -> bool {
        (**self).deterministic()
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        (**self).evaluate(theta)
    }

    fn description(&self) -> String {
        (**self).description()
    }

    fn deterministic(&self) -> bool {
        (**self).deterministic()
    }
}

/// Wraps an infallible closure.
pub struct FnObjective<F> {
    name: String,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        Ok((self.f)(theta))
    }

    fn description(&self) -> String {
        self.name.clone()
    }
}
