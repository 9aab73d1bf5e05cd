//! Sequential model-based optimization over a discretized parameter grid.
//!
//! A Gaussian process surrogate is fitted to the scores observed so far, an
//! acquisition criterion (expected improvement, probability of improvement or
//! posterior mean) proposes the next point, and three campaign loops decide
//! what actually gets evaluated:
//!
//! - [`Algorithm::Original`] always evaluates the acquisition maximizer.
//! - [`Algorithm::Hybrid`] flips a biased coin each iteration and, with
//!   probability `1 - tau`, evaluates the point of largest posterior
//!   uncertainty instead.
//! - [`Algorithm::VariableThreshold`] scales the coin bias by the probability
//!   of improvement at that most uncertain point.
//!
//! The crate also ships the benchmark objectives used to exercise those loops
//! (a one-dimensional sinc, an external-command adapter and a random-forest
//! holdout accuracy objective) plus the `gpopt` campaign runner.
//!
//! ```
//! use gpopt::{CampaignConfig, ParamSpace, objectives::Sinc, optimizer};
//!
//! let space = ParamSpace::new(vec![-15.0], vec![15.0], 301).unwrap();
//! let cfg = CampaignConfig::hybrid(0.8).with_max_iters(10).with_seed(7);
//! let result = optimizer::run_campaign(&space, &Sinc, &[vec![-9.0]], &cfg).unwrap();
//! assert!(result.trace.len() <= 11);
//! ```

pub mod acquisition;
pub mod cli;
pub mod gp;
pub mod objectives;
pub mod optimizer;
mod space;

pub use acquisition::{AcquisitionChoice, Criterion, PosteriorGrid};
pub use gp::{FittedGP, GpError, KernelConfig, KernelKind};
pub use objectives::{Objective, ObjectiveError};
pub use optimizer::{
    Algorithm, CampaignConfig, CampaignError, CampaignResult, Move, StopReason, TraceRecord,
};
pub use space::{Observation, ParamSpace, SpaceError};
