//! Point-selection criteria over the candidate grid.
//!
//! Expected improvement and probability of improvement are defined for a
//! zero posterior standard deviation by their continuous limits (hinge and
//! step respectively), so observed points never produce NaN. Every argmax
//! breaks ties by the lowest enumeration index.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::gp::FittedGP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    ExpectedImprovement,
    ProbabilityOfImprovement,
    /// Greedy posterior mean; ignores `y_best` and the standard deviation.
    MeanValue,
}

impl Criterion {
    pub fn score(self, mean: f64, std: f64, y_best: f64) -> f64 {
        match self {
            Criterion::ExpectedImprovement => expected_improvement(mean, std, y_best),
            Criterion::ProbabilityOfImprovement => probability_of_improvement(mean, std, y_best),
            Criterion::MeanValue => mean,
        }
    }
}

pub fn std_normal_pdf(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}

pub fn std_normal_cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u * FRAC_1_SQRT_2)
}

pub fn expected_improvement(mean: f64, std: f64, y_best: f64) -> f64 {
    if std > 0.0 {
        let u = (mean - y_best) / std;
        (std * (u * std_normal_cdf(u) + std_normal_pdf(u))).max(0.0)
    } else {
        (mean - y_best).max(0.0)
    }
}

pub fn probability_of_improvement(mean: f64, std: f64, y_best: f64) -> f64 {
    if std > 0.0 {
        std_normal_cdf((mean - y_best) / std)
    } else if mean > y_best {
        1.0
    } else {
        0.0
    }
}

/// Posterior mean and standard deviation at every grid candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorGrid {
    pub candidates: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl PosteriorGrid {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Largest standard deviation among candidates not masked out.
    pub fn max_std(&self, excluded: &[bool]) -> Option<f64> {
        self.available(excluded)
            .map(|i| self.stds[i])
            .fold(None, |acc, s| Some(acc.map_or(s, |a: f64| a.max(s))))
    }

    /// Largest criterion value among candidates not masked out.
    pub fn max_score(&self, criterion: Criterion, y_best: f64, excluded: &[bool]) -> Option<f64> {
        self.available(excluded)
            .map(|i| criterion.score(self.means[i], self.stds[i], y_best))
            .fold(None, |acc, s| Some(acc.map_or(s, |a: f64| a.max(s))))
    }

    fn available<'a>(&'a self, excluded: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        (0..self.len()).filter(move |&i| !excluded.get(i).copied().unwrap_or(false))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionChoice {
    pub index: usize,
    pub theta: Vec<f64>,
    pub score: f64,
    pub criterion: Criterion,
}

pub fn posterior_over_grid(gp: &FittedGP) -> PosteriorGrid {
    let candidates = gp.space().candidates();
    let (means, stds) = candidates
        .iter()
        .map(|c| {
            let (m, v) = gp.predict(c);
            (m, v.sqrt())
        })
        .unzip();
    PosteriorGrid {
        candidates,
        means,
        stds,
    }
}

fn argmax_first(values: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values {
        match best {
            Some((_, b)) if !(v > b) => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Candidate maximizing `criterion`. Panics on an empty grid.
pub fn select_next(grid: &PosteriorGrid, criterion: Criterion, y_best: f64) -> AcquisitionChoice {
    select_next_excluding(grid, criterion, y_best, &[]).expect("posterior grid is empty")
}

/// Like [`select_next`] but skips candidates whose `excluded` flag is set.
/// Returns `None` when nothing is left.
pub fn select_next_excluding(
    grid: &PosteriorGrid,
    criterion: Criterion,
    y_best: f64,
    excluded: &[bool],
) -> Option<AcquisitionChoice> {
    let (index, score) = argmax_first(
        grid.available(excluded)
            .map(|i| (i, criterion.score(grid.means[i], grid.stds[i], y_best))),
    )?;
    Some(AcquisitionChoice {
        index,
        theta: grid.candidates[index].clone(),
        score,
        criterion,
    })
}

/// Candidate with the largest posterior standard deviation. The returned
/// `score` is the standard deviation itself; `criterion` is carried through
/// for bookkeeping.
pub fn max_uncertainty_point(grid: &PosteriorGrid, criterion: Criterion) -> AcquisitionChoice {
    max_uncertainty_excluding(grid, criterion, &[]).expect("posterior grid is empty")
}

pub fn max_uncertainty_excluding(
    grid: &PosteriorGrid,
    criterion: Criterion,
    excluded: &[bool],
) -> Option<AcquisitionChoice> {
    let (index, score) = argmax_first(grid.available(excluded).map(|i| (i, grid.stds[i])))?;
    Some(AcquisitionChoice {
        index,
        theta: grid.candidates[index].clone(),
        score,
        criterion,
    })
}
