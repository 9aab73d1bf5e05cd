use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dataset::Dataset;
use super::tree::DecisionTree;
use super::{Objective, ObjectiveError};

/// Bagged entropy trees. Every split considers every feature.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub bootstrap: bool,
    pub rng_seed: u64,
    pub holdout_fraction: f64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 10,
            max_depth: 12,
            min_leaf: 2,
            bootstrap: true,
            rng_seed: 0,
            holdout_fraction: 0.3,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<(), ObjectiveError> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_leaf == 0 {
            return Err(ObjectiveError::Invalid(
                "n_trees, max_depth and min_leaf must be positive".into(),
            ));
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return Err(ObjectiveError::Invalid(format!(
                "holdout_fraction {} is outside (0, 1)",
                self.holdout_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<DecisionTree>,
    n_classes: usize,
}

/// Tree `t` draws its bootstrap sample from ChaCha8 seeded with `rng_seed`
/// on stream `t`, so the first `k` trees of any forest with the same seed are
/// identical.
fn grow_tree(data: &Dataset, cfg: &ForestConfig, t: usize) -> DecisionTree {
    let n = data.len();
    let indices: Vec<usize> = if cfg.bootstrap {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(t as u64);
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    DecisionTree::fit(data, &indices, cfg.max_depth, cfg.min_leaf)
}

fn check_trainable(data: &Dataset) -> Result<(), ObjectiveError> {
    if data.is_empty() {
        return Err(ObjectiveError::Invalid("training data is empty".into()));
    }
    let mut seen = vec![false; data.n_classes()];
    for &l in &data.labels {
        seen[l] = true;
    }
    if data.n_classes() < 2 || seen.iter().any(|s| !s) {
        let missing: Vec<&str> = data
            .classes
            .iter()
            .zip(&seen)
            .filter(|(_, s)| !**s)
            .map(|(c, _)| c.as_str())
            .collect();
        return Err(ObjectiveError::Invalid(format!(
            "training data needs at least two classes; absent: {missing:?}"
        )));
    }
    Ok(())
}

pub fn train_forest(data: &Dataset, cfg: &ForestConfig) -> Result<Forest, ObjectiveError> {
    cfg.validate()?;
    check_trainable(data)?;
    Ok(Forest {
        trees: (0..cfg.n_trees).map(|t| grow_tree(data, cfg, t)).collect(),
        n_classes: data.n_classes(),
    })
}

/// Majority vote; ties go to the lowest class code.
fn vote(n_classes: usize, predictions: impl Iterator<Item = usize>) -> usize {
    let mut counts = vec![0usize; n_classes];
    for p in predictions {
        counts[p] += 1;
    }
    let mut best = 0;
    for (c, &k) in counts.iter().enumerate() {
        if k > counts[best] {
            best = c;
        }
    }
    best
}

impl Forest {
    pub fn from_trees(trees: Vec<DecisionTree>, n_classes: usize) -> Self {
        Self { trees, n_classes }
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        vote(self.n_classes, self.trees.iter().map(|t| t.predict(row)))
    }

    pub fn accuracy(&self, data: &Dataset) -> f64 {
        let hits = data
            .rows
            .iter()
            .zip(&data.labels)
            .filter(|(row, &label)| self.predict(row) == label)
            .count();
        hits as f64 / data.len() as f64
    }
}

/// Holdout accuracy of a forest as a function of its tree count.
///
/// The train/holdout split is drawn once from `data_seed`. Trees are grown on
/// demand and their holdout predictions cached; because tree `t` depends only
/// on `(rng_seed, t)`, the score for `k` trees equals the accuracy of
/// `train_forest` with `n_trees = k`.
pub struct ForestObjective {
    train: Dataset,
    holdout: Dataset,
    cfg: ForestConfig,
    data_seed: u64,
    // holdout predictions of trees 0..len
    cache: Mutex<Vec<Vec<usize>>>,
}

impl ForestObjective {
    pub fn new(data: &Dataset, cfg: ForestConfig, data_seed: u64) -> Result<Self, ObjectiveError> {
        cfg.validate()?;
        let n = data.len();
        if n < 2 {
            return Err(ObjectiveError::Invalid("need at least two rows".into()));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(data_seed));
        let n_hold = ((cfg.holdout_fraction * n as f64).round() as usize).clamp(1, n - 1);
        let (hold_idx, train_idx) = order.split_at(n_hold);
        let mut train_idx = train_idx.to_vec();
        let mut hold_idx = hold_idx.to_vec();
        train_idx.sort_unstable();
        hold_idx.sort_unstable();
        let train = data.subset(&train_idx);
        check_trainable(&train)?;
        Ok(Self {
            train,
            holdout: data.subset(&hold_idx),
            cfg,
            data_seed,
            cache: Mutex::new(Vec::new()),
        })
    }

    pub fn train(&self) -> &Dataset {
        &self.train
    }

    pub fn holdout(&self) -> &Dataset {
        &self.holdout
    }

    pub fn config(&self) -> &ForestConfig {
        &self.cfg
    }

    /// Tree count a parameter value maps to.
    pub fn tree_count(theta: f64) -> usize {
        theta.round().max(1.0) as usize
    }

    pub fn accuracy_with(&self, n_trees: usize) -> f64 {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() < n_trees {
            let tree = grow_tree(&self.train, &self.cfg, cache.len());
            cache.push(self.holdout.rows.iter().map(|r| tree.predict(r)).collect());
        }
        let n_classes = self.train.n_classes();
        let hits = (0..self.holdout.len())
            .filter(|&i| vote(n_classes, cache[..n_trees].iter().map(|p| p[i])) == self.holdout.labels[i])
            .count();
        hits as f64 / self.holdout.len() as f64
    }
}

impl Objective for ForestObjective {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        match theta {
            [t] if t.is_finite() => Ok(self.accuracy_with(Self::tree_count(*t))),
            _ => Err(ObjectiveError::Invalid(format!(
                "forest objective takes one finite tree count, got {theta:?}"
            ))),
        }
    }

    fn description(&self) -> String {
        format!(
            "random forest holdout accuracy ({} train / {} holdout rows, data seed {})",
            self.train.len(),
            self.holdout.len(),
            self.data_seed
        )
    }
}
