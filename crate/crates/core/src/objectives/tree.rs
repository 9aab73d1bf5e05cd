//! Entropy-split classification trees.
//!
//! Splits are chosen by information gain: the binary test that minimizes the
//! size-weighted child entropy `−Σ_c P_c ln P_c`. Numeric features are tested
//! at midpoints between consecutive distinct values (`x ≤ t` goes left);
//! categorical features one level against the rest (`x == level` goes left).

use thiserror::Error;

use super::dataset::{Dataset, FeatureKind};

/// Two candidates closer than this in weighted entropy count as tied.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitTest {
    Threshold(f64),
    Category(usize),
}

impl SplitTest {
    pub fn goes_left(&self, value: f64) -> bool {
        match *self {
            SplitTest::Threshold(t) => value <= t,
            SplitTest::Category(c) => value as usize == c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub test: SplitTest,
    pub parent_entropy: f64,
    pub weighted_entropy: f64,
}

impl Split {
    pub fn gain(&self) -> f64 {
        self.parent_entropy - self.weighted_entropy
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no split improves on the node")]
pub struct NoValidSplit;

/// Shannon entropy (natural log) of a class histogram.
pub fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn histogram(data: &Dataset, indices: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; data.n_classes()];
    for &i in indices {
        counts[data.labels[i]] += 1;
    }
    counts
}

fn weighted(left: &[usize], right: &[usize]) -> f64 {
    let nl: usize = left.iter().sum();
    let nr: usize = right.iter().sum();
    let n = (nl + nr) as f64;
    (nl as f64 * entropy(left) + nr as f64 * entropy(right)) / n
}

/// Best information-gain split of the rows at `indices`.
///
/// Ties go to the lowest feature index, then the lowest threshold or level
/// code. Fails with [`NoValidSplit`] when the node is too small or pure, or
/// when every candidate leaves a child under `min_leaf` rows or has no gain.
pub fn entropy_best_split(
    data: &Dataset,
    indices: &[usize],
    min_leaf: usize,
) -> Result<Split, NoValidSplit> {
    let min_leaf = min_leaf.max(1);
    let n = indices.len();
    let parent = histogram(data, indices);
    if n < 2 * min_leaf || parent.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(NoValidSplit);
    }
    let parent_entropy = entropy(&parent);
    let mut best: Option<Split> = None;
    let mut consider = |feature: usize, test: SplitTest, w: f64| {
        let better = match &best {
            None => true,
            Some(b) => w < b.weighted_entropy - TIE_EPS,
        };
        if better && parent_entropy - w > TIE_EPS {
            best = Some(Split {
                feature,
                test,
                parent_entropy,
                weighted_entropy: w,
            });
        }
    };

    for f in 0..data.n_features() {
        match data.feature_kinds[f] {
            FeatureKind::Numeric => {
                let mut order: Vec<usize> = indices.to_vec();
                order.sort_by(|&a, &b| data.rows[a][f].total_cmp(&data.rows[b][f]));
                let mut left = vec![0; parent.len()];
                for k in 0..n - 1 {
                    left[data.labels[order[k]]] += 1;
                    let here = data.rows[order[k]][f];
                    let next = data.rows[order[k + 1]][f];
                    if here == next {
                        continue;
                    }
                    let nl = k + 1;
                    if nl < min_leaf || n - nl < min_leaf {
                        continue;
                    }
                    let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
                    consider(f, SplitTest::Threshold(0.5 * (here + next)), weighted(&left, &right));
                }
            }
            FeatureKind::Categorical => {
                let n_levels = data.levels[f].len();
                let mut per_level = vec![vec![0; parent.len()]; n_levels];
                for &i in indices {
                    per_level[data.rows[i][f] as usize][data.labels[i]] += 1;
                }
                for (code, left) in per_level.iter().enumerate() {
                    let nl: usize = left.iter().sum();
                    if nl < min_leaf || n - nl < min_leaf {
                        continue;
                    }
                    let right: Vec<usize> = parent.iter().zip(left).map(|(p, l)| p - l).collect();
                    consider(f, SplitTest::Category(code), weighted(left, &right));
                }
            }
        }
    }
    best.ok_or(NoValidSplit)
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        class: usize,
    },
    Internal {
        feature: usize,
        test: SplitTest,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    root: Node,
}

fn majority(counts: &[usize]) -> usize {
    counts
        .iter()
        .enumerate()
        .fold((0, 0), |(bi, bc), (i, &c)| if c > bc { (i, c) } else { (bi, bc) })
        .0
}

impl DecisionTree {
    /// Grow a tree on the rows at `indices` (repeats allowed, as in a
    /// bootstrap sample).
    pub fn fit(data: &Dataset, indices: &[usize], max_depth: usize, min_leaf: usize) -> Self {
        Self {
            root: grow(data, indices, 0, max_depth, min_leaf),
        }
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class } => return *class,
                Node::Internal {
                    feature,
                    test,
                    left,
                    right,
                } => {
                    node = if test.goes_left(row[*feature]) {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn depth(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 0,
                Node::Internal { left, right, .. } => 1 + depth(left).max(depth(right)),
            }
        }
        depth(&self.root)
    }
}

fn grow(data: &Dataset, indices: &[usize], depth: usize, max_depth: usize, min_leaf: usize) -> Node {
    let counts = histogram(data, indices);
    let leaf = Node::Leaf {
        class: majority(&counts),
    };
    if depth >= max_depth {
        return leaf;
    }
    let Ok(split) = entropy_best_split(data, indices, min_leaf) else {
        return leaf;
    };
    let (left, right): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| split.test.goes_left(data.rows[i][split.feature]));
    Node::Internal {
        feature: split.feature,
        test: split.test,
        left: Box::new(grow(data, &left, depth + 1, max_depth, min_leaf)),
        right: Box::new(grow(data, &right, depth + 1, max_depth, min_leaf)),
    }
}
