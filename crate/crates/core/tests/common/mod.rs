//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's numerics: kernels are re-derived
//! from their formulas, GP quantities use an explicit matrix inverse and
//! determinant, and splits are found by exhaustive enumeration.
#![allow(dead_code)]

use gpopt::objectives::Dataset;
use gpopt::{KernelConfig, KernelKind, Observation};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn oracle_kernel(cfg: &KernelConfig, a: &[f64], b: &[f64]) -> f64 {
    let g: f64 = a
        .iter()
        .zip(b)
        .zip(&cfg.gammas)
        .map(|((x, y), gam)| (x - y) * (x - y) / (2.0 * gam * gam))
        .sum();
    match cfg.kind {
        KernelKind::SquaredExponential => cfg.alpha * (-0.5 * g).exp(),
        KernelKind::Matern52 => {
            let r = (5.0 * g).sqrt();
            cfg.alpha * (1.0 + r + 5.0 / 3.0 * g) * (-r).exp()
        }
    }
}

pub struct DenseOracle {
    points: Vec<Vec<f64>>,
    cfg: KernelConfig,
    inv: DMatrix<f64>,
    det: f64,
    yc: DVector<f64>,
    y_mean: f64,
}

impl DenseOracle {
    /// `extra_diag` is the diagonal term on top of `cfg.noise_var` (the
    /// fitted model's jitter).
    pub fn new(obs: &[Observation], cfg: &KernelConfig, extra_diag: f64) -> Self {
        let n = obs.len();
        let points: Vec<Vec<f64>> = obs.iter().map(|o| o.theta.clone()).collect();
        let c = DMatrix::from_fn(n, n, |i, j| {
            oracle_kernel(cfg, &points[i], &points[j])
                + if i == j { cfg.noise_var + extra_diag } else { 0.0 }
        });
        let y_mean = obs.iter().map(|o| o.y).sum::<f64>() / n as f64;
        Self {
            det: c.determinant(),
            inv: c.try_inverse().expect("oracle gram matrix is invertible"),
            yc: DVector::from_iterator(n, obs.iter().map(|o| o.y - y_mean)),
            points,
            cfg: cfg.clone(),
            y_mean,
        }
    }

    fn k(&self, theta: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.points.len(),
            self.points.iter().map(|p| oracle_kernel(&self.cfg, theta, p)),
        )
    }

    pub fn mean(&self, theta: &[f64]) -> f64 {
        self.y_mean + (self.k(theta).transpose() * &self.inv * &self.yc)[0]
    }

    pub fn var(&self, theta: &[f64]) -> f64 {
        let k = self.k(theta);
        let v = oracle_kernel(&self.cfg, theta, theta) - (k.transpose() * &self.inv * &k)[0];
        v.max(0.0)
    }

    pub fn log_evidence(&self) -> f64 {
        let n = self.points.len() as f64;
        -0.5 * (self.yc.transpose() * &self.inv * &self.yc)[0]
            - 0.5 * self.det.ln()
            - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
    }
}

/// A random, well-conditioned GP problem: `n` points in the unit cube.
pub struct Problem {
    pub dims: usize,
    pub obs: Vec<Observation>,
    pub cfg: KernelConfig,
    pub queries: Vec<Vec<f64>>,
}

pub fn random_problem(seed: u64, kind: KernelKind) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = rng.random_range(1..=3);
    let n = rng.random_range(1..=8);
    let point = |rng: &mut ChaCha8Rng| (0..dims).map(|_| rng.random::<f64>()).collect::<Vec<_>>();
    let obs = (0..n)
        .map(|_| Observation::new(point(&mut rng), rng.random_range(-2.0..2.0)))
        .collect();
    let alpha = rng.random_range(0.5..2.0);
    let gammas = (0..dims).map(|_| rng.random_range(0.2..1.0)).collect();
    let noise = alpha * 10f64.powf(rng.random_range(-3.0..-1.0));
    let queries = (0..5).map(|_| point(&mut rng)).collect();
    Problem {
        dims,
        obs,
        cfg: KernelConfig::new(kind, alpha, gammas, noise),
        queries,
    }
}

pub fn entropy_of(labels: &[usize], n_classes: usize) -> f64 {
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let n = labels.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Smallest weighted child entropy over every admissible binary test, by
/// enumeration: every threshold halfway between two distinct observed
/// values of a numeric feature, every level of a categorical one.
pub fn brute_force_best_entropy(data: &Dataset, indices: &[usize], min_leaf: usize) -> Option<f64> {
    use gpopt::objectives::FeatureKind;
    let nc = data.n_classes();
    let parent: Vec<usize> = indices.iter().map(|&i| data.labels[i]).collect();
    let parent_h = entropy_of(&parent, nc);
    let mut best: Option<f64> = None;
    for f in 0..data.n_features() {
        let tests: Vec<Box<dyn Fn(f64) -> bool>> = match data.feature_kinds[f] {
            FeatureKind::Numeric => {
                let mut vals: Vec<f64> = indices.iter().map(|&i| data.rows[i][f]).collect();
                vals.sort_by(f64::total_cmp);
                vals.dedup();
                vals.windows(2)
                    .map(|w| {
                        let t = 0.5 * (w[0] + w[1]);
                        Box::new(move |x: f64| x <= t) as Box<dyn Fn(f64) -> bool>
                    })
                    .collect()
            }
            FeatureKind::Categorical => (0..data.levels[f].len())
                .map(|c| Box::new(move |x: f64| x as usize == c) as Box<dyn Fn(f64) -> bool>)
                .collect(),
        };
        for test in tests {
            let (l, r): (Vec<usize>, Vec<usize>) = indices.iter().partition(|&&i| test(data.rows[i][f]));
            if l.len() < min_leaf.max(1) || r.len() < min_leaf.max(1) {
                continue;
            }
            let ll: Vec<usize> = l.iter().map(|&i| data.labels[i]).collect();
            let rl: Vec<usize> = r.iter().map(|&i| data.labels[i]).collect();
            let n = indices.len() as f64;
            let w = (ll.len() as f64 * entropy_of(&ll, nc) + rl.len() as f64 * entropy_of(&rl, nc)) / n;
            if parent_h - w > 1e-12 && best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
    }
    best
}

/// Random table with `n` rows: two numeric features (one coarse so values
/// repeat), one categorical, and a 2–3 class label loosely tied to them.
pub fn random_table(seed: u64, n: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = ["p", "q", "r"];
    let k = rng.random_range(2..=3);
    let mut out = String::from("a,b,c,label\n");
    for _ in 0..n {
        let a: f64 = rng.random_range(0.0..10.0);
        let b = rng.random_range(0..4);
        let c = ["red", "green", "blue"][rng.random_range(0..3)];
        let label = if rng.random::<f64>() < 0.7 {
            ((a as usize) + b) % k
        } else {
            rng.random_range(0..k)
        };
        out.push_str(&format!("{a:.2},{b},{c},{}\n", classes[label]));
    }
    out
}
