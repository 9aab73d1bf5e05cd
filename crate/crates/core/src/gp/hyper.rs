//! Evidence maximization for kernel hyperparameters.
//!
//! Derivative-free: coordinate descent in log space over
//! `(ln α, ln γ_1 … ln γ_D, ln σ²_noise)` with a geometrically shrinking step,
//! restarted from seeded log-uniform draws. The first local search is always
//! warm-started from the supplied configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{data_scale, log_evidence, KernelConfig};
use crate::space::{Observation, ParamSpace};

/// Search box and schedule. Amplitude and noise bounds are multiples of the
/// score variance; length-scale bounds are multiples of each axis width.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperSearch {
    pub alpha_bounds: (f64, f64),
    pub gamma_bounds: (f64, f64),
    pub noise_bounds: (f64, f64),
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
}

impl Default for HyperSearch {
    fn default() -> Self {
        Self {
            alpha_bounds: (1e-3, 1e3),
            gamma_bounds: (0.05, 1e3),
            noise_bounds: (1e-9, 1.0),
            initial_step: 1.0,
            min_step: 1e-3,
            max_evals: 2_000,
        }
    }
}

struct LogBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl LogBox {
    fn clamp(&self, p: &mut [f64]) {
        for ((v, lo), hi) in p.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Maximize the log evidence starting from `init`. Returns `init` unchanged
/// when `restarts == 0`, when fewer than two observations are available, or
/// when no search finds a strictly better configuration.
pub fn learn_hyperparams(
    space: &ParamSpace,
    observations: &[Observation],
    init: &KernelConfig,
    restarts: usize,
    seed: u64,
) -> KernelConfig {
    HyperSearch::default().learn(space, observations, init, restarts, seed)
}

impl HyperSearch {
    fn log_box(&self, space: &ParamSpace, observations: &[Observation]) -> LogBox {
        let scale = data_scale(observations);
        let mut lo = vec![(scale * self.alpha_bounds.0).ln()];
        let mut hi = vec![(scale * self.alpha_bounds.1).ln()];
        for d in 0..space.dims() {
            lo.push((space.width(d) * self.gamma_bounds.0).ln());
            hi.push((space.width(d) * self.gamma_bounds.1).ln());
        }
        lo.push((scale * self.noise_bounds.0).ln());
        hi.push((scale * self.noise_bounds.1).ln());
        LogBox { lo, hi }
    }

    fn to_params(cfg: &KernelConfig) -> Vec<f64> {
        let mut p = vec![cfg.alpha.ln()];
        p.extend(cfg.gammas.iter().map(|g| g.ln()));
        // ln 0 = -inf; clamping pulls it onto the noise floor
        p.push(cfg.noise_var.ln());
        p
    }

    fn to_config(template: &KernelConfig, p: &[f64]) -> KernelConfig {
        let d = template.dims();
        KernelConfig::new(
            template.kind,
            p[0].exp(),
            p[1..=d].iter().map(|v| v.exp()).collect(),
            p[d + 1].exp(),
        )
    }

    pub fn learn(
        &self,
        space: &ParamSpace,
        observations: &[Observation],
        init: &KernelConfig,
        restarts: usize,
        seed: u64,
    ) -> KernelConfig {
        if restarts == 0 || observations.len() < 2 || init.dims() != space.dims() {
            return init.clone();
        }
        let evidence = |cfg: &KernelConfig| {
            log_evidence(space, observations, cfg).unwrap_or(f64::NEG_INFINITY)
        };
        let bounds = self.log_box(space, observations);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut best = init.clone();
        let mut best_ev = evidence(init);
        for start in 0..restarts {
            let mut p = if start == 0 {
                Self::to_params(init)
            } else {
                bounds
                    .lo
                    .iter()
                    .zip(&bounds.hi)
                    .map(|(lo, hi)| rng.random_range(*lo..=*hi))
                    .collect()
            };
            bounds.clamp(&mut p);
            let (cfg, ev) = self.local_search(init, p, &bounds, &evidence);
            if ev > best_ev {
                best = cfg;
                best_ev = ev;
            }
        }
        best
    }

    fn local_search(
        &self,
        template: &KernelConfig,
        mut p: Vec<f64>,
        bounds: &LogBox,
        evidence: &dyn Fn(&KernelConfig) -> f64,
    ) -> (KernelConfig, f64) {
        let mut value = evidence(&Self::to_config(template, &p));
        let mut evals = 1;
        let mut step = self.initial_step;
        while step >= self.min_step && evals < self.max_evals {
            let mut improved = false;
            for c in 0..p.len() {
                for dir in [1.0, -1.0] {
                    let mut q = p.clone();
                    q[c] = (p[c] + dir * step).clamp(bounds.lo[c], bounds.hi[c]);
                    if q[c] == p[c] {
                        continue;
                    }
                    let v = evidence(&Self::to_config(template, &q));
                    evals += 1;
                    if v > value {
                        p = q;
                        value = v;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (Self::to_config(template, &p), value)
    }
}
