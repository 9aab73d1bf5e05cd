use nalgebra::DMatrix;

use super::GpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    SquaredExponential,
    Matern52,
}

/// Covariance hyperparameters: amplitude, one length-scale per dimension and
/// the observation noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub alpha: f64,
    pub gammas: Vec<f64>,
    pub noise_var: f64,
}

impl KernelConfig {
    pub fn new(kind: KernelKind, alpha: f64, gammas: Vec<f64>, noise_var: f64) -> Self {
        Self {
            kind,
            alpha,
            gammas,
            noise_var,
        }
    }

    pub fn squared_exponential(alpha: f64, gammas: Vec<f64>) -> Self {
        Self::new(KernelKind::SquaredExponential, alpha, gammas, 0.0)
    }

    pub fn matern52(alpha: f64, gammas: Vec<f64>) -> Self {
        Self::new(KernelKind::Matern52, alpha, gammas, 0.0)
    }

    pub fn with_noise(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }

    pub fn dims(&self) -> usize {
        self.gammas.len()
    }

    pub fn validate(&self) -> Result<(), GpError> {
        let ok = self.alpha.is_finite()
            && self.alpha > 0.0
            && !self.gammas.is_empty()
            && self.gammas.iter().all(|g| g.is_finite() && *g > 0.0)
            && self.noise_var.is_finite()
            && self.noise_var >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(GpError::InvalidKernel(self.clone()))
        }
    }

    /// `Γ = Σ_d (a_d − b_d)² / (2 γ_d²)`, shared by both kernel families.
    fn scaled_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .zip(&self.gammas)
            .map(|((x, y), g)| {
                let diff = x - y;
                diff * diff / (2.0 * g * g)
            })
            .sum()
    }

    /// Covariance between two points.
    ///
    /// The squared-exponential form keeps both the leading `1/2` and the
    /// `2 γ²` denominator, so in one dimension it equals
    /// `α exp(−Δ² / (4γ²))`, i.e. a conventional RBF with length-scale `√2 γ`.
    pub fn value(&self, a: &[f64], b: &[f64]) -> f64 {
        let gamma_sum = self.scaled_distance(a, b);
        match self.kind {
            KernelKind::SquaredExponential => self.alpha * (-0.5 * gamma_sum).exp(),
            KernelKind::Matern52 => {
                let r = (5.0 * gamma_sum).sqrt();
                self.alpha * (1.0 + r + 5.0 / 3.0 * gamma_sum) * (-r).exp()
            }
        }
    }
}

pub fn kernel_value(a: &[f64], b: &[f64], cfg: &KernelConfig) -> f64 {
    cfg.value(a, b)
}

/// Gram matrix over `points` with `noise_var + jitter` added to the diagonal.
pub fn gram_matrix(points: &[Vec<f64>], cfg: &KernelConfig, jitter: f64) -> DMatrix<f64> {
    let n = points.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        gram[(i, i)] = cfg.value(&points[i], &points[i]) + cfg.noise_var + jitter;
        for j in 0..i {
            let v = cfg.value(&points[i], &points[j]);
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    gram
}
