use std::f64::consts::{FRAC_1_PI, PI};

use super::{Objective, ObjectiveError};

/// `sin(x) / (πx)`, continuous at zero where it equals `1/π`.
pub fn sinc_score(x: f64) -> f64 {
    if x == 0.0 {
        FRAC_1_PI
    } else {
        x.sin() / (PI * x)
    }
}

/// One-dimensional sinc toy objective. Global maximum `1/π` at the origin,
/// secondary lobes near `±7.725`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sinc;

impl Objective for Sinc {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        match theta {
            [x] => Ok(sinc_score(*x)),
            _ => Err(ObjectiveError::Invalid(format!(
                "sinc takes one coordinate, got {}",
                theta.len()
            ))),
        }
    }

    fn description(&self) -> String {
        "sin(x)/(pi x)".to_string()
    }
}
