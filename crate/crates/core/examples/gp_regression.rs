//! Fit a GP to a handful of noisy samples, learn its hyperparameters by
//! maximizing the evidence, and print the posterior on a coarse grid.

use gpopt::gp::{fit, learn_hyperparams};
use gpopt::{KernelConfig, KernelKind, Observation, ParamSpace};

fn main() {
    let space = ParamSpace::new(vec![0.0], vec![6.0], 25).unwrap();
    let obs: Vec<Observation> = [0.3, 1.1, 2.0, 2.4, 3.9, 4.6, 5.5]
        .iter()
        .map(|&x: &f64| Observation::new(vec![x], x.sin() + 0.1 * x))
        .collect();

    for kind in [KernelKind::SquaredExponential, KernelKind::Matern52] {
        let start = KernelConfig::from_data(kind, &space, &obs);
        let learned = learn_hyperparams(&space, &obs, &start, 5, 0);
        let gp = fit(&space, &obs, &learned).unwrap();
        println!(
            "{kind:?}: α={:.4} γ={:.4} noise={:.2e} log evidence {:.4} (start {:.4})",
            learned.alpha,
            learned.gammas[0],
            learned.noise_var,
            gp.log_evidence(),
            fit(&space, &obs, &start).unwrap().log_evidence()
        );
        for theta in space.candidates().iter().step_by(4) {
            let (m, v) = gp.predict(theta);
            println!("  x={:.2}  mean={:+.4}  std={:.4}  truth={:+.4}", theta[0], m, v.sqrt(), theta[0].sin() + 0.1 * theta[0]);
        }
    }
}
