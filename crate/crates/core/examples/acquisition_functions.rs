//! Compare expected improvement, probability of improvement and the greedy
//! mean on the same posterior, and show where each would sample next.

use gpopt::acquisition::{max_uncertainty_point, posterior_over_grid, select_next};
use gpopt::gp::fit;
use gpopt::{Criterion, KernelConfig, Observation, ParamSpace};

fn main() {
    let space = ParamSpace::new(vec![0.0], vec![10.0], 41).unwrap();
    let obs = vec![
        Observation::new(vec![2.0], 0.4),
        Observation::new(vec![3.0], 0.7),
        Observation::new(vec![4.0], 0.5),
        Observation::new(vec![8.0], 0.2),
    ];
    let gp = fit(&space, &obs, &KernelConfig::squared_exponential(0.1, vec![0.8]).with_noise(1e-6)).unwrap();
    let grid = posterior_over_grid(&gp);
    let y_best = 0.7;

    println!("{:>6} {:>8} {:>8} {:>8} {:>8}", "θ", "mean", "std", "EI", "PI");
    for i in (0..grid.len()).step_by(4) {
        let (m, s) = (grid.means[i], grid.stds[i]);
        println!(
            "{:>6.2} {:>8.4} {:>8.4} {:>8.5} {:>8.5}",
            grid.candidates[i][0],
            m,
            s,
            Criterion::ExpectedImprovement.score(m, s, y_best),
            Criterion::ProbabilityOfImprovement.score(m, s, y_best)
        );
    }
    for c in [Criterion::ExpectedImprovement, Criterion::ProbabilityOfImprovement, Criterion::MeanValue] {
        let pick = select_next(&grid, c, y_best);
        println!("{c:?} picks θ={:.2} (score {:.5})", pick.theta[0], pick.score);
    }
    let u = max_uncertainty_point(&grid, Criterion::ExpectedImprovement);
    println!("most uncertain point θ={:.2} (std {:.4})", u.theta[0], u.score);
}
