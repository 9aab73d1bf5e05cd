//! Variable-threshold campaign on sinc, printing the per-iteration coin:
//! ν is the improvement probability at the most uncertain point, and the
//! loop exploits when ρ < ν·τ'.

use gpopt::objectives::Sinc;
use gpopt::optimizer::run_variable_threshold;
use gpopt::{CampaignConfig, ParamSpace};

fn main() {
    let space = ParamSpace::new(vec![-15.0], vec![15.0], 301).unwrap();
    let cfg = CampaignConfig::variable_threshold(1.0).with_max_iters(20).with_seed(3);
    let r = run_variable_threshold(&space, &Sinc, &[vec![5.9], vec![6.4], vec![6.9]], &cfg).unwrap();

    for t in &r.trace {
        match (t.nu, t.rho, t.threshold_used) {
            (Some(nu), Some(rho), Some(thr)) => println!(
                "{:>2} {:<7} θ={:+6.2} y={:+.4}  ν={nu:.3} ρ={rho:.3} ν·τ'={thr:.3}",
                t.iter, t.mv.as_str(), t.theta[0], t.y
            ),
            _ => println!("{:>2} {:<7} θ={:+6.2} y={:+.4}", t.iter, t.mv.as_str(), t.theta[0], t.y),
        }
    }
    println!("best {:.5} at {:+.2}; {}", r.y_best, r.theta_best[0], r.stop_reason.as_str());
}
