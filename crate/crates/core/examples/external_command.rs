//! Drive a campaign with a shell command as the objective. `{theta0}` is
//! substituted and the last line of stdout is the score.

use gpopt::objectives::ExternalCommand;
use gpopt::optimizer::run_hybrid;
use gpopt::{CampaignConfig, ParamSpace};

fn main() {
    // a downward parabola peaking at 3, scored by awk
    let obj = ExternalCommand::new("awk 'BEGIN { x = {theta0}; print -(x - 3) * (x - 3) }'");
    let space = ParamSpace::new(vec![0.0], vec![10.0], 51).unwrap();
    let r = run_hybrid(&space, &obj, &[vec![8.0]], &CampaignConfig::hybrid(0.8).with_max_iters(12).with_seed(1)).unwrap();
    for t in &r.trace {
        println!("{:>2} {:<7} x={:.1} y={:.3}", t.iter, t.mv.as_str(), t.theta[0], t.y);
    }
    println!("best x={} ({})", r.theta_best[0], r.stop_reason.as_str());
}
