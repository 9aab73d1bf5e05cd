//! Write the posterior after every iteration, the way `gpopt run` does with
//! `posterior_dir` set, plus the trace.
//!
//!     cargo run --example posterior_dump [out_dir]

use std::path::PathBuf;

use gpopt::cli::{dump_posterior, write_trace};
use gpopt::objectives::Sinc;
use gpopt::optimizer::run_campaign_observed;
use gpopt::{CampaignConfig, ParamSpace};

fn main() -> std::io::Result<()> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "posterior_out".into()).into();
    let space = ParamSpace::new(vec![-15.0], vec![15.0], 121).unwrap();
    let cfg = CampaignConfig::hybrid(0.8).with_max_iters(8).with_seed(5);

    let mut failed = None;
    let r = run_campaign_observed(&space, &Sinc, &[vec![6.0]], &cfg, &mut |view| {
        if failed.is_none() {
            failed = dump_posterior(view.grid, view.observations, view.iter, &out).err();
        }
    })
    .expect("campaign");
    if let Some(e) = failed {
        return Err(e);
    }
    write_trace(&r.trace, &out.join("trace.csv"))?;
    println!("wrote {} posterior snapshots and trace.csv to {}", r.iterations_used() + 1, out.display());
    Ok(())
}
