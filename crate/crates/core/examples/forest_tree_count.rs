//! Tune the number of trees in a random forest by holdout accuracy, with
//! the original and the variable-threshold loops side by side.
//!
//!     cargo run --release --example forest_tree_count [credit.csv [label]]
//!
//! Without a file the bundled synthetic 690-row credit table is used.

use gpopt::objectives::{credit_surrogate_csv, load_csv_dataset, Dataset, ForestConfig, ForestObjective};
use gpopt::optimizer::{run_original, run_variable_threshold};
use gpopt::{CampaignConfig, ParamSpace};

fn main() {
    let mut args = std::env::args().skip(1);
    let data = match args.next() {
        Some(path) => {
            let label = args.next().unwrap_or_else(|| "A15".into());
            load_csv_dataset(&path, &label, None).unwrap_or_else(|e| panic!("{path}: {e}"))
        }
        None => Dataset::from_csv_str(&credit_surrogate_csv(0), "A15", None).unwrap(),
    };
    println!("{} rows, {} features, {} classes", data.len(), data.n_features(), data.n_classes());

    let space = ParamSpace::new(vec![1.0], vec![100.0], 100).unwrap();
    let init = vec![vec![10.0]];
    println!("seed  original(trees, acc, iters)  variable-threshold(trees, acc, iters)");
    for seed in 0..5u64 {
        let obj = ForestObjective::new(&data, ForestConfig::default(), seed).unwrap();
        let o = run_original(&space, &obj, &init, &CampaignConfig::original().with_max_iters(20).with_seed(seed)).unwrap();
        let v = run_variable_threshold(&space, &obj, &init, &CampaignConfig::variable_threshold(1.0).with_max_iters(20).with_seed(seed)).unwrap();
        println!(
            "{seed:>4}  {:>5} {:.4} {:>2} {:<13}  {:>5} {:.4} {:>2} {}",
            o.theta_best[0], o.y_best, o.iterations_used(), o.stop_reason.as_str(),
            v.theta_best[0], v.y_best, v.iterations_used(), v.stop_reason.as_str()
        );
    }
}
