//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach the terminal.
//!
//! Criteria 5 and 6 use the credit CSV named by `GPOPT_CREDIT_CSV` (label
//! column `GPOPT_CREDIT_LABEL`, default `A15`). Without it they fall back to
//! the bundled synthetic surrogate; criterion 5 then checks only the
//! convergence band.

mod common;

use std::f64::consts::FRAC_1_PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gpopt::acquisition::{
    expected_improvement, posterior_over_grid, probability_of_improvement, select_next,
    max_uncertainty_point,
};
use gpopt::cli::{self, read_trace, write_trace, SummaryReport};
use gpopt::gp::{fit, gram_matrix};
use gpopt::objectives::tree::entropy_best_split;
use gpopt::objectives::{
    credit_surrogate_csv, sinc_score, train_forest, Dataset, Forest, ForestConfig,
    ForestObjective, Sinc,
};
use gpopt::optimizer::{run_hybrid, run_original, run_variable_threshold};
use gpopt::{
    CampaignConfig, CampaignResult, Criterion, KernelConfig, KernelKind, Move, Observation,
    ParamSpace, StopReason,
};
use nalgebra::Cholesky;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use common::{brute_force_best_entropy, random_problem, random_table, DenseOracle};

type Check = Result<String, String>;
type Entry = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// 1. GP oracle equivalence

fn gp_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let kind = if seed % 2 == 0 { KernelKind::SquaredExponential } else { KernelKind::Matern52 };
        let p = random_problem(seed, kind);
        let space = ParamSpace::new(vec![0.0; p.dims], vec![1.0; p.dims], 5).unwrap();
        let gp = fit(&space, &p.obs, &p.cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let oracle = DenseOracle::new(&p.obs, &p.cfg, gp.jitter());
        let probes = p.queries.iter().chain(p.obs.iter().map(|o| &o.theta));
        for q in probes {
            worst = worst
                .max((gp.predict_mean(q) - oracle.mean(q)).abs())
                .max((gp.predict_var(q) - oracle.var(q)).abs());
        }
        worst = worst.max((gp.log_evidence() - oracle.log_evidence()).abs());
    }
    ensure(worst <= 1e-8, || format!("max |lib − oracle| = {worst:e} > 1e-8"))?;
    Ok(format!("50 problems, max |lib − oracle| = {worst:.2e}"))
}

// ---------------------------------------------------------------------------
// 2. Acquisition correctness

fn acquisition_mc() -> Check {
    const N: usize = 10_000_000;
    let ei0 = expected_improvement(0.0, 1.0, 0.0);
    ensure((ei0 - 0.398942).abs() <= 1e-6, || format!("EI(u=0, σ=1) = {ei0}"))?;
    let pi0 = probability_of_improvement(0.7, 0.3, 0.7);
    ensure((pi0 - 0.5).abs() <= 1e-10, || format!("PI(u=0) = {pi0}"))?;

    let rows: Vec<Result<(f64, f64), String>> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let mean = rng.random_range(-2.0..2.0);
            let std = rng.random_range(0.1..2.0);
            let y_best = rng.random_range(-2.0..2.0);
            let (mut s, mut s2, mut hits) = (0.0, 0.0, 0usize);
            for _ in 0..N {
                let z: f64 = rng.sample(StandardNormal);
                let f = mean + std * z;
                let imp = (f - y_best).max(0.0);
                s += imp;
                s2 += imp * imp;
                hits += usize::from(f > y_best);
            }
            let n = N as f64;
            let ei_hat = s / n;
            let ei_se = ((s2 / n - ei_hat * ei_hat) / n).sqrt();
            let pi_hat = hits as f64 / n;
            let pi_se = (pi_hat * (1.0 - pi_hat) / n).sqrt();
            let ei_z = (expected_improvement(mean, std, y_best) - ei_hat).abs() / ei_se;
            let pi_z = (probability_of_improvement(mean, std, y_best) - pi_hat).abs() / pi_se;
            if ei_z <= 3.0 && pi_z <= 3.0 {
                Ok((ei_z, pi_z))
            } else {
                Err(format!(
                    "triple ({mean:.3}, {std:.3}, {y_best:.3}): EI off by {ei_z:.2} SE, PI off by {pi_z:.2} SE"
                ))
            }
        })
        .collect();
    let mut max_z: f64 = 0.0;
    for r in rows {
        let (a, b) = r?;
        max_z = max_z.max(a).max(b);
    }
    Ok(format!("EI(0,1)={ei0:.7}, PI(u=0)={pi0}, 20 triples × 1e7 samples, max deviation {max_z:.2} SE"))
}

// ---------------------------------------------------------------------------
// 3. Early stop of Original vs. exploration of Hybrid on sinc

fn sinc_space() -> ParamSpace {
    ParamSpace::new(vec![-15.0], vec![15.0], 301).unwrap()
}

/// Rising flank of the positive side lobe that peaks near x = 7.725.
fn flank_init() -> Vec<Vec<f64>> {
    vec![vec![5.9], vec![6.4], vec![6.9]]
}

fn sinc_comparison() -> Check {
    let space = sinc_space();
    let init = flank_init();
    let runs: Vec<(CampaignResult, CampaignResult)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let o = run_original(&space, &Sinc, &init, &CampaignConfig::original().with_max_iters(20).with_seed(seed)).unwrap();
            let h = run_hybrid(&space, &Sinc, &init, &CampaignConfig::hybrid(0.8).with_max_iters(20).with_seed(seed)).unwrap();
            (o, h)
        })
        .collect();
    let stuck = runs
        .iter()
        .filter(|(o, _)| {
            o.stop_reason == StopReason::Converged && o.iterations_used() <= 8 && o.y_best <= FRAC_1_PI - 0.02
        })
        .count();
    let found = |r: &CampaignResult| r.y_best >= FRAC_1_PI - 1e-3;
    let o_found = runs.iter().filter(|(o, _)| found(o)).count();
    let h_found = runs.iter().filter(|(_, h)| found(h)).count();
    let detail = format!(
        "Original stopped early below the peak in {stuck}/100; global peak found by Original {o_found}/100, Hybrid {h_found}/100"
    );
    ensure(stuck >= 95 && h_found >= 80 && h_found > o_found, || detail.clone())?;
    Ok(detail)
}

// ---------------------------------------------------------------------------
// 4. Hybrid branch statistics

fn same_evaluations(a: &CampaignResult, b: &CampaignResult) -> bool {
    a.trace.len() == b.trace.len()
        && a.stop_reason == b.stop_reason
        && a.trace.iter().zip(&b.trace).all(|(x, y)| {
            x.iter == y.iter
                && x.mv == y.mv
                && x.theta == y.theta
                && x.y.to_bits() == y.y.to_bits()
                && x.y_best.to_bits() == y.y_best.to_bits()
                && x.acq_value.map(f64::to_bits) == y.acq_value.map(f64::to_bits)
                && x.max_std.map(f64::to_bits) == y.max_std.map(f64::to_bits)
        })
}

fn hybrid_branches() -> Check {
    let space = sinc_space();
    let init = flank_init();
    let mut moves = Vec::new();
    let mut seed = 0u64;
    while moves.len() < 1000 {
        let r = run_hybrid(&space, &Sinc, &init, &CampaignConfig::hybrid(0.8).with_max_iters(20).with_seed(seed)).unwrap();
        moves.extend(r.trace.iter().filter(|t| t.mv != Move::Init).map(|t| t.mv));
        seed += 1;
    }
    moves.truncate(1000);
    let explore = moves.iter().filter(|&&m| m == Move::Explore).count() as f64 / 1000.0;
    ensure((0.15..=0.25).contains(&explore), || format!("Explore fraction {explore}"))?;

    for s in 0..10u64 {
        let o = run_original(&space, &Sinc, &init, &CampaignConfig::original().with_seed(s)).unwrap();
        let h = run_hybrid(&space, &Sinc, &init, &CampaignConfig::hybrid(1.0).with_seed(s)).unwrap();
        ensure(same_evaluations(&o, &h), || format!("τ=1 diverges from Original at seed {s}"))?;
    }
    Ok(format!(
        "Explore fraction {explore:.3} over 1000 moves ({seed} campaigns); τ=1 matches Original on 10 seeds"
    ))
}

// ---------------------------------------------------------------------------
// 5–6. Forest experiments

struct CreditData {
    data: Dataset,
    real: bool,
}

fn credit_data() -> Result<CreditData, String> {
    let label = std::env::var("GPOPT_CREDIT_LABEL").unwrap_or_else(|_| "A15".into());
    match std::env::var("GPOPT_CREDIT_CSV") {
        Ok(path) if Path::new(&path).exists() => {
            let data = gpopt::objectives::load_csv_dataset(&path, &label, None).map_err(|e| e.to_string())?;
            ensure(data.len() == 690, || format!("{path}: expected 690 rows, got {}", data.len()))?;
            Ok(CreditData { data, real: true })
        }
        _ => Ok(CreditData {
            data: Dataset::from_csv_str(&credit_surrogate_csv(0), "A15", None).map_err(|e| e.to_string())?,
            real: false,
        }),
    }
}

fn tree_space() -> ParamSpace {
    ParamSpace::new(vec![1.0], vec![100.0], 100).unwrap()
}

/// Paired Original / variable-threshold campaigns, one per data seed.
fn forest_runs(data: &Dataset) -> Vec<(CampaignResult, CampaignResult)> {
    let space = tree_space();
    let init = vec![vec![10.0]];
    (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let obj = ForestObjective::new(data, ForestConfig::default(), seed).unwrap();
            let o = run_original(&space, &obj, &init, &CampaignConfig::original().with_max_iters(20).with_seed(seed)).unwrap();
            let v = run_variable_threshold(&space, &obj, &init, &CampaignConfig::variable_threshold(1.0).with_max_iters(20).with_seed(seed)).unwrap();
            (o, v)
        })
        .collect()
}

fn forest_band() -> Check {
    let credit = credit_data()?;
    let runs = forest_runs(&credit.data);
    let iters: Vec<String> = runs
        .iter()
        .map(|(_, v)| format!("{}{}", v.iterations_used(), if v.stop_reason == StopReason::Converged { "" } else { "*" }))
        .collect();
    let in_band = runs
        .iter()
        .filter(|(_, v)| v.stop_reason == StopReason::Converged && (7..=12).contains(&v.iterations_used()))
        .count();
    let mut detail = format!(
        "{} data; converged in 7–12 iterations for {in_band}/10 seeds (iterations: {}; * = not converged)",
        if credit.real { "credit" } else { "surrogate" },
        iters.join(" ")
    );
    let mut ok = in_band >= 7;
    if credit.real {
        let accs: Vec<f64> = runs.iter().map(|(_, v)| v.y_best).collect();
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        let min = accs.iter().copied().fold(f64::INFINITY, f64::min);
        detail.push_str(&format!("; mean accuracy {mean:.4}, min {min:.4}"));
        ok &= (0.81..=0.90).contains(&mean) && min >= 0.78;
    }
    ensure(ok, || detail.clone())?;
    Ok(detail)
}

fn tree_parsimony() -> Check {
    let credit = credit_data()?;
    let runs = forest_runs(&credit.data);
    let smaller = runs.iter().filter(|(o, v)| v.theta_best[0] < o.theta_best[0]).count();
    let mean = |f: &dyn Fn(&(CampaignResult, CampaignResult)) -> f64| runs.iter().map(f).sum::<f64>() / runs.len() as f64;
    let loss = mean(&|(o, _)| o.y_best) - mean(&|(_, v)| v.y_best);
    let counts: Vec<String> = runs
        .iter()
        .map(|(o, v)| format!("{}/{}", v.theta_best[0], o.theta_best[0]))
        .collect();
    let detail = format!(
        "{} data; VT tree count smaller in {smaller}/10 (VT/Original: {}); mean accuracy loss {loss:.4}",
        if credit.real { "credit" } else { "surrogate" },
        counts.join(" ")
    );
    ensure(smaller >= 7 && loss <= 0.02, || detail.clone())?;
    Ok(detail)
}

// ---------------------------------------------------------------------------
// 7. Invariant suites

fn random_point(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

fn gp_invariants(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checks = 0;
    for kind in [KernelKind::SquaredExponential, KernelKind::Matern52] {
        for set in 0..100 {
            let d = rng.random_range(1..=3);
            let cfg = KernelConfig::new(kind, rng.random_range(0.1..5.0), (0..d).map(|_| rng.random_range(0.05..2.0)).collect(), 0.0);
            let a = random_point(rng, d, -3.0, 3.0);
            let b = random_point(rng, d, -3.0, 3.0);
            ensure(cfg.value(&a, &b) == cfg.value(&b, &a), || format!("{kind:?}: asymmetric kernel"))?;
            let n = rng.random_range(1..=25);
            let pts: Vec<Vec<f64>> = (0..n).map(|_| random_point(rng, d, 0.0, 1.0)).collect();
            let unit = KernelConfig { alpha: 1.0, ..cfg.clone() };
            ensure(Cholesky::new(gram_matrix(&pts, &unit, 1e-8)).is_some(), || {
                format!("{kind:?}: point set {set} not PSD with jitter 1e-8")
            })?;
            checks += 2;
        }
    }

    for seed in 0..100u64 {
        let kind = if seed % 2 == 0 { KernelKind::SquaredExponential } else { KernelKind::Matern52 };
        let mut p = random_problem(500 + seed, kind);
        p.cfg.noise_var = 0.0;
        // spread training points a few length-scales apart so the
        // noise-free system stays well conditioned
        let gmax = p.cfg.gammas.iter().copied().fold(0.0, f64::max);
        let spacing = 3.0 * gmax;
        for (i, o) in p.obs.iter_mut().enumerate() {
            o.theta[0] = i as f64 * spacing;
        }
        let span = spacing * p.obs.len() as f64;
        let space = ParamSpace::new(vec![0.0; p.dims], vec![span + 25.0 * gmax; p.dims], 3).unwrap();
        let gp = fit(&space, &p.obs, &p.cfg).map_err(|e| e.to_string())?;
        for o in &p.obs {
            let (m, v) = gp.predict(&o.theta);
            ensure((m - o.y).abs() <= 1e-8 && v <= 1e-8, || {
                format!("problem {seed}: interpolation off (|Δmean| {:e}, var {v:e})", (m - o.y).abs())
            })?;
        }
        let far = vec![span + 20.0 * gmax + 1.0; p.dims];
        let (m, v) = gp.predict(&far);
        ensure((m - gp.y_mean()).abs() <= 1e-6 && (v - p.cfg.alpha).abs() <= 1e-6, || {
            format!("problem {seed}: no prior reversion far from data")
        })?;
        let again = fit(&space, &p.obs, &p.cfg).map_err(|e| e.to_string())?;
        ensure(gp.summary() == again.summary(), || format!("problem {seed}: refit differs"))?;
        checks += 3;
    }
    Ok(checks)
}

fn acquisition_invariants(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checks = 0;
    for i in 0..100 {
        let std = 0.01 + 0.03 * i as f64;
        let (mut prev_ei, mut prev_pi) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for j in 0..100 {
            let mean = -3.0 + 0.06 * j as f64;
            let ei = expected_improvement(mean, std, 0.0);
            let pi = probability_of_improvement(mean, std, 0.0);
            ensure(ei >= 0.0 && ei >= prev_ei, || format!("EI not monotone at ({mean}, {std})"))?;
            ensure((0.0..=1.0).contains(&pi) && pi >= prev_pi, || format!("PI not monotone at ({mean}, {std})"))?;
            prev_ei = ei;
            prev_pi = pi;
            checks += 2;
        }
    }
    let space = ParamSpace::new(vec![0.0, 0.0], vec![1.0, 1.0], 15).unwrap();
    for _ in 0..20 {
        let obs: Vec<Observation> = (0..5)
            .map(|_| Observation::new(random_point(rng, 2, 0.0, 1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let gp = fit(&space, &obs, &KernelConfig::squared_exponential(1.0, vec![0.2, 0.2]).with_noise(1e-6)).unwrap();
        let grid = posterior_over_grid(&gp);
        let a = select_next(&grid, Criterion::ExpectedImprovement, 0.5);
        let b = select_next(&grid, Criterion::ExpectedImprovement, 0.5);
        ensure(a == b, || "select_next not deterministic".into())?;
        ensure(max_uncertainty_point(&grid, Criterion::ExpectedImprovement) == max_uncertainty_point(&grid, Criterion::ExpectedImprovement), || "max_uncertainty_point not deterministic".into())?;
        let mv = select_next(&grid, Criterion::MeanValue, 0.5);
        let argmax = grid.means.iter().enumerate().fold(0, |best, (i, m)| if *m > grid.means[best] { i } else { best });
        ensure(mv.index == argmax, || "MeanValue argmax differs from argmax of means".into())?;
        checks += 3;
    }
    Ok(checks)
}

fn optimizer_invariants() -> Result<usize, String> {
    let space = ParamSpace::new(vec![-15.0], vec![15.0], 61).unwrap();
    let init = vec![vec![5.5], vec![7.5]];
    let mut checks = 0;
    for seed in 0..8u64 {
        for cfg in [
            CampaignConfig::original(),
            CampaignConfig::hybrid(0.8),
            CampaignConfig::variable_threshold(1.0),
        ] {
            let cfg = cfg.with_max_iters(12).with_seed(seed);
            let a = run_campaign_checked(&space, &init, &cfg)?;
            let b = run_campaign_checked(&space, &init, &cfg)?;
            ensure(a == b, || format!("seed {seed} {:?}: reruns differ", cfg.algorithm))?;
            ensure(a.trace.len() <= cfg.max_iters + init.len(), || "budget exceeded".into())?;
            let mut seen: Vec<&Vec<f64>> = Vec::new();
            let mut best = f64::NEG_INFINITY;
            for r in &a.trace {
                ensure(r.y_best >= best, || "y_best decreased".into())?;
                best = r.y_best;
                ensure(!seen.contains(&&r.theta), || format!("duplicate theta {:?}", r.theta))?;
                seen.push(&r.theta);
                if let (Some(rho), Some(t)) = (r.rho, r.threshold_used) {
                    let consistent = match r.mv {
                        Move::Explore => rho >= t,
                        Move::Exploit => rho < t,
                        Move::Init => false,
                    };
                    ensure(consistent && rho > 0.0 && rho < 1.0, || format!("branch/ρ mismatch at iter {}", r.iter))?;
                }
            }
            let max_y = a.trace.iter().map(|r| r.y).fold(f64::NEG_INFINITY, f64::max);
            let first = a.trace.iter().find(|r| r.y == max_y).unwrap();
            ensure(a.y_best == max_y && a.theta_best == first.theta, || "theta_best is not the first maximizer".into())?;
            checks += 5;
        }
    }
    Ok(checks)
}

fn run_campaign_checked(space: &ParamSpace, init: &[Vec<f64>], cfg: &CampaignConfig) -> Result<CampaignResult, String> {
    gpopt::optimizer::run_campaign(space, &Sinc, init, cfg).map_err(|e| e.to_string())
}

fn objective_invariants(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checks = 0;
    for _ in 0..1000 {
        let x = rng.random_range(-15.0..15.0);
        ensure((sinc_score(x) - sinc_score(-x)).abs() <= 1e-12, || format!("sinc not even at {x}"))?;
    }
    let (mut bx, mut by) = (f64::NAN, f64::NEG_INFINITY);
    for i in 0..=100_000 {
        let x = -15.0 + 30.0 * i as f64 / 100_000.0;
        if sinc_score(x) > by {
            (bx, by) = (x, sinc_score(x));
        }
    }
    ensure(bx == 0.0 && by == FRAC_1_PI, || format!("sinc scan max at {bx}"))?;
    checks += 2;

    for seed in 0..100u64 {
        let n = 4 + (seed as usize % 27);
        let data = Dataset::from_csv_str(&random_table(seed, n), "label", None).map_err(|e| e.to_string())?;
        let all: Vec<usize> = (0..data.len()).collect();
        let min_leaf = 1 + seed as usize % 3;
        let lib = entropy_best_split(&data, &all, min_leaf).ok();
        let oracle = brute_force_best_entropy(&data, &all, min_leaf);
        match (&lib, oracle) {
            (Some(s), Some(w)) => {
                ensure((s.weighted_entropy - w).abs() <= 1e-12, || format!("table {seed}: split {} vs oracle {w}", s.weighted_entropy))?;
                ensure(s.weighted_entropy <= s.parent_entropy, || format!("table {seed}: negative gain"))?;
            }
            (None, None) => {}
            _ => return Err(format!("table {seed}: lib {lib:?} vs oracle {oracle:?}")),
        }
        checks += 1;
    }

    let data = Dataset::from_csv_str(&credit_surrogate_csv(3), "A15", None).map_err(|e| e.to_string())?;
    let forest = train_forest(&data, &ForestConfig { n_trees: 7, ..ForestConfig::default() }).map_err(|e| e.to_string())?;
    let mut reversed = forest.trees().to_vec();
    reversed.reverse();
    let shuffled = Forest::from_trees(reversed, data.n_classes());
    ensure(data.rows.iter().all(|r| forest.predict(r) == shuffled.predict(r)), || "tree order changes votes".into())?;
    let reloaded = Dataset::from_csv_str(&data.to_csv_string(), "A15", Some(&data.schema())).map_err(|e| e.to_string())?;
    ensure(reloaded == data, || "dataset reload not idempotent".into())?;
    checks += 2;
    Ok(checks)
}

fn cli_invariants() -> Result<usize, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        r#"seeds = [4, 9, 17]
[objective.sinc]
[space]
lower = [-15.0]
upper = [15.0]
grid_points_per_dim = 121
[algorithm]
kind = "hybrid"
max_iters = 8
init = [[5.9], [6.4], [6.9]]
[output]
trace_path = "out/trace_{seed}.csv"
posterior_dir = "out/post"
summary_path = "out/summary.csv"
"#,
    )
    .map_err(|e| e.to_string())?;
    let snapshot = |root: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<(String, Vec<u8>)> = walk(root)
            .into_iter()
            .map(|p| (p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let first = cli::run_campaigns(&config, 3).map_err(|e| e.to_string())?;
    let files_a = snapshot(&dir.path().join("out"));
    cli::run_campaigns(&config, 1).map_err(|e| e.to_string())?;
    let files_b = snapshot(&dir.path().join("out"));
    ensure(files_a == files_b && !files_a.is_empty(), || "reruns are not byte-identical".into())?;

    // trace round-trip through the library reader and through a plain csv parse
    for (seed, result) in &first.results {
        let path = dir.path().join(format!("out/trace_{seed}.csv"));
        ensure(read_trace(&path).map_err(|e| e.to_string())? == result.trace, || format!("trace {seed} does not round-trip"))?;
        let mut rdr = csv::Reader::from_path(&path).map_err(|e| e.to_string())?;
        let ys: Vec<f64> = rdr.records().map(|r| r.unwrap()[3].parse::<f64>().unwrap()).collect();
        let want: Vec<f64> = result.trace.iter().map(|r| r.y).collect();
        ensure(ys == want, || format!("trace {seed}: y column differs"))?;
    }
    let tmp = dir.path().join("single.csv");
    write_trace(&first.results[0].1.trace, &tmp).map_err(|e| e.to_string())?;

    let summary = independent_summary(&first.summary);
    ensure(summary <= 1e-12, || format!("summary aggregates off by {summary:e}"))?;

    // error paths: nonzero exit and one prefixed line
    let bin = env!("CARGO_BIN_EXE_gpopt");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seeds = []\n").unwrap();
    let cases = [
        (vec!["validate".to_string(), "--config".into(), bad.display().to_string()], 2),
        (vec!["run".to_string(), "--config".into(), dir.path().join("missing.toml").display().to_string()], 2),
    ];
    for (args, code) in cases {
        let out = Command::new(bin).args(&args).output().map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(code), || format!("{args:?}: exit {:?}", out.status.code()))?;
        ensure(stderr.lines().count() == 1 && stderr.starts_with("error[E_"), || format!("{args:?}: stderr {stderr:?}"))?;
    }
    Ok(6)
}

fn walk(root: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    if let Ok(entries) = std::fs::read_dir(root) {
        for e in entries.flatten() {
            let p = e.path();
            if p.is_dir() {
                out.extend(walk(&p));
            } else {
                out.push(p);
            }
        }
    }
    out
}

/// Largest gap between the report's aggregates and a recomputation.
fn independent_summary(rep: &SummaryReport) -> f64 {
    let ys: Vec<f64> = rep.rows.iter().map(|r| r.y_best).collect();
    let n = ys.len() as f64;
    let mean = ys.iter().sum::<f64>() / n;
    let var = ys.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (n - 1.0);
    let mut worst: f64 = 0.0;
    worst = worst.max((rep.y_best.average - mean).abs());
    worst = worst.max((rep.y_best.std_dev - var.sqrt()).abs());
    worst = worst.max((rep.y_best.minimum - ys.iter().copied().fold(f64::INFINITY, f64::min)).abs());
    worst.max((rep.y_best.maximum - ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)).abs())
}

fn invariant_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gp = gp_invariants(&mut rng)?;
    let acq = acquisition_invariants(&mut rng)?;
    let opt = optimizer_invariants()?;
    let obj = objective_invariants(&mut rng)?;
    let cli = cli_invariants()?;
    Ok(format!(
        "checks passed: gp {gp}, acquisition {acq}, optimizer {opt}, objectives {obj}, cli {cli}"
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [Entry; 7] = [
        ("GP oracle equivalence", Duration::from_secs(5), gp_oracle),
        ("acquisition correctness", Duration::from_secs(30), acquisition_mc),
        ("sinc early stop vs. exploration", Duration::from_secs(120), sinc_comparison),
        ("hybrid branch statistics", Duration::from_secs(60), hybrid_branches),
        ("forest experiment band", Duration::from_secs(180), forest_band),
        ("tree-count parsimony", Duration::from_secs(180), tree_parsimony),
        ("invariant suites", Duration::from_secs(120), invariant_suites),
    ];
    let filter: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; took longer than the {}s budget", budget.as_secs())),
            Err(d) => (false, d),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {} ({name}): {} [{:.1}s] {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
