//! A synthetic stand-in for the 690-row credit-approval table.
//!
//! Same layout as the public copy: fourteen attributes `A1`…`A14` (six
//! numeric, eight categorical, with `?` for a scattering of missing cells)
//! and a `0`/`1` class in `A15`. The class comes from a noisy latent score
//! dominated by the boolean `A8`, so a single split gets most of the way and
//! extra trees buy a few points of accuracy.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const SURROGATE_ROWS: usize = 690;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn maybe_missing(rng: &mut ChaCha8Rng, cell: String) -> String {
    if rng.random::<f64>() < 0.01 {
        "?".to_string()
    } else {
        cell
    }
}

pub fn credit_surrogate_csv(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("A1,A2,A3,A4,A5,A6,A7,A8,A9,A10,A11,A12,A13,A14,A15\n");
    for _ in 0..SURROGATE_ROWS {
        let a1 = u8::from(rng.random::<f64>() < 0.68);
        let a2 = (31.0 + 11.0 * normal(&mut rng)).clamp(13.0, 80.0);
        let a3 = (4.8 * rng.random::<f64>().powi(2) * 6.0).min(28.0);
        let a4 = 1 + usize::from(rng.random::<f64>() < 0.24) + usize::from(rng.random::<f64>() < 0.01);
        let a5 = rng.random_range(1..=14);
        let a6 = rng.random_range(1..=9);
        let a7 = (2.2 * rng.random::<f64>().powi(3) * 5.0).min(28.5);
        let prior_ok = rng.random::<f64>() < 0.52;
        let employed = rng.random::<f64>() < if prior_ok { 0.66 } else { 0.22 };
        let a10 = if employed {
            (rng.random::<f64>().powi(2) * 20.0).floor()
        } else {
            0.0
        };
        let a11 = u8::from(rng.random::<f64>() < 0.46);
        let a12 = rng.random_range(1..=3);
        let a13 = (180.0 + 170.0 * normal(&mut rng)).clamp(0.0, 2000.0).round();
        let a14 = ((5.0 + 2.4 * normal(&mut rng)).exp() - 1.0).clamp(0.0, 100_000.0).round();

        let latent = 3.1 * f64::from(u8::from(prior_ok)) - 1.55
            + 0.7 * f64::from(u8::from(employed))
            + 0.09 * a10
            + 0.16 * (1.0 + a14).ln()
            - 1.45
            + 0.06 * a3
            - 0.25 * f64::from(u8::from(a5 == 3 || a5 == 9))
            + 0.35 * f64::from(u8::from(a12 == 2))
            + 0.004 * (a2 - 31.0)
            + 0.8 * normal(&mut rng);
        let label = u8::from(latent > 0.0);

        let cells = [
            maybe_missing(&mut rng, a1.to_string()),
            maybe_missing(&mut rng, format!("{a2:.2}")),
            format!("{a3:.3}"),
            maybe_missing(&mut rng, a4.to_string()),
            maybe_missing(&mut rng, format!("c{a5}")),
            maybe_missing(&mut rng, format!("v{a6}")),
            format!("{a7:.3}"),
            if prior_ok { "t" } else { "f" }.to_string(),
            if employed { "t" } else { "f" }.to_string(),
            format!("{a10}"),
            if a11 == 1 { "t" } else { "f" }.to_string(),
            format!("g{a12}"),
            maybe_missing(&mut rng, format!("{a13}")),
            format!("{a14}"),
            label.to_string(),
        ];
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
