//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test -p spwn --test acceptance`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spwn::experiment::{table1_config, table2_config, TABLE1_ALPHAS, TABLE1_LAMBDAS};
use spwn::{
    arch1_theoretical_w11, bartlett_w, chisq_cdf, chisq_quantile, run_experiment, run_experiment_with,
    sample_acf, signed_power, signed_power_inverse, simulate_arch1, table1, w_hat, ArchSpec,
    Correction, ExperimentConfig, ModelSpec, PowerParams, PresetOverrides, RunOptions, SimConfig,
    Statistic, TimeSeries,
};

const SEED: u64 = 20_230_611;

fn verdict(id: u32, name: &str, failures: &[String]) -> bool {
    if failures.is_empty() {
        println!("[PASS] criterion {id}: {name}");
        return true;
    }
    println!("[FAIL] criterion {id}: {name}");
    for f in failures {
        println!("       {f}");
    }
    false
}

// Reported rejection rates; rows alpha1 = 0.05..0.95, columns lambda = 0.1, 0.5, 0.75, 1.
const TABLE1_PUBLISHED: [[f64; 4]; 10] = [
    [0.049, 0.048, 0.049, 0.051],
    [0.051, 0.053, 0.048, 0.053],
    [0.051, 0.053, 0.048, 0.051],
    [0.052, 0.049, 0.051, 0.051],
    [0.051, 0.046, 0.046, 0.045],
    [0.051, 0.052, 0.052, 0.047],
    [0.049, 0.049, 0.052, 0.043],
    [0.050, 0.048, 0.048, 0.045],
    [0.052, 0.050, 0.045, 0.042],
    [0.053, 0.049, 0.046, 0.039],
];

fn criterion_1_theoretical_w11() -> bool {
    let expected = [1.101, 1.322, 1.615, 2.107, 3.293, 12.892];
    let mut failures = Vec::new();
    for (i, &a) in TABLE1_ALPHAS.iter().enumerate() {
        let got = arch1_theoretical_w11(&ArchSpec::new(0.01, a).unwrap());
        match (expected.get(i), got) {
            (Some(&e), Some(w)) => {
                let rounded = (w * 1000.0).round() / 1000.0;
                if (rounded - e).abs() > 0.001 + 1e-12 {
                    failures.push(format!("alpha1 = {a}: got {w:.4}, expected {e}"));
                }
            }
            (None, None) => {}
            (e, g) => failures.push(format!("alpha1 = {a}: got {g:?}, expected {e:?}")),
        }
    }
    verdict(1, "theoretical w11 column", &failures)
}

fn criterion_2_table1_desk_scale() -> bool {
    let reps = 2000;
    let o = PresetOverrides {
        reps: Some(reps),
        n: Some(2000),
        seed: Some(SEED),
        ..Default::default()
    };
    let r = table1(&o, &RunOptions::default()).unwrap();
    println!("{}", r.to_csv());
    let mut failures = Vec::new();
    for (i, row) in TABLE1_PUBLISHED.iter().enumerate() {
        for (j, &published) in row.iter().enumerate() {
            let got = r.rate(i, j);
            let se = (published * (1.0 - published) / reps as f64).sqrt();
            if (got - published).abs() > 3.0 * se {
                failures.push(format!(
                    "alpha1 = {}, lambda = {}: {got:.4} vs {published} (3 SE = {:.4})",
                    TABLE1_ALPHAS[i],
                    TABLE1_LAMBDAS[j],
                    3.0 * se
                ));
            }
            if TABLE1_LAMBDAS[j] <= 0.5 && !(0.035..=0.065).contains(&got) {
                failures.push(format!(
                    "alpha1 = {}, lambda = {}: {got:.4} outside [0.035, 0.065]",
                    TABLE1_ALPHAS[i], TABLE1_LAMBDAS[j]
                ));
            }
        }
    }
    let last = r.rate(9, 3);
    if !(0.025..=0.055).contains(&last) {
        failures.push(format!("alpha1 = 0.95, lambda = 1: {last:.4} outside [0.025, 0.055]"));
    }
    verdict(2, "table1 preset reproduction (reps = 2000)", &failures)
}

fn criterion_3_table2_desk_scale() -> bool {
    let o = PresetOverrides {
        reps: Some(2000),
        n: Some(2000),
        seed: Some(SEED),
        ..Default::default()
    };
    let r = spwn::table2(&o, &RunOptions::default()).unwrap();
    println!("{}", r.to_csv());
    let mut failures = Vec::new();
    let mut check = |sigma2: f64, lambda: f64, target: f64, tol: f64| {
        let got = r.rate(r.row_index(sigma2).unwrap(), r.lambda_index(lambda).unwrap());
        if (got - target).abs() > tol {
            failures.push(format!("sigma2 = {sigma2}, lambda = {lambda}: {got:.4} vs {target} ± {tol}"));
        }
    };
    check(5.0, 0.1, 0.945, 0.02);
    check(7.0, 0.5, 0.423, 0.035);
    check(10.0, 1.0, 0.045, 0.015);
    let row = r.row_index(1.0).unwrap();
    for (j, &p) in r.rejection_rate[row].iter().enumerate() {
        if !(0.035..=0.075).contains(&p) {
            failures.push(format!(
                "sigma2 = 1, lambda = {}: {p:.4} outside [0.035, 0.075]",
                r.config.lambda_grid[j]
            ));
        }
    }
    verdict(3, "table2 preset spot checks (reps = 2000)", &failures)
}

fn criterion_4_asymptotic_variance() -> bool {
    use rayon::prelude::*;
    let spec = ArchSpec::new(0.01, 0.25).unwrap();
    let n = 2000;
    let reps = 5000u64;
    let scaled: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let xs = simulate_arch1(&spec, SimConfig::new(n, SEED, 1_000_000 + rep)).unwrap();
            (n as f64).sqrt() * sample_acf(&xs, 1).unwrap()[0]
        })
        .collect();
    let mean = scaled.iter().sum::<f64>() / reps as f64;
    let var = scaled.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let rel = (var / 1.615 - 1.0).abs();
    println!("empirical var of sqrt(n)*rho(1) = {var:.4} (relative error {rel:.4})");
    let failures = if rel <= 0.05 {
        vec![]
    } else {
        vec![format!("variance {var:.4} vs 1.615, relative error {rel:.4} > 0.05")]
    };
    verdict(4, "asymptotic variance of lag-1 autocorrelation", &failures)
}

fn criterion_5_property_suite() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();

    // Multiplicative law on [0, ∞) × ℝ for the asymmetric family.
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let x = 10f64.powf(rng.random_range(-3.0..3.0)) * if rng.random_bool(0.05) { 0.0 } else { 1.0 };
        let y = 10f64.powf(rng.random_range(-3.0..3.0)) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
        let p = PowerParams::new(rng.random_range(0.0..3.0), rng.random_range(-5.0..5.0)).unwrap();
        let lhs = p.apply(x * y).unwrap();
        let rhs = p.apply(x).unwrap() * p.apply(y).unwrap();
        let scale = lhs.abs().max(rhs.abs());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    if worst > 1e-12 {
        failures.push(format!("multiplicative law: worst relative error {worst:e}"));
    }

    // Round trip for lambda in (0, 1], |x| in [1e-6, 1e6].
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let lambda = 1.0 - rng.random_range(0.0..0.99);
        let x = 10f64.powf(rng.random_range(-6.0..=6.0)) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
        let back = signed_power_inverse(signed_power(x, lambda).unwrap(), lambda).unwrap();
        worst = worst.max((back - x).abs() / x.abs());
    }
    if worst > 1e-12 {
        failures.push(format!("round trip: worst relative error {worst:e}"));
    }

    // Bartlett white-noise baseline.
    for i in 1..=50 {
        let w = bartlett_w(&[1.0], i, i).unwrap();
        if w != 1.0 {
            failures.push(format!("bartlett white noise w[{i}][{i}] = {w}"));
        }
    }

    // Chi-square quantile/CDF round trip.
    for k in 1..=30 {
        for step in 1..100 {
            let p = step as f64 / 100.0;
            let back = chisq_cdf(chisq_quantile(p, k).unwrap(), k).unwrap();
            if (back - p).abs() > 1e-9 {
                failures.push(format!("chi-square round trip k = {k}, p = {p}: {back}"));
            }
        }
    }

    // ACF scale/shift invariance and the correction-factor identity.
    for trial in 0..200 {
        let n = rng.random_range(20..200);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let a = rng.random_range(0.1..10.0) * if trial % 2 == 0 { -1.0 } else { 1.0 };
        let b = rng.random_range(-100.0..100.0);
        let xs = TimeSeries::new(v.clone()).unwrap();
        let ys = TimeSeries::new(v.iter().map(|x| a * x + b).collect()).unwrap();
        let (ra, rb) = (sample_acf(&xs, 5).unwrap(), sample_acf(&ys, 5).unwrap());
        if ra.iter().zip(&rb).any(|(p, q)| (p - q).abs() > 1e-9) {
            failures.push(format!("acf invariance trial {trial}"));
        }
        for lag in 1..5 {
            let full = w_hat(&xs, lag, Correction::NOverNMinusI).unwrap();
            let one = w_hat(&xs, lag, Correction::One).unwrap();
            if (full - n as f64 / (n - lag) as f64 * one).abs() > 1e-12 * full {
                failures.push(format!("correction identity trial {trial}, lag {lag}"));
            }
        }
    }
    verdict(5, "property suite", &failures)
}

fn criterion_6_portmanteau_size() -> bool {
    let mut cfg = ExperimentConfig::new(vec![ModelSpec::Arch1(ArchSpec::new(1.0, 0.0).unwrap())], vec![1.0]);
    cfg.n = 2000;
    cfg.reps = 10_000;
    cfg.seed = SEED;
    cfg.statistic = Statistic::Portmanteau { max_lag: 10 };
    let r = run_experiment(&cfg).unwrap();
    let rate = r.rate(0, 0);
    println!("portmanteau rejection rate (m = 10) = {rate:.4}");
    let failures = if (0.04..=0.06).contains(&rate) {
        vec![]
    } else {
        vec![format!("rate {rate:.4} outside [0.04, 0.06]")]
    };
    verdict(6, "portmanteau size under i.i.d. N(0,1)", &failures)
}

fn criterion_7_determinism() -> bool {
    let o = PresetOverrides {
        reps: Some(2000),
        seed: Some(SEED),
        ..Default::default()
    };
    let cfg = table1_config(&o);
    let one = run_experiment_with(&cfg, &RunOptions { workers: Some(1), ..Default::default() }).unwrap();
    let eight = run_experiment_with(&cfg, &RunOptions { workers: Some(8), ..Default::default() }).unwrap();
    let mut failures = Vec::new();
    if one.to_json() != eight.to_json() {
        failures.push("JSON reports differ".into());
    }
    if one.to_csv() != eight.to_csv() {
        failures.push("CSV reports differ".into());
    }
    // Also a second run on the default pool.
    let again = run_experiment(&cfg).unwrap();
    if again.to_json() != one.to_json() {
        failures.push("repeat run differs".into());
    }
    // The table 2 preset shares the same contract; spot-check a small grid.
    let small = PresetOverrides { reps: Some(100), ..o };
    let a = run_experiment_with(&table2_config(&small), &RunOptions { workers: Some(1), ..Default::default() }).unwrap();
    let b = run_experiment_with(&table2_config(&small), &RunOptions { workers: Some(8), ..Default::default() }).unwrap();
    if a.to_json() != b.to_json() {
        failures.push("table 2 reports differ".into());
    }
    verdict(7, "determinism across worker counts", &failures)
}

fn main() {
    let criteria: [fn() -> bool; 7] = [
        criterion_1_theoretical_w11,
        criterion_2_table1_desk_scale,
        criterion_3_table2_desk_scale,
        criterion_4_asymptotic_variance,
        criterion_5_property_suite,
        criterion_6_portmanteau_size,
        criterion_7_determinism,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("\nacceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
