//! Monte Carlo rejection-rate experiments.
//!
//! Each replication simulates one path, applies every signed power in the
//! grid, and records whether the lag-1 autocorrelation falls outside its
//! robust band (or, optionally, whether the portmanteau test rejects).
//! Replication `r` of row `g` draws from stream
//! [`replication_stream(g, r)`](crate::distributions::replication_stream) of
//! the experiment seed, and rejections are accumulated as integer counts, so
//! the report does not depend on the number of worker threads.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acf::{acf_slice, two_sided_z, w_hat_slice, Correction};
use crate::distributions::{chisq_sf, replication_stream, RngStream};
use crate::error::{Error, Result};
use crate::simulate::{arch1_theoretical_w11, ArchSpec, MarSpec, ModelSpec, SimConfig, DEFAULT_BURN_IN};
use crate::transform::signed_power_into;

pub const DEFAULT_SEED: u64 = 20_230_611;
pub const DEFAULT_REPS: usize = 10_000;
pub const DEFAULT_N: usize = 2000;

pub const TABLE1_ALPHAS: [f64; 10] = [0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95];
pub const TABLE1_LAMBDAS: [f64; 4] = [0.1, 0.5, 0.75, 1.0];
pub const TABLE1_OMEGA: f64 = 0.01;
pub const TABLE2_SIGMAS: [f64; 10] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
pub const TABLE2_LAMBDAS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Which test decides a rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    /// `|ρ̂(1)| > z·sqrt(ŵ₁₁/n)`.
    #[default]
    Lag1,
    /// Portmanteau p-value below `1 - level`.
    Portmanteau { max_lag: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub models: Vec<ModelSpec>,
    pub lambda_grid: Vec<f64>,
    pub n: usize,
    pub reps: usize,
    pub level: f64,
    pub seed: u64,
    pub correction: Correction,
    pub burn_in: usize,
    pub statistic: Statistic,
}

impl ExperimentConfig {
    pub fn new(models: Vec<ModelSpec>, lambda_grid: Vec<f64>) -> Self {
        ExperimentConfig {
            models,
            lambda_grid,
            n: DEFAULT_N,
            reps: DEFAULT_REPS,
            level: 0.95,
            seed: DEFAULT_SEED,
            correction: Correction::default(),
            burn_in: DEFAULT_BURN_IN,
            statistic: Statistic::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.models.is_empty() {
            return bad("model grid is empty".into());
        }
        if self.lambda_grid.is_empty() {
            return bad("lambda grid is empty".into());
        }
        if let Some(l) = self.lambda_grid.iter().find(|&&l| !(l > 0.0 && l <= 1.0)) {
            return bad(format!("lambda values must lie in (0, 1], got {l}"));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.reps > u32::MAX as usize || self.models.len() > u32::MAX as usize {
            return bad("grid too large for stream numbering".into());
        }
        let min_n = match self.statistic {
            Statistic::Lag1 => 2,
            Statistic::Portmanteau { max_lag } => {
                if max_lag == 0 {
                    return bad("portmanteau max_lag must be at least 1".into());
                }
                max_lag + 1
            }
        };
        if self.n < min_n {
            return bad(format!("n must be at least {min_n}, got {}", self.n));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level must lie in (0, 1), got {}", self.level));
        }
        for m in &self.models {
            m.validate()?;
        }
        Ok(())
    }
}

/// Rejection counts and rates over the (model row × λ) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub preset: Option<String>,
    pub config: ExperimentConfig,
    /// Name of the parameter that varies down the rows.
    pub row_label: String,
    pub row_values: Vec<f64>,
    pub rejections: Vec<Vec<u64>>,
    pub rejection_rate: Vec<Vec<f64>>,
    /// Theoretical lag-1 variance for ARCH(1) rows; `None` marks an infinite fourth moment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theoretical_w11: Option<Vec<Option<f64>>>,
    /// Wall-clock time. Not serialized, so reports of identical runs compare equal byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentReport {
    pub fn rate(&self, row: usize, col: usize) -> f64 {
        self.rejection_rate[row][col]
    }

    /// Row index whose parameter equals `value` (to 1e-9).
    pub fn row_index(&self, value: f64) -> Option<usize> {
        self.row_values.iter().position(|v| (v - value).abs() < 1e-9)
    }

    pub fn lambda_index(&self, lambda: f64) -> Option<usize> {
        self.config.lambda_grid.iter().position(|l| (l - lambda).abs() < 1e-9)
    }

    /// Matrix with a header row of λ values and a leading parameter column;
    /// ARCH reports also carry the theoretical `w11` column. Rates use 3 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.row_label);
        if self.theoretical_w11.is_some() {
            out.push_str(",w11");
        }
        for l in &self.config.lambda_grid {
            out.push_str(&format!(",{l}"));
        }
        out.push('\n');
        for (i, row) in self.rejection_rate.iter().enumerate() {
            out.push_str(&format!("{}", self.row_values[i]));
            if let Some(w) = &self.theoretical_w11 {
                match w[i] {
                    Some(v) => out.push_str(&format!(",{v:.3}")),
                    None => out.push_str(",NA"),
                }
            }
            for r in row {
                out.push_str(&format!(",{r:.3}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Execution knobs that do not affect the result.
#[derive(Default)]
pub struct RunOptions<'a> {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Checked before every replication; setting it aborts with [`Error::Cancelled`].
    pub cancel: Option<&'a AtomicBool>,
    /// Called after each completed row with `(rows_done, rows_total)`.
    pub progress: Option<&'a (dyn Fn(usize, usize) + Sync)>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(cfg, &RunOptions::default())
}

pub fn run_experiment_with(cfg: &ExperimentConfig, opts: &RunOptions<'_>) -> Result<ExperimentReport> {
    cfg.validate()?;
    let started = Instant::now();
    let rejections = match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| count_rejections(cfg, opts))?
        }
        None => count_rejections(cfg, opts)?,
    };
    let reps = cfg.reps as f64;
    let rejection_rate = rejections
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / reps).collect())
        .collect();
    let row_label = cfg.models[0].row_parameter().0.to_string();
    let theoretical_w11 = cfg
        .models
        .iter()
        .map(|m| match m {
            ModelSpec::Arch1(s) => Some(arch1_theoretical_w11(s)),
            ModelSpec::Mar(_) => None,
        })
        .collect::<Option<Vec<_>>>();
    Ok(ExperimentReport {
        preset: None,
        row_label,
        row_values: cfg.models.iter().map(|m| m.row_parameter().1).collect(),
        rejections,
        rejection_rate,
        theoretical_w11,
        config: cfg.clone(),
        elapsed: started.elapsed(),
    })
}

fn count_rejections(cfg: &ExperimentConfig, opts: &RunOptions<'_>) -> Result<Vec<Vec<u64>>> {
    let z = two_sided_z(cfg.level)?;
    let k = cfg.lambda_grid.len();
    let mut out = Vec::with_capacity(cfg.models.len());
    for (row, model) in cfg.models.iter().enumerate() {
        let counts = (0..cfg.reps)
            .into_par_iter()
            .map_init(
                || (Vec::with_capacity(cfg.n), vec![false; k]),
                |(buf, flags), rep| {
                    if opts.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                        return Err(Error::Cancelled);
                    }
                    replicate(cfg, model, row, rep, z, buf, flags)
                        .map_err(|e| e.with_context(format!("row {row}, rep {rep}")))?;
                    Ok(flags.iter().map(|&f| f as u64).collect::<Vec<u64>>())
                },
            )
            .try_reduce(|| vec![0u64; k], |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            })
            .map_err(|e| match e {
                Error::Context { source, .. } if *source == Error::Cancelled => Error::Cancelled,
                e => e,
            })?;
        out.push(counts);
        if let Some(p) = opts.progress {
            p(row + 1, cfg.models.len());
        }
    }
    Ok(out)
}

fn replicate(
    cfg: &ExperimentConfig,
    model: &ModelSpec,
    row: usize,
    rep: usize,
    z: f64,
    buf: &mut Vec<f64>,
    flags: &mut [bool],
) -> Result<()> {
    let sim = SimConfig {
        n: cfg.n,
        burn_in: cfg.burn_in,
        rng: RngStream::new(cfg.seed, replication_stream(row, rep)),
    };
    let path = model.simulate(sim)?;
    let n = cfg.n as f64;
    for (flag, &lambda) in flags.iter_mut().zip(&cfg.lambda_grid) {
        signed_power_into(path.values(), lambda, buf);
        *flag = match cfg.statistic {
            Statistic::Lag1 => {
                let rho = acf_slice(buf, 1)?[0];
                let w = w_hat_slice(buf, 1, cfg.correction)?;
                rho.abs() > z * (w / n).sqrt()
            }
            Statistic::Portmanteau { max_lag } => {
                let rho = acf_slice(buf, max_lag)?;
                let mut q = 0.0;
                for (i, r) in rho.iter().enumerate() {
                    q += r * r / w_hat_slice(buf, i + 1, cfg.correction)?;
                }
                chisq_sf(n * q, max_lag)? < 1.0 - cfg.level
            }
        };
    }
    Ok(())
}

/// Optional changes to a preset.
#[derive(Debug, Clone, Default)]
pub struct PresetOverrides {
    pub reps: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub level: Option<f64>,
    pub correction: Option<Correction>,
    pub burn_in: Option<usize>,
    pub lambda_grid: Option<Vec<f64>>,
    pub statistic: Option<Statistic>,
}

impl PresetOverrides {
    fn apply(&self, mut cfg: ExperimentConfig) -> ExperimentConfig {
        if let Some(v) = self.reps {
            cfg.reps = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.level {
            cfg.level = v;
        }
        if let Some(v) = self.correction {
            cfg.correction = v;
        }
        if let Some(v) = self.burn_in {
            cfg.burn_in = v;
        }
        if let Some(v) = &self.lambda_grid {
            cfg.lambda_grid = v.clone();
        }
        if let Some(v) = self.statistic {
            cfg.statistic = v;
        }
        cfg
    }
}

/// ARCH(1) grid: `ω = 0.01`, `α₁ = 0.05, 0.15, …, 0.95`, `λ ∈ {0.1, 0.5, 0.75, 1}`.
pub fn table1_config(overrides: &PresetOverrides) -> ExperimentConfig {
    let models = TABLE1_ALPHAS
        .iter()
        .map(|&a| ModelSpec::Arch1(ArchSpec { omega: TABLE1_OMEGA, alpha1: a }))
        .collect();
    overrides.apply(ExperimentConfig::new(models, TABLE1_LAMBDAS.to_vec()))
}

/// MAR grid: `σ₂ = 1, …, 10`, `λ = 0.1, 0.2, …, 1`.
pub fn table2_config(overrides: &PresetOverrides) -> ExperimentConfig {
    let models = TABLE2_SIGMAS
        .iter()
        .map(|&s| ModelSpec::Mar(MarSpec::white_noise(s).expect("preset sigma is positive")))
        .collect();
    overrides.apply(ExperimentConfig::new(models, TABLE2_LAMBDAS.to_vec()))
}

pub fn table1(overrides: &PresetOverrides, opts: &RunOptions<'_>) -> Result<ExperimentReport> {
    let mut report = run_experiment_with(&table1_config(overrides), opts)?;
    report.preset = Some("table1".into());
    Ok(report)
}

pub fn table2(overrides: &PresetOverrides, opts: &RunOptions<'_>) -> Result<ExperimentReport> {
    let mut report = run_experiment_with(&table2_config(overrides), opts)?;
    report.preset = Some("table2".into());
    Ok(report)
}
