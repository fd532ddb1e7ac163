use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use spwn::experiment::{table1, table2, PresetOverrides, RunOptions, Statistic};
use spwn::io::{format_series, read_series, write_text, DiagnosticsReport, SeriesFile};
use spwn::{
    acf_diagnose, default_max_lag, transform_series, ArchSpec, Error, MarSpec, ModelSpec,
    PowerParams, SimConfig,
};

use crate::cli::{
    AcfArgs, Command, DiagnoseArgs, ExperimentArgs, FormatArg, ModelArg, PortmanteauArgs, PresetArg,
    SimulateArgs, TransformArgs,
};

#[derive(Debug)]
pub enum CliError {
    Failed(String),
    Interrupted,
}

impl<E: Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Failed(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Transform(a) => transform(a),
        Command::Acf(a) => acf(a),
        Command::Portmanteau(a) => portmanteau(a),
        Command::Simulate(a) => simulate(a),
        Command::Experiment(a) => experiment(a),
    }
}

fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => write_text(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn transform(a: TransformArgs) -> CliResult {
    let params = PowerParams::new(a.lambda, a.c)?;
    let SeriesFile { header, series } = read_series(&a.input)?;
    let out = transform_series(&series, params)?;
    emit(a.output.as_deref(), &format_series(out.values(), header.as_deref()))
}

fn diagnose(a: &DiagnoseArgs) -> Result<DiagnosticsReport, CliError> {
    let series = read_series(&a.input)?.series;
    let n = series.len();
    let m = a.max_lag.unwrap_or_else(|| default_max_lag(n));
    if m == 0 || m >= n {
        return Err(CliError::Failed(format!(
            "max lag {m} must satisfy 1 <= m < n = {n}"
        )));
    }
    let blocks = acf_diagnose(&series, m, &a.lambdas, a.level, a.correction.into())?;
    Ok(DiagnosticsReport::new(&series, blocks))
}

fn acf(a: AcfArgs) -> CliResult {
    let report = diagnose(&a.common)?;
    if let Some(p) = &a.plot_data {
        write_text(p, &report.plot_csv())?;
    }
    let text = if a.common.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    };
    emit(None, &text)
}

fn portmanteau(a: PortmanteauArgs) -> CliResult {
    let report = diagnose(&a.common)?;
    let text = if a.common.json {
        let rows: Vec<_> = report
            .blocks
            .iter()
            .map(|b| {
                let q = b.diagnostics.portmanteau();
                serde_json::json!({ "lambda": b.lambda, "stat": q.stat, "df": q.df, "pvalue": q.pvalue })
            })
            .collect();
        serde_json::to_string_pretty(&rows)? + "\n"
    } else {
        report.portmanteau_text()
    };
    emit(None, &text)
}

fn simulate(a: SimulateArgs) -> CliResult {
    let model = match a.model {
        ModelArg::Arch1 => ModelSpec::Arch1(ArchSpec::new(a.omega, a.alpha1)?),
        ModelArg::Mar => {
            let spec = MarSpec {
                weight1: a.weight1,
                phi1: a.phi1,
                phi2: a.phi2,
                sigma2: a.sigma2,
            };
            spec.validate()?;
            ModelSpec::Mar(spec)
        }
    };
    let cfg = SimConfig::new(a.n, a.seed, a.stream).with_burn_in(a.burn_in);
    let series = model.simulate(cfg)?;
    emit(a.output.as_deref(), &format_series(series.values(), None))
}

fn partial_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    out.with_file_name(name)
}

fn experiment(a: ExperimentArgs) -> CliResult {
    let overrides = PresetOverrides {
        reps: a.reps,
        n: a.n,
        seed: Some(a.seed),
        level: a.level,
        correction: a.correction.map(Into::into),
        burn_in: a.burn_in,
        lambda_grid: a.lambdas.clone(),
        statistic: a.portmanteau_lag.map(|max_lag| Statistic::Portmanteau { max_lag }),
    };

    let cancel = Arc::new(AtomicBool::new(false));
    {
        let cancel = Arc::clone(&cancel);
        // A second handler registration only fails if one is already installed.
        let _ = ctrlc::set_handler(move || cancel.store(true, Ordering::SeqCst));
    }

    let started = Instant::now();
    let progress = move |done: usize, total: usize| {
        eprintln!(
            "[{:>7.1}s] row {done}/{total} done",
            started.elapsed().as_secs_f64()
        );
    };
    let opts = RunOptions {
        workers: a.workers,
        cancel: Some(&cancel),
        progress: Some(&progress),
    };
    let result = match a.preset {
        PresetArg::Table1 => table1(&overrides, &opts),
        PresetArg::Table2 => table2(&overrides, &opts),
    };
    let report = match result {
        Ok(r) => r,
        Err(Error::Cancelled) => {
            if let Some(out) = &a.out {
                let _ = fs::remove_file(partial_path(out));
            }
            return Err(CliError::Interrupted);
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("finished in {:.1}s", report.elapsed.as_secs_f64());

    let text = match a.format {
        FormatArg::Csv => report.to_csv(),
        FormatArg::Json => report.to_json() + "\n",
    };
    match &a.out {
        Some(out) => {
            let tmp = partial_path(out);
            write_text(&tmp, &text)?;
            if cancel.load(Ordering::SeqCst) {
                let _ = fs::remove_file(&tmp);
                return Err(CliError::Interrupted);
            }
            fs::rename(&tmp, out)?;
            Ok(())
        }
        None => emit(None, &text),
    }
}
