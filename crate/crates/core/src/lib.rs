//! Signed power transforms and heteroskedasticity-robust white noise tests.
//!
//! The signed power `x ↦ sign(x)·|x|^λ` maps an ARCH-type process with
//! symmetric innovations to another ARCH-type process, and for small `λ`
//! the result has finite fourth moments even when the original does not.
//! That makes robust autocorrelation bands and portmanteau tests valid for
//! heavy-tailed data, and comparing results across several `λ` helps tell
//! ARCH-type white noise apart from other uncorrelated processes.
//!
//! - [`transform`]: the signed power and the asymmetric power family.
//! - [`acf`]: sample autocorrelations, the robust variance `ŵᵢᵢ`, bands, portmanteau.
//! - [`distributions`]: normal and χ² quantiles, samplers, reproducible streams.
//! - [`simulate`]: ARCH(1) and MAR(2;1,1) generators.
//! - [`experiment`]: Monte Carlo rejection-rate tables.
//! - [`io`]: series files and diagnostic reports.
//!
//! ```
//! use spwn::{acf_diagnose, Correction, TimeSeries};
//!
//! let xs = TimeSeries::new(vec![0.4, -1.3, 0.2, 2.2, -0.7, 0.1, -0.3, 1.1, -2.0, 0.6])?;
//! let report = acf_diagnose(&xs, 2, &[0.5, 1.0], 0.95, Correction::default())?;
//! assert_eq!(report.len(), 2);
//! # Ok::<(), spwn::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acf;
pub mod distributions;
mod error;
pub mod experiment;
pub mod io;
mod series;
pub mod simulate;
pub mod transform;

pub use acf::{
    acf_diagnose, bartlett_w, default_max_lag, portmanteau, sample_acf, sample_acvf, sample_mean,
    significance_bands, w_hat, AcfDiagnostics, Correction, LambdaDiagnostics, Portmanteau,
};
pub use distributions::{
    chisq_cdf, chisq_quantile, chisq_sf, normal_quantile, sample_std_normal, sample_std_t3,
    RngStream,
};
pub use error::{Error, Result};
pub use experiment::{
    run_experiment, run_experiment_with, table1, table2, ExperimentConfig, ExperimentReport,
    PresetOverrides, RunOptions, Statistic,
};
pub use series::{Provenance, TimeSeries};
pub use simulate::{
    arch1_theoretical_w11, simulate_arch1, simulate_mar, ArchSpec, MarSpec, ModelSpec, SimConfig,
};
pub use transform::{asym_power, signed_power, signed_power_inverse, transform_series, PowerParams};

// Code blocks in the README and the guide under `book/` run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/signed-power.md")]
    mod signed_power {}
    #[doc = include_str!("../../../book/src/arch-type.md")]
    mod arch_type {}
    #[doc = include_str!("../../../book/src/correlogram.md")]
    mod correlogram {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
