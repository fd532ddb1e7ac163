use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spwn::experiment::DEFAULT_SEED;
use spwn::simulate::DEFAULT_BURN_IN;
use spwn::Correction;

#[derive(Debug, Parser)]
#[command(name = "spwn", version, about = "Signed power transforms and robust white noise tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a (signed) power map to every observation of a series file.
    Transform(TransformArgs),
    /// Robust autocorrelation diagnostics for one or more signed powers.
    Acf(AcfArgs),
    /// Robust portmanteau test for one or more signed powers.
    Portmanteau(PortmanteauArgs),
    /// Simulate an ARCH(1) or MAR(2;1,1) path.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo rejection-rate preset.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Input series, one observation per line.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub lambda: f64,
    /// Coefficient of the negative branch; -1 gives the signed power.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CorrectionArg {
    NOverNMinusI,
    One,
}

impl From<CorrectionArg> for Correction {
    fn from(c: CorrectionArg) -> Self {
        match c {
            CorrectionArg::NOverNMinusI => Correction::NOverNMinusI,
            CorrectionArg::One => Correction::One,
        }
    }
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Largest lag; defaults to min(20, n/10).
    #[arg(long, short = 'm')]
    pub max_lag: Option<usize>,
    /// Powers to test, comma separated.
    #[arg(long = "lambda", short, value_delimiter = ',', default_value = "1")]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = CorrectionArg::NOverNMinusI)]
    pub correction: CorrectionArg,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[command(flatten)]
    pub common: DiagnoseArgs,
    /// Also write `lambda,lag,rho,band` rows for plotting.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PortmanteauArgs {
    #[command(flatten)]
    pub common: DiagnoseArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Arch1,
    Mar,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub model: ModelArg,
    /// ARCH(1) intercept.
    #[arg(long, default_value_t = 0.01)]
    pub omega: f64,
    /// ARCH(1) coefficient, in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub alpha1: f64,
    /// MAR probability of the first regime.
    #[arg(long, default_value_t = 0.25)]
    pub weight1: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub phi1: f64,
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub phi2: f64,
    /// MAR scale of the second regime.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma2: f64,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, env = "SPWN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Stream within the seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    Table1,
    Table2,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub preset: PresetArg,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, short)]
    pub n: Option<usize>,
    #[arg(long, env = "SPWN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long, value_enum)]
    pub correction: Option<CorrectionArg>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Replace the preset's lambda grid.
    #[arg(long = "lambda", value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    /// Reject on the portmanteau test over this many lags instead of lag 1 alone.
    #[arg(long)]
    pub portmanteau_lag: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}
