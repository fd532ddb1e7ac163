//! Generators for the ARCH(1) and MAR(2;1,1) test processes.

use serde::{Deserialize, Serialize};

use crate::distributions::{sample_std_normal, sample_std_t3, RngStream};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const DEFAULT_BURN_IN: usize = 500;

/// Gaussian ARCH(1): `X_t = σ_t η_t`, `σ_t² = ω + α₁ X²_{t-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchSpec {
    pub omega: f64,
    pub alpha1: f64,
}

impl ArchSpec {
    pub fn new(omega: f64, alpha1: f64) -> Result<Self> {
        let spec = ArchSpec { omega, alpha1 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if !(0.0..1.0).contains(&self.alpha1) {
            return Err(Error::InvalidSpec(format!(
                "alpha1 must lie in [0, 1), got {}",
                self.alpha1
            )));
        }
        Ok(())
    }

    /// `E X_t²` of the stationary process.
    pub fn variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha1)
    }

    /// `E X_t⁴`, finite only when `3α₁² < 1`.
    pub fn fourth_moment(&self) -> Option<f64> {
        let a = self.alpha1;
        if 3.0 * a * a >= 1.0 {
            return None;
        }
        let m2 = self.variance();
        Some(3.0 * (self.omega * self.omega + 2.0 * self.omega * a * m2) / (1.0 - 3.0 * a * a))
    }
}

/// Asymptotic variance of `√n·ρ̂(1)` for the untransformed ARCH(1),
/// `E[X_t² X_{t+1}²] / (E X_t²)²`, or `None` when the fourth moment is infinite.
///
/// Conditioning on the past, `E[X_t² X_{t+1}²] = ω·m₂ + α₁·m₄`.
pub fn arch1_theoretical_w11(spec: &ArchSpec) -> Option<f64> {
    let m2 = spec.variance();
    let m4 = spec.fourth_moment()?;
    Some((spec.omega * m2 + spec.alpha1 * m4) / (m2 * m2))
}

/// Two-regime mixture autoregression with standardized t₃ innovations.
///
/// With probability `weight1`, `X_t = phi1·X_{t-1} + ε_t`; otherwise
/// `X_t = phi2·X_{t-1} + sigma2·ε_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarSpec {
    pub weight1: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub sigma2: f64,
}

impl MarSpec {
    /// The white-noise parameterization `0.25·(0.3) + 0.75·(-0.1) = 0`.
    pub fn white_noise(sigma2: f64) -> Result<Self> {
        let spec = MarSpec {
            weight1: 0.25,
            phi1: 0.3,
            phi2: -0.1,
            sigma2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight1 > 0.0 && self.weight1 < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "weight1 must lie in (0, 1), got {}",
                self.weight1
            )));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        if !(self.phi1.is_finite() && self.phi2.is_finite()) {
            return Err(Error::InvalidSpec("AR coefficients must be finite".into()));
        }
        Ok(())
    }

    pub fn weight2(&self) -> f64 {
        1.0 - self.weight1
    }

    /// `E[X_t | X_{t-1} = x]`.
    pub fn conditional_mean(&self, x: f64) -> f64 {
        self.weight1 * self.phi1 * x + self.weight2() * self.phi2 * x
    }
}

/// Length, burn-in and random stream of one simulated path.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub n: usize,
    pub burn_in: usize,
    pub rng: RngStream,
}

impl SimConfig {
    pub fn new(n: usize, seed: u64, stream_id: u64) -> Self {
        SimConfig {
            n,
            burn_in: DEFAULT_BURN_IN,
            rng: RngStream::new(seed, stream_id),
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("series length must be at least 1".into()));
        }
        Ok(())
    }
}

/// An ARCH(1) path together with its volatility.
#[derive(Debug, Clone)]
pub struct Arch1Path {
    pub x: Vec<f64>,
    pub sigma: Vec<f64>,
}

/// Starts from `X_0 = 0` and drops the first `burn_in` values.
pub fn simulate_arch1_path(spec: &ArchSpec, cfg: SimConfig) -> Result<Arch1Path> {
    spec.validate()?;
    cfg.validate()?;
    let SimConfig { n, burn_in, mut rng } = cfg;
    let mut x = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut prev = 0.0f64;
    for t in 0..burn_in + n {
        let s = (spec.omega + spec.alpha1 * prev * prev).sqrt();
        let cur = s * sample_std_normal(&mut rng);
        if t >= burn_in {
            x.push(cur);
            sigma.push(s);
        }
        prev = cur;
    }
    Ok(Arch1Path { x, sigma })
}

pub fn simulate_arch1(spec: &ArchSpec, cfg: SimConfig) -> Result<TimeSeries> {
    let label = format!("arch1(omega={}, alpha1={})", spec.omega, spec.alpha1);
    let path = simulate_arch1_path(spec, cfg)?;
    Ok(TimeSeries::new(path.x)?.with_source(label))
}

/// Starts from `X_0 = 0`. Each step draws the regime uniform first, then
/// the innovation.
pub fn simulate_mar(spec: &MarSpec, cfg: SimConfig) -> Result<TimeSeries> {
    spec.validate()?;
    cfg.validate()?;
    let SimConfig { n, burn_in, mut rng } = cfg;
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0f64;
    for t in 0..burn_in + n {
        let u = rng.uniform();
        let eps = sample_std_t3(&mut rng);
        let cur = if u < spec.weight1 {
            spec.phi1 * prev + eps
        } else {
            spec.phi2 * prev + spec.sigma2 * eps
        };
        if t >= burn_in {
            out.push(cur);
        }
        prev = cur;
    }
    let label = format!(
        "mar(weight1={}, phi1={}, phi2={}, sigma2={})",
        spec.weight1, spec.phi1, spec.phi2, spec.sigma2
    );
    Ok(TimeSeries::new(out)?.with_source(label))
}

/// One of the supported generating processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Arch1(ArchSpec),
    Mar(MarSpec),
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Arch1(s) => s.validate(),
            ModelSpec::Mar(s) => s.validate(),
        }
    }

    pub fn simulate(&self, cfg: SimConfig) -> Result<TimeSeries> {
        match self {
            ModelSpec::Arch1(s) => simulate_arch1(s, cfg),
            ModelSpec::Mar(s) => simulate_mar(s, cfg),
        }
    }

    /// The parameter that varies across experiment rows.
    pub fn row_parameter(&self) -> (&'static str, f64) {
        match self {
            ModelSpec::Arch1(s) => ("alpha1", s.alpha1),
            ModelSpec::Mar(s) => ("sigma2", s.sigma2),
        }
    }
}
