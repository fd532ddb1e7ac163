//! Special functions and samplers.
//!
//! - [`normal_quantile`]: Wichura's AS 241 (`PPND16`), relative accuracy about 1e-16.
//! - [`chisq_cdf`] / [`chisq_sf`]: regularized incomplete gamma, by power series
//!   below `a + 1` and Lentz continued fraction above.
//! - [`chisq_quantile`]: bracketed bisection on the CDF.
//! - [`RngStream`]: a ChaCha8 generator keyed by `(seed, stream_id)`. ChaCha is
//!   counter based, so stream `s` of seed `k` yields the same draws no matter
//!   which thread runs it or in what order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;

/// Reproducible random stream identified by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Stream id for replication `rep` of grid row `row`. Injective for
/// `row, rep < 2^32`.
pub fn replication_stream(row: usize, rep: usize) -> u64 {
    ((row as u64) << 32) | (rep as u64 & 0xffff_ffff)
}

pub fn sample_std_normal(rng: &mut RngStream) -> f64 {
    StandardNormal.sample(rng)
}

/// Student-t with three degrees of freedom scaled to unit variance.
///
/// `Z0 / sqrt((Z1² + Z2² + Z3²) / 3)` is t₃; dividing by √3 leaves
/// `Z0 / sqrt(Z1² + Z2² + Z3²)`.
pub fn sample_std_t3(rng: &mut RngStream) -> f64 {
    let z0 = sample_std_normal(rng);
    let z1 = sample_std_normal(rng);
    let z2 = sample_std_normal(rng);
    let z3 = sample_std_normal(rng);
    z0 / (z1 * z1 + z2 * z2 + z3 * z3).sqrt()
}

/// Inverse standard normal CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "must lie in (0, 1)"));
    }
    Ok(ppnd16(p))
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

// Algorithm AS 241, Appl. Statist. (1988) 37(3).
fn ppnd16(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_5,
        1.331_416_678_917_843_8e2,
        1.971_590_950_306_551_3e3,
        1.373_169_376_550_946e4,
        4.592_195_393_154_987e4,
        6.726_577_092_700_87e4,
        3.343_057_558_358_813e4,
        2.509_080_928_730_122_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091e1,
        6.871_870_074_920_579e2,
        5.394_196_021_424_751e3,
        2.121_379_430_158_659_7e4,
        3.930_789_580_009_271e4,
        2.872_908_573_572_194_3e4,
        5.226_495_278_852_545e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_5,
        4.630_337_846_156_546,
        5.769_497_221_460_691,
        3.647_848_324_763_204_5,
        1.270_458_252_452_368_4,
        2.417_807_251_774_506e-1,
        2.272_384_498_926_918_4e-2,
        7.745_450_142_783_414e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_759,
        1.676_384_830_183_803_8,
        6.897_673_349_851e-1,
        1.481_039_764_274_800_8e-1,
        1.519_866_656_361_645_7e-2,
        5.475_938_084_995_345e-4,
        1.050_750_071_644_416_9e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103,
        5.463_784_911_164_114,
        1.784_826_539_917_291_3,
        2.965_605_718_285_048_7e-1,
        2.653_218_952_657_612_4e-2,
        1.242_660_947_388_078_4e-3,
        2.711_555_568_743_487_6e-5,
        2.010_334_399_292_288_1e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_88e-1,
        1.369_298_809_227_358e-1,
        1.487_536_129_085_061_5e-2,
        7.868_691_311_456_133e-4,
        1.846_318_317_510_054_8e-5,
        1.421_511_758_316_446e-7,
        2.044_263_103_389_939_8e-15,
    ];

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let z = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -z
    } else {
        z
    }
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, nine terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete gamma pair `(P(a, x), Q(a, x))`.
pub fn incomplete_gamma(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("a", a, "must be positive and finite"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("x", x, "must be non-negative"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let p = gamma_series(a, x)? * log_prefactor.exp();
        let p = p.min(1.0);
        Ok((p, 1.0 - p))
    } else {
        let q = gamma_continued_fraction(a, x)? * log_prefactor.exp();
        let q = q.min(1.0);
        Ok((1.0 - q, q))
    }
}

// Σ x^n / (a (a+1) ... (a+n))
fn gamma_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(Error::domain("x", x, "incomplete gamma series did not converge"))
}

// Modified Lentz evaluation of the continued fraction for Q(a, x) / prefactor.
fn gamma_continued_fraction(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::domain("x", x, "incomplete gamma continued fraction did not converge"))
}

fn check_df(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::domain("degrees of freedom", 0.0, "must be at least 1"))
    } else {
        Ok(())
    }
}

/// χ²ₖ cumulative distribution function.
pub fn chisq_cdf(x: f64, k: usize) -> Result<f64> {
    check_df(k)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("x", x, "must be non-negative"));
    }
    Ok(incomplete_gamma(k as f64 / 2.0, x / 2.0)?.0)
}

/// χ²ₖ upper tail `1 - CDF`, computed without cancellation.
pub fn chisq_sf(x: f64, k: usize) -> Result<f64> {
    check_df(k)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("x", x, "must be non-negative"));
    }
    Ok(incomplete_gamma(k as f64 / 2.0, x / 2.0)?.1)
}

/// Inverse χ²ₖ CDF by bisection.
pub fn chisq_quantile(p: f64, k: usize) -> Result<f64> {
    check_df(k)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "must lie in (0, 1)"));
    }
    let mut lo = 0.0;
    let mut hi = k as f64 + 1.0;
    while chisq_cdf(hi, k)? < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chisq_cdf(mid, k)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
