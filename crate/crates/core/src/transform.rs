//! Signed power transform and the asymmetric power family.
//!
//! The family `f_c` maps `x > 0` to `x^λ`, zero to zero, and `x < 0` to
//! `c·|x|^λ`. These are exactly the continuous solutions of
//! `f(x·y) = f(x)·f(y)` for `x ≥ 0` and real `y`. Choosing `c = -1` gives
//! the signed power `sign(x)·|x|^λ`, which is odd, strictly increasing for
//! `λ > 0`, and multiplicative over all real pairs.
//!
//! `λ = 0` is allowed and gives the sign function (with `f(0) = 0`); it is
//! not invertible. Powers are evaluated with `f64::powf`; for subnormal
//! inputs combined with tiny exponents the platform result is accepted as-is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Exponent and negative-branch coefficient of a power map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub lambda: f64,
    pub c: f64,
}

impl PowerParams {
    /// Validated constructor.
    pub fn new(lambda: f64, c: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !c.is_finite() {
            return Err(Error::domain("c", c, "must be finite"));
        }
        Ok(PowerParams { lambda, c })
    }

    /// The signed power transform proper, `c = -1`.
    pub fn signed(lambda: f64) -> Result<Self> {
        Self::new(lambda, -1.0)
    }

    pub fn is_signed(&self) -> bool {
        self.c == -1.0
    }

    /// One-to-one iff `λ > 0` and `c < 0`.
    pub fn is_invertible(&self) -> bool {
        self.lambda > 0.0 && self.c < 0.0
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        asym_power(x, *self)
    }

    /// Inverse of [`PowerParams::apply`] for invertible parameters.
    pub fn invert(&self, y: f64) -> Result<f64> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible {
                lambda: self.lambda,
                c: self.c,
            });
        }
        check_finite("y", y)?;
        let inv = 1.0 / self.lambda;
        Ok(if y > 0.0 {
            y.powf(inv)
        } else if y < 0.0 {
            -(y / self.c).powf(inv)
        } else {
            0.0
        })
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.lambda, self.c).map(|_| ())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::domain("lambda", lambda, "must be finite"));
    }
    if lambda < 0.0 {
        return Err(Error::domain("lambda", lambda, "must be non-negative"));
    }
    Ok(())
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, x, "must be finite"))
    }
}

/// `|x|^λ` for `x ≠ 0`, with `λ = 0` giving exactly one.
#[inline]
fn abs_pow(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        1.0
    } else {
        x.abs().powf(lambda)
    }
}

/// `sign(x)·|x|^λ`.
///
/// Returns `0` at `x = 0` for every `λ ≥ 0`, and `sign(x)` when `λ = 0`.
pub fn signed_power(x: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_finite("x", x)?;
    Ok(signed_power_unchecked(x, lambda))
}

#[inline]
pub(crate) fn signed_power_unchecked(x: f64, lambda: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * abs_pow(x, lambda)
    }
}

/// The asymmetric family `f_c`; reduces to [`signed_power`] when `c = -1`.
pub fn asym_power(x: f64, params: PowerParams) -> Result<f64> {
    params.validate()?;
    check_finite("x", x)?;
    Ok(asym_power_unchecked(x, params))
}

#[inline]
fn asym_power_unchecked(x: f64, params: PowerParams) -> f64 {
    if x > 0.0 {
        abs_pow(x, params.lambda)
    } else if x < 0.0 {
        params.c * abs_pow(x, params.lambda)
    } else {
        0.0
    }
}

/// `sign(y)·|y|^(1/λ)`, the inverse of [`signed_power`] for `λ > 0`.
pub fn signed_power_inverse(y: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Err(Error::NotInvertible { lambda, c: -1.0 });
    }
    check_finite("y", y)?;
    Ok(signed_power_unchecked(y, 1.0 / lambda))
}

/// Applies `f_c` to every observation. The result records `params` in its
/// provenance; an overflow to a non-finite value is reported with its index.
pub fn transform_series(xs: &TimeSeries, params: PowerParams) -> Result<TimeSeries> {
    params.validate()?;
    let mut out = Vec::with_capacity(xs.len());
    for (index, &x) in xs.values().iter().enumerate() {
        let y = asym_power_unchecked(x, params);
        if !y.is_finite() {
            return Err(Error::NonFinite { index, value: y });
        }
        out.push(y);
    }
    let mut provenance = xs.provenance().clone();
    provenance.transforms.push(params);
    Ok(TimeSeries::from_parts(out, provenance))
}

/// Writes `sign(x)·|x|^λ` of `xs` into `out`, reusing its allocation.
/// Inputs must already be finite.
pub(crate) fn signed_power_into(xs: &[f64], lambda: f64, out: &mut Vec<f64>) {
    out.clear();
    if lambda == 1.0 {
        out.extend_from_slice(xs);
    } else {
        out.extend(xs.iter().map(|&x| signed_power_unchecked(x, lambda)));
    }
}
