//! Validated time series container.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::PowerParams;

/// Where a series came from and what has been done to it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Free-form origin label, e.g. a file path or a model description.
    pub source: Option<String>,
    /// Power maps applied so far, oldest first.
    pub transforms: Vec<PowerParams>,
}

/// An ordered, non-empty stretch of finite real observations.
///
/// Construction rejects NaN and infinities eagerly, so every estimator in
/// this crate can assume finite data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    #[serde(default)]
    provenance: Provenance,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(TimeSeries {
            values,
            provenance: Provenance::default(),
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.provenance.source = Some(source.into());
        self
    }

    pub(crate) fn from_parts(values: Vec<f64>, provenance: Provenance) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        TimeSeries { values, provenance }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(values)
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
