use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a series came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub generator: String,
    pub seed: Option<u64>,
}

/// A finite real-valued series with its provenance.
///
/// Construction rejects NaN and infinities so every downstream ranking works
/// on totally ordered data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    provenance: Provenance,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        check_finite(&values)?;
        Ok(Self { values, provenance })
    }

    /// Series read from an external source, with no generator attached.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(
            values,
            Provenance {
                generator: "external".into(),
                seed: None,
            },
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteSample {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}
