use serde::{Deserialize, Serialize};

use crate::accum::compensated_sum;
use crate::error::{Error, Result};

/// A sample of non-negative observations, stored in ascending order, with
/// its low-order moments cached at construction.
///
/// Every statistic in this crate is a symmetric function of the
/// observations, so keeping them sorted loses nothing and makes the
/// fixed-order double sums independent of input order, bit for bit.
/// Variances use the divisor `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
    mean: f64,
    mean_sq: f64,
    mean_cube: f64,
    variance: f64,
    third_central: f64,
}

impl Sample {
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut values = values.into();
        if values.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidSample(format!(
                "observation {i} is {v}; values must be finite and >= 0"
            )));
        }
        values.sort_by(f64::total_cmp);

        let n = values.len() as f64;
        let mean = compensated_sum(values.iter().copied()) / n;
        let mean_sq = compensated_sum(values.iter().map(|x| x * x)) / n;
        let mean_cube = compensated_sum(values.iter().map(|x| x * x * x)) / n;
        let variance = compensated_sum(values.iter().map(|x| (x - mean).powi(2))) / n;
        let third_central = compensated_sum(values.iter().map(|x| (x - mean).powi(3))) / n;

        Ok(Sample {
            values,
            mean,
            mean_sq,
            mean_cube,
            variance,
            third_central,
        })
    }

    /// Like [`Sample::new`], additionally requiring integer values.
    pub fn new_counts(values: impl Into<Vec<f64>>) -> Result<Self> {
        let sample = Self::new(values)?;
        if let Some(v) = sample.values.iter().find(|v| v.fract() != 0.0) {
            return Err(Error::InvalidSample(format!(
                "count data must be integer-valued, found {v}"
            )));
        }
        Ok(sample)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `n⁻¹ Σ x²`
    pub fn mean_sq(&self) -> f64 {
        self.mean_sq
    }

    /// `n⁻¹ Σ x³`
    pub fn mean_cube(&self) -> f64 {
        self.mean_cube
    }

    /// `n⁻¹ Σ (x - x̄)²`
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// `n⁻¹ Σ (x - x̄)³`
    pub fn third_central(&self) -> f64 {
        self.third_central
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn is_all_zero(&self) -> bool {
        self.max() == 0.0
    }

    /// Scales every observation by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|x| x * k).collect::<Vec<_>>())
    }
}

impl<'de> Deserialize<'de> for Sample {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            values: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        Sample::new(raw.values).map_err(serde::de::Error::custom)
    }
}
