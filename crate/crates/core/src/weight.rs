//! Weight functions ω on the frequency axis.
//!
//! Normalizing constants are fixed so the closed-form kernels hold verbatim,
//! e.g. Poisson with the Gaussian weight has `Ψ₁(r) = exp(-r²/(2γ))`. The
//! test decision is invariant to rescaling ω, the statistic values are not.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightShape {
    /// `ω(t) ∝ p(t) exp(-γt²/2)` with a family-specific polynomial `p`:
    /// 1 (Poisson, compound Poisson gamma), t² (Dickman), β²+t² (gamma),
    /// (β²+t²)² (compound Poisson exponential).
    #[serde(rename = "gauss")]
    GaussFamily,
    /// `ω(t) ∝ exp(-γ|t|)`.
    #[serde(rename = "expabs")]
    ExpAbs,
    /// Half-line Laplace-side weight used by the compound Poisson gamma
    /// statistic `Û_γ`.
    #[serde(rename = "laplace")]
    LaplaceExp,
}

impl WeightShape {
    pub fn name(self) -> &'static str {
        match self {
            WeightShape::GaussFamily => "gauss",
            WeightShape::ExpAbs => "expabs",
            WeightShape::LaplaceExp => "laplace",
        }
    }
}

impl std::str::FromStr for WeightShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" => Ok(WeightShape::GaussFamily),
            "expabs" | "exp" => Ok(WeightShape::ExpAbs),
            "laplace" => Ok(WeightShape::LaplaceExp),
            other => Err(Error::InvalidWeight(format!("unknown weight shape `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeight", into = "RawWeight")]
pub struct WeightSpec {
    shape: WeightShape,
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    shape: WeightShape,
    gamma: f64,
}

impl TryFrom<RawWeight> for WeightSpec {
    type Error = Error;
    fn try_from(r: RawWeight) -> Result<Self> {
        WeightSpec::new(r.shape, r.gamma)
    }
}

impl From<WeightSpec> for RawWeight {
    fn from(w: WeightSpec) -> Self {
        RawWeight {
            shape: w.shape,
            gamma: w.gamma,
        }
    }
}

impl WeightSpec {
    pub fn new(shape: WeightShape, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidWeight(format!(
                "tuning parameter must be finite and > 0, got {gamma}"
            )));
        }
        Ok(WeightSpec { shape, gamma })
    }

    pub fn gauss(gamma: f64) -> Result<Self> {
        Self::new(WeightShape::GaussFamily, gamma)
    }

    pub fn exp_abs(gamma: f64) -> Result<Self> {
        Self::new(WeightShape::ExpAbs, gamma)
    }

    pub fn laplace(gamma: f64) -> Result<Self> {
        Self::new(WeightShape::LaplaceExp, gamma)
    }

    pub fn shape(&self) -> WeightShape {
        self.shape
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.shape.name(), self.gamma)
    }
}

/// A fully specified Fourier-side weight: shape, tuning parameter, and the
/// family parameters the Gaussian prefactor depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FourierWeight {
    /// `c · poly(t) · exp(-γt²/2)`
    Gauss { gamma: f64, poly: GaussPrefactor },
    /// `(γ/2) exp(-γ|t|)`, integrating to one.
    ExpAbs { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussPrefactor {
    One,
    TSquared,
    /// `β² + t²`
    Shifted { beta: f64 },
    /// `(β² + t²)²`
    ShiftedSquared { beta: f64 },
}

impl FourierWeight {
    pub fn for_family(spec: &FamilySpec, weight: &WeightSpec) -> Result<Self> {
        let gamma = weight.gamma();
        match weight.shape() {
            WeightShape::ExpAbs => Ok(FourierWeight::ExpAbs { gamma }),
            WeightShape::GaussFamily => {
                let poly = match spec.family() {
                    Family::Poisson | Family::CpGamma => GaussPrefactor::One,
                    Family::Dickman => GaussPrefactor::TSquared,
                    Family::Gamma => GaussPrefactor::Shifted {
                        beta: spec.params().as_slice()[1],
                    },
                    Family::CpExp => GaussPrefactor::ShiftedSquared {
                        beta: spec.params().as_slice()[1],
                    },
                };
                Ok(FourierWeight::Gauss { gamma, poly })
            }
            WeightShape::LaplaceExp => Err(Error::InvalidWeight(
                "the Laplace weight lives on the half line and has no Fourier kernels".into(),
            )),
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            FourierWeight::Gauss { gamma, .. } | FourierWeight::ExpAbs { gamma } => gamma,
        }
    }

    /// ω(t), including the normalizing constant.
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            FourierWeight::ExpAbs { gamma } => 0.5 * gamma * (-gamma * t.abs()).exp(),
            FourierWeight::Gauss { gamma, poly } => {
                let base = (gamma / (2.0 * PI)).sqrt() * (-0.5 * gamma * t * t).exp();
                let p = match poly {
                    GaussPrefactor::One => 1.0,
                    // extra γ so that Ψ₁(0) = 1
                    GaussPrefactor::TSquared => gamma * t * t,
                    GaussPrefactor::Shifted { beta } => beta * beta + t * t,
                    GaussPrefactor::ShiftedSquared { beta } => (beta * beta + t * t).powi(2),
                };
                base * p
            }
        }
    }

    /// Smallest `T` such that `ω(t) ≤ rel · max ω` for all `|t| ≥ T`.
    pub fn truncation_point(&self, rel: f64) -> f64 {
        let gamma = self.gamma();
        match *self {
            FourierWeight::ExpAbs { .. } => -rel.ln() / gamma,
            FourierWeight::Gauss { .. } => {
                // Peak of p(t)e^{-γt²/2} sits at |t| ≤ 2/√γ; scan past it.
                let peak = (0..=400)
                    .map(|i| self.eval(i as f64 * 4.0 / (400.0 * gamma.sqrt())))
                    .fold(0.0, f64::max);
                let mut t = (-2.0 * rel.ln() / gamma).sqrt();
                while self.eval(t) > rel * peak {
                    t *= 1.05;
                }
                t
            }
        }
    }
}
