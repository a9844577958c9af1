//! Null families and their parameter vectors.
//!
//! Every supported family satisfies a Stein identity of the form
//! `E[a(X) f(X) - c(X) d(Y) f(X + Y)] = 0` with `a(x) = x`. The size-bias
//! families (Poisson, Dickman, gamma) have `c(x) d(y) = E[X]`; the compound
//! Poisson families have `c(x) d(y) = λ y`.
//!
//! Parameter layout, gamma laws always in the rate convention
//! (density ∝ x^{α-1} e^{-βx}):
//!
//! | family    | params        |
//! |-----------|---------------|
//! | `Poisson` | `[λ]`         |
//! | `Dickman` | `[θ]`         |
//! | `Gamma`   | `[α, β]`      |
//! | `CpExp`   | `[λ, β]`      |
//! | `CpGamma` | `[λ, α, β]`   |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Poisson,
    Dickman,
    Gamma,
    #[serde(rename = "cpexp")]
    CpExp,
    #[serde(rename = "cpgamma")]
    CpGamma,
}

/// How the bias term `c(x) d(y)` looks for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasKind {
    /// `c(x) d(y) = E[X]`, estimated by the sample mean.
    SizeBias,
    /// `c(x) d(y) = λ y`.
    CompoundPoisson,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Poisson,
        Family::Dickman,
        Family::Gamma,
        Family::CpExp,
        Family::CpGamma,
    ];

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Poisson => &["lambda"],
            Family::Dickman => &["theta"],
            Family::Gamma => &["alpha", "beta"],
            Family::CpExp => &["lambda", "beta"],
            Family::CpGamma => &["lambda", "alpha", "beta"],
        }
    }

    pub fn param_count(self) -> usize {
        self.param_names().len()
    }

    pub fn bias_kind(self) -> BiasKind {
        match self {
            Family::Poisson | Family::Dickman | Family::Gamma => BiasKind::SizeBias,
            Family::CpExp | Family::CpGamma => BiasKind::CompoundPoisson,
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, Family::Poisson)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Poisson => "poisson",
            Family::Dickman => "dickman",
            Family::Gamma => "gamma",
            Family::CpExp => "cpexp",
            Family::CpGamma => "cpgamma",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" => Ok(Family::Poisson),
            "dickman" => Ok(Family::Dickman),
            "gamma" => Ok(Family::Gamma),
            "cpexp" => Ok(Family::CpExp),
            "cpgamma" => Ok(Family::CpGamma),
            other => Err(Error::InvalidConfig(format!("unknown family `{other}`"))),
        }
    }
}

/// Dense parameter vector. Validity is checked against a family by
/// [`FamilySpec::new`]; the bare vector carries no invariant of its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub Vec<f64>);

impl Params {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Params(values.into())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for Params {
    fn from(v: Vec<f64>) -> Self {
        Params(v)
    }
}

/// A null family together with a parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamilySpec", into = "RawFamilySpec")]
pub struct FamilySpec {
    family: Family,
    params: Params,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamilySpec {
    family: Family,
    params: Params,
}

impl TryFrom<RawFamilySpec> for FamilySpec {
    type Error = Error;

    fn try_from(raw: RawFamilySpec) -> Result<Self> {
        FamilySpec::new(raw.family, raw.params)
    }
}

impl From<FamilySpec> for RawFamilySpec {
    fn from(spec: FamilySpec) -> Self {
        RawFamilySpec {
            family: spec.family,
            params: spec.params,
        }
    }
}

/// Checks parameter count and positivity for `family`.
pub fn validate(family: Family, params: &Params) -> Result<()> {
    let names = family.param_names();
    if params.len() != names.len() {
        return Err(Error::BadParamCount {
            family,
            expected: names.len(),
            got: params.len(),
        });
    }
    for (&name, &value) in names.iter().zip(params.as_slice()) {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveParam { name, value });
        }
    }
    Ok(())
}

impl FamilySpec {
    pub fn new(family: Family, params: impl Into<Params>) -> Result<Self> {
        let params = params.into();
        validate(family, &params)?;
        Ok(FamilySpec { family, params })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(Family::Poisson, vec![lambda])
    }

    pub fn dickman(theta: f64) -> Result<Self> {
        Self::new(Family::Dickman, vec![theta])
    }

    pub fn gamma(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::Gamma, vec![alpha, beta])
    }

    pub fn cp_exp(lambda: f64, beta: f64) -> Result<Self> {
        Self::new(Family::CpExp, vec![lambda, beta])
    }

    pub fn cp_gamma(lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::CpGamma, vec![lambda, alpha, beta])
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.family
            .param_names()
            .iter()
            .position(|&n| n == name)
            .map(|i| self.params.0[i])
    }

    /// Mean of the law, `E[X]`.
    pub fn mean(&self) -> f64 {
        let p = self.params.as_slice();
        match self.family {
            Family::Poisson | Family::Dickman => p[0],
            Family::Gamma => p[0] / p[1],
            Family::CpExp => p[0] / p[1],
            Family::CpGamma => p[0] * p[1] / p[2],
        }
    }

    /// Variance of the law.
    pub fn variance(&self) -> f64 {
        let p = self.params.as_slice();
        match self.family {
            Family::Poisson => p[0],
            Family::Dickman => p[0] / 2.0,
            Family::Gamma => p[0] / (p[1] * p[1]),
            // λ E[Y²]
            Family::CpExp => 2.0 * p[0] / (p[1] * p[1]),
            Family::CpGamma => p[0] * p[1] * (p[1] + 1.0) / (p[2] * p[2]),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (i, (name, v)) in self
            .family
            .param_names()
            .iter()
            .zip(self.params.as_slice())
            .enumerate()
        {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        f.write_str(")")
    }
}
