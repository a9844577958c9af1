//! Alternative distributions for power studies.
//!
//! Parameter conventions (also tabulated in `docs/alternatives.md`):
//!
//! | family              | params                              | law |
//! |---------------------|-------------------------------------|-----|
//! | `discrete_uniform`  | `[m]`                               | uniform on `{0, …, m}` |
//! | `binomial`          | `[m, p]`                            | `Bin(m, p)` |
//! | `neg_binomial`      | `[r, p]`                            | failures before the `r`-th success, mean `r(1-p)/p` |
//! | `poisson_mixture`   | `[p, θ₁, θ₂]`                       | `p·Po(θ₁) + (1-p)·Po(θ₂)` |
//! | `poisson_delta_zero`| `[w, λ]`                            | `w·Po(λ) + (1-w)·δ₀` |
//! | `discrete_weibull`  | `[q, β]`                            | `P(X ≥ x) = q^{x^β}` |
//! | `weibull`           | `[k]` or `[k, s]`                   | shape `k`, scale `s` (default 1) |
//! | `inverse_gaussian`  | `[θ]`                               | mean 1, shape `θ` |
//! | `log_normal`        | `[σ]`                               | `exp(σZ)` |
//! | `power`             | `[θ]`                               | `U^θ` |
//! | `shifted_pareto`    | `[θ]`                               | density `θ(1+x)^{-θ-1}` |
//! | `gompertz`          | `[θ]`                               | `P(X > x) = exp(-θ(eˣ - 1))` |
//! | `linear_failure_rate` | `[θ]`                             | hazard `1 + θx` |
//! | `mixed_cp_exp`      | `[p, λ₁, β₁, λ₂, β₂]`               | `p·CP(λ₁, Exp(β₁)) + (1-p)·CP(λ₂, Exp(β₂))` |
//! | `mixed_cp_gamma`    | `[p, λ₁, α₁, β₁, λ₂, α₂, β₂]`       | `p·CP(λ₁, Γ(α₁,β₁)) + (1-p)·CP(λ₂, Γ(α₂,β₂))` |
//! | `gamma`             | `[a]` or `[a, b]`                   | `Γ(a, b)`, rate `b` (default 1) |

use std::fmt;

use rand::Rng;
use rand_distr::{Binomial, Distribution, InverseGaussian, LogNormal, Weibull};
use serde::{Deserialize, Serialize};

use super::{compound_poisson_gamma, gamma, open_uniform, poisson, RngStream};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::special::gamma as gamma_fn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AltFamily {
    DiscreteUniform,
    Binomial,
    NegBinomial,
    PoissonMixture,
    PoissonDeltaZero,
    DiscreteWeibull,
    Weibull,
    InverseGaussian,
    LogNormal,
    Power,
    ShiftedPareto,
    Gompertz,
    LinearFailureRate,
    MixedCpExp,
    MixedCpGamma,
    #[serde(rename = "gamma")]
    GammaAlt,
}

impl AltFamily {
    pub fn is_discrete(self) -> bool {
        matches!(
            self,
            AltFamily::DiscreteUniform
                | AltFamily::Binomial
                | AltFamily::NegBinomial
                | AltFamily::PoissonMixture
                | AltFamily::PoissonDeltaZero
                | AltFamily::DiscreteWeibull
        )
    }

    /// Accepted parameter counts.
    fn arity(self) -> &'static [usize] {
        match self {
            AltFamily::DiscreteUniform
            | AltFamily::InverseGaussian
            | AltFamily::LogNormal
            | AltFamily::Power
            | AltFamily::ShiftedPareto
            | AltFamily::Gompertz
            | AltFamily::LinearFailureRate => &[1],
            AltFamily::Binomial | AltFamily::NegBinomial | AltFamily::PoissonDeltaZero | AltFamily::DiscreteWeibull => {
                &[2]
            }
            AltFamily::Weibull | AltFamily::GammaAlt => &[1, 2],
            AltFamily::PoissonMixture => &[3],
            AltFamily::MixedCpExp => &[5],
            AltFamily::MixedCpGamma => &[7],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAlt", into = "RawAlt")]
pub struct AltSpec {
    family: AltFamily,
    params: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlt {
    family: AltFamily,
    params: Vec<f64>,
}

impl TryFrom<RawAlt> for AltSpec {
    type Error = Error;
    fn try_from(r: RawAlt) -> Result<Self> {
        AltSpec::new(r.family, r.params)
    }
}

impl From<AltSpec> for RawAlt {
    fn from(a: AltSpec) -> Self {
        RawAlt {
            family: a.family,
            params: a.params,
        }
    }
}

fn is_prob(p: f64) -> bool {
    p > 0.0 && p < 1.0
}

fn is_prob_closed(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

impl AltSpec {
    pub fn new(family: AltFamily, params: impl Into<Vec<f64>>) -> Result<Self> {
        let params = params.into();
        let bad = |why: &str| Err(Error::UnsupportedAlt(format!("{family:?}{params:?}: {why}")));
        if !family.arity().contains(&params.len()) {
            return bad(&format!("expected {:?} parameters", family.arity()));
        }
        if params.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite");
        }
        let p = &params;
        let positive = |idx: &[usize]| idx.iter().all(|&i| p[i] > 0.0);
        let ok = match family {
            AltFamily::DiscreteUniform => p[0] >= 1.0 && p[0].fract() == 0.0,
            AltFamily::Binomial => p[0] >= 1.0 && p[0].fract() == 0.0 && is_prob(p[1]),
            AltFamily::NegBinomial => p[0] > 0.0 && is_prob(p[1]),
            AltFamily::PoissonMixture => is_prob_closed(p[0]) && positive(&[1, 2]),
            AltFamily::PoissonDeltaZero => is_prob_closed(p[0]) && p[1] > 0.0,
            AltFamily::DiscreteWeibull => is_prob(p[0]) && p[1] > 0.0,
            AltFamily::MixedCpExp => is_prob_closed(p[0]) && positive(&[1, 2, 3, 4]),
            AltFamily::MixedCpGamma => is_prob_closed(p[0]) && positive(&[1, 2, 3, 4, 5, 6]),
            _ => p.iter().all(|&v| v > 0.0),
        };
        if !ok {
            return bad("parameter out of range");
        }
        Ok(AltSpec { family, params })
    }

    pub fn family(&self) -> AltFamily {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Short label in the style of the power tables, e.g. `W(0.5)`.
    pub fn label(&self) -> String {
        let p = &self.params;
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self.family {
            AltFamily::DiscreteUniform => format!("U(0;{})", p[0]),
            AltFamily::Binomial => format!("Bin({})", list(p)),
            AltFamily::NegBinomial => format!("NB({};{})", p[0], p[1]),
            AltFamily::PoissonMixture => format!("PP({};{},{})", p[0], p[1], p[2]),
            AltFamily::PoissonDeltaZero => format!("P({})d0[{}]", p[1], p[0]),
            AltFamily::DiscreteWeibull => format!("DW({})", list(p)),
            AltFamily::Weibull => format!("W({})", list(p)),
            AltFamily::InverseGaussian => format!("IG({})", p[0]),
            AltFamily::LogNormal => format!("LN({})", p[0]),
            AltFamily::Power => format!("PW({})", p[0]),
            AltFamily::ShiftedPareto => format!("SP({})", p[0]),
            AltFamily::Gompertz => format!("Go({})", p[0]),
            AltFamily::LinearFailureRate => format!("LF({})", p[0]),
            AltFamily::MixedCpExp => format!("MCP({};{},Exp({}),{},Exp({}))", p[0], p[1], p[2], p[3], p[4]),
            AltFamily::MixedCpGamma => format!(
                "MCP({};{},G({},{}),{},G({},{}))",
                p[0], p[1], p[2], p[3], p[4], p[5], p[6]
            ),
            AltFamily::GammaAlt => format!("G({})", list(p)),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p = &self.params;
        match self.family {
            AltFamily::DiscreteUniform => (rng.random::<f64>() * (p[0] + 1.0)).floor().min(p[0]),
            AltFamily::Binomial => Binomial::new(p[0] as u64, p[1]).expect("validated").sample(rng) as f64,
            AltFamily::NegBinomial => {
                let rate = gamma(p[0], p[1] / (1.0 - p[1]), rng);
                poisson(rate, rng)
            }
            AltFamily::PoissonMixture => {
                let lambda = if rng.random::<f64>() < p[0] { p[1] } else { p[2] };
                poisson(lambda, rng)
            }
            AltFamily::PoissonDeltaZero => {
                if rng.random::<f64>() < p[0] {
                    poisson(p[1], rng)
                } else {
                    0.0
                }
            }
            AltFamily::DiscreteWeibull => {
                let e = -open_uniform(rng).ln();
                // P(X ≥ x) = q^{x^β} ⇔ X = floor((E / -ln q)^{1/β})
                (e / -p[0].ln()).powf(1.0 / p[1]).floor()
            }
            AltFamily::Weibull => {
                let scale = p.get(1).copied().unwrap_or(1.0);
                Weibull::new(scale, p[0]).expect("validated").sample(rng)
            }
            AltFamily::InverseGaussian => InverseGaussian::new(1.0, p[0]).expect("validated").sample(rng),
            AltFamily::LogNormal => LogNormal::new(0.0, p[0]).expect("validated").sample(rng),
            AltFamily::Power => open_uniform(rng).powf(p[0]),
            AltFamily::ShiftedPareto => open_uniform(rng).powf(-1.0 / p[0]) - 1.0,
            AltFamily::Gompertz => (1.0 - open_uniform(rng).ln() / p[0]).ln(),
            AltFamily::LinearFailureRate => {
                let e = -open_uniform(rng).ln();
                // x + θx²/2 = E
                2.0 * e / (1.0 + (1.0 + 2.0 * p[0] * e).sqrt())
            }
            AltFamily::MixedCpExp => {
                if rng.random::<f64>() < p[0] {
                    compound_poisson_gamma(p[1], 1.0, p[2], rng)
                } else {
                    compound_poisson_gamma(p[3], 1.0, p[4], rng)
                }
            }
            AltFamily::MixedCpGamma => {
                if rng.random::<f64>() < p[0] {
                    compound_poisson_gamma(p[1], p[2], p[3], rng)
                } else {
                    compound_poisson_gamma(p[4], p[5], p[6], rng)
                }
            }
            AltFamily::GammaAlt => gamma(p[0], p.get(1).copied().unwrap_or(1.0), rng),
        }
    }

    pub fn sample_from<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        let values: Vec<f64> = (0..n).map(|_| self.draw(rng)).collect();
        Sample::new(values)
    }

    pub fn sample(&self, n: usize, stream: RngStream) -> Result<Sample> {
        self.sample_from(n, &mut stream.rng())
    }

    /// `(E[X], Var[X])` where finite and available in closed form or by a
    /// convergent series.
    pub fn moments(&self) -> Option<(f64, f64)> {
        let p = &self.params;
        let from_raw = |m1: f64, m2: f64| Some((m1, m2 - m1 * m1));
        let cp = |l: f64, a: f64, b: f64| {
            let m = l * a / b;
            (m, l * a * (a + 1.0) / (b * b) + m * m)
        };
        match self.family {
            AltFamily::DiscreteUniform => Some((p[0] / 2.0, ((p[0] + 1.0).powi(2) - 1.0) / 12.0)),
            AltFamily::Binomial => Some((p[0] * p[1], p[0] * p[1] * (1.0 - p[1]))),
            AltFamily::NegBinomial => Some((p[0] * (1.0 - p[1]) / p[1], p[0] * (1.0 - p[1]) / (p[1] * p[1]))),
            AltFamily::PoissonMixture => {
                let raw2 = |l: f64| l + l * l;
                from_raw(p[0] * p[1] + (1.0 - p[0]) * p[2], p[0] * raw2(p[1]) + (1.0 - p[0]) * raw2(p[2]))
            }
            AltFamily::PoissonDeltaZero => from_raw(p[0] * p[1], p[0] * (p[1] + p[1] * p[1])),
            AltFamily::DiscreteWeibull => {
                // E X = Σ_{k≥1} P(X ≥ k), E X² = Σ_{k≥1} (2k-1) P(X ≥ k)
                let (mut m1, mut m2) = (0.0, 0.0);
                for k in 1..1_000_000u64 {
                    let s = p[0].powf((k as f64).powf(p[1]));
                    m1 += s;
                    m2 += (2 * k - 1) as f64 * s;
                    if s < 1e-18 {
                        break;
                    }
                }
                from_raw(m1, m2)
            }
            AltFamily::Weibull => {
                let s = p.get(1).copied().unwrap_or(1.0);
                let g1 = gamma_fn(1.0 + 1.0 / p[0]);
                let g2 = gamma_fn(1.0 + 2.0 / p[0]);
                Some((s * g1, s * s * (g2 - g1 * g1)))
            }
            AltFamily::InverseGaussian => Some((1.0, 1.0 / p[0])),
            AltFamily::LogNormal => {
                let v = p[0] * p[0];
                Some(((v / 2.0).exp(), (v.exp() - 1.0) * v.exp()))
            }
            AltFamily::Power => from_raw(1.0 / (1.0 + p[0]), 1.0 / (1.0 + 2.0 * p[0])),
            AltFamily::ShiftedPareto => {
                let t = p[0];
                (t > 2.0).then(|| (1.0 / (t - 1.0), t / ((t - 1.0).powi(2) * (t - 2.0))))
            }
            AltFamily::Gompertz | AltFamily::LinearFailureRate => None,
            AltFamily::MixedCpExp => {
                let (a1, b1) = cp(p[1], 1.0, p[2]);
                let (a2, b2) = cp(p[3], 1.0, p[4]);
                from_raw(p[0] * a1 + (1.0 - p[0]) * a2, p[0] * b1 + (1.0 - p[0]) * b2)
            }
            AltFamily::MixedCpGamma => {
                let (a1, b1) = cp(p[1], p[2], p[3]);
                let (a2, b2) = cp(p[4], p[5], p[6]);
                from_raw(p[0] * a1 + (1.0 - p[0]) * a2, p[0] * b1 + (1.0 - p[0]) * b2)
            }
            AltFamily::GammaAlt => {
                let b = p.get(1).copied().unwrap_or(1.0);
                Some((p[0] / b, p[0] / (b * b)))
            }
        }
    }

    /// `P(X > x)` for the continuous families defined through it.
    pub fn survival(&self, x: f64) -> Option<f64> {
        let t = self.params[0];
        match self.family {
            AltFamily::Gompertz => Some((-t * (x.exp() - 1.0)).exp()),
            AltFamily::LinearFailureRate => Some((-x - t * x * x / 2.0).exp()),
            AltFamily::ShiftedPareto => Some((1.0 + x).powf(-t)),
            AltFamily::Power => Some(1.0 - x.min(1.0).powf(1.0 / t)),
            _ => None,
        }
    }
}

impl fmt::Display for AltSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(AltSpec::new(AltFamily::DiscreteUniform, vec![1.5]).is_err());
        assert!(AltSpec::new(AltFamily::Binomial, vec![10.0, 1.2]).is_err());
        assert!(AltSpec::new(AltFamily::Weibull, vec![0.5, 1.0, 2.0]).is_err());
        assert!(AltSpec::new(AltFamily::Weibull, vec![0.5]).is_ok());
        assert!(AltSpec::new(AltFamily::MixedCpGamma, vec![0.75, 1.0, 1.0, 3.0, 10.0, 5.0, 3.0]).is_ok());
    }

    #[test]
    fn discrete_uniform_support() {
        let a = AltSpec::new(AltFamily::DiscreteUniform, vec![1.0]).unwrap();
        let s = a.sample(1000, RngStream::new(1, 0)).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn json_names() {
        let a: AltSpec = serde_json::from_str(r#"{"family":"mixed_cp_exp","params":[0.5,1,1,4,5]}"#).unwrap();
        assert_eq!(a.family(), AltFamily::MixedCpExp);
        assert!(serde_json::from_str::<AltSpec>(r#"{"family":"cauchy","params":[1]}"#).is_err());
    }
}
