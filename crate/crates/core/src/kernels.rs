//! Kernel triples `Ψ₁, Ψ₂, Ψ₃` and the Laplace-side coefficients of the
//! compound Poisson gamma statistic.
//!
//! With `𝔡(t)` the Fourier transform attached to the bias term (e.g. `e^{it}`
//! for Poisson), the kernels are
//!
//! ```text
//! Ψ₁(r) = ∫ cos(tr) ω(t) dt
//! Ψ₂(r) = ∫ |𝔡(t)|² cos(tr) ω(t) dt
//! Ψ₃(r) = ∫ Re[𝔡(t) e^{-itr}] ω(t) dt
//! ```
//!
//! Gaussian-type weights have closed forms for Poisson, Dickman, gamma and
//! compound Poisson exponential. Everything else goes through quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec, Params};
use crate::quadrature::{self, QuadratureConfig};
use crate::special::{ln_gamma, ln_upper_incomplete_gamma};
use crate::weight::{FourierWeight, WeightShape, WeightSpec};

/// Evaluates the three kernels at a lag `r`.
pub trait PsiKernel {
    fn psi1(&self, r: f64) -> Result<f64>;
    fn psi2(&self, r: f64) -> Result<f64>;
    fn psi3(&self, r: f64) -> Result<f64>;

    /// True when a single evaluation is costly enough that callers should
    /// memoize on `r`.
    fn is_expensive(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone)]
enum Imp {
    Poisson { gamma: f64 },
    Dickman { gamma: f64 },
    Gamma { beta: f64, gamma: f64 },
    CpExp { beta: f64, gamma: f64 },
    Quadrature(QuadKernel),
}

/// Kernels for one family, parameter vector and weight.
#[derive(Debug, Clone)]
pub struct KernelTriple {
    spec: FamilySpec,
    weight: WeightSpec,
    imp: Imp,
}

impl KernelTriple {
    /// Closed forms where available, quadrature otherwise.
    pub fn new(spec: &FamilySpec, weight: &WeightSpec) -> Result<Self> {
        Self::with_config(spec, weight, QuadratureConfig::default())
    }

    pub fn with_config(spec: &FamilySpec, weight: &WeightSpec, cfg: QuadratureConfig) -> Result<Self> {
        let fw = FourierWeight::for_family(spec, weight)?;
        let gamma = weight.gamma();
        let p = spec.params().as_slice();
        let imp = match (weight.shape(), spec.family()) {
            (WeightShape::GaussFamily, Family::Poisson) => Imp::Poisson { gamma },
            (WeightShape::GaussFamily, Family::Dickman) => Imp::Dickman { gamma },
            (WeightShape::GaussFamily, Family::Gamma) => Imp::Gamma { beta: p[1], gamma },
            (WeightShape::GaussFamily, Family::CpExp) => Imp::CpExp { beta: p[1], gamma },
            _ => Imp::Quadrature(QuadKernel::new(spec, fw, cfg)?),
        };
        Ok(KernelTriple {
            spec: spec.clone(),
            weight: *weight,
            imp,
        })
    }

    /// Always quadrature-backed, even where a closed form exists.
    pub fn quadrature(spec: &FamilySpec, weight: &WeightSpec, cfg: QuadratureConfig) -> Result<Self> {
        let fw = FourierWeight::for_family(spec, weight)?;
        Ok(KernelTriple {
            spec: spec.clone(),
            weight: *weight,
            imp: Imp::Quadrature(QuadKernel::new(spec, fw, cfg)?),
        })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn provenance(&self) -> Provenance {
        match self.imp {
            Imp::Quadrature(_) => Provenance::Quadrature,
            _ => Provenance::ClosedForm,
        }
    }
}

/// Closed forms or quadrature as appropriate; see [`KernelTriple::new`].
pub fn kernel_triple(spec: &FamilySpec, weight: &WeightSpec) -> Result<KernelTriple> {
    KernelTriple::new(spec, weight)
}

#[inline]
fn gauss(r: f64, gamma: f64) -> f64 {
    (-r * r / (2.0 * gamma)).exp()
}

impl PsiKernel for KernelTriple {
    fn psi1(&self, r: f64) -> Result<f64> {
        Ok(match &self.imp {
            Imp::Poisson { gamma } => gauss(r, *gamma),
            Imp::Dickman { gamma } => (gamma - r * r) / gamma * gauss(r, *gamma),
            Imp::Gamma { beta, gamma } => {
                let (b, g) = (*beta, *gamma);
                (g - r * r + b * b * g * g) / (g * g) * gauss(r, g)
            }
            Imp::CpExp { beta, gamma } => {
                let (b, g) = (*beta, *gamma);
                let r2 = r * r;
                let bg = b * b * g;
                (r2 * r2 - 2.0 * r2 * g * (3.0 + bg) + g * g * (3.0 + bg * (2.0 + bg))) / g.powi(4)
                    * gauss(r, g)
            }
            Imp::Quadrature(q) => return q.psi1(r),
        })
    }

    fn psi2(&self, r: f64) -> Result<f64> {
        Ok(match &self.imp {
            Imp::Poisson { gamma } => gauss(r, *gamma),
            Imp::Dickman { gamma } => {
                let g = *gamma;
                2.0 * g * gauss(r, g) - g * (gauss(r + 1.0, g) + gauss(r - 1.0, g))
            }
            Imp::Gamma { beta, gamma } | Imp::CpExp { beta, gamma } => beta * beta * gauss(r, *gamma),
            Imp::Quadrature(q) => return q.psi2(r),
        })
    }

    fn psi3(&self, r: f64) -> Result<f64> {
        Ok(match &self.imp {
            Imp::Poisson { gamma } => gauss(r - 1.0, *gamma),
            Imp::Dickman { gamma } => r * gauss(r, *gamma) - (r - 1.0) * gauss(r - 1.0, *gamma),
            Imp::Gamma { beta, gamma } => {
                let (b, g) = (*beta, *gamma);
                b / g * (r + b * g) * gauss(r, g)
            }
            Imp::CpExp { beta, gamma } => {
                let (b, g) = (*beta, *gamma);
                b / (g * g) * ((b * g + r).powi(2) - g) * gauss(r, g)
            }
            Imp::Quadrature(q) => return q.psi3(r),
        })
    }

    fn is_expensive(&self) -> bool {
        matches!(self.imp, Imp::Quadrature(_))
    }
}

/// `𝔡(t)` for a family: the Fourier transform of the bias measure.
pub fn bias_transform(spec: &FamilySpec, t: f64) -> Complex64 {
    let p = spec.params().as_slice();
    let it = Complex64::new(0.0, t);
    match spec.family() {
        Family::Poisson => Complex64::from_polar(1.0, t),
        Family::Dickman => {
            if t.abs() < 1e-4 {
                // (e^{it} - 1)/(it) = 1 + it/2 - t²/6 - it³/24 + ...
                Complex64::new(1.0 - t * t / 6.0, t / 2.0 - t * t * t / 24.0)
            } else {
                (Complex64::from_polar(1.0, t) - 1.0) / it
            }
        }
        Family::Gamma => p[1] / (p[1] - it),
        Family::CpExp => {
            let b = p[1];
            b / ((b - it) * (b - it))
        }
        Family::CpGamma => {
            let (a, b) = (p[1], p[2]);
            (a / b) * (Complex64::new(1.0, -t / b)).powf(-(a + 1.0))
        }
    }
}

/// Quadrature-backed kernels.
#[derive(Debug, Clone)]
struct QuadKernel {
    spec: FamilySpec,
    weight: FourierWeight,
    cfg: QuadratureConfig,
    t_max: f64,
    /// Extra breakpoints resolving narrow features of `𝔡` near the origin.
    breaks: Vec<f64>,
}

impl QuadKernel {
    fn new(spec: &FamilySpec, weight: FourierWeight, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let t_max = weight.truncation_point(1e-16);
        let p = spec.params().as_slice();
        let scale = match spec.family() {
            Family::Gamma | Family::CpExp => Some(p[1]),
            Family::CpGamma => Some(p[2]),
            Family::Poisson | Family::Dickman => None,
        };
        let mut breaks = Vec::new();
        if let Some(s) = scale {
            let mut b = s / 16.0;
            while b < t_max {
                breaks.push(b);
                b *= 2.0;
            }
        }
        Ok(QuadKernel {
            spec: spec.clone(),
            weight,
            cfg,
            t_max,
            breaks,
        })
    }

    /// `2 ∫₀^T g(t) dt` with `g` even in `t` and oscillating at frequency `r`.
    fn even_integral<F: FnMut(f64) -> f64>(&self, f: F, r: f64) -> Result<f64> {
        let pieces = ((r.abs() * self.t_max / (2.0 * PI)).ceil() as usize).clamp(1, 8192);
        let mut breaks: Vec<f64> = (1..pieces)
            .map(|i| self.t_max * i as f64 / pieces as f64)
            .chain(self.breaks.iter().copied())
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        quadrature::integrate_with_breaks(f, 0.0, self.t_max, &breaks, &self.cfg).map(|e| 2.0 * e.value)
    }

    fn psi1(&self, r: f64) -> Result<f64> {
        self.even_integral(|t| (t * r).cos() * self.weight.eval(t), r)
    }

    fn psi2(&self, r: f64) -> Result<f64> {
        if self.spec.family() == Family::CpGamma {
            if let FourierWeight::Gauss { gamma, .. } = self.weight {
                let p = self.spec.params().as_slice();
                return cpg_psi2(p[1], p[2], gamma, r, &self.cfg);
            }
        }
        self.even_integral(
            |t| bias_transform(&self.spec, t).norm_sqr() * (t * r).cos() * self.weight.eval(t),
            r,
        )
    }

    fn psi3(&self, r: f64) -> Result<f64> {
        if self.spec.family() == Family::CpGamma {
            let p = self.spec.params().as_slice();
            let psi1 = match self.weight {
                FourierWeight::Gauss { gamma, .. } => Psi1Closed::Gauss(gamma),
                FourierWeight::ExpAbs { gamma } => Psi1Closed::Cauchy(gamma),
            };
            return cpg_psi3(p[1], p[2], psi1, r, &self.cfg);
        }
        self.even_integral(
            |t| {
                let d = bias_transform(&self.spec, t);
                let (s, c) = (t * r).sin_cos();
                (d.re * c + d.im * s) * self.weight.eval(t)
            },
            r,
        )
    }
}

/// `Ψ₁` of the plain (prefactor-free) weights, used inside the `y`-integral
/// form of the compound Poisson `Ψ₃`.
#[derive(Debug, Clone, Copy)]
enum Psi1Closed {
    /// `exp(-u²/(2γ))`
    Gauss(f64),
    /// `γ²/(γ² + u²)`, the cosine transform of `(γ/2) e^{-γ|t|}`
    Cauchy(f64),
}

impl Psi1Closed {
    fn eval(self, u: f64) -> f64 {
        match self {
            Psi1Closed::Gauss(g) => gauss(u, g),
            Psi1Closed::Cauchy(g) => g * g / (g * g + u * u),
        }
    }
}

fn cpg_psi2(alpha: f64, beta: f64, gamma: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let weight = FourierWeight::Gauss {
        gamma,
        poly: crate::weight::GaussPrefactor::One,
    };
    let spec = FamilySpec::cp_gamma(1.0, alpha, beta)?;
    let k = QuadKernel::new(&spec, weight, *cfg)?;
    let c = (alpha / beta).powi(2);
    k.even_integral(
        |t| {
            let u = t / beta;
            c * (1.0 + u * u).powf(-(alpha + 1.0)) * (t * r).cos() * weight.eval(t)
        },
        r,
    )
}

/// `E[Y Ψ₁(r - Y)]` for `Y ~ Γ(α, β)` (rate), written as
/// `(α/β) E[Ψ₁(r - Z)]` with `Z ~ Γ(α + 1, β)`.
fn cpg_psi3(alpha: f64, beta: f64, psi1: Psi1Closed, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let shape = alpha + 1.0;
    let ln_norm = shape * beta.ln() - ln_gamma(shape);
    let density = |y: f64| {
        if y <= 0.0 {
            0.0
        } else {
            (ln_norm + alpha * y.ln() - beta * y).exp()
        }
    };
    let f = |y: f64| density(y) * psi1.eval(r - y);
    let mean = shape / beta;
    let sd = shape.sqrt() / beta;
    let mut breaks = vec![alpha / beta, mean, mean + 4.0 * sd];
    if r > 0.0 {
        breaks.push(r);
    }
    let split = breaks.iter().copied().fold(0.0, f64::max) + 4.0 * sd;
    breaks.sort_by(f64::total_cmp);
    let body = quadrature::integrate_with_breaks(f, 0.0, split, &breaks, cfg)?.value;
    let tail_cfg = QuadratureConfig {
        half_line_transform: quadrature::HalfLineTransform::Rational,
        ..*cfg
    };
    let tail = quadrature::integrate_half_line(|u| f(split + u * sd), &tail_cfg)? * sd;
    Ok(alpha / beta * (body + tail))
}

/// Standalone CPG kernels under the Gaussian weight: `(Ψ₂(r), Ψ₃(r))`.
pub fn cpg_psi_quadrature(alpha: f64, beta: f64, gamma: f64, r: f64) -> Result<(f64, f64)> {
    for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveParam { name, value });
        }
    }
    let cfg = QuadratureConfig::default();
    Ok((
        cpg_psi2(alpha, beta, gamma, r, &cfg)?,
        cpg_psi3(alpha, beta, Psi1Closed::Gauss(gamma), r, &cfg)?,
    ))
}

/// Largest log value accepted before declaring overflow.
const LN_MAX: f64 = 709.0;

/// Coefficients of the compound Poisson gamma Laplace statistic, for
/// estimated `(λ, α, β)` (gamma jumps in the rate convention) and tuning
/// parameter `γ`:
///
/// ```text
/// K₂(s) = e^{z} Γ(2α+3, z) / (α² β^{2α} (s+γ)^{2α+3})
/// K₁(s) = -e^{z} Γ(α+2, z) / (α β^{α} (s+γ)^{α+2}),   z = β(s+γ)
/// ```
///
/// They are `∫₀^∞ e^{-ts} 𝔢^{-k}(t) e^{-γt} dt` (with sign for `K₁`), where
/// `𝔢(t) = (α/β)(1+t/β)^{-(α+1)}` is the Laplace transform of `y g(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCoeffs {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl LaplaceCoeffs {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn ln_k2(&self, s: f64) -> Result<f64> {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let z = b * (s + g);
        let shape = 2.0 * a + 3.0;
        let v = z + ln_upper_incomplete_gamma(shape, z)? - 2.0 * a.ln() - 2.0 * a * b.ln() - shape * (s + g).ln();
        check_ln(v)
    }

    /// `ln |K₁(s)|`
    pub fn ln_abs_k1(&self, s: f64) -> Result<f64> {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let z = b * (s + g);
        let shape = a + 2.0;
        let v = z + ln_upper_incomplete_gamma(shape, z)? - a.ln() - a * b.ln() - shape * (s + g).ln();
        check_ln(v)
    }

    pub fn k2(&self, s: f64) -> Result<f64> {
        self.ln_k2(s).map(f64::exp)
    }

    pub fn k1(&self, s: f64) -> Result<f64> {
        self.ln_abs_k1(s).map(|v| -v.exp())
    }

    /// `𝔢(t) = E[Y e^{-tY}]`
    pub fn laplace_bias(&self, t: f64) -> f64 {
        self.alpha / self.beta * (1.0 + t / self.beta).powf(-(self.alpha + 1.0))
    }
}

fn check_ln(v: f64) -> Result<f64> {
    if v.is_finite() && v <= LN_MAX {
        Ok(v)
    } else {
        Err(Error::Overflow(v))
    }
}

/// Builds [`LaplaceCoeffs`] from estimated `(λ, α, β)`.
pub fn laplace_coeffs_cpg(est: &Params, gamma: f64) -> Result<LaplaceCoeffs> {
    crate::family::validate(Family::CpGamma, est)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::NonPositiveParam { name: "gamma", value: gamma });
    }
    let p = est.as_slice();
    Ok(LaplaceCoeffs {
        alpha: p[1],
        beta: p[2],
        gamma,
    })
}
