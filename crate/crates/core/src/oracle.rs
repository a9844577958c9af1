//! Brute-force reference values.
//!
//! Everything here integrates the squared empirical discrepancy directly
//! over the frequency axis and never touches the kernel module. It is slow
//! on purpose and exists to check the fast paths.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec, Params};
use crate::quadrature::{self, HalfLineTransform, QuadratureConfig};
use crate::sample::Sample;
use crate::weight::{WeightShape, WeightSpec};

/// Tight tolerances and a large budget.
pub fn oracle_config() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-11,
        max_subdivisions: 20_000,
        half_line_transform: HalfLineTransform::Rational,
    }
}

/// `𝔡(t)` written out in real and imaginary parts.
pub fn d_oracle(spec: &FamilySpec, t: f64) -> Complex64 {
    let p = spec.params().as_slice();
    match spec.family() {
        Family::Poisson => Complex64::new(t.cos(), t.sin()),
        Family::Dickman => {
            if t == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(t.sin() / t, (1.0 - t.cos()) / t)
            }
        }
        Family::Gamma => {
            let b = p[1];
            let den = b * b + t * t;
            Complex64::new(b * b / den, b * t / den)
        }
        Family::CpExp => {
            // β/(β-it)² = β(β+it)²/(β²+t²)²
            let b = p[1];
            let den = (b * b + t * t).powi(2);
            Complex64::new(b * (b * b - t * t) / den, 2.0 * b * b * t / den)
        }
        Family::CpGamma => {
            let (a, b) = (p[1], p[2]);
            let modulus = (a / b) * (1.0 + (t / b).powi(2)).powf(-(a + 1.0) / 2.0);
            let arg = (a + 1.0) * (t / b).atan();
            Complex64::new(modulus * arg.cos(), modulus * arg.sin())
        }
    }
}

/// `ω(t)` with the same normalizing constants as the kernel module.
pub fn omega_oracle(spec: &FamilySpec, weight: &WeightSpec, t: f64) -> Result<f64> {
    let g = weight.gamma();
    let p = spec.params().as_slice();
    match weight.shape() {
        WeightShape::ExpAbs => Ok(g / 2.0 * (-g * t.abs()).exp()),
        WeightShape::GaussFamily => {
            let poly = match spec.family() {
                Family::Poisson | Family::CpGamma => 1.0,
                Family::Dickman => g * t * t,
                Family::Gamma => p[1] * p[1] + t * t,
                Family::CpExp => (p[1] * p[1] + t * t).powi(2),
            };
            Ok((g / (2.0 * PI)).sqrt() * poly * (-g * t * t / 2.0).exp())
        }
        WeightShape::LaplaceExp => Err(Error::InvalidWeight("laplace weight is half-line only".into())),
    }
}

/// Where `ω` has dropped below `1e-16` of its peak for good.
fn truncation<F: Fn(f64) -> f64>(omega: F) -> f64 {
    let mut peak: f64 = 0.0;
    let mut t = 0.0;
    while t < 50.0 {
        peak = peak.max(omega(t));
        t += 0.01;
    }
    let mut t_max = 1.0;
    loop {
        let tail_max = (0..200)
            .map(|i| omega(t_max * (1.0 + i as f64 / 50.0)))
            .fold(0.0, f64::max);
        if tail_max < 1e-16 * peak {
            return t_max;
        }
        t_max *= 1.25;
    }
}

fn c_hat(sample: &Sample, spec: &FamilySpec) -> f64 {
    match spec.family() {
        Family::Poisson | Family::Dickman | Family::Gamma => sample.mean(),
        Family::CpExp | Family::CpGamma => spec.params().as_slice()[0],
    }
}

/// `|D̂ₜ|² = n⁻¹ |Σⱼ (xⱼ - ĉ 𝔡(t)) e^{itxⱼ}|²`
pub fn discrepancy_sq(sample: &Sample, spec: &FamilySpec, c: f64, t: f64) -> f64 {
    let d = d_oracle(spec, t);
    let mut sum = Complex64::new(0.0, 0.0);
    for &x in sample.values() {
        sum += (Complex64::new(x, 0.0) - c * d) * Complex64::new((t * x).cos(), (t * x).sin());
    }
    sum.norm_sqr() / sample.len() as f64
}

/// `∫ |D̂ₜ|² ω(t) dt` with `ĉ` chosen by the family.
pub fn t_statistic_oracle(sample: &Sample, spec: &FamilySpec, weight: &WeightSpec, cfg: &QuadratureConfig) -> Result<f64> {
    omega_oracle(spec, weight, 0.0)?;
    let omega = |t: f64| omega_oracle(spec, weight, t).unwrap_or(0.0);
    t_statistic_oracle_with(sample, spec, c_hat(sample, spec), omega, cfg)
}

/// Same as [`t_statistic_oracle`] for an arbitrary even weight `omega` and
/// bias constant `c`.
pub fn t_statistic_oracle_with<W: Fn(f64) -> f64>(
    sample: &Sample,
    spec: &FamilySpec,
    c: f64,
    omega: W,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let t_max = truncation(&omega);
    let freq = sample.max() + 1.0;
    let pieces = ((2.0 * t_max * freq / PI).ceil() as usize).max(2);
    let breaks: Vec<f64> = (1..pieces)
        .map(|i| -t_max + 2.0 * t_max * i as f64 / pieces as f64)
        .collect();
    quadrature::integrate_with_breaks(
        |t| discrepancy_sq(sample, spec, c, t) * omega(t),
        -t_max,
        t_max,
        &breaks,
        cfg,
    )
    .map(|e| e.value)
}

/// The defining integrals `(Ψ₁(r), Ψ₂(r), Ψ₃(r))` over the whole real line.
pub fn psi_oracle(spec: &FamilySpec, weight: &WeightSpec, r: f64, cfg: &QuadratureConfig) -> Result<[f64; 3]> {
    omega_oracle(spec, weight, 0.0)?;
    let omega = |t: f64| omega_oracle(spec, weight, t).unwrap_or(0.0);
    let t_max = truncation(omega);
    let pieces = ((2.0 * t_max * (r.abs() + 1.0) / PI).ceil() as usize).max(2);
    let breaks: Vec<f64> = (1..pieces)
        .map(|i| -t_max + 2.0 * t_max * i as f64 / pieces as f64)
        .collect();
    let integrate = |f: &dyn Fn(f64) -> f64| {
        quadrature::integrate_with_breaks(f, -t_max, t_max, &breaks, cfg).map(|e| e.value)
    };
    let psi1 = integrate(&|t| (t * r).cos() * omega(t))?;
    let psi2 = integrate(&|t| d_oracle(spec, t).norm_sqr() * (t * r).cos() * omega(t))?;
    let psi3 = integrate(&|t| {
        let z = d_oracle(spec, t) * Complex64::new((t * r).cos(), -(t * r).sin());
        z.re * omega(t)
    })?;
    Ok([psi1, psi2, psi3])
}

/// `𝔢(t) = E[Y e^{-tY}]` for `Y ~ Γ(α, β)` in the rate convention.
pub fn e_oracle(alpha: f64, beta: f64, t: f64) -> f64 {
    alpha / beta * (beta / (beta + t)).powf(alpha + 1.0)
}

/// `∫₀^∞ |Êₜ|² 𝔢⁻²(t) e^{-γt} dt` with `Êₜ = n^{-1/2} Σⱼ (xⱼ - λ̂𝔢(t)) e^{-txⱼ}`.
pub fn u_statistic_oracle(sample: &Sample, est: &Params, gamma: f64, cfg: &QuadratureConfig) -> Result<f64> {
    crate::family::validate(Family::CpGamma, est)?;
    let p = est.as_slice();
    let (lambda, alpha, beta) = (p[0], p[1], p[2]);
    let n = sample.len() as f64;
    let f = |t: f64| {
        let e = e_oracle(alpha, beta, t);
        let s: f64 = sample.values().iter().map(|&x| (x - lambda * e) * (-t * x).exp()).sum();
        s * s / n / (e * e) * (-gamma * t).exp()
    };
    quadrature::integrate_half_line(f, cfg)
}
