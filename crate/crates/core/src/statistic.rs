//! The empirical statistics `T̂` (Fourier side) and `Û` (Laplace side,
//! compound Poisson gamma only).

use std::collections::HashMap;

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};
use crate::family::{BiasKind, Family, FamilySpec, Params};
use crate::kernels::{laplace_coeffs_cpg, KernelTriple, PsiKernel};
use crate::sample::Sample;

/// The constant `ĉ` multiplying `𝔡`: `x̄` for size-bias families, `λ̂` for
/// compound Poisson ones.
pub fn bias_constant(sample: &Sample, spec: &FamilySpec) -> f64 {
    match spec.family().bias_kind() {
        BiasKind::SizeBias => sample.mean(),
        BiasKind::CompoundPoisson => spec.params().as_slice()[0],
    }
}

/// `T̂ = n⁻¹ Σ_{k,l} [x_k x_l Ψ₁(d) + ĉ² Ψ₂(d) - 2 x_k ĉ Ψ₃(d)]`, `d = x_k - x_l`.
///
/// `spec` carries the estimated parameters; the kernels must have been
/// built for exactly the same spec.
pub fn t_statistic(sample: &Sample, spec: &FamilySpec, kernels: &KernelTriple) -> Result<f64> {
    if kernels.spec() != spec {
        return Err(Error::KernelMismatch {
            kernel: kernels.spec().to_string(),
            spec: spec.to_string(),
        });
    }
    t_statistic_with(sample, bias_constant(sample, spec), kernels)
}

/// [`t_statistic`] for an arbitrary kernel implementation and bias
/// constant `c`.
///
/// The double sum runs over unordered pairs of the sorted sample in fixed
/// row-major order with compensated accumulation, so the result is a pure
/// function of the multiset of observations. Evenness of `Ψ₁` and `Ψ₂`
/// means each pair costs one call to each of them and two to `Ψ₃`.
pub fn t_statistic_with<K: PsiKernel + ?Sized>(sample: &Sample, c: f64, kernels: &K) -> Result<f64> {
    let x = sample.values();
    let n = x.len();
    let mut memo: Option<HashMap<u64, [f64; 4]>> = kernels.is_expensive().then(HashMap::new);
    let mut eval = |d: f64| -> Result<[f64; 4]> {
        let compute = || -> Result<[f64; 4]> {
            Ok([kernels.psi1(d)?, kernels.psi2(d)?, kernels.psi3(d)?, kernels.psi3(-d)?])
        };
        match memo.as_mut() {
            Some(m) => {
                if let Some(v) = m.get(&d.to_bits()) {
                    return Ok(*v);
                }
                let v = compute()?;
                m.insert(d.to_bits(), v);
                Ok(v)
            }
            None => compute(),
        }
    };

    let p1_0 = kernels.psi1(0.0)?;
    let p2_0 = kernels.psi2(0.0)?;
    let p3_0 = kernels.psi3(0.0)?;
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let xk = x[k];
        acc.add(xk * xk * p1_0 + c * c * p2_0 - 2.0 * xk * c * p3_0);
        for &xl in &x[k + 1..] {
            let d = xk - xl;
            let [p1, p2, p3_d, p3_neg] = eval(d)?;
            acc.add(2.0 * (xk * xl * p1 + c * c * p2) - 2.0 * c * (xk * p3_d + xl * p3_neg));
        }
    }
    Ok(clamp(acc.value() / n as f64))
}

/// Floating-point cancellation can push a true zero slightly below zero.
fn clamp(v: f64) -> f64 {
    v.max(0.0)
}

/// `Û = n⁻¹ Σ_{j,k} [x_j x_k K₂(s) + 2λ̂ x_j K₁(s) + λ̂² / (s+γ)]`,
/// `s = x_j + x_k`, for compound Poisson gamma estimates `(λ̂, α̂, β̂)`.
pub fn u_statistic_cpg(sample: &Sample, est: &Params, gamma: f64) -> Result<f64> {
    let coeffs = laplace_coeffs_cpg(est, gamma)?;
    let lambda = est.as_slice()[0];
    let x = sample.values();
    let n = x.len();
    let mut memo1: HashMap<u64, f64> = HashMap::new();
    let mut memo2: HashMap<u64, f64> = HashMap::new();
    let mut k1 = |s: f64| -> Result<f64> {
        if let Some(v) = memo1.get(&s.to_bits()) {
            return Ok(*v);
        }
        let v = coeffs.k1(s)?;
        memo1.insert(s.to_bits(), v);
        Ok(v)
    };
    let mut k2 = |s: f64| -> Result<f64> {
        if let Some(v) = memo2.get(&s.to_bits()) {
            return Ok(*v);
        }
        let v = coeffs.k2(s)?;
        memo2.insert(s.to_bits(), v);
        Ok(v)
    };
    // terms with a zero factor are skipped rather than multiplied out: the
    // coefficients are largest near s = 0 and may overflow there
    let mut acc = CompensatedSum::new();
    for j in 0..n {
        let xj = x[j];
        let s = 2.0 * xj;
        let mut term = lambda * lambda / (s + gamma);
        if xj > 0.0 {
            term += xj * xj * k2(s)? + 2.0 * lambda * xj * k1(s)?;
        }
        acc.add(term);
        for &xl in &x[j + 1..] {
            let s = xj + xl;
            let mut term = lambda * lambda / (s + gamma);
            if s > 0.0 {
                term += lambda * s * k1(s)?;
                if xj > 0.0 {
                    term += xj * xl * k2(s)?;
                }
            }
            acc.add(2.0 * term);
        }
    }
    Ok(clamp(acc.value() / n as f64))
}

/// Which statistic a test uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatKind {
    /// Fourier-side `T̂`
    T,
    /// Laplace-side `Û` (compound Poisson gamma only)
    U,
}

impl StatKind {
    pub fn name(self) -> &'static str {
        match self {
            StatKind::T => "t",
            StatKind::U => "u",
        }
    }
}

impl std::str::FromStr for StatKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(StatKind::T),
            "u" => Ok(StatKind::U),
            other => Err(Error::InvalidConfig(format!("unknown statistic `{other}`"))),
        }
    }
}

/// Checks that `stat` can be used with `family` and `weight`.
pub fn check_combination(family: Family, weight: &crate::weight::WeightSpec, stat: StatKind) -> Result<()> {
    use crate::weight::WeightShape;
    match (stat, weight.shape()) {
        (StatKind::U, _) if family != Family::CpGamma => Err(Error::InvalidConfig(format!(
            "the Laplace statistic is only available for cpgamma, not {family}"
        ))),
        (StatKind::U, WeightShape::LaplaceExp) => Ok(()),
        (StatKind::U, shape) => Err(Error::InvalidWeight(format!(
            "the Laplace statistic needs the laplace weight, got {}",
            shape.name()
        ))),
        (StatKind::T, WeightShape::LaplaceExp) => Err(Error::InvalidWeight(
            "the Fourier statistic needs a gauss or expabs weight".into(),
        )),
        (StatKind::T, _) => Ok(()),
    }
}
