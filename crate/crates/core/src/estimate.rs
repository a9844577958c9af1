//! Method-of-moments estimators (variance divisor `n`).

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec};
use crate::sample::Sample;

/// Estimates the parameters of `family` from `sample`.
///
/// | family  | estimator |
/// |---------|-----------|
/// | Poisson | `λ̂ = x̄` |
/// | Dickman | `θ̂ = x̄` |
/// | gamma   | `α̂ = x̄²/s²`, `β̂ = x̄/s²` |
/// | CP exp  | `β̂ = 2x̄/s²`, `λ̂ = x̄β̂` |
/// | CP gamma| `B₂ = s²/x̄`, `B₃ = m₃/s²`; `α̂ = (B₃-2B₂)/(B₂-B₃)`, `β̂ = 1/(B₃-B₂)`, `λ̂ = x̄/(2B₂-B₃)` |
///
/// `m₃` is the central third moment. The CP gamma system follows from
/// `B₂ = E[Y²]/E[Y] = (α+1)/β` and `B₃ = E[Y³]/E[Y²] = (α+2)/β`.
pub fn estimate(family: Family, sample: &Sample) -> Result<FamilySpec> {
    let mean = sample.mean();
    let var = sample.variance();
    let need_mean = || {
        if mean > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateSample("sample mean is zero".into()))
        }
    };
    let need_var = || {
        if var > 0.0 {
            Ok(())
        } else {
            Err(Error::DegenerateSample(format!(
                "sample variance is zero (n = {})",
                sample.len()
            )))
        }
    };
    let params = match family {
        Family::Poisson | Family::Dickman => {
            need_mean()?;
            vec![mean]
        }
        Family::Gamma => {
            need_mean()?;
            need_var()?;
            vec![mean * mean / var, mean / var]
        }
        Family::CpExp => {
            need_mean()?;
            need_var()?;
            let beta = 2.0 * mean / var;
            vec![mean * beta, beta]
        }
        Family::CpGamma => {
            need_mean()?;
            need_var()?;
            let b2 = var / mean;
            let b3 = sample.third_central() / var;
            let alpha = (b3 - 2.0 * b2) / (b2 - b3);
            let beta = 1.0 / (b3 - b2);
            let lambda = mean / (2.0 * b2 - b3);
            let bad = [("lambda", lambda), ("alpha", alpha), ("beta", beta)]
                .into_iter()
                .find(|(_, v)| !(v.is_finite() && *v > 0.0));
            if let Some((name, v)) = bad {
                return Err(Error::InvalidMomentSolution(format!(
                    "{name} = {v} (x̄ = {mean}, s² = {var}, B₂ = {b2}, B₃ = {b3})"
                )));
            }
            vec![lambda, alpha, beta]
        }
    };
    FamilySpec::new(family, params).map_err(|e| Error::InvalidMomentSolution(e.to_string()))
}
