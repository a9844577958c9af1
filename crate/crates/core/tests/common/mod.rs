//! Randomized cases shared by the oracle tests and the acceptance harness.
#![allow(dead_code)]

use iawd::sampling::{sample_null, RngStream};
use iawd::{Family, FamilySpec, Params, Sample, WeightSpec};
use rand::Rng;

pub const GAMMAS: [f64; 3] = [0.25, 1.0, 5.0];
pub const SIZES: [usize; 3] = [3, 10, 20];

pub struct TCase {
    pub spec: FamilySpec,
    pub weight: WeightSpec,
    pub sample: Sample,
}

pub struct UCase {
    pub est: Params,
    pub gamma: f64,
    pub sample: Sample,
}

fn random_spec<R: Rng>(family: Family, rng: &mut R) -> FamilySpec {
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    match family {
        Family::Poisson => FamilySpec::poisson(u(0.2, 10.0)),
        Family::Dickman => FamilySpec::dickman(u(0.2, 5.0)),
        Family::Gamma => FamilySpec::gamma(u(0.3, 5.0), u(0.3, 5.0)),
        Family::CpExp => FamilySpec::cp_exp(u(0.2, 5.0), u(0.3, 5.0)),
        Family::CpGamma => FamilySpec::cp_gamma(u(0.3, 3.0), u(0.3, 5.0), u(0.3, 5.0)),
    }
    .unwrap()
}

/// `count` cases cycling through `families`, with random parameters, `γ`
/// and `n`, each sample drawn from its own null law.
pub fn t_cases(families: &[Family], weight: fn(f64) -> WeightSpec, count: usize, seed: u64) -> Vec<TCase> {
    let mut rng = RngStream::new(seed, u64::MAX).rng();
    (0..count)
        .map(|i| {
            let spec = random_spec(families[i % families.len()], &mut rng);
            let gamma = GAMMAS[rng.random_range(0..GAMMAS.len())];
            let n = SIZES[rng.random_range(0..SIZES.len())];
            let sample = sample_null(&spec, n, RngStream::new(seed, i as u64));
            TCase {
                spec,
                weight: weight(gamma),
                sample,
            }
        })
        .collect()
}

pub fn u_cases(count: usize, seed: u64) -> Vec<UCase> {
    let mut rng = RngStream::new(seed, u64::MAX).rng();
    (0..count)
        .map(|i| {
            let spec = random_spec(Family::CpGamma, &mut rng);
            let gamma = GAMMAS[rng.random_range(0..GAMMAS.len())];
            let n = SIZES[rng.random_range(0..SIZES.len())];
            let sample = sample_null(&spec, n, RngStream::new(seed, i as u64));
            UCase {
                est: spec.params().clone(),
                gamma,
                sample,
            }
        })
        .collect()
}

pub fn gauss(gamma: f64) -> WeightSpec {
    WeightSpec::gauss(gamma).unwrap()
}

pub fn exp_abs(gamma: f64) -> WeightSpec {
    WeightSpec::exp_abs(gamma).unwrap()
}

/// Relative error with an absolute floor for values that are exactly zero.
pub fn rel_err(fast: f64, oracle: f64) -> f64 {
    (fast - oracle).abs() / oracle.abs().max(1e-12)
}
