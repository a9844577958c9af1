//! Sampler moments and probabilities against their exact values, at
//! `n = 100 000` and three standard errors.

use iawd::sampling::{sample_dickman_with_depth, sample_null, AltFamily, AltSpec, RngStream};
use iawd::{FamilySpec, Sample};
use rand_chacha::ChaCha20Rng;

const N: usize = 100_000;

fn assert_mean(s: &Sample, mean: f64, var: f64, what: &str) {
    let se = (var / s.len() as f64).sqrt();
    let z = (s.mean() - mean) / se;
    assert!(z.abs() < 3.0, "{what}: mean {} vs {mean} ({z:.2} SE)", s.mean());
}

fn assert_prob(hits: usize, n: usize, p: f64, what: &str) {
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let z = (hits as f64 / n as f64 - p) / se;
    assert!(z.abs() < 3.0, "{what}: frequency {} vs {p} ({z:.2} SE)", hits as f64 / n as f64);
}

#[test]
fn compound_poisson_gamma_mean() {
    let spec = FamilySpec::cp_gamma(1.0, 1.0, 1.0).unwrap();
    let s = sample_null(&spec, N, RngStream::new(11, 0));
    assert_mean(&s, spec.mean(), spec.variance(), "CPG(1,1,1)");
}

#[test]
fn null_family_means() {
    let specs = [
        FamilySpec::poisson(0.3).unwrap(),
        FamilySpec::gamma(2.5, 0.5).unwrap(),
        FamilySpec::cp_exp(2.0, 3.0).unwrap(),
        FamilySpec::cp_gamma(0.5, 4.0, 2.0).unwrap(),
    ];
    for (i, spec) in specs.iter().enumerate() {
        let s = sample_null(spec, N, RngStream::new(12, i as u64));
        assert_mean(&s, spec.mean(), spec.variance(), &spec.to_string());
    }
}

#[test]
fn poisson_zero_probability() {
    let s = sample_null(&FamilySpec::poisson(5.0).unwrap(), N, RngStream::new(13, 0));
    let zeros = s.values().iter().filter(|&&x| x == 0.0).count();
    assert_prob(zeros, N, (-5.0f64).exp(), "Po(5) at 0");
}

#[test]
fn compound_poisson_zero_probability() {
    let s = sample_null(&FamilySpec::cp_exp(1.5, 2.0).unwrap(), N, RngStream::new(14, 0));
    let zeros = s.values().iter().filter(|&&x| x == 0.0).count();
    assert_prob(zeros, N, (-1.5f64).exp(), "CPExp atom at 0");
}

#[test]
fn dickman_mean_and_variance() {
    for (i, theta) in [1.0, 5.0].into_iter().enumerate() {
        let spec = FamilySpec::dickman(theta).unwrap();
        let s = sample_null(&spec, N, RngStream::new(15, i as u64));
        assert_mean(&s, theta, theta / 2.0, &format!("Dickman({theta})"));
        // cumulants κₖ = θ/k give μ₄ - σ⁴ = θ/4 + θ²/2
        let se_var = ((theta / 4.0 + theta * theta / 2.0) / N as f64).sqrt();
        let z = (s.variance() - theta / 2.0) / se_var;
        assert!(z.abs() < 3.0, "Dickman({theta}) variance {} ({z:.2} SE)", s.variance());
    }
}

#[test]
fn dickman_truncation_depth_is_burned_in() {
    use rand::SeedableRng;
    let theta = 5.0;
    let rng = ChaCha20Rng::seed_from_u64(16);
    let short = sample_dickman_with_depth(theta, N, 100, &mut rng.clone());
    let long = sample_dickman_with_depth(theta, N, 200, &mut rng.clone());
    let se = (theta / 2.0 / N as f64).sqrt();
    assert!((short.mean() - long.mean()).abs() < se, "{} vs {}", short.mean(), long.mean());
}

fn alt(family: AltFamily, params: &[f64]) -> AltSpec {
    AltSpec::new(family, params.to_vec()).unwrap()
}

#[test]
fn alternative_means_from_the_power_tables() {
    let cases = [
        (alt(AltFamily::DiscreteUniform, &[1.0]), 0.5),
        (alt(AltFamily::MixedCpExp, &[0.5, 1.0, 1.0, 4.0, 5.0]), 0.9),
        (alt(AltFamily::PoissonDeltaZero, &[0.9, 3.0]), 2.7),
    ];
    for (i, (a, mean)) in cases.iter().enumerate() {
        let (m, v) = a.moments().unwrap();
        assert!((m - mean).abs() < 1e-12, "{a}: {m}");
        let s = a.sample(N, RngStream::new(17, i as u64)).unwrap();
        assert_mean(&s, *mean, v, &a.label());
    }
}

#[test]
fn alternative_means_match_moments() {
    let cases = [
        alt(AltFamily::Binomial, &[2.0, 0.5]),
        alt(AltFamily::Binomial, &[10.0, 0.1]),
        alt(AltFamily::NegBinomial, &[1.0, 0.5]),
        alt(AltFamily::NegBinomial, &[3.0, 0.75]),
        alt(AltFamily::PoissonMixture, &[0.5, 1.0, 5.0]),
        alt(AltFamily::DiscreteWeibull, &[0.5, 1.0]),
        alt(AltFamily::DiscreteWeibull, &[0.8, 0.7]),
        alt(AltFamily::Weibull, &[0.5]),
        alt(AltFamily::Weibull, &[3.0, 2.0]),
        alt(AltFamily::InverseGaussian, &[0.5]),
        alt(AltFamily::InverseGaussian, &[3.0]),
        alt(AltFamily::LogNormal, &[0.8]),
        alt(AltFamily::Power, &[0.5]),
        alt(AltFamily::ShiftedPareto, &[5.0]),
        alt(AltFamily::MixedCpGamma, &[0.75, 1.0, 1.0, 3.0, 10.0, 5.0, 3.0]),
        alt(AltFamily::GammaAlt, &[0.5]),
        alt(AltFamily::GammaAlt, &[4.0, 2.0]),
    ];
    for (i, a) in cases.iter().enumerate() {
        let (m, v) = a.moments().unwrap();
        let s = a.sample(N, RngStream::new(18, i as u64)).unwrap();
        assert_mean(&s, m, v, &a.label());
        if a.family().is_discrete() {
            assert!(s.values().iter().all(|x| x.fract() == 0.0), "{a} not integer valued");
        }
    }
}

#[test]
fn survival_defined_alternatives() {
    let cases = [
        alt(AltFamily::Gompertz, &[0.5]),
        alt(AltFamily::Gompertz, &[2.0]),
        alt(AltFamily::LinearFailureRate, &[1.0]),
        alt(AltFamily::ShiftedPareto, &[1.5]),
        alt(AltFamily::Power, &[2.0]),
    ];
    for (i, a) in cases.iter().enumerate() {
        let s = a.sample(N, RngStream::new(19, i as u64)).unwrap();
        for x in [0.1, 0.5, 1.0] {
            let p = a.survival(x).unwrap();
            if p == 0.0 {
                continue;
            }
            let hits = s.values().iter().filter(|&&v| v > x).count();
            assert_prob(hits, N, p, &format!("{a} survival at {x}"));
        }
    }
}

#[test]
fn discrete_weibull_tail() {
    let a = alt(AltFamily::DiscreteWeibull, &[0.8, 0.7]);
    let s = a.sample(N, RngStream::new(20, 0)).unwrap();
    for k in [1.0f64, 2.0, 5.0] {
        let hits = s.values().iter().filter(|&&v| v >= k).count();
        assert_prob(hits, N, 0.8f64.powf(k.powf(0.7)), &format!("DW at {k}"));
    }
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let spec = FamilySpec::cp_exp(1.0, 1.0).unwrap();
    let a = sample_null(&spec, 100, RngStream::new(7, 3));
    let b = sample_null(&spec, 100, RngStream::new(7, 3));
    let c = sample_null(&spec, 100, RngStream::new(7, 4));
    assert_eq!(a, b);
    assert_ne!(a, c);
}
