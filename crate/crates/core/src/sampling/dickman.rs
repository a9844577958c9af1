//! Generalized Dickman variates from the perpetuity `X = U^{1/θ}(1 + X)`.
//!
//! Unrolling the fixed point gives `X = Σ_{k≥1} Π_{i≤k} Uᵢ^{1/θ}`; a draw
//! keeps the first `m` terms. The expected `k`-th term is `(θ/(1+θ))^k`, so
//! the truncation bias falls geometrically in `m`. Summing in this order
//! (rather than iterating the recursion forward) puts the dominant factors
//! first, so two depths sharing a generator agree on the leading terms.

use rand::Rng;

use super::{open_uniform, RngStream};
use crate::sample::Sample;

/// Depth at which the expected truncated tail drops below `1e-16` of the
/// mean, never less than 128.
pub fn default_dickman_depth(theta: f64) -> usize {
    let ratio = theta / (1.0 + theta);
    let needed = ((1e-16 / (1.0 + theta)).ln() / ratio.ln()).ceil();
    (needed as usize).max(128)
}

/// One draw using `depth` terms.
pub fn draw_dickman<R: Rng + ?Sized>(theta: f64, depth: usize, rng: &mut R) -> f64 {
    let inv = 1.0 / theta;
    let mut prod = 1.0;
    let mut sum = 0.0;
    for _ in 0..depth {
        prod *= open_uniform(rng).powf(inv);
        sum += prod;
    }
    sum
}

pub fn sample_dickman(theta: f64, n: usize, stream: RngStream) -> Sample {
    sample_dickman_with_depth(theta, n, default_dickman_depth(theta), &mut stream.rng())
}

pub fn sample_dickman_with_depth<R: Rng + ?Sized>(theta: f64, n: usize, depth: usize, rng: &mut R) -> Sample {
    let values: Vec<f64> = (0..n).map(|_| draw_dickman(theta, depth, rng)).collect();
    Sample::new(values).expect("Dickman draws are finite and non-negative")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_grows_with_theta() {
        assert_eq!(default_dickman_depth(1.0), 128);
        assert!(default_dickman_depth(5.0) > 128);
        assert!(default_dickman_depth(50.0) > default_dickman_depth(5.0));
    }

    #[test]
    fn draws_are_non_negative() {
        let s = sample_dickman(0.3, 1000, RngStream::new(3, 0));
        assert!(s.min() >= 0.0);
    }
}
