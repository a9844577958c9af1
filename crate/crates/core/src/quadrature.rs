//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! Intervals are kept in a max-heap keyed by their error estimate and the
//! worst one is bisected until the summed error meets the tolerance.
//! Infinite ranges are mapped to finite ones, see [`HalfLineTransform`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::accum::CompensatedSum;
use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_272_890_810,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Cap on the number of initial pieces requested through breakpoints.
const MAX_INITIAL_PIECES: usize = 8192;

/// How `(0, ∞)` is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfLineTransform {
    /// `t = u / (1 - u)` on `u ∈ (0, 1)`, then adaptive Gauss–Kronrod.
    #[default]
    Rational,
    /// `t = -ln u` on `u ∈ (0, 1)`, then adaptive Gauss–Kronrod. Suited to
    /// integrands with exponential decay.
    ExpMap,
    /// 64-point Gauss–Laguerre applied to `f(t) eᵗ`, with the 32-point rule
    /// as error estimate. Not adaptive; only for smooth, non-oscillating
    /// integrands that decay like `e^{-t}`.
    Laguerre,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub half_line_transform: HalfLineTransform,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 200,
            half_line_transform: HalfLineTransform::Rational,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_subdivisions >= 10;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "quadrature tolerances must be > 0 and max_subdivisions >= 10, got {self:?}"
            )))
        }
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..self
        }
    }

    pub fn with_max_subdivisions(self, max_subdivisions: usize) -> Self {
        QuadratureConfig {
            max_subdivisions,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn totals(heap: &BinaryHeap<Piece>) -> (f64, f64) {
    let mut v = CompensatedSum::new();
    let mut e = CompensatedSum::new();
    for p in heap.iter() {
        v.add(p.value);
        e.add(p.error);
    }
    (v.value(), e.value())
}

/// Integrates `f` over `[a, b]`, starting from the partition given by the
/// sorted interior `breaks`. `max_subdivisions` bounds the bisections made
/// after the initial partition.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut points = Vec::with_capacity(breaks.len() + 2);
    points.push(lo);
    points.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    points.push(hi);

    let mut heap = BinaryHeap::with_capacity(points.len() + cfg.max_subdivisions + 1);
    let mut evaluations = 0;
    for w in points.windows(2) {
        let (value, error) = gk21(&mut f, w[0], w[1]);
        evaluations += 21;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&heap);
        if !value.is_finite() {
            return Err(Error::NoConvergence {
                value,
                error,
                subdivisions,
            });
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Estimate {
                value: sign * value,
                error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one piece");
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= cfg.max_subdivisions || mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Err(Error::NoConvergence {
                value: sign * value,
                error,
                subdivisions,
            });
        }
        subdivisions += 1;
        for (l, r) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk21(&mut f, l, r);
            evaluations += 21;
            heap.push(Piece {
                a: l,
                b: r,
                value,
                error,
            });
        }
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_with_breaks(f, a, b, &[], cfg).map(|e| e.value)
}

/// Integrates a cosine/sine-modulated integrand over `[0, t_max]` with an
/// initial partition fine enough that every piece spans at most about one
/// period of `cos(r t)`.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    f: F,
    t_max: f64,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let pieces = ((r.abs() * t_max / std::f64::consts::TAU).ceil() as usize).clamp(1, MAX_INITIAL_PIECES);
    let breaks: Vec<f64> = (1..pieces)
        .map(|i| t_max * i as f64 / pieces as f64)
        .collect();
    integrate_with_breaks(f, 0.0, t_max, &breaks, cfg).map(|e| e.value)
}

/// Integrates `f` over `(0, ∞)` using `cfg.half_line_transform`.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    match cfg.half_line_transform {
        HalfLineTransform::Rational => integrate(
            |u| {
                let v = 1.0 - u;
                f(u / v) / (v * v)
            },
            0.0,
            1.0,
            cfg,
        ),
        HalfLineTransform::ExpMap => integrate(|u| f(-u.ln()) / u, 0.0, 1.0, cfg),
        HalfLineTransform::Laguerre => {
            let fine = laguerre_rule(64)
                .iter()
                .map(|&(x, w)| w * f(x))
                .collect::<CompensatedSum>()
                .value();
            let coarse = laguerre_rule(32)
                .iter()
                .map(|&(x, w)| w * f(x))
                .collect::<CompensatedSum>()
                .value();
            let error = (fine - coarse).abs();
            if error <= cfg.abs_tol.max(cfg.rel_tol * fine.abs()) {
                Ok(fine)
            } else {
                Err(Error::NoConvergence {
                    value: fine,
                    error,
                    subdivisions: 0,
                })
            }
        }
    }
}

/// Integrates `f` over the whole real line as the half-line integral of
/// `f(t) + f(-t)`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_half_line(|t| f(t) + f(-t), cfg)
}

/// Nodes and weights `(xᵢ, wᵢ e^{xᵢ})` of the n-point Gauss–Laguerre rule,
/// so that `Σ wᵢ f(xᵢ) ≈ ∫₀^∞ f(t) dt`.
fn laguerre_rule(n: usize) -> &'static [(f64, f64)] {
    static R32: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static R64: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match n {
        32 => R32.get_or_init(|| compute_laguerre(32)),
        64 => R64.get_or_init(|| compute_laguerre(64)),
        _ => unreachable!("only 32 and 64 point rules are tabulated"),
    }
}

fn compute_laguerre(n: usize) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        // Initial guesses as in the classical Newton scheme for Laguerre zeros.
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - out[i - 2].0)
            }
        };
        let mut ln_w = 0.0;
        for _ in 0..200 {
            // p1 = L_n(z), p2 = L_{n-1}(z)
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            let pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            // w = 1 / (z L'_n(z)²)
            ln_w = -(z * pp * pp).ln();
            if (z - z1).abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        out.push((z, (ln_w + z).exp()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate_real_line(|t| (-0.5 * t * t).exp(), &cfg()).unwrap();
        assert!(rel(v, (2.0 * PI).sqrt()) < 1e-8);
    }

    #[test]
    fn gaussian_fourier_pair() {
        let v = integrate_real_line(|t| t.cos() * (-0.5 * t * t).exp(), &cfg()).unwrap();
        assert!(rel(v, (2.0 * PI).sqrt() * (-0.5f64).exp()) < 1e-8);
    }

    #[test]
    fn algebraic_decay() {
        let v = integrate_real_line(|t| (1.0 + t * t).powi(-2), &cfg()).unwrap();
        assert!(rel(v, PI / 2.0) < 1e-8);
    }

    #[test]
    fn half_line_examples_for_every_transform() {
        for transform in [
            HalfLineTransform::Rational,
            HalfLineTransform::ExpMap,
            HalfLineTransform::Laguerre,
        ] {
            let c = QuadratureConfig {
                half_line_transform: transform,
                ..cfg()
            };
            let one = integrate_half_line(|t| (-t).exp(), &c).unwrap();
            assert!(rel(one, 1.0) < 1e-8, "{transform:?}");
            let mean = integrate_half_line(|t| t * (-t).exp(), &c).unwrap();
            assert!(rel(mean, 1.0) < 1e-8, "{transform:?}");
        }
        let g = integrate_half_line(|y: f64| y.powf(1.5) * (-y).exp(), &cfg()).unwrap();
        let reference = crate::special::upper_incomplete_gamma(2.5, 0.0).unwrap();
        assert!(rel(g, reference) < 1e-8);
        assert!((g - 1.329_340).abs() < 1e-6);
    }

    #[test]
    fn laguerre_nodes_integrate_polynomials_exactly() {
        let rule = compute_laguerre(32);
        // ∫ t^k e^{-t} dt = k!
        for (k, fact) in [(0, 1.0), (3, 6.0), (7, 5040.0)] {
            let s: f64 = rule
                .iter()
                .map(|&(x, w)| w * (-x).exp() * x.powi(k))
                .sum();
            assert!(rel(s, fact) < 1e-12, "k={k}: {s}");
        }
    }

    #[test]
    fn budget_exhaustion_reports_no_convergence() {
        let c = cfg().with_tolerances(1e-15, 1e-15).with_max_subdivisions(10);
        let err = integrate(|t: f64| (1.0 / t).sin(), 1e-6, 1.0, &c).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { subdivisions: 10, .. }));
    }

    #[test]
    fn invalid_config_rejected() {
        let c = cfg().with_max_subdivisions(5);
        assert!(integrate(|t| t, 0.0, 1.0, &c).is_err());
    }

    #[test]
    fn oscillatory_cosine_transform() {
        // ∫₀^T cos(rt) e^{-t²/2} dt → √(π/2) e^{-r²/2} as T grows
        for r in [0.0, 3.0, 25.0] {
            let v = integrate_oscillatory(|t| (r * t).cos() * (-0.5 * t * t).exp(), 9.0, r, &cfg()).unwrap();
            let exact = (PI / 2.0).sqrt() * (-0.5 * r * r).exp();
            assert!((v - exact).abs() < 1e-10, "r={r}: {v} vs {exact}");
        }
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate(|t| t * t, 0.0, 2.0, &cfg()).unwrap();
        let b = integrate(|t| t * t, 2.0, 0.0, &cfg()).unwrap();
        assert!(rel(a, 8.0 / 3.0) < 1e-14);
        assert_eq!(a, -b);
    }
}
