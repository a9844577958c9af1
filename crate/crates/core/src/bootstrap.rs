//! Parametric bootstrap calibration.
//!
//! A full test estimates the parameters, draws `B` samples from the fitted
//! law, re-estimates and recomputes the statistic on each, and compares the
//! observed value to the empirical `(1-α)` quantile `T*_(⌈(1-α)B⌉)`.
//! Replicate `j` reads [`RngStream`] `(seed, j)`, so results do not depend
//! on how rayon schedules the work.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::estimate;
use crate::family::{Family, FamilySpec, Params};
use crate::kernels::KernelTriple;
use crate::sample::Sample;
use crate::sampling::{sample_null_from, RngStream, Source};
use crate::statistic::{check_combination, t_statistic, u_statistic_cpg, StatKind};
use crate::weight::WeightSpec;

/// Redraw budget per bootstrap replicate, as a multiple of `B`.
const REDRAW_FACTOR: usize = 10;

/// A test procedure: null family, weight and statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Procedure {
    pub family: Family,
    pub weight: WeightSpec,
    pub stat: StatKind,
}

/// A statistic evaluated on a sample together with the fitted null law.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    /// `None` when the sample is all zeros under a one-parameter size-bias
    /// null, where the fitted law is the point mass at zero.
    pub fitted: Option<FamilySpec>,
}

impl Procedure {
    pub fn new(family: Family, weight: WeightSpec, stat: StatKind) -> Result<Self> {
        check_combination(family, &weight, stat)?;
        Ok(Procedure { family, weight, stat })
    }

    /// Estimates the parameters from `sample` and evaluates the statistic.
    pub fn evaluate(&self, sample: &Sample) -> Result<Evaluated> {
        if sample.is_all_zero() && matches!(self.family, Family::Poisson | Family::Dickman) {
            // x̄ = 0 makes every term of the double sum vanish
            return Ok(Evaluated {
                value: 0.0,
                fitted: None,
            });
        }
        let spec = estimate(self.family, sample)?;
        let value = self.statistic_at(sample, &spec)?;
        Ok(Evaluated {
            value,
            fitted: Some(spec),
        })
    }

    /// Like [`Procedure::evaluate`], except that a statistic too large for
    /// `f64` comes back as `+∞` instead of an error. Used wherever only the
    /// ordering of statistics matters.
    fn evaluate_saturating(&self, sample: &Sample) -> Result<Evaluated> {
        if sample.is_all_zero() && matches!(self.family, Family::Poisson | Family::Dickman) {
            return self.evaluate(sample);
        }
        let spec = estimate(self.family, sample)?;
        let value = match self.statistic_at(sample, &spec) {
            Err(Error::Overflow(_)) => f64::INFINITY,
            other => other?,
        };
        Ok(Evaluated {
            value,
            fitted: Some(spec),
        })
    }

    /// The statistic with parameters fixed at `spec`.
    pub fn statistic_at(&self, sample: &Sample, spec: &FamilySpec) -> Result<f64> {
        match self.stat {
            StatKind::T => {
                let kernels = KernelTriple::new(spec, &self.weight)?;
                t_statistic(sample, spec, &kernels)
            }
            StatKind::U => u_statistic_cpg(sample, spec.params(), self.weight.gamma()),
        }
    }

    /// Draws from `fitted` until the statistic can be evaluated, giving up
    /// after `budget` failed attempts. Returns the value and the number of
    /// redraws.
    fn replicate(&self, fitted: &FamilySpec, n: usize, stream: RngStream, budget: usize) -> Result<(f64, usize)> {
        let mut rng = stream.rng();
        let mut redraws = 0;
        loop {
            let s = sample_null_from(fitted, n, &mut rng);
            match self.evaluate_saturating(&s) {
                Ok(e) => return Ok((e.value, redraws)),
                Err(Error::InvalidMomentSolution(_) | Error::DegenerateSample(_)) if redraws < budget => {
                    redraws += 1;
                }
                Err(Error::InvalidMomentSolution(_) | Error::DegenerateSample(_)) => {
                    return Err(Error::ReplicateBudgetExhausted { attempts: redraws + 1 })
                }
                Err(e) => return Err(e),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub critical_value: f64,
    pub family: Family,
    pub estimated: Params,
    #[serde(rename = "B")]
    pub b: usize,
    pub alpha: f64,
    pub seed: u64,
    pub rejected: bool,
    /// Samples discarded because the moment equations had no solution.
    pub redraws: usize,
    /// Bootstrap replicates in ascending order.
    #[serde(skip)]
    pub replicates: Vec<f64>,
}

impl TestOutcome {
    /// Critical value at another level, from the same replicates.
    pub fn critical_value_at(&self, alpha: f64) -> f64 {
        quantile_ceil(&self.replicates, alpha)
    }

    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.statistic > self.critical_value_at(alpha)
    }
}

/// `x_(⌈(1-α)m⌉)` of ascending `sorted`, with the index clamped to `[1, m]`.
/// Returns 0 for an empty slice.
pub fn quantile_ceil(sorted: &[f64], alpha: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let m = sorted.len();
    // the small offset keeps e.g. 0.9 * 200 = 180.00000000000003 at 180
    let k = ((1.0 - alpha) * m as f64 - 1e-9).ceil() as usize;
    sorted[k.clamp(1, m) - 1]
}

/// `(1 + #{T* ≥ T}) / (B + 1)`
pub fn p_value(replicates: &[f64], statistic: f64) -> f64 {
    let exceed = replicates.iter().filter(|&&r| r >= statistic).count();
    (1 + exceed) as f64 / (replicates.len() + 1) as f64
}

fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Full parametric bootstrap test of `sample` against `family`.
pub fn bootstrap_test(
    sample: &Sample,
    family: Family,
    weight: WeightSpec,
    stat: StatKind,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestOutcome> {
    Procedure::new(family, weight, stat)?.test(sample, b, alpha, seed)
}

fn is_estimation_error(e: &Error) -> bool {
    matches!(e, Error::InvalidMomentSolution(_) | Error::DegenerateSample(_))
}

impl Procedure {
    /// Full bootstrap test with `b` replicates at level `alpha`.
    ///
    /// A replicate whose statistic overflows counts as `+∞`. An observed
    /// statistic that overflows is an error here; power studies count it
    /// as a rejection instead.
    pub fn test(&self, sample: &Sample, b: usize, alpha: f64, seed: u64) -> Result<TestOutcome> {
        self.test_impl(sample, b, alpha, seed, false)
    }

    fn test_impl(&self, sample: &Sample, b: usize, alpha: f64, seed: u64, saturate: bool) -> Result<TestOutcome> {
        check_level(alpha)?;
        if b == 0 {
            return Err(Error::InvalidConfig("B must be at least 1".into()));
        }
        let observed = if saturate {
            self.evaluate_saturating(sample)
        } else {
            self.evaluate(sample)
        };
        let observed = observed.map_err(|e| {
            if is_estimation_error(&e) {
                Error::EstimationFailed(Box::new(e))
            } else {
                e
            }
        })?;
        let Some(fitted) = observed.fitted else {
            // every replicate from the point mass at zero is zero as well
            return Ok(TestOutcome {
                statistic: 0.0,
                p_value: 1.0,
                critical_value: 0.0,
                family: self.family,
                estimated: Params::new(vec![0.0]),
                b,
                alpha,
                seed,
                rejected: false,
                redraws: 0,
                replicates: vec![0.0; b],
            });
        };

        let budget = REDRAW_FACTOR * b;
        let n = sample.len();
        let results: Vec<(f64, usize)> = (0..b as u64)
            .into_par_iter()
            .map(|j| self.replicate(&fitted, n, RngStream::new(seed, j), budget))
            .collect::<Result<_>>()?;
        let redraws: usize = results.iter().map(|r| r.1).sum();
        if redraws > budget {
            return Err(Error::ReplicateBudgetExhausted { attempts: redraws });
        }
        let mut replicates: Vec<f64> = results.into_iter().map(|r| r.0).collect();
        replicates.sort_by(f64::total_cmp);

        let critical_value = quantile_ceil(&replicates, alpha);
        Ok(TestOutcome {
            statistic: observed.value,
            p_value: p_value(&replicates, observed.value),
            critical_value,
            family: self.family,
            estimated: fitted.params().clone(),
            b,
            alpha,
            seed,
            rejected: observed.value > critical_value,
            redraws,
            replicates,
        })
    }
}

/// What a power study does with a simulated data set that admits no
/// parameter estimate (the compound Poisson gamma moment equations have no
/// admissible root, or the sample is degenerate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailurePolicy {
    /// Draw a fresh data set from the same stream, so the rate is
    /// conditional on the estimate existing.
    #[default]
    Redraw,
    /// Count the repetition as a rejection.
    Reject,
    /// Count the repetition as a non-rejection.
    Accept,
}

/// Data-set draws allowed per repetition under [`FailurePolicy::Redraw`].
const MAX_DATA_DRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerEstimate {
    /// Rejections divided by repetitions.
    pub rate: f64,
    pub rejections: usize,
    pub repetitions: usize,
    /// Simulated data sets that admitted no parameter estimate, handled
    /// according to the [`FailurePolicy`].
    pub estimation_failures: usize,
    /// Bootstrap replicates redrawn for the same reason.
    pub redraws: usize,
}

enum Draw<T> {
    Done(T, usize),
    Failed(usize),
}

/// Draws data sets from `stream` and runs `eval` until it succeeds or the
/// policy gives up. Returns the result and the number of failed data sets.
fn with_policy<T>(
    source: &Source,
    n: usize,
    stream: RngStream,
    policy: FailurePolicy,
    eval: impl Fn(&Sample) -> Result<T>,
    is_failure: impl Fn(&Error) -> bool,
) -> Result<Draw<T>> {
    let mut rng = stream.rng();
    let mut failures = 0;
    loop {
        let data = source.sample_from(n, &mut rng)?;
        match eval(&data) {
            Ok(t) => return Ok(Draw::Done(t, failures)),
            Err(e) if is_failure(&e) => {
                failures += 1;
                if policy != FailurePolicy::Redraw {
                    return Ok(Draw::Failed(failures));
                }
                if failures >= MAX_DATA_DRAWS {
                    return Err(Error::ReplicateBudgetExhausted { attempts: failures });
                }
            }
            Err(e) => return Err(e),
        }
    }
}

impl PowerEstimate {
    /// Tallies per-repetition outcomes: `Some(rejected)` or `None` for a
    /// data set left without an estimate.
    fn tally(outcomes: &[Option<bool>], failures: usize, redraws: usize, policy: FailurePolicy) -> Self {
        let reps = outcomes.len();
        let rejections = outcomes
            .iter()
            .filter(|o| match o {
                Some(r) => *r,
                None => policy == FailurePolicy::Reject,
            })
            .count();
        PowerEstimate {
            rate: rejections as f64 / reps as f64,
            rejections,
            repetitions: reps,
            estimation_failures: failures,
            redraws,
        }
    }
}

/// Observed and bootstrap statistic plus replicate redraws, or `None` for
/// a data set left without an estimate; then the number of failed data sets.
type WarpRep = (Option<(f64, f64, usize)>, usize);

/// Warp-speed power estimate: one bootstrap replicate per repetition, all
/// replicates pooled into a single critical value.
///
/// Repetition `r` draws its data from stream `(seed, 2r)` and its bootstrap
/// sample from stream `(seed, 2r + 1)`.
pub fn warp_speed_power(
    source: &Source,
    procedure: &Procedure,
    n: usize,
    reps: usize,
    alpha: f64,
    seed: u64,
    policy: FailurePolicy,
) -> Result<PowerEstimate> {
    check_level(alpha)?;
    if reps < 50 {
        return Err(Error::InvalidConfig(format!("warp speed needs at least 50 repetitions, got {reps}")));
    }
    let budget = REDRAW_FACTOR * reps;
    let per_rep: Vec<WarpRep> = (0..reps as u64)
        .into_par_iter()
        .map(|r| -> Result<_> {
            let eval = |data: &Sample| procedure.evaluate_saturating(data);
            let observed = match with_policy(source, n, RngStream::new(seed, 2 * r), policy, eval, is_estimation_error)? {
                Draw::Done(e, failures) => (e, failures),
                Draw::Failed(failures) => return Ok((None, failures)),
            };
            let (star, redraws) = match &observed.0.fitted {
                Some(fitted) => procedure.replicate(fitted, n, RngStream::new(seed, 2 * r + 1), budget)?,
                None => (0.0, 0),
            };
            Ok((Some((observed.0.value, star, redraws)), observed.1))
        })
        .collect::<Result<_>>()?;

    let redraws: usize = per_rep.iter().filter_map(|x| x.0).map(|x| x.2).sum();
    if redraws > budget {
        return Err(Error::ReplicateBudgetExhausted { attempts: redraws });
    }
    let mut stars: Vec<f64> = per_rep.iter().filter_map(|x| x.0).map(|x| x.1).collect();
    stars.sort_by(f64::total_cmp);
    let critical = quantile_ceil(&stars, alpha);
    let outcomes: Vec<Option<bool>> = per_rep.iter().map(|x| x.0.map(|o| o.0 > critical)).collect();
    let failures = per_rep.iter().map(|x| x.1).sum();
    Ok(PowerEstimate::tally(&outcomes, failures, redraws, policy))
}

/// Power by repeating the full bootstrap test: repetition `r` draws its data
/// from stream `(seed, r)` and bootstraps with the seed derived from
/// `(seed, r)`.
#[allow(clippy::too_many_arguments)]
pub fn full_bootstrap_power(
    source: &Source,
    procedure: &Procedure,
    n: usize,
    reps: usize,
    b: usize,
    alpha: f64,
    seed: u64,
    policy: FailurePolicy,
) -> Result<PowerEstimate> {
    check_level(alpha)?;
    let per_rep: Vec<(Option<(bool, usize)>, usize)> = (0..reps as u64)
        .into_par_iter()
        .map(|r| -> Result<_> {
            let boot_seed = RngStream::derive_seed(seed, &[r]);
            let eval = |data: &Sample| procedure.test_impl(data, b, alpha, boot_seed, true);
            let is_failure = |e: &Error| matches!(e, Error::EstimationFailed(_));
            Ok(match with_policy(source, n, RngStream::new(seed, r), policy, eval, is_failure)? {
                Draw::Done(o, failures) => (Some((o.rejected, o.redraws)), failures),
                Draw::Failed(failures) => (None, failures),
            })
        })
        .collect::<Result<_>>()?;
    let outcomes: Vec<Option<bool>> = per_rep.iter().map(|x| x.0.map(|o| o.0)).collect();
    let failures = per_rep.iter().map(|x| x.1).sum();
    let redraws = per_rep.iter().filter_map(|x| x.0).map(|o| o.1).sum();
    Ok(PowerEstimate::tally(&outcomes, failures, redraws, policy))
}
