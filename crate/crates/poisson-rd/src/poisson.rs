//! Homogeneous Poisson sampling in timing and interval descriptions.
//!
//! Patterns are sampled by cumulative exponential gaps, which forces the
//! strict ordering invariant by construction (ties cannot occur in the
//! continuous model; the zero-gap float corner case is resampled). All
//! stochastic operations take an explicit seed and use ChaCha8, so results
//! are reproducible across platforms. Normalization by the duration is an
//! explicit operation, never implicit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PoissonError {
    #[error("rate must be nonnegative and finite")]
    InvalidRate,
    #[error("rate must be positive and finite")]
    NonPositiveRate,
    #[error("duration must be positive and finite")]
    InvalidDuration,
    #[error("timings must be strictly increasing within (0, T)")]
    InvalidTimings,
    #[error("intervals must be positive and finite")]
    InvalidIntervals,
    #[error("interval sum {sum} reaches or exceeds the duration {duration}")]
    IntervalSumExceedsDuration { sum: f64, duration: f64 },
    #[error("signed intervals must be nonzero and finite")]
    InvalidSignedValues,
    #[error("operation requires at least one value")]
    Empty,
}

/// Timing description of a point-process realization: strictly increasing
/// event times in (0, T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPattern {
    #[serde(rename = "T")]
    duration: f64,
    timings: Vec<f64>,
}

impl PointPattern {
    pub fn new(duration: f64, timings: Vec<f64>) -> Result<Self, PoissonError> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(PoissonError::InvalidDuration);
        }
        let mut prev = 0.0;
        for &t in &timings {
            if !(t.is_finite() && t > prev && t < duration) {
                return Err(PoissonError::InvalidTimings);
            }
            prev = t;
        }
        Ok(Self { duration, timings })
    }

    pub fn empty(duration: f64) -> Result<Self, PoissonError> {
        Self::new(duration, Vec::new())
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn timings(&self) -> &[f64] {
        &self.timings
    }

    pub fn count(&self) -> usize {
        self.timings.len()
    }

    /// Timings divided by the duration, mapping the pattern into (0,1)^n.
    pub fn normalized(&self) -> PointPattern {
        PointPattern {
            duration: 1.0,
            timings: self.timings.iter().map(|t| t / self.duration).collect(),
        }
    }
}

/// Inter-event intervals (exponential under the Poisson model) together
/// with the rate they were generated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalVector {
    pub lambda: f64,
    pub intervals: Vec<f64>,
}

impl IntervalVector {
    pub fn new(lambda: f64, intervals: Vec<f64>) -> Result<Self, PoissonError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(PoissonError::NonPositiveRate);
        }
        if !intervals.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(PoissonError::InvalidIntervals);
        }
        Ok(Self { lambda, intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn concentration_check(&self, epsilon: f64) -> Result<ConcentrationReport, PoissonError> {
        concentration_check(&self.intervals, self.lambda, epsilon)
    }
}

/// Sign-labeled inter-event intervals (Laplacian under the Poisson model).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedIntervalVector {
    pub lambda: f64,
    pub values: Vec<f64>,
}

impl SignedIntervalVector {
    pub fn new(lambda: f64, values: Vec<f64>) -> Result<Self, PoissonError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(PoissonError::NonPositiveRate);
        }
        if !values.iter().all(|v| v.is_finite() && *v != 0.0) {
            return Err(PoissonError::InvalidSignedValues);
        }
        Ok(Self { lambda, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn concentration_check(&self, epsilon: f64) -> Result<ConcentrationReport, PoissonError> {
        concentration_check(&self.values, self.lambda, epsilon)
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One exponential gap by inverse CDF; the measure-zero zero-gap corner is
/// resampled to keep orderings strict.
fn exponential_gap(rng: &mut ChaCha8Rng, lambda: f64) -> f64 {
    loop {
        let u: f64 = rng.random();
        let gap = -(1.0 - u).ln() / lambda;
        if gap > 0.0 {
            return gap;
        }
    }
}

/// Samples a homogeneous Poisson realization of rate `lambda` on [0, T] by
/// cumulative exponential gaps. A zero rate yields the empty pattern.
pub fn sample_homogeneous(
    lambda: f64,
    duration: f64,
    seed: u64,
) -> Result<PointPattern, PoissonError> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(PoissonError::InvalidRate);
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(PoissonError::InvalidDuration);
    }
    if lambda == 0.0 {
        return PointPattern::empty(duration);
    }
    let mut rng = rng_for(seed);
    let mut timings = Vec::new();
    let mut t = exponential_gap(&mut rng, lambda);
    while t < duration {
        timings.push(t);
        t += exponential_gap(&mut rng, lambda);
    }
    PointPattern::new(duration, timings)
}

/// Samples a pattern with exactly `n` points: conditional on the count,
/// homogeneous Poisson timings are the order statistics of n uniforms.
pub fn sample_conditional(n: usize, duration: f64, seed: u64) -> Result<PointPattern, PoissonError> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(PoissonError::InvalidDuration);
    }
    let mut rng = rng_for(seed);
    loop {
        let mut timings: Vec<f64> = (0..n)
            .map(|_| loop {
                let u: f64 = rng.random();
                if u > 0.0 {
                    return u * duration;
                }
            })
            .collect();
        timings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Duplicate draws have probability ~2^-53 per pair; resample.
        if timings.windows(2).all(|w| w[0] < w[1]) {
            return PointPattern::new(duration, timings);
        }
    }
}

/// Samples i.i.d. Laplacian values as exponential magnitudes with
/// equiprobable signs.
pub fn sample_laplacian(
    n: usize,
    lambda: f64,
    seed: u64,
) -> Result<SignedIntervalVector, PoissonError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(PoissonError::NonPositiveRate);
    }
    let mut rng = rng_for(seed);
    let values = (0..n)
        .map(|_| {
            let magnitude = exponential_gap(&mut rng, lambda);
            if rng.random::<bool>() {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect();
    SignedIntervalVector::new(lambda, values)
}

/// Interval description of a pattern: `tau_i = t_i - t_{i-1}` with
/// `t_0 = 0`. The trailing gap `T - t_n` is not part of the description.
pub fn timings_to_intervals(
    pattern: &PointPattern,
    lambda: f64,
) -> Result<IntervalVector, PoissonError> {
    let mut prev = 0.0;
    let intervals = pattern
        .timings()
        .iter()
        .map(|&t| {
            let tau = t - prev;
            prev = t;
            tau
        })
        .collect();
    IntervalVector::new(lambda, intervals)
}

/// Reconstructs the timing description; the interval sum must stay below
/// the duration.
pub fn intervals_to_timings(
    iv: &IntervalVector,
    duration: f64,
) -> Result<PointPattern, PoissonError> {
    let mut t = 0.0;
    let mut timings = Vec::with_capacity(iv.len());
    for &tau in &iv.intervals {
        t += tau;
        timings.push(t);
    }
    if let Some(&last) = timings.last() {
        if last >= duration {
            return Err(PoissonError::IntervalSumExceedsDuration {
                sum: last,
                duration,
            });
        }
    }
    PointPattern::new(duration, timings)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConcentrationReport {
    pub deviation: f64,
    pub pass: bool,
}

/// Distance of the scaled l1 norm from the concentration shell:
/// `deviation = |lambda/n * sum |v_i| - 1|`, passing iff within epsilon.
pub fn concentration_check(
    values: &[f64],
    lambda: f64,
    epsilon: f64,
) -> Result<ConcentrationReport, PoissonError> {
    if values.is_empty() {
        return Err(PoissonError::Empty);
    }
    let n = values.len() as f64;
    let deviation = (lambda / n * values.iter().map(|v| v.abs()).sum::<f64>() - 1.0).abs();
    Ok(ConcentrationReport {
        deviation,
        pass: deviation <= epsilon,
    })
}
