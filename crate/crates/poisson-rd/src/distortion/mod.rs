//! The four distortion measures and their distortion sets.
//!
//! Timing description: point-covering distortion (measure of the window's
//! 1-set when it covers every event, infinite otherwise) and the causal
//! queueing distortion. Interval description: the normalized l1 measure
//! for signed intervals and its one-sided variant for plain intervals.
//!
//! Infinite distortion is an explicit variant, never a sentinel float.
//! Distortion sets are evaluated with non-strict inequalities, realizing
//! the closure limit in their definition; accordingly causal codewords
//! live in the closed simplex (nondecreasing timings, zero allowed), while
//! source patterns stay strictly increasing.

pub mod case_study;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::mc::{hit_or_miss, AmbientBox, McEstimate};
use crate::poisson::{IntervalVector, PointPattern, SignedIntervalVector};

#[derive(Debug, Error, PartialEq)]
pub enum DistortionError {
    #[error("pattern and codeword durations differ: {0} vs {1}")]
    DurationMismatch(f64, f64),
    #[error("source and reconstruction lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("event counts differ: {0} vs {1}")]
    CountMismatch(usize, usize),
    #[error("window cells must be disjoint, ordered and within [0, T]")]
    InvalidWindow,
    #[error("codeword timings must be nondecreasing within [0, T]")]
    InvalidCodeword,
    #[error("operation requires at least one value")]
    Empty,
    #[error("codeword count {0} does not match requested dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("volume estimation requires at least {min} samples")]
    InsufficientSamples { min: u64 },
}

/// An extended nonnegative distortion value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistortionValue {
    Finite(f64),
    Infinite,
}

impl DistortionValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, DistortionValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            DistortionValue::Finite(v) => Some(*v),
            DistortionValue::Infinite => None,
        }
    }

    /// Membership comparison for distortion sets (closure semantics).
    pub fn at_most(&self, d: f64) -> bool {
        match self {
            DistortionValue::Finite(v) => *v <= d,
            DistortionValue::Infinite => false,
        }
    }
}

impl Serialize for DistortionValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            DistortionValue::Finite(v) => serializer.serialize_f64(*v),
            DistortionValue::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// A {0,1}-valued codeword on [0, T], restricted to a finite union of
/// disjoint closed intervals (sufficient to realize every window measure
/// and covering construction here, and keeps the measure exact).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowCodeword {
    duration: f64,
    cells: Vec<(f64, f64)>,
}

impl WindowCodeword {
    pub fn new(duration: f64, cells: Vec<(f64, f64)>) -> Result<Self, DistortionError> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(DistortionError::InvalidWindow);
        }
        let mut prev_end = f64::NEG_INFINITY;
        for &(a, b) in &cells {
            if !(a.is_finite() && b.is_finite() && a <= b && a >= 0.0 && b <= duration && a > prev_end)
            {
                return Err(DistortionError::InvalidWindow);
            }
            prev_end = b;
        }
        Ok(Self { duration, cells })
    }

    /// The single window [0, length].
    pub fn prefix(duration: f64, length: f64) -> Result<Self, DistortionError> {
        Self::new(duration, vec![(0.0, length)])
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    /// Lebesgue measure of the 1-set.
    pub fn measure(&self) -> f64 {
        self.cells.iter().map(|(a, b)| b - a).sum()
    }

    pub fn covers_point(&self, t: f64) -> bool {
        // Cells are sorted; find the last cell starting at or before t.
        let idx = self.cells.partition_point(|&(a, _)| a <= t);
        idx > 0 && t <= self.cells[idx - 1].1
    }

    pub fn covers_all(&self, timings: &[f64]) -> bool {
        timings.iter().all(|&t| self.covers_point(t))
    }
}

/// A causal codeword: a point of the closed ordered simplex. Boundary
/// codewords (ties, zeros) are admitted as closure limits of the open
/// codeword space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalCodeword {
    duration: f64,
    timings: Vec<f64>,
}

impl CausalCodeword {
    pub fn new(duration: f64, timings: Vec<f64>) -> Result<Self, DistortionError> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(DistortionError::InvalidCodeword);
        }
        let mut prev = 0.0;
        for &t in &timings {
            if !(t.is_finite() && t >= prev && t <= duration) {
                return Err(DistortionError::InvalidCodeword);
            }
            prev = t;
        }
        Ok(Self { duration, timings })
    }

    /// The all-zeros boundary codeword with n points.
    pub fn zeros(n: usize, duration: f64) -> Self {
        Self {
            duration,
            timings: vec![0.0; n],
        }
    }

    pub fn from_pattern(p: &PointPattern) -> Self {
        Self {
            duration: p.duration(),
            timings: p.timings().to_vec(),
        }
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
}

/// Point-covering distortion: the window measure when every event is
/// covered, infinite otherwise. The value is in time units (the integral
/// of the codeword signal); divide by T for the normalized distortion.
pub fn d_pc(t: &PointPattern, window: &WindowCodeword) -> Result<DistortionValue, DistortionError> {
    if t.duration() != window.duration() {
        return Err(DistortionError::DurationMismatch(
            t.duration(),
            window.duration(),
        ));
    }
    Ok(if window.covers_all(t.timings()) {
        DistortionValue::Finite(window.measure())
    } else {
        DistortionValue::Infinite
    })
}

/// Counting-function feasibility: `N_xhat(s) >= N_t(s)` for all s,
/// evaluated at the merged event times (both counting functions are
/// right-continuous step functions, so those are the only places the
/// inequality can change).
pub(crate) fn counting_condition(t: &[f64], xhat: &[f64]) -> bool {
    let mut i = 0; // events of t counted so far
    let mut j = 0; // events of xhat counted so far
    while i < t.len() || j < xhat.len() {
        let next_t = t.get(i).copied().unwrap_or(f64::INFINITY);
        let next_x = xhat.get(j).copied().unwrap_or(f64::INFINITY);
        let s = next_t.min(next_x);
        while j < xhat.len() && xhat[j] <= s {
            j += 1;
        }
        while i < t.len() && t[i] <= s {
            i += 1;
        }
        if j < i {
            return false;
        }
    }
    true
}

/// Coordinate feasibility: `t_i >= xhat_i` for all i (equal counts).
pub(crate) fn coordinate_condition(t: &[f64], xhat: &[f64]) -> bool {
    t.iter().zip(xhat).all(|(a, b)| a >= b)
}

/// Queueing distortion on raw sorted timing slices (closure semantics:
/// nondecreasing inputs are evaluated as limits of interior realizations).
/// This is the slice-level core of [`d_q`], exposed for bindings and
/// Monte-Carlo probing; callers are responsible for sortedness.
pub fn queueing_distortion_raw(t: &[f64], xhat: &[f64], duration: f64) -> DistortionValue {
    if t.len() != xhat.len() || !counting_condition(t, xhat) {
        return DistortionValue::Infinite;
    }
    let mut prev_t = 0.0f64;
    let mut sum = 0.0;
    for (&ti, &xi) in t.iter().zip(xhat) {
        sum += ti - prev_t.max(xi);
        prev_t = ti;
    }
    DistortionValue::Finite(sum / duration)
}

/// Canonical queueing distortion per the counting-function conditions:
/// `(1/T) sum_i (t_i - max(t_{i-1}, xhat_i))` when the counts match and
/// the codeword stays ahead of the source, infinite otherwise.
pub fn d_q(t: &PointPattern, xhat: &CausalCodeword) -> Result<DistortionValue, DistortionError> {
    if t.duration() != xhat.duration() {
        return Err(DistortionError::DurationMismatch(
            t.duration(),
            xhat.duration(),
        ));
    }
    Ok(queueing_distortion_raw(t.timings(), xhat.timings(), t.duration()))
}

/// The two equivalent finiteness criteria for equal-count realizations,
/// evaluated independently. Returns the counting-function verdict and
/// asserts it matches the coordinate criterion (the executable form of
/// their equivalence).
pub fn queueing_finite(
    t: &PointPattern,
    xhat: &CausalCodeword,
) -> Result<bool, DistortionError> {
    if t.count() != xhat.count() {
        return Err(DistortionError::CountMismatch(t.count(), xhat.count()));
    }
    if t.duration() != xhat.duration() {
        return Err(DistortionError::DurationMismatch(
            t.duration(),
            xhat.duration(),
        ));
    }
    let counting = counting_condition(t.timings(), xhat.timings());
    let coordinate = coordinate_condition(t.timings(), xhat.timings());
    assert_eq!(
        counting, coordinate,
        "counting-function and coordinate criteria disagree"
    );
    Ok(counting)
}

/// Normalized l1 distortion `lambda/n sum |x_i - xhat_i|` for the signed
/// (Laplacian) source.
pub fn d_norm_l1(
    x: &SignedIntervalVector,
    xhat: &[f64],
) -> Result<DistortionValue, DistortionError> {
    if x.len() != xhat.len() {
        return Err(DistortionError::LengthMismatch(x.len(), xhat.len()));
    }
    if x.is_empty() {
        return Err(DistortionError::Empty);
    }
    let n = x.len() as f64;
    let sum: f64 = x.values.iter().zip(xhat).map(|(a, b)| (a - b).abs()).sum();
    Ok(DistortionValue::Finite(x.lambda / n * sum))
}

/// One-sided normalized l1 distortion for the exponential source:
/// infinite unless `x_i >= xhat_i` everywhere.
pub fn d_onesided_l1(
    x: &IntervalVector,
    xhat: &[f64],
) -> Result<DistortionValue, DistortionError> {
    if x.len() != xhat.len() {
        return Err(DistortionError::LengthMismatch(x.len(), xhat.len()));
    }
    if x.is_empty() {
        return Err(DistortionError::Empty);
    }
    if x.intervals.iter().zip(xhat).any(|(a, b)| a < b) {
        return Ok(DistortionValue::Infinite);
    }
    let n = x.len() as f64;
    let sum: f64 = x.intervals.iter().zip(xhat).map(|(a, b)| a - b).sum();
    Ok(DistortionValue::Finite(x.lambda / n * sum))
}

/// A distortion set `E_codeword(D)`, given by the measure kind and its
/// codeword. Candidates are raw coordinate vectors; membership uses the
/// closure conventions (non-strict comparisons, sorted-with-ties allowed).
#[derive(Debug, Clone)]
pub enum DistortionSetSpec {
    PointCovering(WindowCodeword),
    Queueing(CausalCodeword),
    NormalizedL1 { lambda: f64, reconstruction: Vec<f64> },
    OneSidedL1 { lambda: f64, reconstruction: Vec<f64> },
}

impl DistortionSetSpec {
    /// True iff the candidate has distortion at most `d` from the
    /// codeword. For the timing measures the candidate is interpreted as a
    /// (closure) timing vector and must be sorted; anything outside the
    /// source set has infinite distortion.
    pub fn contains(&self, candidate: &[f64], d: f64) -> bool {
        match self {
            DistortionSetSpec::PointCovering(window) => {
                let sorted_in_range = candidate
                    .iter()
                    .all(|&t| (0.0..=window.duration()).contains(&t));
                sorted_in_range
                    && window.measure() / window.duration() <= d
                    && window.covers_all(candidate)
            }
            DistortionSetSpec::Queueing(xhat) => {
                let duration = xhat.duration();
                let sorted = candidate.windows(2).all(|w| w[0] <= w[1])
                    && candidate.iter().all(|&t| t >= 0.0 && t <= duration);
                sorted && queueing_distortion_raw(candidate, xhat.timings(), duration).at_most(d)
            }
            DistortionSetSpec::NormalizedL1 {
                lambda,
                reconstruction,
            } => {
                if candidate.len() != reconstruction.len() || reconstruction.is_empty() {
                    return false;
                }
                let n = reconstruction.len() as f64;
                let sum: f64 = candidate
                    .iter()
                    .zip(reconstruction)
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                lambda / n * sum <= d
            }
            DistortionSetSpec::OneSidedL1 {
                lambda,
                reconstruction,
            } => {
                if candidate.len() != reconstruction.len() || reconstruction.is_empty() {
                    return false;
                }
                if candidate.iter().zip(reconstruction).any(|(a, b)| a < b) {
                    return false;
                }
                let n = reconstruction.len() as f64;
                let sum: f64 = candidate
                    .iter()
                    .zip(reconstruction)
                    .map(|(a, b)| a - b)
                    .sum();
                lambda / n * sum <= d
            }
        }
    }

    /// A box certain to contain the distortion set, used as the
    /// hit-or-miss sampling region.
    fn ambient(&self, n: usize, d: f64) -> Result<AmbientBox, DistortionError> {
        match self {
            DistortionSetSpec::PointCovering(window) => {
                let t = window.duration();
                Ok(AmbientBox {
                    lows: vec![0.0; n],
                    highs: vec![t; n],
                })
            }
            DistortionSetSpec::Queueing(xhat) => {
                if xhat.count() != n {
                    return Err(DistortionError::DimensionMismatch(xhat.count(), n));
                }
                let t = xhat.duration();
                Ok(AmbientBox {
                    lows: vec![0.0; n],
                    highs: vec![t; n],
                })
            }
            DistortionSetSpec::NormalizedL1 {
                lambda,
                reconstruction,
            } => {
                if reconstruction.len() != n {
                    return Err(DistortionError::DimensionMismatch(reconstruction.len(), n));
                }
                let radius = n as f64 * d / lambda;
                Ok(AmbientBox {
                    lows: reconstruction.iter().map(|x| x - radius).collect(),
                    highs: reconstruction.iter().map(|x| x + radius).collect(),
                })
            }
            DistortionSetSpec::OneSidedL1 {
                lambda,
                reconstruction,
            } => {
                if reconstruction.len() != n {
                    return Err(DistortionError::DimensionMismatch(reconstruction.len(), n));
                }
                let radius = n as f64 * d / lambda;
                Ok(AmbientBox {
                    lows: reconstruction.clone(),
                    highs: reconstruction.iter().map(|x| x + radius).collect(),
                })
            }
        }
    }
}

/// Hit-or-miss Monte-Carlo estimate of the distortion-set volume, with the
/// binomial standard error.
pub fn distortion_set_volume_mc(
    spec: &DistortionSetSpec,
    d: f64,
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, DistortionError> {
    const MIN_SAMPLES: u64 = 10_000;
    if samples < MIN_SAMPLES {
        return Err(DistortionError::InsufficientSamples { min: MIN_SAMPLES });
    }
    let ambient = spec.ambient(n, d)?;
    Ok(hit_or_miss(
        &ambient,
        |x| spec.contains(x, d),
        samples,
        seed,
        workers,
    ))
}
