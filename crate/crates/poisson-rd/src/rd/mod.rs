//! Covering-count converse bounds, constructive cell codebooks,
//! Blahut-Arimoto verification of R(D) = log(1/D), and the
//! bits-per-unit-time conversion.

pub mod ba;
pub mod covering;
pub mod experiment;

use serde::Serialize;

pub use ba::{blahut_arimoto, solve_for_distortion, BaOptions, BaPoint, DiscretizedSource, PerLetterDistortion};
pub use covering::{cell_codebook, covering_lower_bound, CellCodebook, CoveringBound, SourceShape};
pub use experiment::{empirical_rd_experiment, ExperimentKind, RdPoint};

/// Converts a per-point (per-symbol) rate into bits per unit time for a
/// process of rate `lambda`: the expected number of points per unit time
/// is `lambda`, so the product is the answer.
pub fn bits_per_unit_time(rate_per_point: f64, lambda: f64) -> f64 {
    assert!(rate_per_point >= 0.0 && lambda >= 0.0);
    lambda * rate_per_point
}

/// A point on (or near) a rate-distortion curve.
#[derive(Debug, Clone, Serialize)]
pub struct RatePoint {
    pub rate_bits: f64,
    pub distortion: f64,
}
