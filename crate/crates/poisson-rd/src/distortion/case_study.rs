//! Exact two-event case study of the queueing distortion set.
//!
//! For a codeword `0 < xhat_1 < xhat_2 < 1` the finite-distortion region
//! of the ordered 2-simplex splits along the vertical line `t_1 = xhat_2`
//! into a near region (both events still pending their codeword points)
//! and a far region (the first event already past the second codeword
//! point), where the queueing sum telescopes to `t_2 - xhat_1`. Everything
//! here is exact rational arithmetic: the piecewise values can be compared
//! with the general evaluation for literal equality, and the distortion
//! set is an explicit polygon whose area comes out by the shoelace
//! formula after clipping to the simplex.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum CaseStudyError {
    #[error("codeword must satisfy 0 < xhat_1 < xhat_2 < 1")]
    InvalidCodeword,
    #[error("distortion must lie in (0, 1]")]
    InvalidDistortion,
}

/// Region of the ordered 2-simplex relative to the codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `xhat_1 <= t_1 < xhat_2 <= t_2`: both terms of the queueing sum are
    /// active.
    R1,
    /// `xhat_2 <= t_1 < t_2`: the sum telescopes to `t_2 - xhat_1`.
    R2,
    /// Outside the finite-distortion region (or outside the simplex).
    Infinite,
}

#[derive(Debug, Clone)]
pub struct QueueingCaseStudy {
    xhat: (Rational, Rational),
    d: Rational,
}

impl QueueingCaseStudy {
    pub fn new(xhat1: Rational, xhat2: Rational, d: Rational) -> Result<Self, CaseStudyError> {
        let one = Rational::from_integer(1.into());
        if !(xhat1.is_positive() && xhat1 < xhat2 && xhat2 < one) {
            return Err(CaseStudyError::InvalidCodeword);
        }
        if !(d.is_positive() && d <= one) {
            return Err(CaseStudyError::InvalidDistortion);
        }
        Ok(Self {
            xhat: (xhat1, xhat2),
            d,
        })
    }

    pub fn codeword(&self) -> (&Rational, &Rational) {
        (&self.xhat.0, &self.xhat.1)
    }

    pub fn distortion(&self) -> &Rational {
        &self.d
    }

    /// Classifies a point of the (closed) ordered simplex.
    pub fn classify(&self, t1: &Rational, t2: &Rational) -> Region {
        let one = Rational::from_integer(1.into());
        let in_simplex =
            !t1.is_negative() && t1 <= t2 && *t2 <= one;
        if !in_simplex || t1 < &self.xhat.0 || t2 < &self.xhat.1 {
            return Region::Infinite;
        }
        if t1 < &self.xhat.1 {
            Region::R1
        } else if t1 < t2 {
            Region::R2
        } else {
            // t1 == t2 >= xhat_2: the diagonal boundary, reachable only as
            // a limit; the far-region formula still applies there.
            Region::R2
        }
    }

    /// The piecewise closed form: `(t_1 - xhat_1) + (t_2 - xhat_2)` on the
    /// near region, `t_2 - xhat_1` on the far region.
    pub fn piecewise_value(&self, t1: &Rational, t2: &Rational) -> Option<Rational> {
        match self.classify(t1, t2) {
            Region::R1 => Some((t1 - &self.xhat.0) + (t2 - &self.xhat.1)),
            Region::R2 => Some(t2 - &self.xhat.0),
            Region::Infinite => None,
        }
    }

    /// General evaluation route: the max-based queueing sum with the
    /// counting-function feasibility test, in exact arithmetic.
    pub fn general_value(&self, t1: &Rational, t2: &Rational) -> Option<Rational> {
        exact_queueing_value(
            &[t1.clone(), t2.clone()],
            &[self.xhat.0.clone(), self.xhat.1.clone()],
        )
    }

    /// Vertex list of the distortion set polygon, clipped to the simplex.
    pub fn polygon(&self) -> Vec<(Rational, Rational)> {
        let (x1, x2) = (&self.xhat.0, &self.xhat.1);
        let d = &self.d;
        let gap = x2 - x1;
        let raw: Vec<(Rational, Rational)> = if *d <= gap {
            // Translated corner simplex xhat + cl(D delta).
            vec![
                (x1.clone(), x2.clone()),
                (x1 + d, x2.clone()),
                (x1.clone(), x2 + d),
            ]
        } else {
            // Near-region trapezoid joined with the far-region triangle.
            vec![
                (x1.clone(), x2.clone()),
                (x1.clone(), x2 + d),
                (x2.clone(), x1 + d),
                (x1 + d, x1 + d),
                (x2.clone(), x2.clone()),
            ]
        };
        clip_below(&raw, &Rational::from_integer(1.into()))
    }

    /// Exact area of the distortion set within the simplex.
    pub fn area(&self) -> Rational {
        shoelace(&self.polygon())
    }
}

/// Exact queueing distortion for equal-length rational timing vectors
/// (T = 1); None when infinite. Mirrors the floating general evaluation.
pub fn exact_queueing_value(t: &[Rational], xhat: &[Rational]) -> Option<Rational> {
    if t.len() != xhat.len() {
        return None;
    }
    // Counting-function condition at merged event times.
    let mut grid: Vec<&Rational> = t.iter().chain(xhat.iter()).collect();
    grid.sort();
    grid.dedup();
    for s in grid {
        let nt = t.iter().filter(|v| *v <= s).count();
        let nx = xhat.iter().filter(|v| *v <= s).count();
        if nx < nt {
            return None;
        }
    }
    let mut prev = Rational::zero();
    let mut sum = Rational::zero();
    for (ti, xi) in t.iter().zip(xhat) {
        let floor = if &prev > xi { prev.clone() } else { xi.clone() };
        sum += ti - floor;
        prev = ti.clone();
    }
    Some(sum)
}

/// Sutherland-Hodgman clip of a polygon against `y <= limit`.
fn clip_below(poly: &[(Rational, Rational)], limit: &Rational) -> Vec<(Rational, Rational)> {
    let inside = |p: &(Rational, Rational)| &p.1 <= limit;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = &poly[i];
        let q = &poly[(i + 1) % poly.len()];
        if inside(p) {
            out.push(p.clone());
        }
        if inside(p) != inside(q) {
            // Intersection with the horizontal line y = limit.
            let s = (limit - &p.1) / (&q.1 - &p.1);
            let x = &p.0 + &s * (&q.0 - &p.0);
            out.push((x, limit.clone()));
        }
    }
    out
}

/// Absolute shoelace area of a simple polygon.
fn shoelace(poly: &[(Rational, Rational)]) -> Rational {
    if poly.len() < 3 {
        return Rational::zero();
    }
    let mut twice: Rational = Rational::zero();
    for i in 0..poly.len() {
        let (x1, y1) = &poly[i];
        let (x2, y2) = &poly[(i + 1) % poly.len()];
        twice += x1 * y2 - x2 * y1;
    }
    twice.abs() / Rational::from_integer(2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn study(x1: (i64, i64), x2: (i64, i64), d: (i64, i64)) -> QueueingCaseStudy {
        QueueingCaseStudy::new(ratio(x1.0, x1.1), ratio(x2.0, x2.1), ratio(d.0, d.1)).unwrap()
    }

    #[test]
    fn region_classification_and_values() {
        let cs = study((1, 10), (3, 10), (1, 2));
        // Near region example.
        assert_eq!(cs.classify(&ratio(2, 10), &ratio(5, 10)), Region::R1);
        assert_eq!(
            cs.piecewise_value(&ratio(2, 10), &ratio(5, 10)).unwrap(),
            ratio(3, 10)
        );
        // Far region example: the sum telescopes.
        assert_eq!(cs.classify(&ratio(4, 10), &ratio(5, 10)), Region::R2);
        assert_eq!(
            cs.piecewise_value(&ratio(4, 10), &ratio(5, 10)).unwrap(),
            ratio(4, 10)
        );
        // Infinite region.
        assert_eq!(cs.classify(&ratio(1, 20), &ratio(5, 10)), Region::Infinite);
        assert_eq!(cs.piecewise_value(&ratio(1, 20), &ratio(5, 10)), None);
    }

    #[test]
    fn piecewise_matches_general_evaluation_on_a_grid() {
        let cs = study((1, 10), (3, 10), (1, 2));
        let steps = 60;
        for i in 1..steps {
            for j in (i + 1)..steps {
                let t1 = ratio(i, steps);
                let t2 = ratio(j, steps);
                assert_eq!(
                    cs.piecewise_value(&t1, &t2),
                    cs.general_value(&t1, &t2),
                    "t = ({i}/{steps}, {j}/{steps})"
                );
            }
        }
    }

    #[test]
    fn small_distortion_area_is_half_d_squared() {
        // Example-1 regime: D <= xhat_2 - xhat_1.
        for d in [(1i64, 10i64), (1, 5), (1, 8)] {
            let cs = study((1, 10), (3, 10), d);
            let dd = ratio(d.0, d.1);
            assert_eq!(cs.area(), &dd * &dd / ratio(2, 1));
        }
    }

    #[test]
    fn large_distortion_area_preserves_the_simplex_volume() {
        // Example-2 regime without boundary clipping: area still D^2/2.
        let cs = study((1, 10), (3, 10), (1, 2));
        assert_eq!(cs.area(), ratio(1, 8));
        // With clipping at t_2 = 1 the area drops strictly below D^2/2.
        let cs = study((1, 10), (3, 10), (9, 10));
        let unclipped = ratio(81, 200);
        assert!(cs.area() < unclipped);
        assert!(cs.area().is_positive());
    }

    #[test]
    fn polygon_for_large_distortion_has_five_vertices() {
        let cs = study((1, 10), (3, 10), (1, 2));
        assert_eq!(cs.polygon().len(), 5);
    }

    #[test]
    fn validation() {
        assert_eq!(
            QueueingCaseStudy::new(ratio(3, 10), ratio(1, 10), ratio(1, 2)).unwrap_err(),
            CaseStudyError::InvalidCodeword
        );
        assert_eq!(
            QueueingCaseStudy::new(ratio(1, 10), ratio(3, 10), ratio(0, 1)).unwrap_err(),
            CaseStudyError::InvalidDistortion
        );
    }

    #[test]
    fn exact_and_float_general_evaluations_agree() {
        // The rational route mirrors the float route wherever both apply.
        let cs = study((1, 10), (3, 10), (1, 2));
        let t = crate::poisson::PointPattern::new(1.0, vec![0.2, 0.5]).unwrap();
        let xh = crate::distortion::CausalCodeword::new(1.0, vec![0.1, 0.3]).unwrap();
        let float_v = crate::distortion::d_q(&t, &xh).unwrap().finite().unwrap();
        let exact_v = cs.general_value(&ratio(2, 10), &ratio(5, 10)).unwrap();
        use num_traits::ToPrimitive;
        assert!((float_v - exact_v.to_f64().unwrap()).abs() < 1e-12);
    }
}
