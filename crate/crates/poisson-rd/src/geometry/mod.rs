//! Exact-rational vectors, polytopes and the canonical source-set shapes.
//!
//! Every vertex coordinate in this crate is a [`Rational`]; symmetry and
//! membership decisions made on top of these primitives are exact, with no
//! tolerance tuning. Floating point appears only in the Monte-Carlo and
//! sampling paths, which never feed back into exact decisions.

mod feasibility;
pub mod linalg;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("scale must lie in (0, 1]")]
    ScaleOutOfRange,
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("mixed dimensions: expected {expected}, found {found}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a rational from `"p/q"`, an integer string, or an exact decimal
/// string such as `"0.25"` (which becomes 1/4, not the nearest double).
pub fn parse_rational(s: &str) -> Result<Rational, GeometryError> {
    let s = s.trim();
    let err = || GeometryError::ParseRational(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|_| err())?
        };
        let numer = BigInt::from_str(frac_part).map_err(|_| err())?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(numer, denom);
        let whole = Rational::from_integer(int_part);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    let n = BigInt::from_str(s).map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// A point of R^n with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector {
    coords: Vec<Rational>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "zero-dimensional point");
        Self { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    /// The standard basis vector `r * e_i` (0-based index).
    pub fn scaled_unit(dim: usize, i: usize, r: &Rational) -> Self {
        let mut coords = vec![Rational::zero(); dim];
        coords[i] = r.clone();
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.coords.iter().map(|c| c * r).collect())
    }

    /// Exact squared Euclidean distance.
    pub fn distance_sq(&self, other: &Self) -> Rational {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|c| c.to_f64().expect("rational out of f64 range"))
            .collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A polytope given by its vertex list, stored deduplicated in a canonical
/// sorted order. Construction checks dimensions only; use
/// [`extreme_points`] to reduce a vertex set so that every listed vertex is
/// extreme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RationalVector>,
}

impl Polytope {
    pub fn new(vertices: impl IntoIterator<Item = RationalVector>) -> Result<Self, GeometryError> {
        let set: BTreeSet<RationalVector> = vertices.into_iter().collect();
        let mut iter = set.iter();
        let first = iter.next().ok_or(GeometryError::EmptyVertexSet)?;
        let dim = first.dim();
        for v in iter {
            if v.dim() != dim {
                return Err(GeometryError::MixedDimensions {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            vertices: set.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices in canonical (lexicographic) order.
    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: &RationalVector) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    /// Vertex centroid.
    pub fn centroid(&self) -> RationalVector {
        let m = rat(self.vertices.len() as i64);
        let mut acc = vec![Rational::zero(); self.dim];
        for v in &self.vertices {
            for (a, c) in acc.iter_mut().zip(v.coords()) {
                *a += c;
            }
        }
        RationalVector::new(acc.into_iter().map(|a| a / &m).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.coords().iter().map(|c| c.to_string()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(deserializer)?;
        let mut vertices = Vec::with_capacity(raw.vertices.len());
        for coords in raw.vertices {
            let mut parsed = Vec::with_capacity(coords.len());
            for c in coords {
                parsed.push(parse_rational(&c).map_err(D::Error::custom)?);
            }
            if parsed.len() != raw.dim {
                return Err(D::Error::custom("vertex dimension does not match dim"));
            }
            vertices.push(RationalVector::new(parsed));
        }
        Polytope::new(vertices).map_err(D::Error::custom)
    }
}

/// Closure of the ordered-timing simplex `{0 < t_1 < ... < t_n < 1}`: the
/// n+1 vertices are the monotone nondecreasing 0/1 vectors.
pub fn order_simplex(n: usize) -> Result<Polytope, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidDimension);
    }
    let vertices = (0..=n).map(|ones| {
        RationalVector::new(
            (0..n)
                .map(|i| if i >= n - ones { Rational::one() } else { Rational::zero() })
                .collect(),
        )
    });
    Polytope::new(vertices)
}

/// The simplex with vertices `{r e_1, ..., r e_n}`, the first-orthant face
/// of the l1-sphere of radius r.
pub fn standard_simplex(n: usize, r: &Rational) -> Result<Polytope, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidDimension);
    }
    if !r.is_positive() {
        return Err(GeometryError::NonPositiveScale);
    }
    Polytope::new((0..n).map(|i| RationalVector::scaled_unit(n, i, r)))
}

/// The unit hypercube `[0,1]^n` as its 2^n vertices.
pub fn hypercube(n: usize) -> Result<Polytope, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidDimension);
    }
    assert!(n < 26, "hypercube vertex enumeration limited to n < 26");
    let vertices = (0u32..1 << n).map(|bits| {
        RationalVector::new(
            (0..n)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )
    });
    Polytope::new(vertices)
}

/// The regular hyperoctahedron (cross-polytope) with vertices `{±e_i}`.
pub fn octahedron(n: usize) -> Result<Polytope, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidDimension);
    }
    let one = Rational::one();
    let minus_one = -Rational::one();
    let vertices = (0..n).flat_map(|i| {
        [
            RationalVector::scaled_unit(n, i, &one),
            RationalVector::scaled_unit(n, i, &minus_one),
        ]
    });
    Polytope::new(vertices)
}

/// Returns exactly the points of `points` that are extreme points of the
/// convex hull of `points`, i.e. not expressible as a convex combination of
/// the remaining points. Decided by exact rational linear feasibility.
pub fn extreme_points(points: &[RationalVector]) -> Result<Vec<RationalVector>, GeometryError> {
    let set: BTreeSet<&RationalVector> = points.iter().collect();
    let mut iter = set.iter();
    let first = iter.next().ok_or(GeometryError::EmptyVertexSet)?;
    let dim = first.dim();
    for v in iter {
        if v.dim() != dim {
            return Err(GeometryError::MixedDimensions {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    let unique: Vec<&RationalVector> = set.into_iter().collect();
    let mut out = Vec::new();
    for (i, v) in unique.iter().enumerate() {
        let others: Vec<&RationalVector> = unique
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| *w)
            .collect();
        if others.is_empty() || !feasibility::in_convex_hull(v, &others) {
            out.push((*v).clone());
        }
    }
    Ok(out)
}

/// Exact membership of a point in the convex hull of a vertex set.
pub fn in_hull(point: &RationalVector, vertices: &[RationalVector]) -> bool {
    let refs: Vec<&RationalVector> = vertices.iter().collect();
    feasibility::in_convex_hull(point, &refs)
}

/// Canonical shapes with closed-form reference volumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceShape {
    /// Point-covering distortion set inside the cube: volume `D^n`.
    CubeDistortion,
    /// Scaled ordered-timing simplex `D * {0 < t_1 < ... < t_n < 1}`:
    /// volume `D^n / n!`.
    OrderSimplex,
    /// Scaled corner simplex `D * {dt_i > 0, sum dt_i < 1}`: volume
    /// `D^n / n!`.
    CornerSimplex,
}

/// Exact reference volume of a canonical shape at scale `D` in (0, 1].
pub fn reference_volume(
    shape: ReferenceShape,
    n: usize,
    d: &Rational,
) -> Result<Rational, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidDimension);
    }
    if !d.is_positive() || d > &Rational::one() {
        return Err(GeometryError::ScaleOutOfRange);
    }
    let mut dn = Rational::one();
    for _ in 0..n {
        dn *= d;
    }
    Ok(match shape {
        ReferenceShape::CubeDistortion => dn,
        ReferenceShape::OrderSimplex | ReferenceShape::CornerSimplex => {
            let mut fact = BigInt::one();
            for k in 2..=n {
                fact *= BigInt::from(k);
            }
            dn / Rational::from_integer(fact)
        }
    })
}
