//! Rate-distortion geometry of the homogeneous Poisson process.
//!
//! The crate has three layers:
//!
//! * source-side machinery: Poisson sampling in timing and interval
//!   descriptions ([`poisson`]), the four distortion measures and their
//!   distortion sets ([`distortion`]), and the covering / Blahut-Arimoto
//!   rate-distortion computations ([`rd`]);
//! * the group-theoretic kernel: signed permutations and finite matrix
//!   groups ([`groups`]), vertex-based polytope symmetry groups and graph
//!   automorphisms ([`symmetry`]), and the alternating symmetrization
//!   algorithm that grows both source sets until their symmetry groups
//!   agree ([`symmetrize`]);
//! * exact-rational geometry primitives shared by both ([`geometry`]).
//!
//! Everything that feeds a symmetry or membership decision is computed in
//! exact rational arithmetic; floating point is confined to sampling,
//! Monte-Carlo estimation and Blahut-Arimoto.

pub mod acceptance;
pub mod caps;
pub mod distortion;
pub mod geometry;
pub mod groups;
pub mod mc;
pub mod poisson;
pub mod rd;
pub mod symmetrize;
pub mod symmetry;

pub use geometry::{Polytope, Rational, RationalVector};
pub use groups::{FiniteGroup, SignedPermutation};
