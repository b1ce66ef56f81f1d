//! Alternating symmetrization of a pair of source sets.
//!
//! Starting from the ordered-timing simplex and the interval simplex, the
//! symmetry group of one set acts on the other to enlarge it; the enlarged
//! set's symmetry group is recomputed, classified into one of the standard
//! classes (trivial, permutation, reflection, hyperoctahedral) and realized
//! as a signed-permutation matrix group acting about the origin. The
//! process repeats, alternating sides, until the two groups become
//! isomorphic. For the canonical pair this stops after two expansions,
//! producing the unit cube and the cross-polytope vertex set, both with
//! symmetry group of order 2^n n!.
//!
//! Sets are represented by the vertex set of the convex hull of the orbit
//! union. The l1-sphere, a nonconvex boundary, is represented by its
//! extreme points {±e_i}; its symmetry group equals that of the solid
//! cross-polytope, so nothing is lost for the group computation.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::caps;
use crate::geometry::{
    extreme_points, order_simplex, standard_simplex, GeometryError, Polytope, Rational,
};
use crate::groups::{iso, FiniteGroup, GroupError};
use crate::symmetry::{vertex_symmetry_group, SymmetryError};

#[derive(Debug, Error)]
pub enum SymmetrizeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("symmetry group of order {order} is not a recognized class for dimension {n}")]
    UnrecognizedClass { order: usize, n: usize },
    #[error("acting group dimension {group} does not match polytope dimension {polytope}")]
    DimensionMismatch { group: usize, polytope: usize },
}

/// The group classes arising in the algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupClass {
    Trivial,
    Permutation,
    Reflection,
    Hyperoctahedral,
}

impl GroupClass {
    pub fn name(self) -> &'static str {
        match self {
            GroupClass::Trivial => "trivial",
            GroupClass::Permutation => "permutation",
            GroupClass::Reflection => "reflection",
            GroupClass::Hyperoctahedral => "hyperoctahedral",
        }
    }

    /// The standard signed-permutation realization in dimension `n`.
    pub fn realize(self, n: usize) -> FiniteGroup {
        match self {
            GroupClass::Trivial => FiniteGroup::trivial(n),
            GroupClass::Permutation => FiniteGroup::permutation_group(n),
            GroupClass::Reflection => FiniteGroup::reflection_group(n),
            GroupClass::Hyperoctahedral => FiniteGroup::hyperoctahedral(n),
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Matches a vertex-permutation group against the standard classes by
/// order and, unless `order_heuristic` is set, confirms the match with the
/// isomorphism search. Unrecognized orders are reported, never guessed.
pub fn classify_and_realize(
    group: &FiniteGroup,
    n: usize,
    order_heuristic: bool,
) -> Result<(GroupClass, FiniteGroup), SymmetrizeError> {
    let order = group.order();
    let class = if order == 1 {
        GroupClass::Trivial
    } else if order == factorial(n) {
        GroupClass::Permutation
    } else if order == 1 << n {
        GroupClass::Reflection
    } else if order == (1 << n) * factorial(n) {
        GroupClass::Hyperoctahedral
    } else {
        return Err(SymmetrizeError::UnrecognizedClass { order, n });
    };
    let realization = class.realize(n);
    if !order_heuristic && iso::isomorphic(group, &realization, caps::iso_cap())?.is_none() {
        return Err(SymmetrizeError::UnrecognizedClass { order, n });
    }
    Ok((class, realization))
}

/// One side of the algorithm: a source set with its classified symmetry
/// group in the standard matrix realization.
#[derive(Debug, Clone)]
pub struct SourceSetState {
    pub label: String,
    pub polytope: Polytope,
    pub class: GroupClass,
    pub group: FiniteGroup,
}

impl SourceSetState {
    /// Builds a state by computing and classifying the vertex symmetry
    /// group of the polytope.
    pub fn from_polytope(
        label: impl Into<String>,
        polytope: Polytope,
        order_heuristic: bool,
    ) -> Result<Self, SymmetrizeError> {
        let vpg = vertex_symmetry_group(&polytope)?;
        let (class, group) = classify_and_realize(&vpg, polytope.dim(), order_heuristic)?;
        Ok(Self {
            label: label.into(),
            polytope,
            class,
            group,
        })
    }

    fn with_trivial_group(label: impl Into<String>, polytope: Polytope) -> Self {
        let n = polytope.dim();
        Self {
            label: label.into(),
            polytope,
            class: GroupClass::Trivial,
            group: FiniteGroup::trivial(n),
        }
    }
}

/// The two source sets of the Poisson process. The ordered-timing simplex
/// is the realization of the trivial subgroup (its points carry no
/// relabeling symmetry), so its state starts with the trivial group; the
/// interval simplex starts with its geometric symmetry group, the
/// permutation class.
pub fn canonical_pair(
    n: usize,
    order_heuristic: bool,
) -> Result<(SourceSetState, SourceSetState), SymmetrizeError> {
    let timing = SourceSetState::with_trivial_group("ordered-timing-simplex", order_simplex(n)?);
    let interval = SourceSetState::from_polytope(
        "interval-simplex",
        standard_simplex(n, &Rational::from_integer(1.into()))?,
        order_heuristic,
    )?;
    Ok((timing, interval))
}

/// Expands a state by the orbit of its vertex set under the acting group,
/// reduces to extreme points, and reclassifies the symmetry group.
pub fn expand(
    state: &SourceSetState,
    acting: &FiniteGroup,
    order_heuristic: bool,
) -> Result<SourceSetState, SymmetrizeError> {
    if acting.dimension() != state.polytope.dim() {
        return Err(SymmetrizeError::DimensionMismatch {
            group: acting.dimension(),
            polytope: state.polytope.dim(),
        });
    }
    let vertices: BTreeSet<_> = state.polytope.vertices().iter().cloned().collect();
    let orbit = acting.orbit_of_set(&vertices);
    let orbit_vec: Vec<_> = orbit.into_iter().collect();
    let reduced = extreme_points(&orbit_vec)?;
    let polytope = Polytope::new(reduced)?;
    let vpg = vertex_symmetry_group(&polytope)?;
    let (class, group) = classify_and_realize(&vpg, polytope.dim(), order_heuristic)?;
    Ok(SourceSetState {
        label: state.label.clone(),
        polytope,
        class,
        group,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    /// Which state was expanded ("a" or "b") and its label.
    pub expanded: String,
    /// Class name of the group that acted.
    pub acting: String,
    pub acting_order: usize,
    pub input: Polytope,
    pub output: Polytope,
    /// Orders of (a, b) groups after this step.
    pub group_orders: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmTrace {
    pub steps: Vec<TraceStep>,
    pub terminated: bool,
    pub expansions: usize,
    pub final_orders: [usize; 2],
    pub final_classes: [String; 2],
}

/// Runs the alternating expansion until the two symmetry groups become
/// isomorphic or `max_steps` expansions have been spent. The isomorphism
/// check is exact up to the configured cap; with `order_heuristic` it
/// degrades to order equality (needed beyond n = 4, where the
/// hyperoctahedral order exceeds the cap).
pub fn run(
    a: &SourceSetState,
    b: &SourceSetState,
    max_steps: usize,
    order_heuristic: bool,
) -> Result<AlgorithmTrace, SymmetrizeError> {
    assert!(max_steps >= 1, "max_steps must be at least 1");
    let groups_isomorphic = |x: &FiniteGroup, y: &FiniteGroup| -> Result<bool, SymmetrizeError> {
        if order_heuristic {
            Ok(x.order() == y.order())
        } else {
            Ok(iso::isomorphic(x, y, caps::iso_cap())?.is_some())
        }
    };

    let mut a = a.clone();
    let mut b = b.clone();
    let mut steps = Vec::new();
    let mut terminated = groups_isomorphic(&a.group, &b.group)?;
    let mut expansions = 0;

    while !terminated && expansions < max_steps {
        // The side to expand alternates, starting with a.
        let expand_a = expansions % 2 == 0;
        let (state, acting, acting_class, tag) = if expand_a {
            (&a, &b.group, b.class, "a")
        } else {
            (&b, &a.group, a.class, "b")
        };
        let input = state.polytope.clone();
        let acting_order = acting.order();
        let next = expand(state, acting, order_heuristic)?;
        expansions += 1;
        let output = next.polytope.clone();
        let label = next.label.clone();
        if expand_a {
            a = next;
        } else {
            b = next;
        }
        steps.push(TraceStep {
            expanded: format!("{tag}:{label}"),
            acting: acting_class.name().to_string(),
            acting_order,
            input,
            output,
            group_orders: [a.group.order(), b.group.order()],
        });
        terminated = groups_isomorphic(&a.group, &b.group)?;
    }

    Ok(AlgorithmTrace {
        steps,
        terminated,
        expansions,
        final_orders: [a.group.order(), b.group.order()],
        final_classes: [a.class.name().to_string(), b.class.name().to_string()],
    })
}

/// Convenience entry point: runs the algorithm on the canonical pair.
pub fn run_canonical(
    n: usize,
    max_steps: usize,
    order_heuristic: bool,
) -> Result<AlgorithmTrace, SymmetrizeError> {
    let (a, b) = canonical_pair(n, order_heuristic)?;
    run(&a, &b, max_steps, order_heuristic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hypercube, in_hull, octahedron};

    #[test]
    fn classification_of_canonical_groups() {
        let simplex_sym =
            vertex_symmetry_group(&standard_simplex(3, &Rational::from_integer(1.into())).unwrap())
                .unwrap();
        let (class, real) = classify_and_realize(&simplex_sym, 3, false).unwrap();
        assert_eq!(class, GroupClass::Permutation);
        assert_eq!(real.order(), 6);

        let cube_sym = vertex_symmetry_group(&hypercube(3).unwrap()).unwrap();
        let (class, real) = classify_and_realize(&cube_sym, 3, false).unwrap();
        assert_eq!(class, GroupClass::Hyperoctahedral);
        assert_eq!(real.order(), 48);

        let (class, _) = classify_and_realize(&FiniteGroup::trivial(3), 3, false).unwrap();
        assert_eq!(class, GroupClass::Trivial);

        // The order-2 symmetry group of the ordered-timing simplex is not a
        // class of the algorithm in dimension 3.
        let sym = vertex_symmetry_group(&order_simplex(3).unwrap()).unwrap();
        assert!(matches!(
            classify_and_realize(&sym, 3, false),
            Err(SymmetrizeError::UnrecognizedClass { order: 2, n: 3 })
        ));
    }

    #[test]
    fn expansion_of_the_timing_simplex_gives_the_cube() {
        let (a, b) = canonical_pair(2, false).unwrap();
        assert_eq!(a.class, GroupClass::Trivial);
        assert_eq!(b.class, GroupClass::Permutation);
        let expanded = expand(&a, &b.group, false).unwrap();
        assert_eq!(expanded.polytope, hypercube(2).unwrap());
        assert_eq!(expanded.class, GroupClass::Hyperoctahedral);
    }

    #[test]
    fn expansion_of_the_interval_simplex_gives_the_cross_polytope() {
        let (_, b) = canonical_pair(2, false).unwrap();
        let o2 = FiniteGroup::hyperoctahedral(2);
        let expanded = expand(&b, &o2, false).unwrap();
        assert_eq!(expanded.polytope, octahedron(2).unwrap());
        assert_eq!(expanded.class, GroupClass::Hyperoctahedral);
    }

    #[test]
    fn expansion_under_trivial_group_is_identity_on_the_set() {
        let state = SourceSetState::from_polytope("cube", hypercube(2).unwrap(), false).unwrap();
        let expanded = expand(&state, &FiniteGroup::trivial(2), false).unwrap();
        assert_eq!(expanded.polytope, state.polytope);
    }

    #[test]
    fn canonical_run_terminates_in_two_expansions() {
        for n in 2..=3 {
            let trace = run_canonical(n, 8, false).unwrap();
            assert!(trace.terminated);
            assert_eq!(trace.expansions, 2);
            let expected = (1usize << n) * factorial(n);
            assert_eq!(trace.final_orders, [expected, expected]);
            assert_eq!(trace.steps[0].output, hypercube(n).unwrap());
            assert_eq!(trace.steps[1].output, octahedron(n).unwrap());
        }
    }

    #[test]
    fn equal_cubes_terminate_without_expanding() {
        let state = SourceSetState::from_polytope("cube", hypercube(2).unwrap(), false).unwrap();
        let trace = run(&state, &state.clone(), 4, false).unwrap();
        assert!(trace.terminated);
        assert_eq!(trace.expansions, 0);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn expansion_is_monotone_and_idempotent_at_the_fixed_point() {
        let (a, b) = canonical_pair(3, false).unwrap();
        let step1 = expand(&a, &b.group, false).unwrap();
        // Old vertices stay inside the new hull.
        for v in a.polytope.vertices() {
            assert!(in_hull(v, step1.polytope.vertices()));
        }
        // Fixed points of the expansion: the unit cube under permutations,
        // and the origin-symmetric representatives (centered cube,
        // cross-polytope) under the full hyperoctahedral action. The unit
        // cube itself is not origin-symmetric, so acting on it with the
        // origin-centered O_n realization would enlarge it to [-1,1]^n;
        // idempotence under O_n holds for the centered representative.
        let again = expand(&step1, &FiniteGroup::permutation_group(3), false).unwrap();
        assert_eq!(again.polytope, step1.polytope);
        let centered_cube =
            SourceSetState::from_polytope("cube", crate::symmetry::center(&hypercube(3).unwrap()), false)
                .unwrap();
        let again = expand(&centered_cube, &FiniteGroup::hyperoctahedral(3), false).unwrap();
        assert_eq!(again.polytope, centered_cube.polytope);
        let oct = SourceSetState::from_polytope("cross", octahedron(3).unwrap(), false).unwrap();
        let again = expand(&oct, &FiniteGroup::hyperoctahedral(3), false).unwrap();
        assert_eq!(again.polytope, oct.polytope);
    }

    #[test]
    fn subgroup_growth_along_the_canonical_run() {
        // At each step the previous group embeds into the new one.
        for n in 2..=3 {
            let (a, b) = canonical_pair(n, false).unwrap();
            let a2 = expand(&a, &b.group, false).unwrap();
            assert_eq!(a2.group.order() % a.group.order(), 0);
            let w = iso::embeds_into(&a.group, &a2.group, 400).unwrap().expect("embedding");
            assert!(w.verify());
            let b2 = expand(&b, &a2.group, false).unwrap();
            assert_eq!(b2.group.order() % b.group.order(), 0);
            let w = iso::embeds_into(&b.group, &b2.group, 400).unwrap().expect("embedding");
            assert!(w.verify());
        }
    }

    #[test]
    fn unterminated_run_is_reported() {
        // One step is not enough for the canonical pair.
        let (a, b) = canonical_pair(2, false).unwrap();
        let trace = run(&a, &b, 1, false).unwrap();
        assert!(!trace.terminated);
        assert_eq!(trace.expansions, 1);
    }

    #[test]
    fn trace_serializes() {
        let trace = run_canonical(2, 8, false).unwrap();
        let json = serde_json::to_value(&trace).unwrap();
        assert_eq!(json["terminated"], true);
        assert_eq!(json["expansions"], 2);
        assert_eq!(json["final_orders"][0], 8);
    }
}
