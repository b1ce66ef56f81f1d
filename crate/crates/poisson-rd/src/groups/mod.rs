//! Signed permutations and the finite matrix-group kernel.
//!
//! An element is a pair (permutation, sign vector) realized by the n x n
//! signed 0/1 matrix `A[i][j] = sign(i) * [j == perm(i)]`, acting on column
//! vectors. Composition is defined so that `matrix(compose(g, h)) =
//! matrix(g) * matrix(h)` exactly; this convention is property-tested
//! rather than left implicit. The permutation group embeds with all-plus
//! signs, the reflection group with the identity permutation, and together
//! they generate the full signed-permutation (hyperoctahedral) group.

pub mod iso;

use std::collections::{BTreeSet, VecDeque};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::caps;
use crate::geometry::RationalVector;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("images must form a permutation of 0..n")]
    InvalidPermutation,
    #[error("signs must be +1 or -1")]
    InvalidSigns,
    #[error("permutation and sign vector lengths differ")]
    LengthMismatch,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generator set must be nonempty")]
    EmptyGenerators,
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("group order {order} exceeds the isomorphism-search cap {cap}")]
    IsoCapExceeded { order: usize, cap: usize },
    #[error("argument is not a subgroup")]
    NotASubgroup,
    #[error("element set is not a group: {0}")]
    NotAGroup(&'static str),
}

/// An element of the signed-permutation group: `i -> sign(i) * e_{perm(i)}`
/// row-wise, i.e. `(g x)_i = sign(i) * x_{perm(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermutation {
    images: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(images: Vec<usize>, signs: Vec<i8>) -> Result<Self, GroupError> {
        if images.len() != signs.len() {
            return Err(GroupError::LengthMismatch);
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::InvalidPermutation);
            }
            seen[i] = true;
        }
        if !signs.iter().all(|&s| s == 1 || s == -1) {
            return Err(GroupError::InvalidSigns);
        }
        Ok(Self { images, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Plain permutation (all-plus signs), `images[i] = perm(i)` 0-based.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let signs = vec![1; images.len()];
        Self::new(images, signs)
    }

    /// Pure reflection (identity permutation with the given signs).
    pub fn from_signs(signs: Vec<i8>) -> Result<Self, GroupError> {
        let images = (0..signs.len()).collect();
        Self::new(images, signs)
    }

    pub fn dimension(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1) && self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_unsigned(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    /// The signed 0/1 action matrix.
    pub fn action_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.dimension();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][self.images[i]] = self.signs[i] as i64;
        }
        m
    }

    /// Composition matching matrix products: `matrix(self) * matrix(other)`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.dimension(),
            other.dimension(),
            "composing signed permutations of different dimensions"
        );
        let n = self.dimension();
        let mut images = vec![0; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            let k = self.images[i];
            images[i] = other.images[k];
            signs[i] = self.signs[i] * other.signs[k];
        }
        Self { images, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.dimension();
        let mut images = vec![0; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            images[self.images[i]] = i;
            signs[self.images[i]] = self.signs[i];
        }
        Self { images, signs }
    }

    /// Order of the element in the group.
    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.compose(self);
            k += 1;
        }
        k
    }

    /// Matrix-vector action on a float vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.dimension(), x.len());
        (0..x.len())
            .map(|i| self.signs[i] as f64 * x[self.images[i]])
            .collect()
    }

    /// Matrix-vector action on an exact rational point.
    pub fn apply_rational(&self, x: &RationalVector) -> RationalVector {
        assert_eq!(self.dimension(), x.dim());
        RationalVector::new(
            (0..x.dim())
                .map(|i| {
                    let c = x.coords()[self.images[i]].clone();
                    if self.signs[i] == 1 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        )
    }

    /// Image of a vertex set under the action.
    pub fn apply_to_set(&self, vertices: &BTreeSet<RationalVector>) -> BTreeSet<RationalVector> {
        vertices.iter().map(|v| self.apply_rational(v)).collect()
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // 1-based images on the wire, matching the usual cycle notation.
        let mut s = serializer.serialize_struct("SignedPermutation", 2)?;
        let perm: Vec<usize> = self.images.iter().map(|&i| i + 1).collect();
        s.serialize_field("perm", &perm)?;
        s.serialize_field("signs", &self.signs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for SignedPermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            perm: Vec<usize>,
            signs: Vec<i8>,
        }
        let w = Wire::deserialize(deserializer)?;
        let images: Vec<usize> = w
            .perm
            .iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| serde::de::Error::custom("perm is 1-based")))
            .collect::<Result<_, _>>()?;
        SignedPermutation::new(images, w.signs).map_err(serde::de::Error::custom)
    }
}

/// A finite group of signed permutations with an explicit element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<SignedPermutation>, // sorted, deduplicated
}

/// Report of the three internal-semidirect-product conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemidirectReport {
    pub normal: bool,
    pub trivial_intersection: bool,
    pub product: bool,
    pub all: bool,
}

impl FiniteGroup {
    /// Breadth-first closure of the generators under composition. The
    /// result always contains the identity and all inverses.
    pub fn generate(generators: &[SignedPermutation], cap: usize) -> Result<Self, GroupError> {
        let Some(first) = generators.first() else {
            return Err(GroupError::EmptyGenerators);
        };
        let dim = first.dimension();
        for g in generators {
            if g.dimension() != dim {
                return Err(GroupError::DimensionMismatch(dim, g.dimension()));
            }
        }
        let mut gens: Vec<SignedPermutation> = generators.to_vec();
        gens.extend(generators.iter().map(|g| g.inverse()));

        let mut elements = BTreeSet::new();
        let identity = SignedPermutation::identity(dim);
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(g) = queue.pop_front() {
            for gen in &gens {
                let next = g.compose(gen);
                if elements.insert(next.clone()) {
                    if elements.len() > cap {
                        return Err(GroupError::ClosureCapExceeded { cap });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(Self {
            dim,
            elements: elements.into_iter().collect(),
        })
    }

    /// Builds a group from an explicit element set, verifying the group
    /// axioms (identity, inverses, closure) exhaustively.
    pub fn from_elements(
        elements: impl IntoIterator<Item = SignedPermutation>,
    ) -> Result<Self, GroupError> {
        let set: BTreeSet<SignedPermutation> = elements.into_iter().collect();
        let Some(first) = set.iter().next() else {
            return Err(GroupError::NotAGroup("empty element set"));
        };
        let dim = first.dimension();
        if set.iter().any(|g| g.dimension() != dim) {
            return Err(GroupError::NotAGroup("mixed dimensions"));
        }
        if !set.contains(&SignedPermutation::identity(dim)) {
            return Err(GroupError::NotAGroup("missing identity"));
        }
        for g in &set {
            if !set.contains(&g.inverse()) {
                return Err(GroupError::NotAGroup("not closed under inverse"));
            }
        }
        for g in &set {
            for h in &set {
                if !set.contains(&g.compose(h)) {
                    return Err(GroupError::NotAGroup("not closed under composition"));
                }
            }
        }
        Ok(Self {
            dim,
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            dim: n,
            elements: vec![SignedPermutation::identity(n)],
        }
    }

    /// The permutation group on n coordinates, embedded with all-plus signs.
    pub fn permutation_group(n: usize) -> Self {
        let elements = permutations(n)
            .into_iter()
            .map(|p| SignedPermutation::from_images(p).unwrap());
        let set: BTreeSet<_> = elements.collect();
        Self {
            dim: n,
            elements: set.into_iter().collect(),
        }
    }

    /// The reflection group {+1,-1}^n, embedded with the identity
    /// permutation.
    pub fn reflection_group(n: usize) -> Self {
        assert!(n < 26, "reflection group enumeration limited to n < 26");
        let set: BTreeSet<_> = (0u32..1 << n)
            .map(|bits| {
                let signs = (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
                SignedPermutation::from_signs(signs).unwrap()
            })
            .collect();
        Self {
            dim: n,
            elements: set.into_iter().collect(),
        }
    }

    /// The full signed-permutation group of order 2^n n!.
    pub fn hyperoctahedral(n: usize) -> Self {
        assert!(n < 26);
        let mut set = BTreeSet::new();
        for p in permutations(n) {
            for bits in 0u32..1 << n {
                let signs: Vec<i8> =
                    (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
                set.insert(SignedPermutation::new(p.clone(), signs).unwrap());
            }
        }
        Self {
            dim: n,
            elements: set.into_iter().collect(),
        }
    }

    /// Adjacent transpositions, the standard generators of the permutation
    /// group (empty for n = 1).
    pub fn permutation_generators(n: usize) -> Vec<SignedPermutation> {
        (0..n.saturating_sub(1))
            .map(|i| {
                let mut images: Vec<usize> = (0..n).collect();
                images.swap(i, i + 1);
                SignedPermutation::from_images(images).unwrap()
            })
            .collect()
    }

    /// Single-coordinate sign flips, the standard generators of the
    /// reflection group.
    pub fn reflection_generators(n: usize) -> Vec<SignedPermutation> {
        (0..n)
            .map(|i| {
                let mut signs = vec![1i8; n];
                signs[i] = -1;
                SignedPermutation::from_signs(signs).unwrap()
            })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    pub fn identity(&self) -> SignedPermutation {
        SignedPermutation::identity(self.dim)
    }

    pub fn contains(&self, g: &SignedPermutation) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Index of an element in the canonical sorted order.
    pub fn index_of(&self, g: &SignedPermutation) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn is_subgroup_of(&self, g: &FiniteGroup) -> bool {
        self.dim == g.dim && self.elements.iter().all(|h| g.contains(h))
    }

    /// Exhaustive normality check: `g h g^{-1}` stays in `self` for every
    /// g in `g` and h in `self`. Also requires `self` to be a subgroup.
    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        if !self.is_subgroup_of(g) {
            return false;
        }
        for outer in &g.elements {
            let inv = outer.inverse();
            for h in &self.elements {
                if !self.contains(&outer.compose(h).compose(&inv)) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the three conditions for `g = h1 semidirect h2` exhaustively.
    pub fn verify_semidirect(
        g: &FiniteGroup,
        h1: &FiniteGroup,
        h2: &FiniteGroup,
    ) -> Result<SemidirectReport, GroupError> {
        if !h1.is_subgroup_of(g) || !h2.is_subgroup_of(g) {
            return Err(GroupError::NotASubgroup);
        }
        let normal = h1.is_normal_in(g);
        let identity = g.identity();
        let trivial_intersection = h1
            .elements
            .iter()
            .filter(|e| h2.contains(e))
            .all(|e| *e == identity);
        let mut product_set = BTreeSet::new();
        for a in &h1.elements {
            for b in &h2.elements {
                product_set.insert(a.compose(b));
            }
        }
        let product =
            product_set.len() == g.order() && product_set.iter().all(|e| g.contains(e));
        Ok(SemidirectReport {
            normal,
            trivial_intersection,
            product,
            all: normal && trivial_intersection && product,
        })
    }

    /// Image of a vertex set under every element of the group.
    pub fn orbit_of_set(&self, vertices: &BTreeSet<RationalVector>) -> BTreeSet<RationalVector> {
        let mut out = BTreeSet::new();
        for g in &self.elements {
            out.extend(g.apply_to_set(vertices));
        }
        out
    }

    /// Multiset of element orders, the cheap isomorphism invariant used to
    /// prune the search.
    pub fn order_multiset(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.elements {
            *m.entry(g.order()).or_insert(0) += 1;
        }
        m
    }

    /// Isomorphism test with the default cap; see [`iso::isomorphic`].
    pub fn isomorphic_to(&self, other: &FiniteGroup) -> Result<bool, GroupError> {
        Ok(iso::isomorphic(self, other, caps::iso_cap())?.is_some())
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{octahedron, order_simplex, standard_simplex, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signed_perm(rng: &mut ChaCha8Rng, n: usize) -> SignedPermutation {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            images.swap(i, j);
        }
        let signs = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        SignedPermutation::new(images, signs).unwrap()
    }

    #[test]
    fn action_matrices() {
        let id = SignedPermutation::identity(3);
        assert_eq!(
            id.action_matrix(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        let h = SignedPermutation::from_signs(vec![-1, 1]).unwrap();
        assert_eq!(h.action_matrix(), vec![vec![-1, 0], vec![0, 1]]);
        // o(1) = -2, o(2) = 1 sends (x1, x2) to (-x2, x1).
        let o = SignedPermutation::new(vec![1, 0], vec![-1, 1]).unwrap();
        assert_eq!(o.apply(&[3.0, 5.0]), vec![-5.0, 3.0]);
        assert_eq!(o.action_matrix(), vec![vec![0, -1], vec![1, 0]]);
    }

    #[test]
    fn compose_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(1..=5);
            let g = random_signed_perm(&mut rng, n);
            let h = random_signed_perm(&mut rng, n);
            let lhs = g.compose(&h).action_matrix();
            let (a, b) = (g.action_matrix(), h.action_matrix());
            let mut rhs = vec![vec![0i64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        rhs[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_and_action_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.random_range(1..=5);
            let g = random_signed_perm(&mut rng, n);
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.inverse().compose(&g).is_identity());

            let h = random_signed_perm(&mut rng, n);
            let x = RationalVector::new(
                (0..n).map(|_| rat(rng.random_range(-5..=5))).collect(),
            );
            // (g h) x = g (h x) and e x = x, exactly.
            assert_eq!(g.compose(&h).apply_rational(&x), g.apply_rational(&h.apply_rational(&x)));
            assert_eq!(SignedPermutation::identity(n).apply_rational(&x), x);
        }
    }

    #[test]
    fn act_on_canonical_vertex_sets() {
        let oct: BTreeSet<_> = octahedron(2).unwrap().vertices().iter().cloned().collect();
        for h in FiniteGroup::reflection_group(2).elements() {
            assert_eq!(h.apply_to_set(&oct), oct);
        }
        let simplex: BTreeSet<_> = order_simplex(2).unwrap().vertices().iter().cloned().collect();
        let swap = SignedPermutation::from_images(vec![1, 0]).unwrap();
        let expected: BTreeSet<_> = [
            RationalVector::from_integers(&[0, 0]),
            RationalVector::from_integers(&[1, 0]),
            RationalVector::from_integers(&[1, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(swap.apply_to_set(&simplex), expected);
    }

    #[test]
    fn generate_orders() {
        let s4 = FiniteGroup::generate(&FiniteGroup::permutation_generators(4), 1000).unwrap();
        assert_eq!(s4.order(), 24);

        let mut gens = FiniteGroup::permutation_generators(3);
        gens.extend(FiniteGroup::reflection_generators(3));
        let o3 = FiniteGroup::generate(&gens, 1000).unwrap();
        assert_eq!(o3.order(), 48);
        assert_eq!(o3, FiniteGroup::hyperoctahedral(3));

        let flip = SignedPermutation::from_signs(vec![-1, 1, 1]).unwrap();
        assert_eq!(FiniteGroup::generate(&[flip], 10).unwrap().order(), 2);

        assert_eq!(
            FiniteGroup::generate(&FiniteGroup::permutation_generators(4), 10).unwrap_err(),
            GroupError::ClosureCapExceeded { cap: 10 }
        );
    }

    #[test]
    fn canonical_group_orders() {
        for n in 1..=5 {
            assert_eq!(FiniteGroup::permutation_group(n).order(), (1..=n).product::<usize>());
            assert_eq!(FiniteGroup::reflection_group(n).order(), 1 << n);
            assert_eq!(
                FiniteGroup::hyperoctahedral(n).order(),
                (1 << n) * (1..=n).product::<usize>()
            );
        }
    }

    #[test]
    fn normality() {
        let o3 = FiniteGroup::hyperoctahedral(3);
        let h3 = FiniteGroup::reflection_group(3);
        let s3 = FiniteGroup::permutation_group(3);
        assert!(h3.is_normal_in(&o3));
        assert!(s3.is_subgroup_of(&o3));
        assert!(!FiniteGroup::permutation_group(2).is_normal_in(&FiniteGroup::hyperoctahedral(2)));
        assert!(o3.is_normal_in(&o3));
    }

    #[test]
    fn semidirect_product_structure() {
        let o3 = FiniteGroup::hyperoctahedral(3);
        let rep = FiniteGroup::verify_semidirect(
            &o3,
            &FiniteGroup::reflection_group(3),
            &FiniteGroup::permutation_group(3),
        )
        .unwrap();
        assert!(rep.all, "{rep:?}");

        // With the roles swapped the normality condition fails.
        let o2 = FiniteGroup::hyperoctahedral(2);
        let rep = FiniteGroup::verify_semidirect(
            &o2,
            &FiniteGroup::permutation_group(2),
            &FiniteGroup::reflection_group(2),
        )
        .unwrap();
        assert!(!rep.normal);
        assert!(rep.trivial_intersection && rep.product);
        assert!(!rep.all);

        let e = FiniteGroup::trivial(2);
        let rep = FiniteGroup::verify_semidirect(&e, &e, &e).unwrap();
        assert!(rep.all);

        assert_eq!(
            FiniteGroup::verify_semidirect(&FiniteGroup::trivial(3), &o3, &o3).unwrap_err(),
            GroupError::NotASubgroup
        );
    }

    #[test]
    fn set_action_is_a_homomorphism_on_simplex_images() {
        // Permutations acting on the ordered-timing simplex vertices and
        // reflections acting on the standard-simplex vertices compose the
        // way the group does.
        let v: BTreeSet<_> = order_simplex(3).unwrap().vertices().iter().cloned().collect();
        let s3 = FiniteGroup::permutation_group(3);
        for g in s3.elements() {
            for h in s3.elements() {
                assert_eq!(
                    g.compose(h).apply_to_set(&v),
                    g.apply_to_set(&h.apply_to_set(&v))
                );
            }
        }
        let tri: BTreeSet<_> =
            standard_simplex(3, &rat(1)).unwrap().vertices().iter().cloned().collect();
        let h3 = FiniteGroup::reflection_group(3);
        for g in h3.elements().iter().take(4) {
            for h in h3.elements() {
                assert_eq!(
                    g.compose(h).apply_to_set(&tri),
                    g.apply_to_set(&h.apply_to_set(&tri))
                );
            }
        }
    }

    #[test]
    fn element_json_round_trip() {
        let o = SignedPermutation::new(vec![1, 0], vec![-1, 1]).unwrap();
        let json = serde_json::to_value(&o).unwrap();
        assert_eq!(json, serde_json::json!({"perm": [2, 1], "signs": [-1, 1]}));
        let back: SignedPermutation = serde_json::from_value(json).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn from_elements_validates() {
        let swap = SignedPermutation::from_images(vec![1, 0]).unwrap();
        assert!(FiniteGroup::from_elements([swap.clone()]).is_err());
        let ok = FiniteGroup::from_elements([SignedPermutation::identity(2), swap]).unwrap();
        assert_eq!(ok.order(), 2);
    }
}
