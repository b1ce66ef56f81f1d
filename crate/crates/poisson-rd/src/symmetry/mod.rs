//! Vertex-based symmetry groups of polytopes and graph automorphisms.
//!
//! The symmetry group of a polytope is computed as the group of vertex
//! permutations preserving all pairwise squared Euclidean distances
//! (exact rationals; radicals never materialize). Each such permutation
//! extends to a unique linear map once the polytope is centered, and that
//! map is checked to be exactly orthogonal. Graphs of the canonical
//! polytope families are built from their distance characterizations: cube
//! edges at squared distance 1, octahedron edges at squared distance 2,
//! simplex graphs complete.

mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caps;
use crate::geometry::linalg::{independent_columns, RationalMatrix};
use crate::geometry::{hypercube, octahedron, standard_simplex, GeometryError, Polytope, Rational, RationalVector};
use crate::groups::{FiniteGroup, GroupError, SignedPermutation};

pub use search::{colored_automorphisms, ColorMatrix};

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("vertex count {m} exceeds the automorphism search cap {cap}")]
    VertexCapExceeded { m: usize, cap: usize },
    #[error("polytope is not full-dimensional: vertices span only {rank} of {dim} dimensions")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("permutation is not a symmetry of the vertex set")]
    NotASymmetry,
    #[error("dimension {n} out of range (max {max})")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("expected an unsigned vertex permutation of {expected} vertices")]
    NotAVertexPermutation { expected: usize },
}

/// Translates a polytope so its vertex centroid is the origin.
pub fn center(p: &Polytope) -> Polytope {
    let c = p.centroid();
    Polytope::new(p.vertices().iter().map(|v| v.sub(&c))).expect("nonempty vertex set")
}

fn distance_colors(vertices: &[RationalVector]) -> ColorMatrix {
    let m = vertices.len();
    let mut palette: BTreeMap<Rational, u32> = BTreeMap::new();
    let mut colors = ColorMatrix::new(m);
    for i in 0..m {
        for j in i + 1..m {
            let d = vertices[i].distance_sq(&vertices[j]);
            let next = palette.len() as u32 + 1;
            let id = *palette.entry(d).or_insert(next);
            colors.set(i, j, id);
        }
    }
    colors
}

/// The group of vertex permutations preserving all pairwise distances,
/// as a permutation group on vertex indices in the polytope's canonical
/// vertex order. Distances are translation invariant, so the result equals
/// that of the centered polytope.
pub fn vertex_symmetry_group(p: &Polytope) -> Result<FiniteGroup, SymmetryError> {
    let cap = caps::aut_vertex_cap();
    if p.vertex_count() > cap {
        return Err(SymmetryError::VertexCapExceeded {
            m: p.vertex_count(),
            cap,
        });
    }
    let colors = distance_colors(p.vertices());
    let perms = colored_automorphisms(&colors);
    let elements = perms
        .into_iter()
        .map(|images| SignedPermutation::from_images(images).expect("search yields permutations"));
    Ok(FiniteGroup::from_elements(elements)?)
}

/// The unique linear extension of a distance-preserving vertex permutation
/// of a centered full-dimensional polytope, with an exact orthogonality
/// check.
#[derive(Debug, Clone)]
pub struct AffineExtension {
    pub matrix: RationalMatrix,
    pub is_isometry: bool,
}

/// Solves for the linear map sending each vertex of the centered polytope
/// to its image under the vertex permutation `g`. The polytope must be
/// full-dimensional (vertices spanning R^n after centering); the map is
/// then unique and, for a genuine symmetry, orthogonal.
pub fn affine_extension(
    g: &SignedPermutation,
    p: &Polytope,
) -> Result<AffineExtension, SymmetryError> {
    let m = p.vertex_count();
    if g.dimension() != m || !g.is_unsigned() {
        return Err(SymmetryError::NotAVertexPermutation { expected: m });
    }
    let centered = center(p);
    let verts = centered.vertices();
    let n = centered.dim();

    let refs: Vec<&RationalVector> = verts.iter().collect();
    let basis = independent_columns(&refs);
    if basis.len() < n {
        return Err(SymmetryError::NotFullDimensional {
            rank: basis.len(),
            dim: n,
        });
    }

    let b_cols: Vec<&RationalVector> = basis.iter().map(|&i| &verts[i]).collect();
    let w_cols: Vec<&RationalVector> = basis.iter().map(|&i| &verts[g.images()[i]]).collect();
    let b = RationalMatrix::from_columns(&b_cols);
    let w = RationalMatrix::from_columns(&w_cols);
    let matrix = w.mul(&b.inverse().expect("basis columns are independent"));

    // The solved map must send every vertex to its assigned image, not
    // just the spanning subset.
    for (i, v) in verts.iter().enumerate() {
        if matrix.apply(v) != verts[g.images()[i]] {
            return Err(SymmetryError::NotASymmetry);
        }
    }
    let is_isometry = matrix.transpose().mul(&matrix).is_identity();
    Ok(AffineExtension { matrix, is_isometry })
}

/// An undirected graph on `m` vertices, optionally tagged with the
/// geometric vertices it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    m: usize,
    edges: Vec<(usize, usize)>, // sorted, i < j
    labels: Option<Vec<RationalVector>>,
}

impl Graph {
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut set: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(i, j)| {
                assert!(i != j, "self-loop");
                assert!(i < m && j < m, "vertex index out of range");
                (i.min(j), i.max(j))
            })
            .collect();
        set.sort_unstable();
        set.dedup();
        Self {
            m,
            edges: set,
            labels: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn labels(&self) -> Option<&[RationalVector]> {
        self.labels.as_deref()
    }

    /// Shortest-path lengths from `start` by breadth-first search;
    /// unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, start: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.m];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut dist = vec![usize::MAX; self.m];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            m: self.m,
            edges: self.edges.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        Ok(Graph::new(raw.m, raw.edges))
    }
}

/// The canonical polytope families whose graphs the distance
/// characterizations cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolytopeFamily {
    Cube,
    Octahedron,
    Simplex,
}

impl PolytopeFamily {
    pub fn polytope(self, n: usize) -> Result<Polytope, GeometryError> {
        match self {
            PolytopeFamily::Cube => hypercube(n),
            PolytopeFamily::Octahedron => octahedron(n),
            PolytopeFamily::Simplex => standard_simplex(n, &Rational::from_integer(1.into())),
        }
    }
}

/// Graph of a canonical polytope: vertices in the polytope's canonical
/// order, edges from the exact distance characterization of its
/// 1-dimensional faces (cube: squared distance 1; octahedron: squared
/// distance 2, which excludes antipodal pairs; simplex: complete).
pub fn polytope_graph(family: PolytopeFamily, n: usize) -> Result<Graph, SymmetryError> {
    let p = family.polytope(n)?;
    let verts = p.vertices();
    let m = verts.len();
    let edge_dist_sq: Option<Rational> = match family {
        PolytopeFamily::Cube => Some(Rational::from_integer(1.into())),
        PolytopeFamily::Octahedron => Some(Rational::from_integer(2.into())),
        PolytopeFamily::Simplex => None, // complete graph
    };
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let keep = match &edge_dist_sq {
                Some(d) => verts[i].distance_sq(&verts[j]) == *d,
                None => true,
            };
            if keep {
                edges.push((i, j));
            }
        }
    }
    let mut graph = Graph::new(m, edges);
    graph.labels = Some(verts.to_vec());
    Ok(graph)
}

/// All vertex permutations preserving adjacency and nonadjacency, found by
/// profile-refined backtracking.
pub fn graph_automorphisms(graph: &Graph) -> Result<FiniteGroup, SymmetryError> {
    let cap = caps::aut_vertex_cap();
    if graph.vertex_count() > cap {
        return Err(SymmetryError::VertexCapExceeded {
            m: graph.vertex_count(),
            cap,
        });
    }
    let mut colors = ColorMatrix::new(graph.vertex_count());
    for &(i, j) in graph.edges() {
        colors.set(i, j, 1);
    }
    let perms = colored_automorphisms(&colors);
    let elements = perms
        .into_iter()
        .map(|images| SignedPermutation::from_images(images).expect("search yields permutations"));
    Ok(FiniteGroup::from_elements(elements)?)
}

/// Direct predicate: `images` permutes graph vertices preserving edges and
/// non-edges. Independent of the backtracking engine.
pub fn is_graph_automorphism(images: &[usize], graph: &Graph) -> bool {
    let m = graph.vertex_count();
    if images.len() != m {
        return false;
    }
    for i in 0..m {
        for j in i + 1..m {
            if graph.has_edge(i, j) != graph.has_edge(images[i], images[j]) {
                return false;
            }
        }
    }
    true
}

/// Direct predicate: `images` permutes the vertex list preserving all
/// pairwise squared distances.
pub fn preserves_pairwise_distances(images: &[usize], vertices: &[RationalVector]) -> bool {
    let m = vertices.len();
    if images.len() != m {
        return false;
    }
    for i in 0..m {
        for j in i + 1..m {
            if vertices[i].distance_sq(&vertices[j])
                != vertices[images[i]].distance_sq(&vertices[images[j]])
            {
                return false;
            }
        }
    }
    true
}

/// Outcome of comparing the polytope symmetry group with the automorphism
/// group of the polytope's graph on the same vertex indexing.
#[derive(Debug, Clone, Serialize)]
pub struct SymAutReport {
    pub sym_order: usize,
    pub aut_order: usize,
    pub isomorphic: bool,
}

/// Computes both groups as vertex permutation groups over the same
/// canonical vertex order and checks equality as element sets, the
/// executable form of the symmetry-equals-automorphism theorems.
pub fn verify_sym_equals_aut(family: PolytopeFamily, n: usize) -> Result<SymAutReport, SymmetryError> {
    let p = family.polytope(n)?;
    let sym = vertex_symmetry_group(&p)?;
    let aut = graph_automorphisms(&polytope_graph(family, n)?)?;
    Ok(SymAutReport {
        sym_order: sym.order(),
        aut_order: aut.order(),
        isomorphic: sym == aut,
    })
}

/// For every pair of hypercube vertices, the graph shortest-path length,
/// the Hamming distance, and the exact squared Euclidean distance agree.
pub fn hamming_l2_check(n: usize) -> Result<bool, SymmetryError> {
    if n == 0 || n > 10 {
        return Err(SymmetryError::DimensionOutOfRange { n, max: 10 });
    }
    let p = hypercube(n)?;
    let verts = p.vertices();
    let m = verts.len();
    let mut edges = Vec::new();
    let one = Rational::from_integer(1.into());
    for i in 0..m {
        for j in i + 1..m {
            if verts[i].distance_sq(&verts[j]) == one {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::new(m, edges);
    for i in 0..m {
        let dist = graph.bfs_distances(i);
        for j in 0..m {
            if i == j {
                continue;
            }
            let hamming = verts[i]
                .coords()
                .iter()
                .zip(verts[j].coords())
                .filter(|(a, b)| a != b)
                .count();
            let l2_sq = verts[i].distance_sq(&verts[j]);
            if dist[j] != hamming || l2_sq != Rational::from_integer(hamming.into()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
