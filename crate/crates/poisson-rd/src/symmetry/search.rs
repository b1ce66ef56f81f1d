//! Backtracking enumeration of the automorphisms of an edge-colored
//! complete graph.
//!
//! Both polytope symmetry groups (colors = exact squared distances) and
//! graph automorphism groups (colors = adjacent / nonadjacent) reduce to
//! this search. Vertices are assigned in order of ascending profile-class
//! size with index tie-breaks; a candidate image must share the vertex
//! profile and agree color-wise with every previously assigned vertex.

/// Symmetric color matrix; entry (i, j) is the color of the pair {i, j}.
/// The diagonal is ignored.
pub struct ColorMatrix {
    m: usize,
    colors: Vec<u32>,
}

impl ColorMatrix {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            colors: vec![0; m * m],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, color: u32) {
        self.colors[i * self.m + j] = color;
        self.colors[j * self.m + i] = color;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.colors[i * self.m + j]
    }

    pub fn size(&self) -> usize {
        self.m
    }
}

/// Enumerates every vertex permutation `pi` with
/// `color(i, j) == color(pi(i), pi(j))` for all pairs, in a deterministic
/// order.
pub fn colored_automorphisms(colors: &ColorMatrix) -> Vec<Vec<usize>> {
    let m = colors.size();
    if m == 0 {
        return Vec::new();
    }
    // Vertex profile: sorted multiset of incident colors.
    let profiles: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut p: Vec<u32> = (0..m).filter(|&j| j != i).map(|j| colors.get(i, j)).collect();
            p.sort_unstable();
            p
        })
        .collect();
    let class_size = |i: usize| profiles.iter().filter(|p| **p == profiles[i]).count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (class_size(i), i));

    let mut out = Vec::new();
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    backtrack(colors, &profiles, &order, 0, &mut image, &mut used, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    colors: &ColorMatrix,
    profiles: &[Vec<u32>],
    order: &[usize],
    depth: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        out.push(image.clone());
        return;
    }
    let v = order[depth];
    for cand in 0..colors.size() {
        if used[cand] || profiles[cand] != profiles[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&a| colors.get(v, a) == colors.get(cand, image[a]));
        if consistent {
            image[v] = cand;
            used[cand] = true;
            backtrack(colors, profiles, order, depth + 1, image, used, out);
            used[cand] = false;
            image[v] = usize::MAX;
        }
    }
}
