//! Brute-force isomorphism and embedding search for small finite groups.
//!
//! The search assigns images to a greedily chosen generating sequence,
//! pruned by element-order matching, and propagates each partial
//! assignment through a breadth-first closure that checks the
//! homomorphism condition on every (element, generator) product. Both
//! groups are first compiled to index-based multiplication tables.
//! Adequate up to the configured cap (default 400, which covers the
//! order-384 hyperoctahedral group in four dimensions).

use std::collections::BTreeMap;

use super::{FiniteGroup, GroupError, SignedPermutation};

/// A verified homomorphism witness, stored as element pairs sorted by the
/// source element.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub pairs: Vec<(SignedPermutation, SignedPermutation)>,
}

impl Morphism {
    fn from_index_map(g: &FiniteGroup, h: &FiniteGroup, map: &[Option<usize>]) -> Self {
        let pairs = map
            .iter()
            .enumerate()
            .map(|(gi, hi)| {
                (
                    g.elements()[gi].clone(),
                    h.elements()[hi.expect("total map")].clone(),
                )
            })
            .collect();
        Self { pairs }
    }

    pub fn image_of(&self, g: &SignedPermutation) -> Option<&SignedPermutation> {
        self.pairs
            .binary_search_by(|(a, _)| a.cmp(g))
            .ok()
            .map(|i| &self.pairs[i].1)
    }

    /// Exhaustively re-checks that the witness is an injective
    /// homomorphism: `phi(a b) = phi(a) phi(b)` for all pairs and all
    /// images distinct.
    pub fn verify(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for (_, img) in &self.pairs {
            if !seen.insert(img.clone()) {
                return false;
            }
        }
        for (a, fa) in &self.pairs {
            for (b, fb) in &self.pairs {
                let ab = a.compose(b);
                let Some(fab) = self.image_of(&ab) else {
                    return false;
                };
                if *fab != fa.compose(fb) {
                    return false;
                }
            }
        }
        true
    }
}

/// Index-based multiplication table of a finite group.
struct MulTable {
    order: usize,
    identity: usize,
    table: Vec<u32>, // table[a * order + b] = index of elements[a] compose elements[b]
    element_orders: Vec<usize>,
}

impl MulTable {
    fn build(g: &FiniteGroup) -> Self {
        let order = g.order();
        let mut table = vec![0u32; order * order];
        for (a, ea) in g.elements().iter().enumerate() {
            for (b, eb) in g.elements().iter().enumerate() {
                let idx = g.index_of(&ea.compose(eb)).expect("group is closed");
                table[a * order + b] = idx as u32;
            }
        }
        let identity = g.index_of(&g.identity()).expect("identity in group");
        let element_orders = g.elements().iter().map(|e| e.order()).collect();
        Self {
            order,
            identity,
            table,
            element_orders,
        }
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }
}

fn check_caps(g: &FiniteGroup, h: &FiniteGroup, cap: usize) -> Result<(), GroupError> {
    let order = g.order().max(h.order());
    if order > cap {
        return Err(GroupError::IsoCapExceeded { order, cap });
    }
    Ok(())
}

/// Searches for a group isomorphism. Returns a witness when one exists.
pub fn isomorphic(
    g: &FiniteGroup,
    h: &FiniteGroup,
    cap: usize,
) -> Result<Option<Morphism>, GroupError> {
    check_caps(g, h, cap)?;
    if g.order() != h.order() || g.order_multiset() != h.order_multiset() {
        return Ok(None);
    }
    Ok(search(g, h, true))
}

/// Searches for an injective homomorphism of `g` into `h`.
pub fn embeds_into(
    g: &FiniteGroup,
    h: &FiniteGroup,
    cap: usize,
) -> Result<Option<Morphism>, GroupError> {
    check_caps(g, h, cap)?;
    if g.order() > h.order() || !h.order().is_multiple_of(g.order()) {
        return Ok(None);
    }
    let hs = h.order_multiset();
    for (order, count) in g.order_multiset() {
        if hs.get(&order).copied().unwrap_or(0) < count {
            return Ok(None);
        }
    }
    Ok(search(g, h, false))
}

struct Search {
    gt: MulTable,
    ht: MulTable,
    surjective: bool,
    gen_indices: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

fn search(g: &FiniteGroup, h: &FiniteGroup, surjective: bool) -> Option<Morphism> {
    let gt = MulTable::build(g);
    let ht = MulTable::build(h);

    let mut h_by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, o) in ht.element_orders.iter().enumerate() {
        h_by_order.entry(*o).or_default().push(i);
    }

    // Greedy generating sequence: repeatedly add the element outside the
    // current closure with the fewest order-matched candidates in h.
    let mut gen_indices: Vec<usize> = Vec::new();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut closure = closure_of(&gt, &gen_indices);
    while closure.iter().filter(|&&b| b).count() < gt.order {
        let pick = (0..gt.order)
            .filter(|&i| !closure[i])
            .min_by_key(|&i| {
                (
                    h_by_order
                        .get(&gt.element_orders[i])
                        .map_or(0, |v| v.len()),
                    i,
                )
            })
            .expect("closure is proper");
        let cands = h_by_order
            .get(&gt.element_orders[pick])
            .cloned()
            .unwrap_or_default();
        if cands.is_empty() {
            return None;
        }
        gen_indices.push(pick);
        candidates.push(cands);
        closure = closure_of(&gt, &gen_indices);
    }

    let s = Search {
        gt,
        ht,
        surjective,
        gen_indices,
        candidates,
    };
    let mut images = Vec::new();
    s.assign(0, &mut images)
        .map(|map| Morphism::from_index_map(g, h, &map))
}

/// Membership mask of the subgroup generated by the given element indices.
fn closure_of(t: &MulTable, gens: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; t.order];
    mask[t.identity] = true;
    let mut queue = vec![t.identity];
    while let Some(x) = queue.pop() {
        for &gi in gens {
            let y = t.mul(x, gi);
            if !mask[y] {
                mask[y] = true;
                queue.push(y);
            }
        }
    }
    mask
}

impl Search {
    fn assign(&self, depth: usize, images: &mut Vec<usize>) -> Option<Vec<Option<usize>>> {
        if depth == self.gen_indices.len() {
            return self.propagate(images).filter(|map| {
                let mut used = vec![false; self.ht.order];
                let mut count = 0;
                for hi in map.iter().flatten() {
                    if used[*hi] {
                        return false;
                    }
                    used[*hi] = true;
                    count += 1;
                }
                !self.surjective || count == self.ht.order
            });
        }
        for &cand in &self.candidates[depth] {
            images.push(cand);
            // Propagation over the prefix closure rejects inconsistent
            // partial assignments before descending.
            if self.propagate(images).is_some() {
                if let Some(map) = self.assign(depth + 1, images) {
                    return Some(map);
                }
            }
            images.pop();
        }
        None
    }

    /// Extends the partial generator assignment to the subgroup the
    /// assigned generators produce, checking the homomorphism condition on
    /// every (element, generator) product. Returns the index map when
    /// consistent.
    fn propagate(&self, images: &[usize]) -> Option<Vec<Option<usize>>> {
        let mut map: Vec<Option<usize>> = vec![None; self.gt.order];
        map[self.gt.identity] = Some(self.ht.identity);
        let mut queue = vec![self.gt.identity];
        while let Some(x) = queue.pop() {
            let fx = map[x].unwrap();
            for (k, &img) in images.iter().enumerate() {
                let y = self.gt.mul(x, self.gen_indices[k]);
                let fy = self.ht.mul(fx, img);
                match map[y] {
                    None => {
                        map[y] = Some(fy);
                        queue.push(y);
                    }
                    Some(existing) if existing != fy => return None,
                    _ => {}
                }
            }
        }
        Some(map)
    }
}
