//! Exact linear feasibility for convex-combination membership.
//!
//! Decides whether a point is a convex combination of a finite point set by
//! running phase 1 of the simplex method on the equality system
//! `sum t_i w_i = v`, `sum t_i = 1`, `t >= 0` with rational pivots and
//! Bland's rule. Vertex sets in this crate are tiny (at most a few dozen
//! points), so brute-force pivoting is entirely adequate.

use num_traits::{One, Signed, Zero};

use super::{Rational, RationalVector};

/// True iff `target` lies in the convex hull of `points`.
pub fn in_convex_hull(target: &RationalVector, points: &[&RationalVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.dim();
    let m = points.len();
    let rows = n + 1;
    let cols = m + rows + 1; // t variables, artificials, rhs

    // Constraint rows: coordinates of the combination, then the sum-to-one
    // row, with artificial identity columns and rhs; rhs made nonnegative.
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows + 1);
    for r in 0..rows {
        let mut row = vec![Rational::zero(); cols];
        for (j, w) in points.iter().enumerate() {
            row[j] = if r < n {
                w.coords()[r].clone()
            } else {
                Rational::one()
            };
        }
        row[m + r] = Rational::one();
        row[cols - 1] = if r < n {
            target.coords()[r].clone()
        } else {
            Rational::one()
        };
        if row[cols - 1].is_negative() {
            for cell in row.iter_mut() {
                *cell = -cell.clone();
            }
            row[m + r] = Rational::one();
            for (j, cell) in row.iter_mut().enumerate() {
                if j >= m && j < m + rows && j != m + r {
                    *cell = Rational::zero();
                }
            }
        }
        tab.push(row);
    }

    // Cost row for minimizing the artificial sum, priced out over the
    // initial artificial basis.
    let mut cost = vec![Rational::zero(); cols];
    for c in cost.iter_mut().skip(m).take(rows) {
        *c = Rational::one();
    }
    for row in &tab {
        for (c, cell) in cost.iter_mut().zip(row) {
            *c -= cell;
        }
    }
    let mut basis: Vec<usize> = (m..m + rows).collect();

    // Bland's rule: enter the smallest-index column with negative reduced
    // cost; stop at optimality.
    while let Some(enter) = (0..cols - 1).find(|&j| cost[j].is_negative()) {
        // Ratio test; ties broken by smallest basis variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for r in 0..rows {
            if tab[r][enter].is_positive() {
                let ratio = &tab[r][cols - 1] / &tab[r][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[r] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            // The phase-1 objective is bounded below by zero, so an
            // unbounded ray means the entering column is all nonpositive;
            // no pivot can improve further.
            break;
        };

        let pivot = tab[leave][enter].clone();
        for cell in tab[leave].iter_mut() {
            let scaled = &*cell / &pivot;
            *cell = scaled;
        }
        let pivot_row = tab[leave].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r != leave && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (cell, pv) in row.iter_mut().zip(&pivot_row) {
                    let delta = &factor * pv;
                    *cell -= delta;
                }
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (c, pv) in cost.iter_mut().zip(&tab[leave]) {
                let delta = &factor * pv;
                *c -= delta;
            }
        }
        basis[leave] = enter;
    }

    // Feasible iff all artificials were driven to zero.
    cost[cols - 1].is_zero()
}
