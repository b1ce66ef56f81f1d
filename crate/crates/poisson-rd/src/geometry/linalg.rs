//! Small exact-rational matrix helpers (Gauss-Jordan based).

use num_traits::{One, Zero};

use super::{Rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    /// Builds the n x k matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[&RationalVector]) -> Self {
        let rows = columns.first().map_or(0, |c| c.dim());
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.coords().iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = self.at(i, k) * other.at(k, j);
                    *out.at_mut(i, j) += term;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(self.cols, v.dim());
        RationalVector::new(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| self.at(i, j) * &v.coords()[j])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Exact inverse, or None when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot_row != col {
                for j in 0..n {
                    self::swap_entries(&mut a, pivot_row, col, j);
                    self::swap_entries(&mut inv, pivot_row, col, j);
                }
            }
            let pivot = a.at(col, col).clone();
            for j in 0..n {
                let v = a.at(col, j) / &pivot;
                *a.at_mut(col, j) = v;
                let v = inv.at(col, j) / &pivot;
                *inv.at_mut(col, j) = v;
            }
            for r in 0..n {
                if r != col && !a.at(r, col).is_zero() {
                    let factor = a.at(r, col).clone();
                    for j in 0..n {
                        let delta = &factor * a.at(col, j);
                        *a.at_mut(r, j) -= delta;
                        let delta = &factor * inv.at(col, j);
                        *inv.at_mut(r, j) -= delta;
                    }
                }
            }
        }
        Some(inv)
    }
}

fn swap_entries(m: &mut RationalMatrix, r1: usize, r2: usize, j: usize) {
    let cols = m.cols();
    m.data.swap(r1 * cols + j, r2 * cols + j);
}

/// Indices of a maximal linearly independent subset of the given vectors,
/// chosen greedily in input order.
pub fn independent_columns(vectors: &[&RationalVector]) -> Vec<usize> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let dim = first.dim();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut row: Vec<Rational> = v.coords().to_vec();
        for e in &echelon {
            let lead = e.iter().position(|x| !x.is_zero()).unwrap();
            if !row[lead].is_zero() {
                let factor = &row[lead] / &e[lead];
                for (r, b) in row.iter_mut().zip(e) {
                    let delta = &factor * b;
                    *r -= delta;
                }
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            echelon.push(row);
            chosen.push(idx);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn inverse_round_trip() {
        let mut m = RationalMatrix::zeros(2, 2);
        *m.at_mut(0, 0) = rat(2);
        *m.at_mut(0, 1) = rat(1);
        *m.at_mut(1, 0) = rat(1);
        *m.at_mut(1, 1) = rat(1);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());

        let mut singular = RationalMatrix::zeros(2, 2);
        *singular.at_mut(0, 0) = rat(1);
        *singular.at_mut(1, 0) = rat(2);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn independent_column_selection() {
        let a = RationalVector::from_integers(&[1, 0, 0]);
        let b = RationalVector::from_integers(&[2, 0, 0]);
        let c = RationalVector::from_integers(&[0, 1, 0]);
        let d = RationalVector::from_integers(&[1, 1, 0]);
        let idx = independent_columns(&[&a, &b, &c, &d]);
        assert_eq!(idx, vec![0, 2]);
    }
}
