use super::field::Field;
use crate::error::{Error, Result};

/// Rectangular matrix over a field; the exact-elimination workhorse behind
/// kernels, solving and inverses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect<F: Field> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<F>,
}

impl<F: Field> Rect<F> {
    pub fn new(rows: usize, cols: usize, entries: Vec<F>) -> Rect<F> {
        assert_eq!(entries.len(), rows * cols);
        Rect { rows, cols, entries }
    }

    pub fn filled(rows: usize, cols: usize, v: F) -> Rect<F> {
        Rect { rows, cols, entries: vec![v; rows * cols] }
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<F>>) -> Rect<F> {
        let ncols = cols.len();
        assert!(cols.iter().all(|c| c.len() == rows));
        let zero = cols
            .first()
            .and_then(|c| c.first())
            .expect("from_columns needs at least one entry")
            .zero_like();
        let mut m = Rect::filled(rows, ncols, zero);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Rect<F>) -> Rect<F> {
        assert_eq!(self.cols, rhs.rows);
        let zero = self.entries[0].zero_like();
        let mut out = Rect::filled(self.rows, rhs.cols, zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j).add(&a.mul(rhs.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (Rect<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut pivot = None;
            for r in row..m.rows {
                if !m.at(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            // swap rows p and row
            if p != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(p, c).clone();
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let inv = m.at(row, col).inv().expect("pivot nonzero");
            for c in 0..m.cols {
                let v = m.at(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in 0..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as columns.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let zero = self.entries[0].zero_like();
        let one = self.entries[0].one_like();
        let (r, pivots) = self.rref();
        let mut basis = vec![];
        let mut pivot_of_col = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            pivot_of_col[c] = Some(i);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = r.at(prow, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * X = rhs exactly; None when inconsistent or the solution
    /// is not unique on the pivot structure (columns of self dependent).
    pub fn solve(&self, rhs: &Rect<F>) -> Option<Rect<F>> {
        assert_eq!(self.rows, rhs.rows);
        let zero = self.entries[0].zero_like();
        // augmented elimination
        let mut aug = Rect::filled(self.rows, self.cols + rhs.cols, zero.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, self.cols + j, rhs.at(i, j).clone());
            }
        }
        let (r, pivots) = aug.rref();
        // inconsistent if a pivot falls in the rhs block
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        if pivots.len() < self.cols {
            return None; // non-unique
        }
        let mut x = Rect::filled(self.cols, rhs.cols, zero);
        for (prow, &pcol) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pcol, j, r.at(prow, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Gauss-Jordan inverse for square matrices.
    pub fn inverse(&self) -> Result<Rect<F>> {
        assert_eq!(self.rows, self.cols);
        let zero = self.entries[0].zero_like();
        let one = self.entries[0].one_like();
        let mut id = Rect::filled(self.rows, self.rows, zero);
        for i in 0..self.rows {
            id.set(i, i, one.clone());
        }
        self.solve(&id).ok_or_else(|| Error::domain("matrix is singular"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(rows: usize, cols: usize, v: &[i64]) -> Rect<BigRational> {
        Rect::new(rows, cols, v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in ker {
            let col = Rect::from_columns(3, vec![v]);
            let prod = a.mul(&col);
            assert!(prod.entries().iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod, m(2, 2, &[1, 0, 0, 1]));
    }
}
