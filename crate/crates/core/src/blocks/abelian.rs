use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix used by the abelian-group computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> IntMat {
        assert_eq!(data.len(), rows * cols);
        IntMat { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> IntMat {
        IntMat::new(rows, cols, data.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + self.at(i, k) * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let x = self.at(a, c).clone();
            let y = self.at(b, c).clone();
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let x = self.at(r, a).clone();
            let y = self.at(r, b).clone();
            self.set(r, a, y);
            self.set(r, b, x);
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(target, c) + factor * self.at(source, c);
            self.set(target, c, v);
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, target) + factor * self.at(r, source);
            self.set(r, target, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }
}

/// Smith normal form with transforms: returns (d, u, v) with u * m * v = d,
/// u and v unimodular, d diagonal with nonnegative entries in a
/// divisibility chain.
pub fn smith_normal_form(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);
    let n = m.rows.min(m.cols);
    for k in 0..n {
        loop {
            // find the minimal nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if !d.at(i, j).is_zero() {
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => d.at(i, j).abs() < d.at(bi, bj).abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // rest of the block is zero
                return (d, u, v);
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let pivot = d.at(k, k).clone();
            let mut clean = true;
            for i in k + 1..d.rows {
                if d.at(i, k).is_zero() {
                    continue;
                }
                let q = -(d.at(i, k) / &pivot);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                if !d.at(i, k).is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..d.cols {
                if d.at(k, j).is_zero() {
                    continue;
                }
                let q = -(d.at(k, j) / &pivot);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                if !d.at(k, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility: pivot must divide the rest of the block
            let mut fixed = true;
            'outer: for i in k + 1..d.rows {
                for j in k + 1..d.cols {
                    if !(d.at(i, j) % &pivot).is_zero() {
                        // fold row i into row k and restart the pivot hunt
                        d.add_row_multiple(k, i, &BigInt::one());
                        u.add_row_multiple(k, i, &BigInt::one());
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d.at(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    (d, u, v)
}

/// Presentation of a homomorphism from a free abelian group A into
/// C = Z^free_rank (+) torsion: one image row per basis element of A, the
/// first free_rank entries in the free part, the rest taken modulo the
/// torsion orders.
#[derive(Clone, Debug)]
pub struct AbelianPresentation {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub images: IntMat,
}

impl AbelianPresentation {
    pub fn new(free_rank: usize, torsion: Vec<u64>, rows: Vec<Vec<i64>>) -> Result<AbelianPresentation> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(Error::domain("torsion orders must be at least 2"));
        }
        let width = free_rank + torsion.len();
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("presentation needs at least one image row"));
        }
        let mut data = vec![];
        for row in &rows {
            if row.len() != width {
                return Err(Error::domain(format!(
                    "image rows must have {width} entries (free part then torsion part)"
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                let v = if j >= free_rank {
                    let t = torsion[j - free_rank] as i64;
                    v.rem_euclid(t)
                } else {
                    v
                };
                data.push(BigInt::from(v));
            }
        }
        Ok(AbelianPresentation { free_rank, torsion, images: IntMat::new(n, width, data) })
    }

    pub fn rank_of_a(&self) -> usize {
        self.images.rows
    }

    /// The free-part image matrix (torsion coordinates dropped).
    pub fn free_images(&self) -> IntMat {
        let n = self.images.rows;
        let mut m = IntMat::zero(n, self.free_rank);
        for i in 0..n {
            for j in 0..self.free_rank {
                m.set(i, j, self.images.at(i, j).clone());
            }
        }
        m
    }
}

/// Result of the direct-factor split: a projection phi from C onto Z^n
/// under which A still injects, and the finite index [Z^n : phi(theta(A))].
#[derive(Clone, Debug)]
pub struct DirectFactorSplit {
    /// n x free_rank integer matrix: phi on the free part of C (torsion is
    /// killed), acting on column vectors
    pub projection: IntMat,
    pub index: BigInt,
}

/// Compose the abelianized image with a projection onto Z^n keeping A
/// injective; the image has finite index equal to the product of the
/// nonzero elementary divisors of the free image matrix.
pub fn split_direct_factor(p: &AbelianPresentation) -> Result<DirectFactorSplit> {
    let n = p.rank_of_a();
    let m = p.free_rank;
    if n > m {
        return Err(Error::domain(
            "free image rank cannot reach the rank of A (theta is not injective on A)",
        ));
    }
    let free = p.free_images();
    let (d, _u, v) = smith_normal_form(&free);
    let mut index = BigInt::one();
    for k in 0..n {
        let dk = d.at(k, k);
        if dk.is_zero() {
            return Err(Error::domain(
                "image matrix is rank deficient: theta is not injective on A modulo torsion",
            ));
        }
        index *= dk;
    }
    // phi(x) = (first n coordinates of V^T x): rows of the projection are
    // the first n columns of V
    let mut projection = IntMat::zero(n, m);
    for i in 0..n {
        for j in 0..m {
            projection.set(i, j, v.at(j, i).clone());
        }
    }
    Ok(DirectFactorSplit { projection, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_diag_and_transforms() {
        let m = IntMat::from_i64(2, 2, &[2, 4, 6, 8]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(d.at(0, 0), &BigInt::from(2));
        assert_eq!(d.at(1, 1), &BigInt::from(4));
        assert!((d.at(1, 1) % d.at(0, 0)).is_zero());
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMat::from_i64(1, 2, &[0, 3]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(d.at(0, 0), &BigInt::from(3));
    }

    #[test]
    fn split_z_to_z_index_two() {
        // C = Z, A = Z, theta(a) = 2: identity projection, index 2
        let p = AbelianPresentation::new(1, vec![], vec![vec![2]]).unwrap();
        let s = split_direct_factor(&p).unwrap();
        assert_eq!(s.index, BigInt::from(2));
        assert_eq!(s.projection.at(0, 0).abs(), BigInt::one());
    }

    #[test]
    fn split_with_torsion_index_three() {
        // C = Z^2 + Z/2, A = Z, theta(a) = (0, 3; 1): second-coordinate
        // projection, index 3
        let p = AbelianPresentation::new(2, vec![2], vec![vec![0, 3, 1]]).unwrap();
        let s = split_direct_factor(&p).unwrap();
        assert_eq!(s.index, BigInt::from(3));
        // phi(theta(a)) = 3 in Z: row picks out the second coordinate up to sign
        let img = s.projection.mul(&IntMat::from_i64(2, 1, &[0, 3]));
        assert_eq!(img.at(0, 0).abs(), BigInt::from(3));
    }

    #[test]
    fn split_diag_index_six() {
        // C = Z^2, A = Z^2, theta = diag(2, 3): index 6
        let p = AbelianPresentation::new(2, vec![], vec![vec![2, 0], vec![0, 3]]).unwrap();
        let s = split_direct_factor(&p).unwrap();
        assert_eq!(s.index, BigInt::from(6));
    }

    #[test]
    fn rank_deficiency_is_an_error() {
        let p = AbelianPresentation::new(2, vec![], vec![vec![1, 0], vec![2, 0]]).unwrap();
        assert!(split_direct_factor(&p).is_err());
    }
}
