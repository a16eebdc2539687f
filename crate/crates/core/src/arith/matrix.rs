use std::fmt;

use super::field::Field;
use super::linalg::Rect;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Square matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<F: Field> {
    n: usize,
    entries: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn new(n: usize, entries: Vec<F>) -> Mat<F> {
        assert_eq!(entries.len(), n * n, "square matrix data");
        Mat { n, entries }
    }

    pub fn identity(n: usize, like: &F) -> Mat<F> {
        let mut entries = vec![like.zero_like(); n * n];
        for i in 0..n {
            entries[i * n + i] = like.one_like();
        }
        Mat { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Mat<F> {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix data");
        Mat { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.entries[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn context(&self) -> &F {
        &self.entries[0]
    }

    pub fn is_identity(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.at(i, j);
                if i == j && !e.is_one() {
                    return false;
                }
                if i != j && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.n, rhs.n);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect();
        Mat { n: self.n, entries }
    }

    pub fn sub(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.n, rhs.n);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub(b)).collect();
        Mat { n: self.n, entries }
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.n, rhs.n);
        let zero = self.entries[0].zero_like();
        let mut out = vec![zero; self.n * self.n];
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    out[i * self.n + j] = out[i * self.n + j].add(&a.mul(rhs.at(k, j)));
                }
            }
        }
        Mat { n: self.n, entries: out }
    }

    pub fn mul_scalar(&self, c: &F) -> Mat<F> {
        Mat { n: self.n, entries: self.entries.iter().map(|e| e.mul(c)).collect() }
    }

    pub fn inverse(&self) -> Result<Mat<F>> {
        let r = self.to_rect().inverse()?;
        Ok(Mat { n: self.n, entries: r.entries().to_vec() })
    }

    /// g^e for e >= 0 by repeated squaring; entry sizes are checked against
    /// the watchdog limit when one is supplied.
    pub fn pow(&self, e: u64, entry_bits_cap: Option<usize>) -> Result<Mat<F>> {
        let mut acc = Mat::identity(self.n, &self.entries[0]);
        let mut base = self.clone();
        let mut e = e;
        let check = |m: &Mat<F>| -> Result<()> {
            if let Some(cap) = entry_bits_cap {
                let bits: usize = m.entries.iter().map(Field::size_bits).sum();
                if bits > cap {
                    return Err(Error::cap(format!(
                        "matrix entries grew past {cap} bits during powering"
                    )));
                }
            }
            Ok(())
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
                check(&acc)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
                check(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_signed(&self, e: i64, entry_bits_cap: Option<usize>) -> Result<Mat<F>> {
        if e >= 0 {
            self.pow(e as u64, entry_bits_cap)
        } else {
            self.inverse()?.pow((-e) as u64, entry_bits_cap)
        }
    }

    pub fn det(&self) -> F {
        // fraction-free enough for a field: plain elimination tracking swaps
        let mut m = self.clone();
        let mut det = self.entries[0].one_like();
        for col in 0..self.n {
            let mut pivot = None;
            for r in col..self.n {
                if !m.at(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else {
                return self.entries[0].zero_like();
            };
            if p != col {
                for c in 0..self.n {
                    let a = m.at(col, c).clone();
                    let b = m.at(p, c).clone();
                    m.set(col, c, b);
                    m.set(p, c, a);
                }
                det = det.neg();
            }
            let pv = m.at(col, col).clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("pivot nonzero");
            for r in col + 1..self.n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).mul(&inv);
                for c in col..self.n {
                    let v = m.at(r, c).sub(&factor.mul(m.at(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn trace(&self) -> F {
        let mut t = self.entries[0].zero_like();
        for i in 0..self.n {
            t = t.add(self.at(i, i));
        }
        t
    }

    /// Monic characteristic polynomial det(xI - A) in a fresh variable,
    /// by the Samuelson-Berkowitz scheme (division-free).
    pub fn charpoly(&self) -> Poly<F> {
        let n = self.n;
        let zero = self.entries[0].zero_like();
        let one = self.entries[0].one_like();
        if n == 0 {
            return Poly::constant(one);
        }
        // c holds the coefficients of the charpoly of the leading r x r
        // principal submatrix, highest degree first.
        let mut c = vec![one.clone(), self.at(0, 0).neg()];
        for r in 1..n {
            // A_{r} = [ A_{r-1} S ; R a ]
            let a = self.at(r, r).clone();
            let row_r: Vec<F> = (0..r).map(|j| self.at(r, j).clone()).collect();
            let col_s: Vec<F> = (0..r).map(|i| self.at(i, r).clone()).collect();
            // moments w_k = R * A_{r-1}^k * S for k = 0..r-1
            let mut moments = Vec::with_capacity(r);
            let mut v = col_s.clone();
            for _ in 0..r {
                let mut dot = zero.zero_like();
                for i in 0..r {
                    dot = dot.add(&row_r[i].mul(&v[i]));
                }
                moments.push(dot);
                // v = A_{r-1} * v
                let mut nv = vec![zero.clone(); r];
                for i in 0..r {
                    for k in 0..r {
                        if self.at(i, k).is_zero() {
                            continue;
                        }
                        nv[i] = nv[i].add(&self.at(i, k).mul(&v[k]));
                    }
                }
                v = nv;
            }
            // Toeplitz multiply: new_c[i] = sum_j T[i][j] c[j]
            // with T[i][j] = 1 (i=j), -a (i=j+1), -moments[i-j-2] (i>=j+2)
            let mut nc = vec![zero.clone(); c.len() + 1];
            for (j, cj) in c.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                nc[j] = nc[j].add(cj);
                nc[j + 1] = nc[j + 1].sub(&a.mul(cj));
                for i in j + 2..nc.len() {
                    nc[i] = nc[i].sub(&moments[i - j - 2].mul(cj));
                }
            }
            c = nc;
        }
        // c is highest-degree-first; Poly wants ascending
        c.reverse();
        Poly::from_coeffs(c)
    }

    pub fn transpose(&self) -> Mat<F> {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.at(j, i).clone());
            }
        }
        out
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<Mat<G>> {
        let entries: Result<Vec<G>> = self.entries.iter().map(f).collect();
        Ok(Mat { n: self.n, entries: entries? })
    }

    pub fn to_rect(&self) -> Rect<F> {
        Rect::new(self.n, self.n, self.entries.clone())
    }

    pub fn from_rect(r: &Rect<F>) -> Mat<F> {
        assert_eq!(r.rows, r.cols);
        Mat { n: r.rows, entries: r.entries().to_vec() }
    }

    /// b^{-1} * self * b
    pub fn conjugate_by(&self, b: &Mat<F>) -> Result<Mat<F>> {
        Ok(b.inverse()?.mul(self).mul(b))
    }

    pub fn size_bits(&self) -> usize {
        self.entries.iter().map(Field::size_bits).sum()
    }

    pub fn to_string_vars(&self, render: impl Fn(&F) -> String) -> String {
        let mut rows = vec![];
        for i in 0..self.n {
            let cells: Vec<String> = (0..self.n).map(|j| render(self.at(i, j))).collect();
            rows.push(format!("[{}]", cells.join(",")));
        }
        format!("[{}]", rows.join(","))
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_vars(|e| e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat<BigRational> {
        Mat::new(2, vec![q(a), q(b), q(c), q(d)])
    }

    #[test]
    fn charpoly_identity() {
        // (x-1)^2 = 1 - 2x + x^2
        let id = Mat::identity(2, &q(0));
        let cp = id.charpoly();
        assert_eq!(cp.coeffs().to_vec(), vec![q(1), q(-2), q(1)]);
    }

    #[test]
    fn charpoly_jordan_block() {
        let j = m2(1, 1, 0, 1);
        assert_eq!(j.charpoly().coeffs().to_vec(), vec![q(1), q(-2), q(1)]);
    }

    #[test]
    fn charpoly_rotation() {
        // [[0,-1],[1,0]] -> x^2 + 1
        let r = m2(0, -1, 1, 0);
        assert_eq!(r.charpoly().coeffs().to_vec(), vec![q(1), q(0), q(1)]);
    }

    #[test]
    fn det_constant_term_sign() {
        let a = m2(2, 1, 7, 4);
        let cp = a.charpoly();
        // det(g) = (-1)^n * constant term
        assert_eq!(a.det(), cp.coeff(0).unwrap().clone());
        assert_eq!(a.det(), q(1));
    }

    #[test]
    fn inverse_and_pow() {
        let a = m2(2, 1, 1, 1);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.pow(3, None).unwrap(), a.mul(&a).mul(&a));
        assert_eq!(a.pow_signed(-2, None).unwrap(), inv.mul(&inv));
    }

    #[test]
    fn pow_watchdog_fires() {
        let a = m2(2, 0, 0, 1);
        let err = a.pow(1 << 20, Some(64)).unwrap_err();
        assert!(matches!(err, crate::error::Error::CapExceeded(_)));
    }
}
