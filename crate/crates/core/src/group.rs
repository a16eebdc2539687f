use crate::arith::field::Field;
use crate::arith::{FieldDesc, FieldElem, Mat, Matrix};
use crate::error::{Error, Result};

/// Finitely generated matrix group: generator matrices over a common field.
/// Words are sequences of indices into the symmetric generator list
/// (index i < gens.len() is the i-th generator, i >= gens.len() its inverse).
#[derive(Clone, Debug)]
pub struct MatGroup {
    gens: Vec<Matrix>,
    inverses: Vec<Matrix>,
    pub field: FieldDesc,
    pub name: Option<String>,
}

impl MatGroup {
    pub fn new(gens: Vec<Matrix>, field: FieldDesc, name: Option<String>) -> Result<MatGroup> {
        field.validate()?;
        if gens.is_empty() {
            return Err(Error::domain("a matrix group needs at least one generator"));
        }
        let n = gens[0].dim();
        let mut inverses = vec![];
        for g in &gens {
            if g.dim() != n {
                return Err(Error::domain("generators must share one dimension"));
            }
            let char_ok = g.context().characteristic() == field.characteristic;
            if !char_ok {
                return Err(Error::domain("generator entries disagree with the field descriptor"));
            }
            inverses.push(
                g.inverse().map_err(|_| Error::domain("generators must be invertible"))?,
            );
        }
        Ok(MatGroup { gens, inverses, field, name })
    }

    pub fn dim(&self) -> usize {
        self.gens[0].dim()
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    /// Generators followed by their inverses, duplicates removed (an
    /// involution contributes one entry).
    pub fn symmetric_gens(&self) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = self.gens.clone();
        for inv in &self.inverses {
            if !out.contains(inv) {
                out.push(inv.clone());
            }
        }
        out
    }

    /// Letter for a word index: generators first, then inverses.
    pub fn letter(&self, index: usize) -> Result<Matrix> {
        let k = self.gens.len();
        if index < k {
            Ok(self.gens[index].clone())
        } else if index < 2 * k {
            Ok(self.inverses[index - k].clone())
        } else {
            Err(Error::domain(format!(
                "word letter {index} out of range for {k} generators"
            )))
        }
    }

    pub fn eval_word(&self, word: &[usize]) -> Result<Matrix> {
        let ctx = self.gens[0].context();
        let mut acc = Mat::identity(self.dim(), ctx);
        for &i in word {
            acc = acc.mul(&self.letter(i)?);
        }
        Ok(acc)
    }

    pub fn identity(&self) -> Matrix {
        Mat::identity(self.dim(), self.gens[0].context())
    }
}

/// Deterministic ordering for matrices over the working field, used to keep
/// enumeration output stable.
pub fn mat_canon_cmp(a: &Matrix, b: &Matrix) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match a.dim().cmp(&b.dim()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.entries().iter().zip(b.entries()) {
        match x.canon_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Parse a whitespace-separated word like "0 1 0".
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad word letter '{tok}'")))
        })
        .collect()
}

/// Entry-wise membership of a matrix in a described ring (denominators must
/// factor into the ring's inverted primes).
pub fn mat_in_ring(g: &Matrix, ring: &crate::valuations::RingDesc, seed: u64) -> Result<bool> {
    let normalized = ring.normalize(seed)?;
    for e in g.entries() {
        if !elem_in_ring(e, &normalized, seed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn elem_in_ring(
    x: &FieldElem,
    normalized: &crate::valuations::RingDesc,
    seed: u64,
) -> Result<bool> {
    if x.den().is_one() {
        return Ok(true);
    }
    let factors = crate::arith::factor::factor_scalar_poly(x.den(), seed)?;
    for (f, _) in factors {
        if !normalized.inverted1.contains(&f) {
            return Ok(false);
        }
    }
    Ok(true)
}
