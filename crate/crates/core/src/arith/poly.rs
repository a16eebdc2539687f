use std::cmp::Ordering;
use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense polynomial over a field, index = degree. Invariant: the leading
/// coefficient is nonzero; the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Poly<F> {
        Poly { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Poly<F> {
        while coeffs.last().map(Field::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Poly<F> {
        Poly::from_coeffs(vec![c])
    }

    /// c * t^k
    pub fn monomial(c: F, k: usize) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn variable(like: &F) -> Poly<F> {
        Poly::monomial(like.one_like(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(Field::is_one).unwrap_or(false)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn add(&self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(c);
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly<F> {
        Poly { coeffs: self.coeffs.iter().map(Field::neg).collect() }
    }

    pub fn sub(&self, rhs: &Poly<F>) -> Poly<F> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// self * t^k
    pub fn shift(&self, k: usize) -> Poly<F> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: usize) -> Poly<F> {
        let mut acc: Option<Poly<F>> = None;
        let mut b = self.clone();
        let mut e = e;
        if e == 0 {
            let one = self
                .coeffs
                .first()
                .map(|c| c.one_like())
                .expect("cannot raise the zero polynomial context to power 0");
            return Poly::constant(one);
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc.unwrap()
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, rhs: &Poly<F>) -> Result<(Poly<F>, Poly<F>)> {
        let dlead = rhs.leading().ok_or_else(|| Error::domain("polynomial division by zero"))?;
        let dinv = dlead.inv()?;
        let dd = rhs.degree().unwrap();
        let mut rem = self.clone();
        if self.is_zero() || self.degree().unwrap() < dd {
            return Ok((Poly::zero(), rem));
        }
        let zero = dlead.zero_like();
        let mut quot = vec![zero; self.degree().unwrap() - dd + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap().mul(&dinv);
            let shift = rd - dd;
            quot[shift] = c.clone();
            let sub = rhs.mul(&Poly::monomial(c, shift));
            rem = rem.sub(&sub);
        }
        Ok((Poly::from_coeffs(quot), rem))
    }

    pub fn rem(&self, rhs: &Poly<F>) -> Result<Poly<F>> {
        Ok(self.divrem(rhs)?.1)
    }

    pub fn divides(&self, other: &Poly<F>) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic associate (zero stays zero).
    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                if l.is_one() {
                    self.clone()
                } else {
                    self.mul_scalar(&l.inv().expect("nonzero leading coefficient"))
                }
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*rhs = g, g monic.
    pub fn xgcd(&self, rhs: &Poly<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
        let ctx = self
            .coeffs
            .first()
            .or_else(|| rhs.coeffs.first())
            .expect("xgcd of two zero polynomials");
        let one = Poly::constant(ctx.one_like());
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = one.clone();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = one;
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(l) = r0.leading() {
            if !l.is_one() {
                let li = l.inv().unwrap();
                r0 = r0.mul_scalar(&li);
                s0 = s0.mul_scalar(&li);
                t0 = t0.mul_scalar(&li);
            }
        }
        (r0, s0, t0)
    }

    /// Inverse of self modulo the monic polynomial m, when gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &Poly<F>) -> Result<Poly<F>> {
        let r = self.rem(m)?;
        if r.is_zero() {
            return Err(Error::domain("not invertible modulo the given polynomial"));
        }
        let (g, s, _) = r.xgcd(m);
        if !g.is_one() {
            return Err(Error::domain("not invertible modulo the given polynomial"));
        }
        s.rem(m)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly<F> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            // c * i in the field: add c to itself i times mod char
            let p = c.characteristic();
            let mult = if p == 0 { i as u64 } else { (i as u64) % p };
            let mut acc = c.zero_like();
            let mut base = c.clone();
            let mut m = mult;
            while m > 0 {
                if m & 1 == 1 {
                    acc = acc.add(&base);
                }
                base = base.add(&base);
                m >>= 1;
            }
            out.push(acc);
        }
        Poly::from_coeffs(out)
    }

    /// Coefficient reversal: t^deg * self(1/t). Used for the substitution
    /// that turns the degree valuation into a prime valuation.
    pub fn reversed(&self) -> Poly<F> {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Poly<F>) -> Poly<F> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Deterministic total order: by degree, then coefficients from the
    /// leading term down.
    pub fn canon_cmp(&self, rhs: &Poly<F>) -> Ordering {
        match self.coeffs.len().cmp(&rhs.coeffs.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.coeffs.iter().rev().zip(rhs.coeffs.iter().rev()) {
            match a.canon_cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn size_bits(&self) -> usize {
        self.coeffs.iter().map(Field::size_bits).sum::<usize>().max(1)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<Poly<G>> {
        let coeffs: Result<Vec<G>> = self.coeffs.iter().map(f).collect();
        Ok(Poly::from_coeffs(coeffs?))
    }

    /// Render with an explicit variable name; coefficients that are not
    /// plain atoms are parenthesised.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<String> = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let atom = !cs.contains(['+', '-', '|', ' ']) || cs.starts_with('-') && !cs[1..].contains(['+', '-', '|', ' ']);
            let wrapped = if atom { cs.clone() } else { format!("({cs})") };
            let term = if i == 0 {
                wrapped
            } else {
                let pow = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if c.is_one() {
                    pow
                } else if c.characteristic() == 0 && c.neg().is_one() {
                    format!("-{pow}")
                } else {
                    format!("{wrapped}*{pow}")
                }
            };
            terms.push(term);
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i > 0 && !t.starts_with('-') {
                out.push('+');
            }
            out.push_str(t);
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("t"))
    }
}
