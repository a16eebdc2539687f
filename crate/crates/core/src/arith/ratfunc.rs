use std::cmp::Ordering;
use std::fmt;

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Rational function num/den in canonical form: den monic and nonzero,
/// gcd(num, den) = 1, and zero is 0/1. Structural equality therefore
/// decides equality of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if num.is_zero() {
            let one = den.leading().unwrap().one_like();
            return Ok(RatFunc { num: Poly::zero(), den: Poly::constant(one) });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        };
        let lead_inv = den.leading().unwrap().inv()?;
        Ok(RatFunc { num: num.mul_scalar(&lead_inv), den: den.mul_scalar(&lead_inv) })
    }

    pub fn from_poly(p: Poly<F>, ctx: &F) -> RatFunc<F> {
        RatFunc { num: p, den: Poly::constant(ctx.one_like()) }
    }

    pub fn constant(c: F) -> RatFunc<F> {
        let one = Poly::constant(c.one_like());
        RatFunc { num: Poly::constant(c), den: one }
    }

    pub fn variable(ctx: &F) -> RatFunc<F> {
        RatFunc { num: Poly::variable(ctx), den: Poly::constant(ctx.one_like()) }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    /// Some(coefficient) when this element is a constant (degree-0 or zero
    /// numerator over denominator 1).
    pub fn as_constant(&self) -> Option<F> {
        if !self.den.is_one() {
            return None;
        }
        match self.num.degree() {
            None => Some(self.den.leading().unwrap().zero_like()),
            Some(0) => Some(self.num.coeff(0).unwrap().clone()),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Substitute t -> 1/t; an involution on the function field.
    pub fn substitute_reciprocal(&self) -> RatFunc<F> {
        if self.num.is_zero() {
            return self.clone();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        // (P/Q)(1/t) = rev(P) * t^(dd) / (rev(Q) * t^(dn)) after clearing t powers
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        if dd > dn {
            num = num.shift(dd - dn);
        } else {
            den = den.shift(dn - dd);
        }
        RatFunc::new(num, den).expect("nonzero denominator after reversal")
    }

    pub fn canon_cmp(&self, rhs: &RatFunc<F>) -> Ordering {
        match self.den.canon_cmp(&rhs.den) {
            Ordering::Equal => self.num.canon_cmp(&rhs.num),
            o => o,
        }
    }

    pub fn to_string_vars(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.to_string_var(var)
        } else {
            format!("{} | {}", self.num.to_string_var(var), self.den.to_string_var(var))
        }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc { num: self.num.map(&f), den: self.den.map(&f) }
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_vars("t"))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero_like(&self) -> Self {
        let one = self.den.leading().unwrap().one_like();
        RatFunc { num: Poly::zero(), den: Poly::constant(one) }
    }
    fn one_like(&self) -> Self {
        let one = self.den.leading().unwrap().one_like();
        RatFunc { num: Poly::constant(one.clone()), den: Poly::constant(one) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFunc::new(num, den).expect("nonzero denominator")
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.num);
        let den = self.den.mul(&rhs.den);
        RatFunc::new(num, den).expect("nonzero denominator")
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn characteristic(&self) -> u64 {
        self.den.leading().unwrap().characteristic()
    }
    fn canon_cmp(&self, rhs: &Self) -> Ordering {
        RatFunc::canon_cmp(self, rhs)
    }
    fn size_bits(&self) -> usize {
        self.num.size_bits() + self.den.size_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::{FqCtx, Scalar};

    fn f2_poly(cs: &[u64]) -> Poly<Scalar> {
        let ctx = FqCtx::new(2, 1).unwrap();
        Poly::from_coeffs(cs.iter().map(|&c| Scalar::fp(&ctx, c)).collect())
    }

    #[test]
    fn cancellation() {
        // (t/(t+1)) * ((t+1)/1) = t
        let t = f2_poly(&[0, 1]);
        let t1 = f2_poly(&[1, 1]);
        let a = RatFunc::new(t.clone(), t1.clone()).unwrap();
        let b = RatFunc::new(t1, Poly::constant(Scalar::fp(&FqCtx::new(2, 1).unwrap(), 1))).unwrap();
        let prod = a.mul(&b);
        assert!(prod.is_polynomial());
        assert_eq!(prod.num(), &f2_poly(&[0, 1]));
    }

    #[test]
    fn zero_has_unique_form() {
        let t = f2_poly(&[0, 1]);
        let z = RatFunc::new(Poly::zero(), t).unwrap();
        assert!(z.is_zero());
        assert!(z.den().is_one());
    }

    #[test]
    fn reciprocal_substitution_involutive() {
        let num = f2_poly(&[1, 1, 1]);
        let den = f2_poly(&[0, 0, 1]);
        let x = RatFunc::new(num, den).unwrap();
        let y = x.substitute_reciprocal();
        assert_eq!(y.substitute_reciprocal(), x);
    }

    #[test]
    fn display_fraction() {
        let x = RatFunc::new(f2_poly(&[1, 1]), f2_poly(&[0, 1])).unwrap();
        assert_eq!(x.to_string(), "1+t | t");
        let p = RatFunc::from_poly(f2_poly(&[0, 1]), &Scalar::fp(&FqCtx::new(2, 1).unwrap(), 0));
        assert_eq!(p.to_string(), "t");
    }
}
