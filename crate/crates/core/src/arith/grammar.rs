use std::str::FromStr;
use std::sync::Arc;

use num::BigRational;

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{FieldDesc, FqCtx, Scalar};
use crate::error::{Error, Result};

/// Scalar text grammar shared by all JSON inputs:
///   rationals            "a/b"            (b > 0, gcd 1; plain "a" allowed)
///   polynomials in t     "c0+c1*t+...+ck*t^k"  (sparse terms accepted in
///                        any order, "*" optional before t)
///   rational functions   "P | Q"          (Q monic; plain "P" allowed)
pub struct ScalarGrammar {
    field: FieldDesc,
    fq_ctx: Option<Arc<FqCtx>>,
}

pub type FieldElem = RatFunc<Scalar>;

impl ScalarGrammar {
    pub fn new(field: FieldDesc) -> Result<ScalarGrammar> {
        field.validate()?;
        let fq_ctx = if field.characteristic > 0 {
            Some(FqCtx::new(field.characteristic, field.extension_degree)?)
        } else {
            None
        };
        Ok(ScalarGrammar { field, fq_ctx })
    }

    pub fn for_char(p: u64) -> Result<ScalarGrammar> {
        let field = if p == 0 {
            FieldDesc::rational()
        } else {
            FieldDesc { characteristic: p, extension_degree: 1, has_transcendental: true }
        };
        ScalarGrammar::new(field)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn zero_scalar(&self) -> Scalar {
        match &self.fq_ctx {
            Some(ctx) => Scalar::fp(ctx, 0),
            None => Scalar::int(0),
        }
    }

    fn coeff_from_str(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match &self.fq_ctx {
            Some(ctx) => {
                let v = u64::from_str(s)
                    .map_err(|_| Error::parse(format!("bad F_{} coefficient '{s}'", ctx.p)))?;
                if v >= ctx.p {
                    return Err(Error::parse(format!(
                        "coefficient {v} out of range 0..{}",
                        ctx.p
                    )));
                }
                Ok(Scalar::fp(ctx, v))
            }
            None => {
                let r = BigRational::from_str(s)
                    .map_err(|_| Error::parse(format!("bad rational '{s}'")))?;
                Ok(Scalar::Rat(r))
            }
        }
    }

    /// Parse one polynomial in the variable `var`.
    pub fn parse_poly(&self, input: &str, var: &str) -> Result<Poly<Scalar>> {
        let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        // split into signed terms at top level
        let mut terms: Vec<String> = vec![];
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() {
                let prev = cur.chars().last().unwrap();
                if prev != '/' && prev != '*' && prev != '^' {
                    terms.push(cur.clone());
                    cur.clear();
                }
            }
            if ch == '+' && cur.is_empty() {
                continue; // leading plus of a term
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        let zero = self.zero_scalar();
        let mut coeffs: Vec<Scalar> = vec![];
        for term in terms {
            let (coeff, power) = self.parse_term(&term, var)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, zero.clone());
            }
            coeffs[power] = coeffs[power].add(&coeff);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    fn parse_term(&self, term: &str, var: &str) -> Result<(Scalar, usize)> {
        let (negate, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term),
        };
        if body.is_empty() {
            return Err(Error::parse(format!("empty term in '{term}'")));
        }
        let (coeff_str, power) = if let Some(pos) = body.find(var) {
            let (head, tail) = body.split_at(pos);
            let tail = &tail[var.len()..];
            let power = if tail.is_empty() {
                1usize
            } else if let Some(exp) = tail.strip_prefix('^') {
                usize::from_str(exp)
                    .map_err(|_| Error::parse(format!("bad exponent in '{term}'")))?
            } else {
                return Err(Error::parse(format!("unexpected text after variable in '{term}'")));
            };
            let head = head.strip_suffix('*').unwrap_or(head);
            (head, power)
        } else {
            (body, 0usize)
        };
        let mut c = if coeff_str.is_empty() {
            let one = match &self.fq_ctx {
                Some(ctx) => Scalar::fp(ctx, 1),
                None => Scalar::int(1),
            };
            one
        } else {
            self.coeff_from_str(coeff_str)?
        };
        if negate {
            if self.field.characteristic > 0 {
                return Err(Error::parse(
                    "negative coefficients are not part of the positive-characteristic grammar",
                ));
            }
            c = c.neg();
        }
        Ok((c, power))
    }

    /// Parse a scalar: "P | Q" or a bare polynomial / rational.
    pub fn parse_scalar(&self, input: &str) -> Result<FieldElem> {
        self.parse_scalar_var(input, "t")
    }

    pub fn parse_scalar_var(&self, input: &str, var: &str) -> Result<FieldElem> {
        let parts: Vec<&str> = input.split('|').collect();
        match parts.len() {
            1 => {
                let p = self.parse_poly(parts[0], var)?;
                Ok(RatFunc::from_poly(p, &self.zero_scalar()))
            }
            2 => {
                let num = self.parse_poly(parts[0], var)?;
                let den = self.parse_poly(parts[1], var)?;
                if !den.is_monic() {
                    return Err(Error::parse("denominator must be monic"));
                }
                RatFunc::new(num, den)
            }
            _ => Err(Error::parse(format!("too many '|' in scalar '{input}'"))),
        }
    }

    /// Parse a monic irreducible polynomial usable as a valuation carrier.
    pub fn parse_monic_irreducible(&self, input: &str, var: &str, seed: u64) -> Result<Poly<Scalar>> {
        let p = self.parse_poly(input, var)?;
        if !p.is_monic() {
            return Err(Error::domain(format!("'{input}' is not monic")));
        }
        if p.degree() == Some(0) {
            return Err(Error::domain(format!("'{input}' is constant")));
        }
        if self.field.characteristic > 0 {
            let fq = p.try_map(|c| {
                c.as_fq().cloned().ok_or_else(|| Error::domain("expected finite-field coefficients"))
            })?;
            if !super::factor::is_irreducible_fq(&fq, seed)? {
                return Err(Error::domain(format!("'{input}' is not irreducible")));
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_f2_polys() {
        let g = ScalarGrammar::for_char(2).unwrap();
        let t = g.parse_poly("t", "t").unwrap();
        assert_eq!(t.degree(), Some(1));
        let a = g.parse_poly("t+1", "t").unwrap();
        let b = g.parse_poly("1+t", "t").unwrap();
        assert_eq!(a, b);
        let c = g.parse_poly("1+0*t+1*t^2", "t").unwrap();
        assert_eq!(c.to_string(), "1+t^2");
    }

    #[test]
    fn parse_rationals() {
        let g = ScalarGrammar::for_char(0).unwrap();
        let x = g.parse_scalar("-3/2").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        let y = g.parse_scalar("1/2*t^2+3-t").unwrap();
        assert_eq!(y.to_string(), "3-t+1/2*t^2");
    }

    #[test]
    fn parse_fraction() {
        let g = ScalarGrammar::for_char(2).unwrap();
        let x = g.parse_scalar("t^2 | t+1").unwrap();
        assert_eq!(x.to_string(), "t^2 | 1+t");
        assert!(g.parse_scalar("1 | 0*t").is_err());
    }

    #[test]
    fn roundtrip_display_parse() {
        let g = ScalarGrammar::for_char(3).unwrap();
        for s in ["t", "1+2*t", "2*t^3", "1+t | t^2", "2 | t"] {
            let x = g.parse_scalar(s).unwrap();
            let y = g.parse_scalar(&x.to_string()).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn reject_out_of_range_coefficient() {
        let g = ScalarGrammar::for_char(2).unwrap();
        assert!(g.parse_poly("2+t", "t").is_err());
        assert!(g.parse_poly("-1+t", "t").is_err());
    }
}
