//! Discrete valuations on rational function fields and the finite valuation
//! families attached to finitely generated subrings, together with the
//! bounded-element enumeration that makes those families useful.

pub mod enumerate;

use std::cmp::Ordering;
use std::fmt;

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::poly::Poly;
use crate::arith::ratfunc::RatFunc;
use crate::arith::scalar::{is_prime_u64, Scalar};
use crate::arith::{FieldElem2, Mat};
use crate::error::{Error, Result};

pub use enumerate::{enumerate_bounded, enumerate_bounded_l1, RingElem};

// ---------------------------------------------------------------------------
// valuation values
// ---------------------------------------------------------------------------

/// Value of a discrete valuation: an integer, or infinity exactly at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValInt {
    Fin(i64),
    Inf,
}

impl ValInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ValInt::Fin(v) => Some(v),
            ValInt::Inf => None,
        }
    }

    pub fn at_least(self, m: i64) -> bool {
        match self {
            ValInt::Fin(v) => v >= m,
            ValInt::Inf => true,
        }
    }

    pub fn min(self, rhs: ValInt) -> ValInt {
        match (self, rhs) {
            (ValInt::Inf, x) | (x, ValInt::Inf) => x,
            (ValInt::Fin(a), ValInt::Fin(b)) => ValInt::Fin(a.min(b)),
        }
    }

    pub fn add(self, rhs: ValInt) -> ValInt {
        match (self, rhs) {
            (ValInt::Fin(a), ValInt::Fin(b)) => ValInt::Fin(a + b),
            _ => ValInt::Inf,
        }
    }

    pub fn sub(self, rhs: ValInt) -> ValInt {
        match (self, rhs) {
            (ValInt::Fin(a), ValInt::Fin(b)) => ValInt::Fin(a - b),
            (ValInt::Inf, _) => ValInt::Inf,
            (ValInt::Fin(_), ValInt::Inf) => panic!("subtracting an infinite valuation"),
        }
    }
}

impl PartialOrd for ValInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValInt::Inf, ValInt::Inf) => Ordering::Equal,
            (ValInt::Inf, _) => Ordering::Greater,
            (_, ValInt::Inf) => Ordering::Less,
            (ValInt::Fin(a), ValInt::Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ValInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValInt::Fin(v) => write!(f, "{v}"),
            ValInt::Inf => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// generic valuation computations on k(t) over any exact coefficient field
// ---------------------------------------------------------------------------

/// Multiplicity of the monic irreducible `p` in a nonzero polynomial.
fn poly_ord<F: Field>(p: &Poly<F>, f: &Poly<F>) -> i64 {
    debug_assert!(!f.is_zero());
    let mut ord = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.divrem(p).expect("nonzero divisor");
        if !r.is_zero() {
            return ord;
        }
        ord += 1;
        cur = q;
    }
}

/// The prime-polynomial valuation at `p`: order of p in num minus den.
pub fn prime_valuation<F: Field>(p: &Poly<F>, x: &RatFunc<F>) -> ValInt {
    if x.is_zero() {
        return ValInt::Inf;
    }
    ValInt::Fin(poly_ord(p, x.num()) - poly_ord(p, x.den()))
}

/// The degree valuation: deg(den) - deg(num); -n on degree-n polynomials.
pub fn degree_valuation<F: Field>(x: &RatFunc<F>) -> ValInt {
    if x.is_zero() {
        return ValInt::Inf;
    }
    ValInt::Fin(x.den().degree().unwrap() as i64 - x.num().degree().unwrap() as i64)
}

/// Gauss extension of an inner valuation to k(t): on polynomials the minimum
/// of the inner values of the coefficients, extended to fractions by
/// v(a/b) = v(a) - v(b).
pub fn gauss_extension<F: Field>(inner: impl Fn(&F) -> ValInt, x: &RatFunc<F>) -> ValInt {
    if x.is_zero() {
        return ValInt::Inf;
    }
    let poly_val = |f: &Poly<F>| {
        let mut v = ValInt::Inf;
        for c in f.coeffs() {
            if !c.is_zero() {
                v = v.min(inner(c));
            }
        }
        v
    };
    poly_val(x.num()).sub(poly_val(x.den()))
}

// ---------------------------------------------------------------------------
// concrete valuations at tower levels 1 and 2
// ---------------------------------------------------------------------------

/// Valuation on k = F_p(t).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val1 {
    /// order at a monic irreducible of F_p[t]
    Prime(Poly<Scalar>),
    /// the valuation at infinity: -(degree)
    Mu0,
}

impl Val1 {
    pub fn value(&self, x: &FieldElem) -> ValInt {
        match self {
            Val1::Prime(p) => prime_valuation(p, x),
            Val1::Mu0 => degree_valuation(x),
        }
    }
}

impl fmt::Display for Val1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val1::Prime(p) => write!(f, "prime({p})"),
            Val1::Mu0 => write!(f, "mu0"),
        }
    }
}

/// Valuation on k(t)(u).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val2 {
    Prime(Poly<FieldElem>),
    Mu0,
    /// Gauss extension of a level-1 valuation
    Ext(Val1),
}

impl Val2 {
    pub fn value(&self, x: &FieldElem2) -> ValInt {
        match self {
            Val2::Prime(p) => prime_valuation(p, x),
            Val2::Mu0 => degree_valuation(x),
            Val2::Ext(inner) => gauss_extension(|c| inner.value(c), x),
        }
    }
}

/// A discrete valuation on the level-1 or level-2 function field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    L1(Val1),
    L2(Val2),
}

impl Valuation {
    pub fn level(&self) -> usize {
        match self {
            Valuation::L1(_) => 1,
            Valuation::L2(_) => 2,
        }
    }

    /// Evaluate on a ring element, lifting constants across levels.
    pub fn value(&self, x: &RingElem) -> Result<ValInt> {
        match (self, x) {
            (Valuation::L1(v), RingElem::L1(e)) => Ok(v.value(e)),
            (Valuation::L1(v), RingElem::L0(c)) => Ok(v.value(&RatFunc::constant(c.clone()))),
            (Valuation::L2(v), RingElem::L2(e)) => Ok(v.value(e)),
            (Valuation::L2(v), RingElem::L1(e)) => Ok(v.value(&RatFunc::constant(e.clone()))),
            (Valuation::L2(v), RingElem::L0(c)) => {
                let l1 = RatFunc::constant(c.clone());
                Ok(v.value(&RatFunc::constant(l1)))
            }
            _ => Err(Error::domain("element level exceeds valuation level")),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::L1(v) => write!(f, "{v}"),
            Valuation::L2(Val2::Prime(p)) => write!(f, "prime2({})", p.to_string_var("u")),
            Valuation::L2(Val2::Mu0) => write!(f, "mu0(u)"),
            Valuation::L2(Val2::Ext(v)) => write!(f, "ext({v})"),
        }
    }
}

/// Extend a level-1 valuation to the field with one more transcendental.
pub fn extend_valuation(inner: Val1) -> Valuation {
    Valuation::L2(Val2::Ext(inner))
}

// ---------------------------------------------------------------------------
// ring descriptions and valuation families
// ---------------------------------------------------------------------------

/// A finitely generated subring of F_p(t) or F_p(t)(u): polynomials over the
/// finite base with finitely many inverted monic irreducibles per level,
/// plus optional extra generators whose denominators get folded in.
#[derive(Clone, Debug)]
pub struct RingDesc {
    pub p: u64,
    /// variable names per transcendental level (empty, [t], or [t, u])
    pub vars: Vec<String>,
    pub inverted1: Vec<Poly<Scalar>>,
    pub inverted2: Vec<Poly<FieldElem>>,
    pub extra1: Vec<FieldElem>,
}

impl RingDesc {
    pub fn finite_base(p: u64) -> Result<RingDesc> {
        let r = RingDesc { p, vars: vec![], inverted1: vec![], inverted2: vec![], extra1: vec![] };
        r.check_p()?;
        Ok(r)
    }

    pub fn polynomial_ring(p: u64, var: &str) -> Result<RingDesc> {
        let r = RingDesc {
            p,
            vars: vec![var.to_string()],
            inverted1: vec![],
            inverted2: vec![],
            extra1: vec![],
        };
        r.check_p()?;
        Ok(r)
    }

    fn check_p(&self) -> Result<()> {
        if !is_prime_u64(self.p) {
            return Err(Error::domain(format!(
                "ring base characteristic {} is not prime",
                self.p
            )));
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.vars.len()
    }

    /// Validate and fold extra generators into the inverted-prime lists,
    /// producing the normalized ring the family construction works with.
    pub fn normalize(&self, seed: u64) -> Result<RingDesc> {
        self.check_p()?;
        if self.levels() > 2 {
            return Err(Error::unsupported(
                "transcendence degree above 2 is not supported",
            ));
        }
        if self.levels() < 2 && !self.inverted2.is_empty() {
            return Err(Error::domain("level-2 inverted primes need two transcendentals"));
        }
        if self.levels() < 1 && (!self.inverted1.is_empty() || !self.extra1.is_empty()) {
            return Err(Error::domain("inverted primes need a transcendental"));
        }
        let mut inverted1 = vec![];
        for p in &self.inverted1 {
            if !p.is_monic() || p.degree() == Some(0) {
                return Err(Error::domain(format!("inverted prime '{p}' must be monic nonconstant")));
            }
            let fq = p.try_map(|c| {
                c.as_fq().cloned().ok_or_else(|| Error::domain("finite coefficients expected"))
            })?;
            if !crate::arith::factor::is_irreducible_fq(&fq, seed)? {
                return Err(Error::domain(format!("inverted polynomial '{p}' is not irreducible")));
            }
            inverted1.push(p.clone());
        }
        // fold extra generators: every irreducible factor of a denominator
        // becomes an inverted prime
        for x in &self.extra1 {
            if x.den().is_one() {
                continue;
            }
            let factors = crate::arith::factor::factor_scalar_poly(x.den(), seed)?;
            for (g, _) in factors {
                inverted1.push(g);
            }
        }
        inverted1.sort_by(|a, b| a.canon_cmp(b));
        inverted1.dedup();
        let mut inverted2 = vec![];
        for p in &self.inverted2 {
            if !p.is_monic() || p.degree() == Some(0) {
                return Err(Error::domain("level-2 inverted primes must be monic nonconstant"));
            }
            if p.degree() != Some(1) {
                return Err(Error::unsupported(
                    "level-2 inverted primes of degree > 1 (irreducibility over k(t) is not decided here)",
                ));
            }
            inverted2.push(p.clone());
        }
        inverted2.sort_by(|a, b| a.canon_cmp(b));
        inverted2.dedup();
        Ok(RingDesc {
            p: self.p,
            vars: self.vars.clone(),
            inverted1,
            inverted2,
            extra1: vec![],
        })
    }
}

/// The finite family of valuations produced for a ring by the inductive
/// construction: per transcendental level, the extensions of the lower
/// family, the degree valuation, and one prime valuation per inverted prime.
#[derive(Clone, Debug)]
pub struct ValFamily {
    pub vals: Vec<Valuation>,
    pub levels: usize,
}

impl ValFamily {
    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }
}

/// Build the valuation family for a normalized ring description. The finite
/// base field contributes nothing; each transcendental level contributes
/// extensions of the level below, its degree valuation, and the prime
/// valuations of its inverted primes (in canonical polynomial order).
pub fn build_valuation_family(ring: &RingDesc) -> Result<ValFamily> {
    let ring = ring.normalize(crate::DEFAULT_SEED)?;
    let mut vals: Vec<Valuation> = vec![];
    if ring.levels() == 0 {
        return Ok(ValFamily { vals, levels: 0 });
    }
    // level 1
    let mut level1: Vec<Val1> = vec![Val1::Mu0];
    for p in &ring.inverted1 {
        level1.push(Val1::Prime(p.clone()));
    }
    if ring.levels() == 1 {
        vals.extend(level1.into_iter().map(Valuation::L1));
        return Ok(ValFamily { vals, levels: 1 });
    }
    // level 2: extensions first, then mu0, then primes
    for v in &level1 {
        vals.push(Valuation::L2(Val2::Ext(v.clone())));
    }
    vals.push(Valuation::L2(Val2::Mu0));
    for p in &ring.inverted2 {
        vals.push(Valuation::L2(Val2::Prime(p.clone())));
    }
    Ok(ValFamily { vals, levels: 2 })
}

/// Minimum entry valuation of a matrix; infinity for the zero matrix.
pub fn matrix_valuation_floor(v: &Val1, g: &Mat<FieldElem>) -> ValInt {
    let mut floor = ValInt::Inf;
    for e in g.entries() {
        floor = floor.min(v.value(e));
    }
    floor
}
