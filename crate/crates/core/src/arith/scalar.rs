use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::BigRational;

use super::field::Field;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// arithmetic mod p on u64 (p prime, products via u128)
// ---------------------------------------------------------------------------

pub(crate) fn zp_add(p: u64, a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn zp_neg(p: u64, a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn zp_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn zp_pow(p: u64, mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = zp_mul(p, acc, a);
        }
        a = zp_mul(p, a, a);
        e >>= 1;
    }
    acc
}

pub(crate) fn zp_inv(p: u64, a: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::domain("division by zero in F_p"));
    }
    Ok(zp_pow(p, a, p - 2))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = zp_pow(n, a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = zp_mul(n, x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// dense polynomials over F_p as raw coefficient vectors (index = degree)
// ---------------------------------------------------------------------------

pub(crate) fn ppoly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn ppoly_add(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = zp_add(p, out[i], c);
    }
    ppoly_trim(&mut out);
    out
}

pub(crate) fn ppoly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = zp_add(p, out[i + j], zp_mul(p, x, y));
        }
    }
    ppoly_trim(&mut out);
    out
}

/// Remainder of a by the monic polynomial m.
pub(crate) fn ppoly_rem_monic(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    debug_assert!(m.last() == Some(&1));
    let mut r: Vec<u64> = a.to_vec();
    ppoly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = zp_mul(p, lead, c);
            r[i + shift] = zp_add(p, r[i + shift], zp_neg(p, sub));
        }
        ppoly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

pub(crate) fn ppoly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    ppoly_trim(&mut x);
    ppoly_trim(&mut y);
    while !y.is_empty() {
        // make y monic before reducing
        let lead_inv = zp_inv(p, *y.last().unwrap()).unwrap();
        let ym: Vec<u64> = y.iter().map(|&c| zp_mul(p, c, lead_inv)).collect();
        let r = ppoly_rem_monic(p, &x, &ym);
        x = ym;
        y = r;
    }
    if let Some(&l) = x.last() {
        let li = zp_inv(p, l).unwrap();
        for c in &mut x {
            *c = zp_mul(p, *c, li);
        }
    }
    x
}

/// x^(p^reps) mod m, computed by iterated Frobenius.
fn ppoly_frobenius_iter(p: u64, m: &[u64], reps: u32) -> Vec<u64> {
    let mut x = vec![0u64, 1]; // the polynomial x
    x = ppoly_rem_monic(p, &x, m);
    for _ in 0..reps {
        x = ppoly_powmod_u64(p, &x, p, m);
    }
    x
}

fn ppoly_powmod_u64(p: u64, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = ppoly_rem_monic(p, &ppoly_mul(p, &acc, &b), m);
        }
        b = ppoly_rem_monic(p, &ppoly_mul(p, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub(crate) fn ppoly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    // x^(p^k) == x mod f
    let frob_k = ppoly_frobenius_iter(p, f, k as u32);
    let x_poly = ppoly_rem_monic(p, &[0, 1], f);
    if frob_k != x_poly {
        return false;
    }
    // gcd(x^(p^(k/l)) - x, f) = 1 for every prime l | k
    let mut rem = k;
    let mut ell = 2;
    let mut prime_divs = vec![];
    while ell * ell <= rem {
        if rem % ell == 0 {
            prime_divs.push(ell);
            while rem % ell == 0 {
                rem /= ell;
            }
        }
        ell += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for l in prime_divs {
        let e = (k / l) as u32;
        let fr = ppoly_frobenius_iter(p, f, e);
        let diff = ppoly_add(p, &fr, &x_poly.iter().map(|&c| zp_neg(p, c)).collect::<Vec<_>>());
        let g = ppoly_gcd(p, &diff, f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// finite field F_{p^k} = F_p[w]/(modulus)
// ---------------------------------------------------------------------------

/// Canonical moduli for F_{p^k}: the monic irreducible of degree k over F_p
/// whose non-leading coefficient vector (c_0, ..., c_{k-1}), read as the
/// base-p integer sum c_i p^i, is smallest. Shipped as a fixed table so that
/// extension-field results are bit-reproducible; entries outside the table
/// are recomputed with the same rule.
const MODULUS_TABLE: &[(u64, u32, &[u64])] = &[
    (2, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (5, 1, &[0, 1]),
    (5, 2, &[2, 0, 1]),
    (5, 3, &[1, 1, 0, 1]),
    (5, 4, &[2, 0, 0, 0, 1]),
    (5, 5, &[1, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (7, 1, &[0, 1]),
    (7, 2, &[1, 0, 1]),
    (7, 3, &[2, 0, 0, 1]),
    (7, 4, &[1, 1, 0, 0, 1]),
    (7, 5, &[3, 1, 0, 0, 0, 1]),
    (7, 6, &[2, 0, 0, 0, 0, 0, 1]),
];

/// Find the table rule's modulus by direct search.
pub fn compute_canonical_modulus(p: u64, k: u32) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::domain("extension degree must be positive"));
    }
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    let total = (p as u128).checked_pow(k).ok_or_else(|| Error::cap("field too large"))?;
    if total > 1u128 << 40 {
        return Err(Error::cap(format!("modulus search for p^k = {total} too large")));
    }
    let mut counter = vec![0u64; k as usize];
    loop {
        let mut f = counter.clone();
        f.push(1);
        if ppoly_is_irreducible(p, &f) {
            return Ok(f);
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            if i == counter.len() {
                return Err(Error::domain("no irreducible polynomial found"));
            }
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

pub fn canonical_modulus(p: u64, k: u32) -> Result<Vec<u64>> {
    for &(tp, tk, m) in MODULUS_TABLE {
        if tp == p && tk == k {
            return Ok(m.to_vec());
        }
    }
    compute_canonical_modulus(p, k)
}

/// Shared description of F_{p^k}.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FqCtx {
    pub p: u64,
    pub k: u32,
    /// monic irreducible over F_p, length k+1
    pub modulus: Vec<u64>,
}

impl FqCtx {
    pub fn new(p: u64, k: u32) -> Result<Arc<FqCtx>> {
        let modulus = canonical_modulus(p, k)?;
        Ok(Arc::new(FqCtx { p, k, modulus }))
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.k)
    }
}

/// Element of F_{p^k}: polynomial in the generator w of degree < k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    pub(crate) ctx: Arc<FqCtx>,
    /// coefficients in 0..p, no trailing zeros
    pub(crate) coeffs: Vec<u64>,
}

impl Fq {
    pub fn new(ctx: Arc<FqCtx>, mut coeffs: Vec<u64>) -> Fq {
        for c in &mut coeffs {
            *c %= ctx.p;
        }
        if coeffs.len() >= ctx.modulus.len() {
            coeffs = ppoly_rem_monic(ctx.p, &coeffs, &ctx.modulus);
        }
        ppoly_trim(&mut coeffs);
        Fq { ctx, coeffs }
    }

    pub fn from_u64(ctx: Arc<FqCtx>, v: u64) -> Fq {
        Fq::new(ctx, vec![v])
    }

    pub fn generator(ctx: Arc<FqCtx>) -> Fq {
        Fq::new(ctx, vec![0, 1])
    }

    pub fn ctx(&self) -> &Arc<FqCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// The unique constant value when this element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    /// Embed into a larger canonical extension of the same prime field.
    /// Only prime-field elements can cross extensions.
    pub fn embed(&self, target: &Arc<FqCtx>) -> Result<Fq> {
        if self.ctx.p != target.p {
            return Err(Error::domain("cannot embed across characteristics"));
        }
        if self.ctx.k == target.k {
            return Ok(Fq { ctx: Arc::clone(target), coeffs: self.coeffs.clone() });
        }
        match self.as_prime_field() {
            Some(c) => Ok(Fq::from_u64(Arc::clone(target), c)),
            None => Err(Error::unsupported(
                "embedding of proper extension elements into another extension",
            )),
        }
    }

    fn same_ctx(&self, rhs: &Fq) -> (Arc<FqCtx>, Vec<u64>, Vec<u64>) {
        if self.ctx.p != rhs.ctx.p {
            panic!("mixed characteristics in finite field arithmetic");
        }
        if self.ctx.k == rhs.ctx.k {
            return (Arc::clone(&self.ctx), self.coeffs.clone(), rhs.coeffs.clone());
        }
        // lift the prime-field side
        if self.ctx.k == 1 {
            let lifted = self.embed(&rhs.ctx).expect("prime field embeds");
            (Arc::clone(&rhs.ctx), lifted.coeffs, rhs.coeffs.clone())
        } else if rhs.ctx.k == 1 {
            let lifted = rhs.embed(&self.ctx).expect("prime field embeds");
            (Arc::clone(&self.ctx), self.coeffs.clone(), lifted.coeffs)
        } else {
            panic!("mixed extension fields in arithmetic");
        }
    }

    pub fn pow(&self, mut e: u64) -> Fq {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, or None once the cap is exceeded.
    pub fn mult_order(&self, cap: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut x = self.clone();
        let one = self.one_like();
        for n in 1..=cap {
            if x == one {
                return Some(n);
            }
            x = x.mul(self);
        }
        None
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms = vec![];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}*w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}*w^{i}"),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join("+"))
    }
}

impl Field for Fq {
    fn zero_like(&self) -> Self {
        Fq { ctx: Arc::clone(&self.ctx), coeffs: vec![] }
    }
    fn one_like(&self) -> Self {
        Fq { ctx: Arc::clone(&self.ctx), coeffs: vec![1] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
    fn add(&self, rhs: &Self) -> Self {
        let (ctx, a, b) = self.same_ctx(rhs);
        let coeffs = ppoly_add(ctx.p, &a, &b);
        Fq { ctx, coeffs }
    }
    fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| zp_neg(self.ctx.p, c)).collect();
        Fq { ctx: Arc::clone(&self.ctx), coeffs }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (ctx, a, b) = self.same_ctx(rhs);
        let prod = ppoly_mul(ctx.p, &a, &b);
        let coeffs = ppoly_rem_monic(ctx.p, &prod, &ctx.modulus);
        Fq { ctx, coeffs }
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero in finite field"));
        }
        // x^(q-2) with q = p^k
        let q = self.ctx.size();
        let mut e = q - 2;
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }
    fn characteristic(&self) -> u64 {
        self.ctx.p
    }
    fn canon_cmp(&self, rhs: &Self) -> Ordering {
        let key = |x: &Fq| {
            let mut v = x.coeffs.clone();
            v.reverse();
            (x.coeffs.len(), v)
        };
        key(self).cmp(&key(rhs))
    }
    fn size_bits(&self) -> usize {
        64 * self.coeffs.len().max(1)
    }
}

// ---------------------------------------------------------------------------
// base-field scalar: a rational number or a finite-field element
// ---------------------------------------------------------------------------

/// Element of the base field: Q in characteristic zero, F_{p^k} otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fin(Fq),
}

impl Scalar {
    pub fn rat_i64(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::rat_i64(n, 1)
    }

    pub fn fp(ctx: &Arc<FqCtx>, v: u64) -> Scalar {
        Scalar::Fin(Fq::from_u64(Arc::clone(ctx), v))
    }

    pub fn as_fq(&self) -> Option<&Fq> {
        match self {
            Scalar::Fin(f) => Some(f),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Fin(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fin(x) => write!(f, "{x}"),
        }
    }
}

macro_rules! scalar_binop {
    ($self:ident, $rhs:ident, $op:ident) => {
        match ($self, $rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Field::$op(a, b)),
            (Scalar::Fin(a), Scalar::Fin(b)) => Scalar::Fin(Field::$op(a, b)),
            _ => panic!("mixed characteristic scalar arithmetic"),
        }
    };
}

impl Field for Scalar {
    fn zero_like(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.zero_like()),
            Scalar::Fin(x) => Scalar::Fin(x.zero_like()),
        }
    }
    fn one_like(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.one_like()),
            Scalar::Fin(x) => Scalar::Fin(x.one_like()),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => Field::is_zero(r),
            Scalar::Fin(x) => x.is_zero(),
        }
    }
    fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => Field::is_one(r),
            Scalar::Fin(x) => Field::is_one(x),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        scalar_binop!(self, rhs, add)
    }
    fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(Field::neg(r)),
            Scalar::Fin(x) => Scalar::Fin(Field::neg(x)),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        scalar_binop!(self, rhs, mul)
    }
    fn inv(&self) -> Result<Self> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(Field::inv(r)?)),
            Scalar::Fin(x) => Ok(Scalar::Fin(Field::inv(x)?)),
        }
    }
    fn characteristic(&self) -> u64 {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Fin(x) => x.characteristic(),
        }
    }
    fn canon_cmp(&self, rhs: &Self) -> Ordering {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.canon_cmp(b),
            (Scalar::Fin(a), Scalar::Fin(b)) => a.canon_cmp(b),
            (Scalar::Rat(_), Scalar::Fin(_)) => Ordering::Less,
            (Scalar::Fin(_), Scalar::Rat(_)) => Ordering::Greater,
        }
    }
    fn size_bits(&self) -> usize {
        match self {
            Scalar::Rat(r) => r.size_bits(),
            Scalar::Fin(x) => x.size_bits(),
        }
    }
}

// ---------------------------------------------------------------------------
// field descriptor
// ---------------------------------------------------------------------------

/// Describes the scalar field of a computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    /// 0 or a prime p
    pub characteristic: u64,
    /// k for F_{p^k}; 1 for a prime field or Q
    pub extension_degree: u32,
    /// whether scalars live in k(t) rather than k
    pub has_transcendental: bool,
}

impl FieldDesc {
    pub fn rational() -> FieldDesc {
        FieldDesc { characteristic: 0, extension_degree: 1, has_transcendental: false }
    }

    pub fn rational_functions(p: u64) -> Result<FieldDesc> {
        let d = FieldDesc { characteristic: p, extension_degree: 1, has_transcendental: true };
        d.validate()?;
        Ok(d)
    }

    pub fn finite(p: u64, k: u32) -> Result<FieldDesc> {
        let d = FieldDesc { characteristic: p, extension_degree: k, has_transcendental: false };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.characteristic != 0 && !is_prime_u64(self.characteristic) {
            return Err(Error::domain(format!(
                "characteristic {} is neither 0 nor prime",
                self.characteristic
            )));
        }
        if self.extension_degree == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        if self.extension_degree > 1 && self.characteristic == 0 {
            return Err(Error::domain("extension degree > 1 requires positive characteristic"));
        }
        Ok(())
    }

    /// A zero scalar of this field, used as arithmetic context.
    pub fn zero_scalar(&self) -> Result<Scalar> {
        self.validate()?;
        if self.characteristic == 0 {
            Ok(Scalar::int(0))
        } else {
            let ctx = FqCtx::new(self.characteristic, self.extension_degree)?;
            Ok(Scalar::fp(&ctx, 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_table_matches_search_rule() {
        for &(p, k, m) in MODULUS_TABLE {
            assert!(k == 1 || ppoly_is_irreducible(p, m), "table entry ({p},{k}) reducible");
            let computed = compute_canonical_modulus(p, k).unwrap();
            assert_eq!(computed, m.to_vec(), "table entry ({p},{k}) is not the canonical choice");
        }
    }

    #[test]
    fn f4_arithmetic_table() {
        // F_4 = F_2[w]/(w^2+w+1): w * w = w + 1, w * (w+1) = 1
        let ctx = FqCtx::new(2, 2).unwrap();
        let w = Fq::generator(Arc::clone(&ctx));
        let w1 = w.add(&w.one_like());
        assert_eq!(w.mul(&w), w1);
        assert!(w.mul(&w1).is_one());
        assert!(w.add(&w).is_zero());
        assert_eq!(w.inv().unwrap(), w1);
    }

    #[test]
    fn fq_mult_order() {
        let ctx = FqCtx::new(3, 2).unwrap();
        // F_9 multiplicative group has order 8
        let w = Fq::generator(Arc::clone(&ctx));
        let ord = w.mult_order(100).unwrap();
        assert!(8 % ord == 0);
        let mut seen = std::collections::HashSet::new();
        let mut x = w.one_like();
        for _ in 0..ord {
            x = x.mul(&w);
            seen.insert(x.clone());
        }
        assert_eq!(seen.len() as u64, ord);
    }

    #[test]
    fn scalar_char2_addition() {
        let ctx = FqCtx::new(2, 1).unwrap();
        let one = Scalar::fp(&ctx, 1);
        assert!(one.add(&one).is_zero());
    }

    #[test]
    fn prime_test() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(7919));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }
}
