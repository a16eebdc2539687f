use std::sync::Arc;

use num::bigint::BigInt;
use num::{BigRational, BigUint, Integer, One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::Poly;
use super::scalar::{Fq, FqCtx, Scalar};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// factorization over finite fields
// ---------------------------------------------------------------------------

fn pow_mod_biguint(base: &Poly<Fq>, e: &BigUint, modulus: &Poly<Fq>) -> Poly<Fq> {
    let one = base.coeffs().first().map(|c| c.one_like()).unwrap_or_else(|| {
        modulus.leading().unwrap().one_like()
    });
    let mut acc = Poly::constant(one);
    let mut b = base.rem(modulus).unwrap();
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = acc.mul(&b).rem(modulus).unwrap();
        }
        if i + 1 < bits {
            b = b.mul(&b).rem(modulus).unwrap();
        }
    }
    acc
}

/// Squarefree decomposition in characteristic p: returns (g, m) pairs with
/// f = lead * prod g^m, the g monic squarefree and pairwise coprime.
fn squarefree_decompose(f: &Poly<Fq>) -> Vec<(Poly<Fq>, u32)> {
    let p = f.leading().unwrap().characteristic();
    let mut out: Vec<(Poly<Fq>, u32)> = vec![];
    let mut stack = vec![(f.monic(), 1u32)];
    while let Some((g, mult)) = stack.pop() {
        if g.degree() == Some(0) {
            continue;
        }
        let d = g.derivative();
        if d.is_zero() {
            // g = h(x^p): take p-th root of coefficients and recurse
            let ctx = g.leading().unwrap().ctx().clone();
            let q_over_p = ctx.size() / p as u128;
            let mut coeffs = vec![];
            for (i, c) in g.coeffs().iter().enumerate() {
                if i % p as usize == 0 {
                    // c^(q/p) is the p-th root in F_q
                    coeffs.push(fq_pow_u128(c, q_over_p));
                } else {
                    debug_assert!(c.is_zero());
                }
            }
            let root = Poly::from_coeffs(coeffs);
            stack.push((root, mult * p as u32));
            continue;
        }
        let c = g.gcd(&d);
        let w = g.divrem(&c).unwrap().0; // product of squarefree part
        let mut wi = w;
        let mut ci = c;
        let mut i = 1u32;
        while wi.degree() != Some(0) {
            let y = wi.gcd(&ci);
            let fac = wi.divrem(&y).unwrap().0;
            if fac.degree().map(|d| d > 0).unwrap_or(false) {
                out.push((fac.monic(), mult * i));
            }
            ci = ci.divrem(&y).unwrap().0;
            wi = y;
            i += 1;
        }
        // what remains is the part whose factor multiplicities are all
        // divisible by p; it is a literal p-th power, so its derivative
        // vanishes and the branch above takes the root on the next pass
        if ci.degree().map(|d| d > 0).unwrap_or(false) {
            stack.push((ci, mult));
        }
    }
    out
}

fn fq_pow_u128(x: &Fq, mut e: u128) -> Fq {
    let mut acc = x.one_like();
    let mut b = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b);
        }
        b = b.mul(&b);
        e >>= 1;
    }
    acc
}

/// Distinct-degree split of a monic squarefree polynomial: returns
/// (product-of-irreducibles-of-degree-d, d) with d ascending.
fn distinct_degree(f: &Poly<Fq>) -> Vec<(Poly<Fq>, usize)> {
    let ctx = f.leading().unwrap().ctx().clone();
    let q = BigUint::from(ctx.size());
    let one = f.leading().unwrap().one_like();
    let x = Poly::variable(&one);
    let mut out = vec![];
    let mut h = x.clone(); // x^(q^d) mod f, starting with d = 0
    let mut rest = f.clone();
    let mut d = 0usize;
    while rest.degree().map(|deg| deg > 0).unwrap_or(false) {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            // remainder is irreducible
            out.push((rest.clone(), rest.degree().unwrap()));
            break;
        }
        h = pow_mod_biguint(&h, &q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().map(|deg| deg > 0).unwrap_or(false) {
            out.push((g.clone(), d));
            rest = rest.divrem(&g).unwrap().0;
            h = h.rem(&rest).unwrap();
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: f monic squarefree, all
/// irreducible factors of degree d. Seeded so runs are reproducible.
fn equal_degree(f: &Poly<Fq>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<Fq>> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let ctx = f.leading().unwrap().ctx().clone();
    let q = ctx.size();
    let one = f.leading().unwrap().one_like();
    loop {
        // random polynomial of degree < n
        let mut coeffs = vec![];
        for _ in 0..n {
            let mut c = vec![];
            for _ in 0..ctx.k {
                c.push(rng.gen_range(0..ctx.p));
            }
            coeffs.push(Fq::new(Arc::clone(&ctx), c));
        }
        let h = Poly::from_coeffs(coeffs);
        if h.degree().is_none() {
            continue;
        }
        let g0 = f.gcd(&h);
        if g0.degree().map(|deg| deg > 0).unwrap_or(false) && g0.degree() != f.degree() {
            let rest = f.divrem(&g0).unwrap().0;
            let mut out = equal_degree(&g0, d, rng);
            out.extend(equal_degree(&rest, d, rng));
            return out;
        }
        let split = if q % 2 == 1 {
            // h^((q^d - 1)/2) - 1
            let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let hp = pow_mod_biguint(&h, &e, f);
            f.gcd(&hp.sub(&Poly::constant(one.clone())))
        } else {
            // trace map sum_{i<k*d} h^(2^i) over F_2
            let reps = (ctx.k as usize) * d;
            let mut tr = h.rem(f).unwrap();
            let mut cur = h.rem(f).unwrap();
            for _ in 1..reps {
                cur = cur.mul(&cur).rem(f).unwrap();
                tr = tr.add(&cur).rem(f).unwrap();
            }
            f.gcd(&tr)
        };
        if split.degree().map(|deg| deg > 0).unwrap_or(false) && split.degree() != f.degree() {
            let rest = f.divrem(&split).unwrap().0;
            let mut out = equal_degree(&split, d, rng);
            out.extend(equal_degree(&rest, d, rng));
            return out;
        }
    }
}

/// Full factorization over F_q: monic irreducible factors with
/// multiplicities, sorted by (degree, coefficient sequence). The seed fixes
/// the randomized equal-degree stage.
pub fn factor_fq(f: &Poly<Fq>, seed: u64) -> Result<Vec<(Poly<Fq>, u32)>> {
    if f.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    if f.degree() == Some(0) {
        return Ok(vec![]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Poly<Fq>, u32)> = vec![];
    for (g, mult) in squarefree_decompose(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr.monic(), mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.canon_cmp(&b.0));
    // merge duplicates (cannot normally occur, but keep the output canonical)
    let mut merged: Vec<(Poly<Fq>, u32)> = vec![];
    for (g, m) in out {
        if let Some(last) = merged.last_mut() {
            if last.0 == g {
                last.1 += m;
                continue;
            }
        }
        merged.push((g, m));
    }
    Ok(merged)
}

/// Factor a polynomial whose coefficients are finite-field `Scalar`s.
pub fn factor_scalar_poly(f: &Poly<Scalar>, seed: u64) -> Result<Vec<(Poly<Scalar>, u32)>> {
    let fq = f.try_map(|c| {
        c.as_fq().cloned().ok_or_else(|| Error::domain("factorization needs positive characteristic"))
    })?;
    let factors = factor_fq(&fq, seed)?;
    Ok(factors.into_iter().map(|(g, m)| (g.map(|c| Scalar::Fin(c.clone())), m)).collect())
}

pub fn is_irreducible_fq(f: &Poly<Fq>, seed: u64) -> Result<bool> {
    let factors = factor_fq(f, seed)?;
    Ok(factors.len() == 1 && factors[0].1 == 1 && factors[0].0.degree() == f.degree())
}

// ---------------------------------------------------------------------------
// splitting fields
// ---------------------------------------------------------------------------

/// Splitting data for a polynomial over a finite field: the canonical
/// extension F_{p^k} containing every root, and the roots with multiplicity.
pub struct SplittingField {
    pub ctx: Arc<FqCtx>,
    pub roots: Vec<(Fq, u32)>,
}

fn lcm_usize(a: usize, b: usize) -> usize {
    a / gcd_usize(a, b) * b
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// Compute the splitting field of f over its base field and all roots in it.
/// The extension degree is lcm of the irreducible factor degrees times the
/// base extension degree.
pub fn splitting_field(f: &Poly<Fq>, seed: u64) -> Result<SplittingField> {
    if f.is_zero() {
        return Err(Error::domain("zero polynomial has no splitting field"));
    }
    let base = f.leading().unwrap().ctx().clone();
    let factors = factor_fq(f, seed)?;
    let mut k = base.k as usize;
    for (g, _) in &factors {
        k = lcm_usize(k, g.degree().unwrap() * base.k as usize);
    }
    let ctx = FqCtx::new(base.p, k as u32)?;
    let mut roots: Vec<(Fq, u32)> = vec![];
    for (g, mult) in &factors {
        if base.k > 1 && g.degree() != Some(1) {
            // roots of a proper-extension factor would need a cross-embedding
            return Err(Error::unsupported(
                "splitting a non-linear factor over a proper extension field",
            ));
        }
        if g.degree() == Some(1) {
            // x + c -> root -c, embedded into the splitting field
            let c = g.coeff(0).unwrap();
            let root = c.neg().embed(&ctx)?;
            roots.push((root, *mult));
            continue;
        }
        // factor g again over the splitting field; all factors become linear
        let g_up = g.try_map(|c| c.embed(&ctx))?;
        let linear = factor_fq(&g_up, seed ^ 0x9e3779b97f4a7c15)?;
        for (l, m) in linear {
            if l.degree() != Some(1) {
                return Err(Error::domain("factor failed to split in its splitting field"));
            }
            roots.push((l.coeff(0).unwrap().neg(), mult * m));
        }
    }
    roots.sort_by(|a, b| a.0.canon_cmp(&b.0));
    Ok(SplittingField { ctx, roots })
}

// ---------------------------------------------------------------------------
// characteristic zero: rational roots, squarefree parts, roots of unity
// ---------------------------------------------------------------------------

/// Clear denominators: primitive integer polynomial with the same roots.
fn to_integer_poly(f: &Poly<BigRational>) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    f.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect()
}

fn divisors_bounded(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut divs = vec![];
    let mut d = BigInt::one();
    // trial divide; for desk-scale constants this stays small
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            divs.push(d.clone());
            divs.push(&n / &d);
            if divs.len() > cap {
                return None;
            }
        }
        d += 1;
        if d.bits() > 24 {
            return None;
        }
    }
    Some(divs)
}

/// Rational roots with multiplicity, by the rational root theorem plus
/// deflation. Returns None when the divisor search is infeasible.
pub fn rational_roots(f: &Poly<BigRational>) -> Option<Vec<(BigRational, u32)>> {
    if f.is_zero() {
        return None;
    }
    let mut out: Vec<(BigRational, u32)> = vec![];
    let mut g = f.clone();
    // strip powers of x
    let mut x_mult = 0u32;
    while g.coeff(0).map(Field::is_zero).unwrap_or(false) && g.degree().unwrap_or(0) > 0 {
        g = g.divrem(&Poly::variable(&BigRational::zero())).unwrap().0;
        x_mult += 1;
    }
    if x_mult > 0 {
        out.push((BigRational::zero(), x_mult));
    }
    if g.degree().unwrap_or(0) == 0 {
        return Some(out);
    }
    let int = to_integer_poly(&g);
    let a0 = int.first().unwrap().clone();
    let an = int.last().unwrap().clone();
    let nums = divisors_bounded(&a0, 4096)?;
    let dens = divisors_bounded(&an, 4096)?;
    let mut candidates = vec![];
    for p in &nums {
        for q in &dens {
            let r = BigRational::new(p.clone(), q.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        let mut mult = 0u32;
        while Field::is_zero(&g.eval(&r)) {
            let lin = Poly::from_coeffs(vec![-r.clone(), BigRational::one()]);
            g = g.divrem(&lin).unwrap().0;
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
        if g.degree().unwrap_or(0) == 0 {
            break;
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out)
}

/// Squarefree part in characteristic zero: f / gcd(f, f').
pub fn squarefree_part_q(f: &Poly<BigRational>) -> Poly<BigRational> {
    let d = f.derivative();
    if d.is_zero() {
        return f.monic();
    }
    let g = f.gcd(&d);
    f.divrem(&g).unwrap().0.monic()
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// lcm of all M with phi(M) <= n: every eigenvalue of an n x n rational
/// matrix that is a root of unity has order dividing this.
pub fn root_of_unity_exponent(n: usize) -> u64 {
    let n = n as u64;
    // phi(M) >= sqrt(M/2), so M <= 2 n^2 + 1 covers everything
    let bound = 2 * n * n + 2;
    let mut l: u64 = 1;
    for m in 1..=bound {
        if euler_phi(m) <= n {
            l = l / gcd_u64(l, m) * m;
        }
    }
    l
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// True when every root of f (over C) is a root of unity: the squarefree
/// part must divide x^L - 1 for L = root_of_unity_exponent(deg f),
/// equivalently x^L mod sf = 1.
pub fn all_roots_of_unity_q(f: &Poly<BigRational>) -> bool {
    if f.degree().unwrap_or(0) == 0 {
        return true;
    }
    if f.coeff(0).map(Field::is_zero).unwrap_or(true) {
        return false; // 0 is a root
    }
    let sf = squarefree_part_q(f);
    let l = root_of_unity_exponent(f.degree().unwrap());
    // x^L mod sf
    let one = BigRational::one();
    let x = Poly::variable(&one);
    let mut acc = Poly::constant(one.clone());
    let mut base = x.rem(&sf).unwrap();
    let mut e = l;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(&sf).unwrap();
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).rem(&sf).unwrap();
        }
    }
    acc.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp_poly(p: u64, cs: &[u64]) -> Poly<Fq> {
        let ctx = FqCtx::new(p, 1).unwrap();
        Poly::from_coeffs(cs.iter().map(|&c| Fq::from_u64(Arc::clone(&ctx), c)).collect())
    }

    #[test]
    fn char2_square() {
        // t^2 + 1 = (t+1)^2 over F_2
        let f = fp_poly(2, &[1, 0, 1]);
        let factors = factor_fq(&f, 7).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, fp_poly(2, &[1, 1]));
        assert_eq!(factors[0].1, 2);
    }

    #[test]
    fn char2_irreducible_quadratic() {
        // t^2 + t + 1 has no roots in F_2 (checked by exhaustion), so it is
        // irreducible there
        let f = fp_poly(2, &[1, 1, 1]);
        for c in 0..2 {
            let ctx = FqCtx::new(2, 1).unwrap();
            assert!(!f.eval(&Fq::from_u64(ctx, c)).is_zero());
        }
        let factors = factor_fq(&f, 7).unwrap();
        assert_eq!(factors, vec![(f.clone(), 1)]);
    }

    #[test]
    fn char3_difference_of_squares() {
        // t^2 - 1 = (t+1)(t+2) over F_3
        let f = fp_poly(3, &[2, 0, 1]);
        let factors = factor_fq(&f, 7).unwrap();
        assert_eq!(
            factors,
            vec![(fp_poly(3, &[1, 1]), 1), (fp_poly(3, &[2, 1]), 1)]
        );
    }

    #[test]
    fn factor_roundtrip_randomized() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &p in &[2u64, 3, 5] {
            let ctx = FqCtx::new(p, 1).unwrap();
            for _ in 0..150 {
                let deg = rng.gen_range(1..=8);
                let mut cs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                cs.push(rng.gen_range(1..p.max(2)));
                let f = Poly::from_coeffs(
                    cs.iter().map(|&c| Fq::from_u64(Arc::clone(&ctx), c)).collect(),
                );
                if f.is_zero() {
                    continue;
                }
                let factors = factor_fq(&f, 99).unwrap();
                let mut prod = Poly::constant(f.leading().unwrap().clone());
                for (g, m) in &factors {
                    assert!(g.is_monic());
                    prod = prod.mul(&g.pow(*m as usize));
                }
                assert_eq!(prod, f, "roundtrip failed for {f}");
            }
        }
    }

    #[test]
    fn splitting_field_f4() {
        // t^2 + t + 1 splits over F_4 with two distinct roots
        let f = fp_poly(2, &[1, 1, 1]);
        let s = splitting_field(&f, 7).unwrap();
        assert_eq!(s.ctx.k, 2);
        assert_eq!(s.roots.len(), 2);
        for (r, m) in &s.roots {
            assert_eq!(*m, 1);
            let lifted = f.try_map(|c| c.embed(&s.ctx)).unwrap();
            assert!(lifted.eval(r).is_zero());
        }
        assert_ne!(s.roots[0].0, s.roots[1].0);
    }

    #[test]
    fn splitting_field_repeated_root() {
        // (t+1)^2 over F_2: stays in F_2, root 1 with multiplicity 2
        let f = fp_poly(2, &[1, 0, 1]);
        let s = splitting_field(&f, 7).unwrap();
        assert_eq!(s.ctx.k, 1);
        assert_eq!(s.roots.len(), 1);
        assert_eq!(s.roots[0].1, 2);
        assert_eq!(s.roots[0].0.as_prime_field(), Some(1));
    }

    #[test]
    fn splitting_field_splits_over_prime() {
        // t^3 - t over F_3: roots {0, 1, 2}
        let f = fp_poly(3, &[0, 2, 0, 1]);
        let s = splitting_field(&f, 7).unwrap();
        assert_eq!(s.ctx.k, 1);
        let roots: Vec<u64> = s.roots.iter().map(|(r, _)| r.as_prime_field().unwrap()).collect();
        assert_eq!(roots, vec![0, 1, 2]);
    }

    #[test]
    fn rational_roots_simple() {
        // (x-2)^2 (x+1/3)
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        let third = BigRational::new(1.into(), 3.into());
        let f = Poly::from_coeffs(vec![-two.clone(), one.clone()])
            .pow(2)
            .mul(&Poly::from_coeffs(vec![third.clone(), one.clone()]));
        let roots = rational_roots(&f).unwrap();
        assert_eq!(roots, vec![(-third, 1), (two, 2)]);
    }

    #[test]
    fn roots_of_unity_detection() {
        let one = BigRational::one();
        // x^2 + 1: roots +-i
        let f = Poly::from_coeffs(vec![one.clone(), BigRational::zero(), one.clone()]);
        assert!(all_roots_of_unity_q(&f));
        // x^2 + x + 1: primitive cube roots
        let g = Poly::from_coeffs(vec![one.clone(), one.clone(), one.clone()]);
        assert!(all_roots_of_unity_q(&g));
        // x - 2
        let h = Poly::from_coeffs(vec![BigRational::from_integer((-2).into()), one.clone()]);
        assert!(!all_roots_of_unity_q(&h));
    }

    #[test]
    fn unity_exponent_small() {
        // n = 2: M with phi(M) <= 2 are 1,2,3,4,6 -> lcm 12
        assert_eq!(root_of_unity_exponent(2), 12);
    }
}
