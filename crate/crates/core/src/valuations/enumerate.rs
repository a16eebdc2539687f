use std::collections::HashSet;
use std::fmt;

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::poly::Poly;
use crate::arith::ratfunc::RatFunc;
use crate::arith::scalar::{FqCtx, Scalar};
use crate::arith::FieldElem2;
use crate::error::{Error, Result};

use super::{RingDesc, ValFamily, ValInt, Valuation};

/// Element of a described ring at any tower level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    L0(Scalar),
    L1(FieldElem),
    L2(FieldElem2),
}

impl RingElem {
    pub fn canon_string(&self, vars: &[String]) -> String {
        let v1 = vars.first().map(String::as_str).unwrap_or("t");
        let v2 = vars.get(1).map(String::as_str).unwrap_or("u");
        match self {
            RingElem::L0(c) => c.to_string(),
            RingElem::L1(x) => x.to_string_vars(v1),
            RingElem::L2(x) => {
                if x.den().is_one() {
                    poly2_string(x.num(), v1, v2)
                } else {
                    format!("{} | {}", poly2_string(x.num(), v1, v2), poly2_string(x.den(), v1, v2))
                }
            }
        }
    }

    pub fn canon_cmp(&self, rhs: &RingElem) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, rhs) {
            (RingElem::L0(a), RingElem::L0(b)) => a.canon_cmp(b),
            (RingElem::L1(a), RingElem::L1(b)) => a.canon_cmp(b),
            (RingElem::L2(a), RingElem::L2(b)) => a.canon_cmp(b),
            (RingElem::L0(_), _) => Ordering::Less,
            (_, RingElem::L0(_)) => Ordering::Greater,
            (RingElem::L1(_), _) => Ordering::Less,
            (_, RingElem::L1(_)) => Ordering::Greater,
        }
    }
}

fn poly2_string(p: &Poly<FieldElem>, v1: &str, v2: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms = vec![];
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string_vars(v1);
        let atom = !cs.contains(['+', '-', '|', ' ']);
        let wrapped = if atom { cs } else { format!("({})", c.to_string_vars(v1)) };
        let term = if i == 0 {
            wrapped
        } else {
            let pow = if i == 1 { v2.to_string() } else { format!("{v2}^{i}") };
            if c.is_one() {
                pow
            } else {
                format!("{wrapped}*{pow}")
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canon_string(&[]))
    }
}

/// All elements of the prime field as scalars.
fn base_field_elements(p: u64) -> Result<Vec<Scalar>> {
    let ctx = FqCtx::new(p, 1)?;
    Ok((0..p).map(|v| Scalar::fp(&ctx, v)).collect())
}

/// Iterate coefficient vectors of length `len` over the given candidate
/// list, calling `f` on each polynomial.
fn for_each_poly<F: Field>(
    candidates: &[F],
    len: usize,
    f: &mut impl FnMut(Poly<F>),
) {
    let mut idx = vec![0usize; len];
    loop {
        let coeffs: Vec<F> = idx.iter().map(|&i| candidates[i].clone()).collect();
        f(Poly::from_coeffs(coeffs));
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            idx[i] += 1;
            if idx[i] < candidates.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Candidate box for one function-field level, following the finiteness
/// proof: denominator exponents bounded by -m, numerator degree bounded by
/// deg(denominator) - m, coefficients drawn from the level below.
fn level_box<F: Field>(
    primes: &[Poly<F>],
    coeff_candidates: &[F],
    m: i64,
    cap: usize,
    sink: &mut impl FnMut(RatFunc<F>),
) -> Result<()> {
    let emax = (-m).max(0) as usize;
    let q = coeff_candidates.len() as u128;
    // denominator exponent tuples
    let mut exps = vec![0usize; primes.len()];
    let mut total: u128 = 0;
    loop {
        let den_deg: usize = primes
            .iter()
            .zip(&exps)
            .map(|(p, &e)| p.degree().unwrap() * e)
            .sum();
        let deg_bound = den_deg as i64 - m;
        if deg_bound >= 0 {
            let count = q.saturating_pow(deg_bound as u32 + 1);
            total = total.saturating_add(count);
            if total > cap as u128 {
                return Err(Error::cap(format!(
                    "enumeration would visit more than {cap} candidates"
                )));
            }
            let mut den = Poly::constant(coeff_candidates[0].one_like());
            for (p, &e) in primes.iter().zip(&exps) {
                den = den.mul(&p.pow(e));
            }
            for_each_poly(coeff_candidates, deg_bound as usize + 1, &mut |num| {
                if let Ok(r) = RatFunc::new(num, den.clone()) {
                    sink(r);
                }
            });
        } else if exps.iter().all(|&e| e == 0) {
            // only the zero element fits a positive lower bound
            let zero = RatFunc::constant(coeff_candidates[0].zero_like());
            sink(zero);
        }
        // advance exponent tuple
        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(());
            }
            exps[i] += 1;
            if exps[i] <= emax {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// The level-1 case of the bounded enumeration, returning plain function
/// field elements (this is what the stabilizer computation consumes).
pub fn enumerate_bounded_l1(
    ring: &RingDesc,
    fam: &ValFamily,
    m: i64,
    cap: usize,
) -> Result<Vec<FieldElem>> {
    let ring = ring.normalize(crate::DEFAULT_SEED)?;
    if ring.levels() != 1 {
        return Err(Error::domain("enumerate_bounded_l1 needs exactly one transcendental"));
    }
    let vals: Vec<&Valuation> = fam.vals.iter().collect();
    for v in &vals {
        if v.level() != 1 {
            return Err(Error::domain("level-1 enumeration given a higher-level valuation"));
        }
    }
    let base = base_field_elements(ring.p)?;
    let mut seen: HashSet<FieldElem> = HashSet::new();
    level_box(&ring.inverted1, &base, m, cap, &mut |r| {
        let ok = vals.iter().all(|v| match v {
            Valuation::L1(v1) => v1.value(&r).at_least(m),
            _ => unreachable!(),
        });
        if ok {
            seen.insert(r);
        }
    })?;
    let mut out: Vec<FieldElem> = seen.into_iter().collect();
    out.sort_by(|a, b| a.canon_cmp(b));
    Ok(out)
}

/// Enumerate { r in R : v(r) >= m for every v in the family }. Finite by
/// construction; the proof's bounds give the candidate box and every
/// candidate is then checked against the family.
pub fn enumerate_bounded(
    ring: &RingDesc,
    fam: &ValFamily,
    m: i64,
    cap: usize,
) -> Result<Vec<RingElem>> {
    let ring = ring.normalize(crate::DEFAULT_SEED)?;
    match ring.levels() {
        0 => {
            // the whole base field is finite; every element qualifies
            let base = base_field_elements(ring.p)?;
            Ok(base.into_iter().map(RingElem::L0).collect())
        }
        1 => {
            let out = enumerate_bounded_l1(&ring, fam, m, cap)?;
            Ok(out.into_iter().map(RingElem::L1).collect())
        }
        2 => {
            // coefficients at level 2 come from the level-1 enumeration with
            // the same bound; this needs the level-2 primes to have
            // integral coefficients under every level-1 valuation
            let sub = RingDesc {
                p: ring.p,
                vars: vec![ring.vars[0].clone()],
                inverted1: ring.inverted1.clone(),
                inverted2: vec![],
                extra1: vec![],
            };
            let sub_fam = super::build_valuation_family(&sub)?;
            let l1_vals: Vec<super::Val1> = sub_fam
                .vals
                .iter()
                .map(|v| match v {
                    Valuation::L1(v1) => v1.clone(),
                    _ => unreachable!(),
                })
                .collect();
            for p2 in &ring.inverted2 {
                for c in p2.coeffs() {
                    for v1 in &l1_vals {
                        if !v1.value(c).at_least(0) {
                            return Err(Error::unsupported(
                                "level-2 inverted primes must have integral coefficients",
                            ));
                        }
                    }
                }
            }
            let coeffs = enumerate_bounded_l1(&sub, &sub_fam, m, cap)?;
            if coeffs.is_empty() {
                return Ok(vec![]);
            }
            let vals: Vec<&Valuation> = fam.vals.iter().collect();
            let mut seen: HashSet<FieldElem2> = HashSet::new();
            level_box(&ring.inverted2, &coeffs, m, cap, &mut |r| {
                let ok = vals.iter().all(|v| match v {
                    Valuation::L2(v2) => v2.value(&r).at_least(m),
                    Valuation::L1(_) => true,
                });
                if ok {
                    seen.insert(r);
                }
            })?;
            let mut out: Vec<FieldElem2> = seen.into_iter().collect();
            out.sort_by(|a, b| a.canon_cmp(b));
            Ok(out.into_iter().map(RingElem::L2).collect())
        }
        _ => Err(Error::unsupported("transcendence degree above 2")),
    }
}

/// Convenience: count without keeping the elements (still bounded by cap).
pub fn count_bounded(ring: &RingDesc, fam: &ValFamily, m: i64, cap: usize) -> Result<usize> {
    Ok(enumerate_bounded(ring, fam, m, cap)?.len())
}

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Valuations of one element under a whole family.
pub fn family_values(fam: &ValFamily, x: &RingElem) -> Result<Vec<ValInt>> {
    fam.vals.iter().map(|v| v.value(x)).collect()
}

/// Make a level-1 ring element usable where the generic element type is
/// expected.
pub fn lift_l1(x: FieldElem) -> RingElem {
    RingElem::L1(x)
}

/// The standard Laurent ring F_p[t, 1/t].
pub fn laurent_ring(p: u64) -> Result<RingDesc> {
    let ctx = FqCtx::new(p, 1)?;
    let t = Poly::from_coeffs(vec![Scalar::fp(&ctx, 0), Scalar::fp(&ctx, 1)]);
    let mut r = RingDesc::polynomial_ring(p, "t")?;
    r.inverted1.push(t);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::grammar::ScalarGrammar;
    use crate::valuations::build_valuation_family;

    #[test]
    fn f2_polynomials_m_minus_one() {
        // {0, 1, t, t+1}
        let r = RingDesc::polynomial_ring(2, "t").unwrap();
        let fam = build_valuation_family(&r).unwrap();
        let out = enumerate_bounded(&r, &fam, -1, 10_000).unwrap();
        assert_eq!(out.len(), 4);
        let strings: Vec<String> =
            out.iter().map(|e| e.canon_string(&r.vars)).collect();
        assert_eq!(strings, vec!["0", "1", "t", "1+t"]);
    }

    #[test]
    fn f2_laurent_m_minus_one() {
        // span of t^-1, 1, t: 8 elements
        let r = laurent_ring(2).unwrap();
        let fam = build_valuation_family(&r).unwrap();
        let out = enumerate_bounded(&r, &fam, -1, 10_000).unwrap();
        assert_eq!(out.len(), 8);
    }

    #[test]
    fn only_zero_for_positive_m() {
        let r = laurent_ring(2).unwrap();
        let fam = build_valuation_family(&r).unwrap();
        let out = enumerate_bounded(&r, &fam, 1, 10_000).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].canon_string(&r.vars), "0");
    }

    #[test]
    fn monotone_in_m() {
        let r = laurent_ring(3).unwrap();
        let fam = build_valuation_family(&r).unwrap();
        let tighter = enumerate_bounded(&r, &fam, -1, 100_000).unwrap();
        let looser = enumerate_bounded(&r, &fam, -2, 100_000).unwrap();
        let loose_set: std::collections::HashSet<_> = looser.iter().cloned().collect();
        for e in &tighter {
            assert!(loose_set.contains(e));
        }
        assert!(looser.len() > tighter.len());
    }

    #[test]
    fn closed_form_counts() {
        // F_p[t]: polynomials of degree <= -m: p^(1-m) elements
        for p in [2u64, 3] {
            let r = RingDesc::polynomial_ring(p, "t").unwrap();
            let fam = build_valuation_family(&r).unwrap();
            for m in [-1i64, -2, -3] {
                let out = enumerate_bounded(&r, &fam, m, 1_000_000).unwrap();
                assert_eq!(out.len() as u64, p.pow((1 - m) as u32));
            }
        }
        // F_p[t,1/t]: Laurent span t^m .. t^-m: p^(2|m|+1)
        for p in [2u64, 3] {
            let r = laurent_ring(p).unwrap();
            let fam = build_valuation_family(&r).unwrap();
            for m in [-1i64, -2] {
                let out = enumerate_bounded(&r, &fam, m, 1_000_000).unwrap();
                assert_eq!(out.len() as u64, p.pow((2 * (-m) + 1) as u32));
            }
        }
    }

    #[test]
    fn every_output_satisfies_the_constraint() {
        let g3 = ScalarGrammar::for_char(3).unwrap();
        let mut r = RingDesc::polynomial_ring(3, "t").unwrap();
        r.inverted1.push(g3.parse_poly("t+1", "t").unwrap());
        r.inverted1.push(g3.parse_poly("t", "t").unwrap());
        let fam = build_valuation_family(&r).unwrap();
        let out = enumerate_bounded(&r, &fam, -2, 1_000_000).unwrap();
        for e in &out {
            for v in &fam.vals {
                assert!(v.value(e).unwrap().at_least(-2));
            }
        }
        assert!(out.len() > 1);
    }

    #[test]
    fn cap_is_enforced() {
        let r = laurent_ring(5).unwrap();
        let fam = build_valuation_family(&r).unwrap();
        let err = enumerate_bounded(&r, &fam, -6, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
    }

    #[test]
    fn two_level_enumeration() {
        // F_2[s][u, 1/u] with mu0 at both levels and the u-adic prime
        let g = ScalarGrammar::for_char(2).unwrap();
        let mut r = RingDesc::polynomial_ring(2, "s").unwrap();
        r.vars.push("u".to_string());
        let u_poly: Poly<FieldElem> = Poly::from_coeffs(vec![
            g.parse_scalar("0").unwrap(),
            g.parse_scalar("1").unwrap(),
        ]);
        r.inverted2.push(u_poly);
        let fam = build_valuation_family(&r).unwrap();
        // family: ext(mu0_s), mu0_u, prime(u)
        assert_eq!(fam.len(), 3);
        let out = enumerate_bounded(&r, &fam, -1, 1_000_000).unwrap();
        // coefficients: {0,1,s,1+s}; polynomials c_{-1} u^{-1} + c_0 + c_1 u
        // subject to ext(mu0) >= -1 (all coefficients already satisfy it):
        // 4^3 = 64 elements
        assert_eq!(out.len(), 64);
        for e in &out {
            for v in &fam.vals {
                assert!(v.value(e).unwrap().at_least(-1));
            }
        }
    }
}
