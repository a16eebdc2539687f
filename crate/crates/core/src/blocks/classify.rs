use std::fmt;

use crate::arith::factor::{all_roots_of_unity_q, root_of_unity_exponent, splitting_field};
use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::poly::Poly;

use crate::arith::Mat;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// Verdict of the order/unipotency classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementClass {
    Identity,
    FiniteOrder(u64),
    /// finite, but the exact order exceeded the configured cap
    FiniteOrderAboveCap,
    InfiniteOrderUnipotent,
    VirtuallyUnipotentInfinite,
    OtherInfinite,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementClass::Identity => write!(f, "identity"),
            ElementClass::FiniteOrder(n) => write!(f, "finite_order({n})"),
            ElementClass::FiniteOrderAboveCap => write!(f, "finite_order(order > cap)"),
            ElementClass::InfiniteOrderUnipotent => write!(f, "infinite_order_unipotent"),
            ElementClass::VirtuallyUnipotentInfinite => write!(f, "virtually_unipotent_infinite"),
            ElementClass::OtherInfinite => write!(f, "other_infinite"),
        }
    }
}

impl ElementClass {
    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            ElementClass::Identity | ElementClass::FiniteOrder(_) | ElementClass::FiniteOrderAboveCap
        )
    }
}

/// Whether the characteristic polynomial is (x - 1)^n.
pub fn is_unipotent(g: &Mat<FieldElem>) -> bool {
    let cp = g.charpoly();
    let one = g.context().one_like();
    let lin = Poly::from_coeffs(vec![one.neg(), one]);
    lin.pow(g.dim()) == cp
}

/// Exact order by minimizing over the divisors of a known multiple.
fn exact_order_dividing(g: &Mat<FieldElem>, multiple: u64, cap: Option<usize>) -> Result<u64> {
    debug_assert!(g.pow(multiple, cap)?.is_identity());
    let mut order = multiple;
    let mut f = 2u64;
    let mut rest = multiple;
    let mut primes = vec![];
    while f * f <= rest {
        if rest % f == 0 {
            primes.push(f);
            while rest % f == 0 {
                rest /= f;
            }
        }
        f += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    loop {
        let mut reduced = false;
        for &p in &primes {
            while order % p == 0 && g.pow(order / p, cap)?.is_identity() {
                order /= p;
                reduced = true;
            }
        }
        if !reduced {
            return Ok(order);
        }
    }
}

/// Classify an invertible matrix: identity / finite order (with the exact
/// order when below the cap) / infinite-order unipotent / virtually
/// unipotent of infinite order / everything else.
///
/// Unipotent means charpoly = (x-1)^n. Virtual unipotence is detected from
/// the spectrum: in characteristic p all eigenvalues must be algebraic over
/// the prime field (the charpoly has constant coefficients), forcing finite
/// order; in characteristic zero all eigenvalues must be roots of unity
/// (the squarefree part of the charpoly divides x^L - 1 for the bound L
/// determined by the dimension).
pub fn classify_element(g: &Mat<FieldElem>, order_cap: u64, seed: u64) -> Result<ElementClass> {
    if g.det().is_zero() {
        return Err(Error::domain("classification needs an invertible matrix"));
    }
    if g.is_identity() {
        return Ok(ElementClass::Identity);
    }
    let n = g.dim();
    let p = g.context().characteristic();
    let cp = g.charpoly();
    if is_unipotent(g) {
        if p == 0 {
            return Ok(ElementClass::InfiniteOrderUnipotent);
        }
        // (g - I)^n = 0, so g^(p^e) = I once p^e >= n
        let pe = unipotent_order_bound(p, n);
        return Ok(ElementClass::FiniteOrder(exact_order_dividing(g, pe, None)?));
    }
    // constant-coefficient test: non-constant charpoly coefficients mean
    // some eigenvalue is transcendental over the base, hence not a root of
    // unity and of infinite order
    let mut constant = true;
    for c in cp.coeffs() {
        if c.as_constant().is_none() {
            constant = false;
            break;
        }
    }
    if !constant {
        return Ok(ElementClass::OtherInfinite);
    }
    if p > 0 {
        // all eigenvalues algebraic over F_p: finite order. Compute the
        // semisimple order from the eigenvalue orders, then the p-part.
        let cpf = cp
            .try_map(|c| {
                c.as_constant()
                    .and_then(|s| s.as_fq().cloned())
                    .ok_or_else(|| Error::domain("expected finite constants"))
            })?;
        let split = splitting_field(&cpf, seed)?;
        let mut s_order = 1u64;
        for (root, _) in &split.roots {
            match root.mult_order(order_cap) {
                Some(o) => s_order = lcm_u64(s_order, o),
                None => return Ok(ElementClass::FiniteOrderAboveCap),
            }
            if s_order > order_cap {
                return Ok(ElementClass::FiniteOrderAboveCap);
            }
        }
        // g^s_order is unipotent; its order is the p-power killing the
        // nilpotent part
        let gs = g.pow(s_order, None)?;
        debug_assert!(is_unipotent(&gs));
        let mut pe = 1u64;
        while pe < n as u64 {
            pe *= p;
        }
        let multiple = s_order.checked_mul(pe).ok_or_else(|| Error::cap("order overflow"))?;
        if multiple > order_cap {
            return Ok(ElementClass::FiniteOrderAboveCap);
        }
        let order = exact_order_dividing(g, multiple, None)?;
        return Ok(if order == 1 {
            ElementClass::Identity
        } else {
            ElementClass::FiniteOrder(order)
        });
    }
    // characteristic zero with constant rational charpoly
    let cpq = cp
        .try_map(|c| {
            c.as_constant()
                .and_then(|s| s.as_rat().cloned())
                .ok_or_else(|| Error::domain("expected rational constants"))
        })?;
    if !all_roots_of_unity_q(&cpq) {
        return Ok(ElementClass::OtherInfinite);
    }
    let l = root_of_unity_exponent(n);
    let gl = g.pow(l, None)?;
    if gl.is_identity() {
        let order = exact_order_dividing(g, l, None)?;
        if order > order_cap {
            return Ok(ElementClass::FiniteOrderAboveCap);
        }
        Ok(ElementClass::FiniteOrder(order))
    } else {
        // the semisimple part has finite order but a unipotent part remains
        debug_assert!(is_unipotent(&gl));
        Ok(ElementClass::VirtuallyUnipotentInfinite)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// The p-power order bound for unipotents: g^(p^ceil(log_p n)) = I.
pub fn unipotent_order_bound(p: u64, n: usize) -> u64 {
    let mut pe = 1u64;
    while pe < n as u64 {
        pe *= p;
    }
    pe
}
