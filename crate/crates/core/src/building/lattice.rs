use std::fmt;

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::poly::Poly;
use crate::arith::ratfunc::RatFunc;
use crate::arith::scalar::{FqCtx, Scalar};
use crate::arith::Mat;
use crate::error::{Error, Result};
use crate::valuations::{prime_valuation, Val1, ValInt};

/// Local data for one tree: a uniformizer in model coordinates. The degree
/// valuation is handled by the substitution u = 1/t, which turns it into
/// the u-adic prime valuation; everything downstream sees one code path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalModel {
    site: Val1,
    prime: Poly<Scalar>,
    p: u64,
}

impl LocalModel {
    pub fn new(site: Val1, p: u64) -> Result<LocalModel> {
        let ctx = FqCtx::new(p, 1)?;
        let prime = match &site {
            Val1::Prime(pi) => {
                for c in pi.coeffs() {
                    if c.characteristic() != p {
                        return Err(Error::domain("prime polynomial characteristic mismatch"));
                    }
                }
                pi.clone()
            }
            // in the substituted coordinates the valuation at infinity is
            // the order at u = 0
            Val1::Mu0 => Poly::variable(&Scalar::fp(&ctx, 0)),
        };
        Ok(LocalModel { site, prime, p })
    }

    pub fn site(&self) -> &Val1 {
        &self.site
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn prime(&self) -> &Poly<Scalar> {
        &self.prime
    }

    /// Transport a scalar into model coordinates.
    pub fn to_model(&self, x: &FieldElem) -> FieldElem {
        match self.site {
            Val1::Prime(_) => x.clone(),
            Val1::Mu0 => x.substitute_reciprocal(),
        }
    }

    pub fn mat_to_model(&self, g: &Mat<FieldElem>) -> Mat<FieldElem> {
        match self.site {
            Val1::Prime(_) => g.clone(),
            Val1::Mu0 => g.map(|e| e.substitute_reciprocal()),
        }
    }

    /// Valuation of a model-coordinate scalar.
    pub fn val(&self, x: &FieldElem) -> ValInt {
        prime_valuation(&self.prime, x)
    }

    pub fn uniformizer(&self) -> FieldElem {
        RatFunc::from_poly(self.prime.clone(), &self.zero())
    }

    fn zero(&self) -> Scalar {
        Scalar::fp(&FqCtx::new(self.p, 1).expect("valid prime"), 0)
    }

    pub fn prime_pow(&self, e: i64) -> FieldElem {
        let pi = self.uniformizer();
        let mut acc = pi.one_like();
        let ab = e.unsigned_abs();
        let base = if e >= 0 { pi } else { pi.inv().expect("uniformizer nonzero") };
        for _ in 0..ab {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Residue field size q = p^deg(prime).
    pub fn residue_size(&self) -> Result<u128> {
        let e = self.prime.degree().unwrap() as u32;
        (self.p as u128)
            .checked_pow(e)
            .ok_or_else(|| Error::cap("residue field too large"))
    }

    /// The canonical residue representatives: polynomials of degree below
    /// deg(prime).
    pub fn residue_reps(&self) -> Result<Vec<FieldElem>> {
        let q = self.residue_size()?;
        if q > 1 << 20 {
            return Err(Error::cap("residue field too large to enumerate"));
        }
        let ctx = FqCtx::new(self.p, 1)?;
        let e = self.prime.degree().unwrap();
        let mut out = vec![];
        let mut idx = vec![0u64; e];
        loop {
            let coeffs: Vec<Scalar> = idx.iter().map(|&v| Scalar::fp(&ctx, v)).collect();
            out.push(RatFunc::from_poly(Poly::from_coeffs(coeffs), &Scalar::fp(&ctx, 0)));
            let mut i = 0;
            loop {
                if i == e {
                    return Ok(out);
                }
                idx[i] += 1;
                if idx[i] < self.p {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Canonical representative of x modulo the prime, for val(x) >= 0.
    pub fn residue_of(&self, x: &FieldElem) -> Result<FieldElem> {
        if !self.val(x).at_least(0) {
            return Err(Error::domain("residue of a non-integral element"));
        }
        if x.is_zero() {
            return Ok(x.clone());
        }
        let num_red = x.num().rem(&self.prime)?;
        let den_inv = x.den().inv_mod(&self.prime)?;
        let rep = num_red.mul(&den_inv).rem(&self.prime)?;
        Ok(RatFunc::from_poly(rep, &self.zero()))
    }

    /// Canonical representative of the class x + prime^d * O, as a finite
    /// prime-adic expansion with digits among the residue representatives.
    pub fn reduce_mod(&self, x: &FieldElem, d: i64) -> Result<FieldElem> {
        let mut rem = x.clone();
        let mut acc = x.zero_like();
        loop {
            let v = match self.val(&rem) {
                ValInt::Inf => return Ok(acc),
                ValInt::Fin(v) => v,
            };
            if v >= d {
                return Ok(acc);
            }
            let unit = rem.mul(&self.prime_pow(-v));
            let digit = self.residue_of(&unit)?;
            let term = digit.mul(&self.prime_pow(v));
            acc = acc.add(&term);
            rem = rem.sub(&term);
        }
    }
}

/// Canonical representative of a homothety class of lattices: the column
/// span of `rep` over the valuation ring, in model coordinates. The
/// canonical form is lower triangular with diagonal prime powers, first
/// exponent 0, and sub-diagonal entries reduced modulo the diagonal prime
/// power of their row, so structural equality decides class equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    site: Val1,
    rep: Mat<FieldElem>,
    diag: Vec<i64>,
}

impl LatticeClass {
    pub fn site(&self) -> &Val1 {
        &self.site
    }

    pub fn rep(&self) -> &Mat<FieldElem> {
        &self.rep
    }

    pub fn diag_exponents(&self) -> &[i64] {
        &self.diag
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn standard(model: &LocalModel, n: usize) -> LatticeClass {
        let ctx = FqCtx::new(model.characteristic(), 1).expect("valid prime");
        let zero = RatFunc::constant(Scalar::fp(&ctx, 0));
        LatticeClass {
            site: model.site().clone(),
            rep: Mat::identity(n, &zero),
            diag: vec![0; n],
        }
    }

    /// Label in the coordinates of the underlying model: the degree
    /// valuation's tree is rendered in the substituted variable u.
    pub fn label(&self) -> String {
        let var = match self.site {
            Val1::Mu0 => "u",
            Val1::Prime(_) => "t",
        };
        self.rep.to_string_vars(|e| e.to_string_vars(var))
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Bring lattice columns (given in model coordinates) to the canonical form.
pub fn canonicalize_columns(
    columns: &Mat<FieldElem>,
    model: &LocalModel,
) -> Result<LatticeClass> {
    let n = columns.dim();
    let mut w = columns.clone();
    let mut diag = vec![0i64; n];
    for i in 0..n {
        // pivot: the minimal-valuation entry of row i among columns >= i
        let mut best: Option<(usize, i64)> = None;
        for j in i..n {
            if let ValInt::Fin(v) = model.val(w.at(i, j)) {
                if best.map(|(_, bv)| v < bv).unwrap_or(true) {
                    best = Some((j, v));
                }
            }
        }
        let Some((jmin, d)) = best else {
            return Err(Error::domain("columns do not span a lattice (singular matrix)"));
        };
        if jmin != i {
            for r in 0..n {
                let a = w.at(r, i).clone();
                let b = w.at(r, jmin).clone();
                w.set(r, i, b);
                w.set(r, jmin, a);
            }
        }
        // scale column i by the unit prime^d / w[i][i]
        let unit = model.prime_pow(d).div(w.at(i, i))?;
        for r in 0..n {
            let v = w.at(r, i).mul(&unit);
            w.set(r, i, v);
        }
        diag[i] = d;
        // clear the rest of row i with integral column operations
        for j in i + 1..n {
            let c = w.at(i, j).mul(&model.prime_pow(-d));
            debug_assert!(model.val(&c).at_least(0));
            if c.is_zero() {
                continue;
            }
            for r in 0..n {
                let v = w.at(r, j).sub(&c.mul(w.at(r, i)));
                w.set(r, j, v);
            }
        }
    }
    // homothety normalization: first diagonal exponent becomes 0
    if diag[0] != 0 {
        let scale = model.prime_pow(-diag[0]);
        w = w.mul_scalar(&scale);
        let d0 = diag[0];
        for d in &mut diag {
            *d -= d0;
        }
    }
    // reduce sub-diagonal entries modulo the diagonal power of their row
    for j in 0..n {
        for i in j + 1..n {
            let reduced = model.reduce_mod(w.at(i, j), diag[i])?;
            let c = w.at(i, j).sub(&reduced).mul(&model.prime_pow(-diag[i]));
            debug_assert!(model.val(&c).at_least(0));
            if c.is_zero() {
                continue;
            }
            for r in 0..n {
                let v = w.at(r, j).sub(&c.mul(w.at(r, i)));
                w.set(r, j, v);
            }
            debug_assert_eq!(w.at(i, j), &reduced);
        }
    }
    Ok(LatticeClass { site: model.site().clone(), rep: w, diag })
}

/// Normalize lattice columns given in the original field coordinates.
pub fn normalize_lattice_class(
    columns: &Mat<FieldElem>,
    model: &LocalModel,
) -> Result<LatticeClass> {
    let m = model.mat_to_model(columns);
    canonicalize_columns(&m, model)
}

/// Group action on lattice classes: g . [L] = [gL]. Requires det g = 1.
pub fn act(g: &Mat<FieldElem>, v: &LatticeClass, model: &LocalModel) -> Result<LatticeClass> {
    if model.site() != v.site() {
        return Err(Error::domain("vertex and model use different valuations"));
    }
    if !g.det().is_one() {
        return Err(Error::domain("the lattice-class action is defined on SL(n)"));
    }
    let gm = model.mat_to_model(g);
    canonicalize_columns(&gm.mul(&v.rep), model)
}

/// Elementary divisor exponents of a relative position matrix over the
/// valuation ring, sorted ascending.
pub fn relative_exponents(m: &Mat<FieldElem>, model: &LocalModel) -> Result<Vec<i64>> {
    let n = m.dim();
    let mut w = m.clone();
    let mut exps = vec![];
    for k in 0..n {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in k..n {
            for j in k..n {
                if let ValInt::Fin(v) = model.val(w.at(i, j)) {
                    if best.map(|(_, _, bv)| v < bv).unwrap_or(true) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else {
            return Err(Error::domain("relative position of a singular matrix"));
        };
        // move pivot to (k, k)
        if pi != k {
            for c in 0..n {
                let a = w.at(k, c).clone();
                let b = w.at(pi, c).clone();
                w.set(k, c, b);
                w.set(pi, c, a);
            }
        }
        if pj != k {
            for r in 0..n {
                let a = w.at(r, k).clone();
                let b = w.at(r, pj).clone();
                w.set(r, k, b);
                w.set(r, pj, a);
            }
        }
        let pivot = w.at(k, k).clone();
        for r in k + 1..n {
            if w.at(r, k).is_zero() {
                continue;
            }
            let f = w.at(r, k).div(&pivot)?;
            for c in k..n {
                let val = w.at(r, c).sub(&f.mul(w.at(k, c)));
                w.set(r, c, val);
            }
        }
        for c in k + 1..n {
            if w.at(k, c).is_zero() {
                continue;
            }
            let f = w.at(k, c).div(&pivot)?;
            for r in k..n {
                let val = w.at(r, c).sub(&f.mul(w.at(r, k)));
                w.set(r, c, val);
            }
        }
        exps.push(v);
    }
    exps.sort_unstable();
    Ok(exps)
}

/// Graph distance between two lattice classes on the tree (n = 2): the
/// spread of the elementary divisor exponents of the relative position.
pub fn distance(a: &LatticeClass, b: &LatticeClass, model: &LocalModel) -> Result<u64> {
    if a.site() != b.site() {
        return Err(Error::domain("distance between different trees"));
    }
    let rel = a.rep.inverse()?.mul(&b.rep);
    let exps = relative_exponents(&rel, model)?;
    Ok((exps[exps.len() - 1] - exps[0]) as u64)
}

/// L_a contains L_b (as lattices, with the given representatives).
pub fn contains(a: &Mat<FieldElem>, b: &Mat<FieldElem>, model: &LocalModel) -> Result<bool> {
    let rel = a.inverse()?.mul(b);
    Ok(rel.entries().iter().all(|e| model.val(e).at_least(0)))
}

/// Whether the classes span a simplex of the building: representatives can
/// be homothety-scaled into a chain pi*L_j < L_0 < ... < L_j. Symmetric in
/// the input order; duplicate classes are allowed (degenerate simplices).
pub fn simplex_test(classes: &[LatticeClass], model: &LocalModel) -> Result<bool> {
    if classes.is_empty() {
        return Ok(true);
    }
    for c in classes {
        if c.site() != model.site() {
            return Err(Error::domain("simplex test across different valuations"));
        }
    }
    let mut distinct: Vec<&LatticeClass> = vec![];
    for c in classes {
        if !distinct.iter().any(|d| *d == c) {
            distinct.push(c);
        }
    }
    if distinct.len() == 1 {
        return Ok(true);
    }
    if distinct.len() > classes[0].dim() {
        return Ok(false);
    }
    let base = &distinct[0].rep;
    let base_inv = base.inverse()?;
    // scale every other representative between pi*L_0 and L_0
    let mut scaled: Vec<Mat<FieldElem>> = vec![base.clone()];
    for c in &distinct[1..] {
        let rel = base_inv.mul(&c.rep);
        let exps = relative_exponents(&rel, model)?;
        let spread = exps[exps.len() - 1] - exps[0];
        if spread > 1 {
            return Ok(false);
        }
        // after scaling by prime^{-min}, exponents lie in {0, 1}:
        // pi L_0 <= M <= L_0
        let m = c.rep.mul_scalar(&model.prime_pow(-exps[0]));
        scaled.push(m);
    }
    // the scaled lattices must form a chain under inclusion
    for i in 0..scaled.len() {
        for j in i + 1..scaled.len() {
            let ij = contains(&scaled[i], &scaled[j], model)?;
            let ji = contains(&scaled[j], &scaled[i], model)?;
            if !ij && !ji {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Stabilizer entry bound from the two-sided conjugation estimate: every g
/// fixing the vertex h^{-1}.[standard] has entry valuations at least
/// floor(h) + floor(h^{-1}).
pub fn stabilizer_entry_bound(h: &Mat<FieldElem>, model: &LocalModel) -> Result<i64> {
    entry_bound_in_model(&model.mat_to_model(h), model)
}

/// Same bound for a conjugator already expressed in model coordinates.
pub fn entry_bound_in_model(h: &Mat<FieldElem>, model: &LocalModel) -> Result<i64> {
    let hinv = h.inverse()?;
    let fl = |m: &Mat<FieldElem>| -> Result<i64> {
        let mut floor = ValInt::Inf;
        for e in m.entries() {
            floor = floor.min(model.val(e));
        }
        floor.finite().ok_or_else(|| Error::domain("zero matrix has no valuation floor"))
    };
    Ok(fl(h)? + fl(&hinv)?)
}
