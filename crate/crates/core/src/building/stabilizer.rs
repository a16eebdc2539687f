use std::fmt;

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::Mat;
use crate::error::{Error, Result};
use crate::group::{mat_canon_cmp, mat_in_ring, MatGroup};
use crate::valuations::{enumerate_bounded_l1, RingDesc, ValFamily, Valuation};

use super::lattice::{act, distance, LatticeClass, LocalModel};

/// A vertex of the product of trees: one lattice class per valuation of a
/// family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoint {
    pub coords: Vec<LatticeClass>,
}

impl ProductPoint {
    pub fn arity(&self) -> usize {
        self.coords.len()
    }
}

/// The tree models matching a level-1 valuation family.
pub fn family_models(fam: &ValFamily, p: u64) -> Result<Vec<LocalModel>> {
    fam.vals
        .iter()
        .map(|v| match v {
            Valuation::L1(v1) => LocalModel::new(v1.clone(), p),
            Valuation::L2(_) => Err(Error::unsupported(
                "building actions above transcendence degree 1",
            )),
        })
        .collect()
}

/// The standard product point: the class of the standard lattice in every
/// coordinate.
pub fn standard_product_point(models: &[LocalModel], n: usize) -> ProductPoint {
    ProductPoint {
        coords: models.iter().map(|m| LatticeClass::standard(m, n)).collect(),
    }
}

/// Exact squared displacement in the product metric (per-coordinate tree
/// distances are integers). Displayed as the square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Displacement {
    pub squared: u64,
}

impl Displacement {
    pub fn is_zero(&self) -> bool {
        self.squared == 0
    }
}

impl fmt::Display for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = (self.squared as f64).sqrt().round() as u64;
        if r * r == self.squared {
            write!(f, "{r}")
        } else {
            write!(f, "sqrt({})", self.squared)
        }
    }
}

/// Displacement of a point of the product of trees under g.
pub fn product_displacement(
    g: &Mat<FieldElem>,
    point: &ProductPoint,
    models: &[LocalModel],
) -> Result<Displacement> {
    if point.arity() != models.len() {
        return Err(Error::domain("point arity does not match the family"));
    }
    let mut squared = 0u64;
    for (v, model) in point.coords.iter().zip(models) {
        let gv = act(g, v, model)?;
        let d = distance(v, &gv, model)?;
        squared += d * d;
    }
    Ok(Displacement { squared })
}

/// All elements of SL(n, R) fixing every coordinate of the product point.
/// The entry box comes from the stabilizer bound applied per coordinate and
/// the finiteness enumeration; each candidate is then checked directly.
pub fn stabilizer_elements(
    group: &MatGroup,
    point: &ProductPoint,
    ring: &RingDesc,
    fam: &ValFamily,
    element_cap: usize,
) -> Result<Vec<Mat<FieldElem>>> {
    let n = group.dim();
    let models = family_models(fam, ring.p)?;
    if point.arity() != models.len() {
        return Err(Error::domain("product point arity does not match the family"));
    }
    for g in group.gens() {
        if !mat_in_ring(g, ring, crate::DEFAULT_SEED)? {
            return Err(Error::domain(
                "group generators do not lie in the described ring",
            ));
        }
    }
    // per-coordinate entry bound via the conjugator h = rep^{-1}, which is
    // already in model coordinates
    let mut m_bound = i64::MAX;
    for (v, model) in point.coords.iter().zip(&models) {
        let h = v.rep().inverse()?;
        let b = super::lattice::entry_bound_in_model(&h, model)?;
        m_bound = m_bound.min(b);
    }
    let entries = enumerate_bounded_l1(ring, fam, m_bound, element_cap)?;
    let count = entries.len() as u128;
    let tuples = count.checked_pow((n * n) as u32).ok_or_else(|| {
        Error::cap("stabilizer candidate count overflows".to_string())
    })?;
    if tuples > element_cap as u128 {
        return Err(Error::cap(format!(
            "stabilizer search needs {tuples} candidates, above the cap {element_cap}"
        )));
    }
    let mut out = vec![];
    let mut idx = vec![0usize; n * n];
    loop {
        let mat = Mat::new(n, idx.iter().map(|&i| entries[i].clone()).collect());
        if mat.det().is_one() {
            let mut fixes = true;
            for (v, model) in point.coords.iter().zip(&models) {
                if &act(&mat, v, model)? != v {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                out.push(mat);
            }
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                out.sort_by(mat_canon_cmp);
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < entries.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

