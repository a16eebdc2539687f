use std::collections::HashMap;

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::Mat;
use crate::error::{Error, Result};

use super::lattice::{act, canonicalize_columns, distance, LatticeClass, LocalModel};

pub const DEFAULT_SEARCH_RADIUS: u64 = 6;

/// Ball in the tree (n = 2) around a center: vertices listed layer by
/// layer in canonical order, edges as index pairs.
#[derive(Clone, Debug)]
pub struct BuildingBall {
    pub center: LatticeClass,
    pub radius: u64,
    pub vertices: Vec<LatticeClass>,
    /// number of vertices at distance exactly d, for d = 0..=radius
    pub layer_sizes: Vec<usize>,
    /// layer index (= distance from center) per vertex
    pub depths: Vec<u64>,
    pub edges: Vec<(usize, usize)>,
}

/// The q+1 neighbors of a tree vertex: index-q sublattices between pi*L and
/// L, one per line of the rank-2 residue space.
pub fn neighbors(v: &LatticeClass, model: &LocalModel) -> Result<Vec<LatticeClass>> {
    if v.dim() != 2 {
        return Err(Error::unsupported("neighbor enumeration only on trees (n = 2)"));
    }
    let reps = model.residue_reps()?;
    let pi = model.prime_pow(1);
    let col = |m: &Mat<FieldElem>, j: usize| -> Vec<FieldElem> {
        vec![m.at(0, j).clone(), m.at(1, j).clone()]
    };
    let v1 = col(v.rep(), 0);
    let v2 = col(v.rep(), 1);
    let mk = |c0: &[FieldElem], c1: &[FieldElem]| -> Mat<FieldElem> {
        Mat::from_rows(vec![
            vec![c0[0].clone(), c1[0].clone()],
            vec![c0[1].clone(), c1[1].clone()],
        ])
    };
    let mut out = vec![];
    for c in &reps {
        // line spanned by v1 + c v2: lattice (v1 + c v2, pi v2)
        let w: Vec<FieldElem> = (0..2).map(|i| v1[i].add(&c.mul(&v2[i]))).collect();
        let piv2: Vec<FieldElem> = v2.iter().map(|e| e.mul(&pi)).collect();
        out.push(canonicalize_columns(&mk(&w, &piv2), model)?);
    }
    // the remaining line, spanned by v2: lattice (v2, pi v1)
    let piv1: Vec<FieldElem> = v1.iter().map(|e| e.mul(&pi)).collect();
    out.push(canonicalize_columns(&mk(&v2, &piv1), model)?);
    out.sort_by(|a, b| crate::group::mat_canon_cmp(a.rep(), b.rep()));
    out.dedup();
    Ok(out)
}

/// Breadth-first ball of the given radius. Layers are kept in canonical
/// order so the construction is deterministic.
pub fn ball(center: &LatticeClass, radius: u64, model: &LocalModel) -> Result<BuildingBall> {
    if center.dim() != 2 {
        return Err(Error::unsupported("balls are only constructed on trees (n = 2)"));
    }
    let mut vertices = vec![center.clone()];
    let mut depths = vec![0u64];
    let mut index: HashMap<LatticeClass, usize> = HashMap::new();
    index.insert(center.clone(), 0);
    let mut layer_sizes = vec![1usize];
    let mut frontier = vec![0usize];
    for d in 1..=radius {
        let mut next = vec![];
        for &vi in &frontier {
            let v = vertices[vi].clone();
            for nb in neighbors(&v, model)? {
                if !index.contains_key(&nb) {
                    let id = vertices.len();
                    index.insert(nb.clone(), id);
                    vertices.push(nb);
                    depths.push(d);
                    next.push(id);
                }
            }
        }
        layer_sizes.push(next.len());
        frontier = next;
    }
    // edges: neighbor pairs inside the ball
    let mut edges = vec![];
    for (i, v) in vertices.iter().enumerate() {
        for nb in neighbors(v, model)? {
            if let Some(&j) = index.get(&nb) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(BuildingBall { center: center.clone(), radius, vertices, layer_sizes, depths, edges })
}

/// Certificate produced by the displacement search on one tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometryClass {
    /// fixes a vertex
    Elliptic { fixed: LatticeClass },
    /// preserves an edge, swapping its endpoints (cannot occur for the
    /// type-preserving SL(2) action; kept for completeness)
    EllipticEdge { edge: (LatticeClass, LatticeClass) },
    /// translates along an axis
    Hyperbolic { translation_length: u64, axis_vertex: LatticeClass },
}

impl IsometryClass {
    pub fn is_elliptic(&self) -> bool {
        !matches!(self, IsometryClass::Hyperbolic { .. })
    }

    pub fn translation_length(&self) -> u64 {
        match self {
            IsometryClass::Hyperbolic { translation_length, .. } => *translation_length,
            _ => 0,
        }
    }
}

/// Classify g in SL(2, k) acting on the tree: search the ball of the given
/// radius around the standard vertex for the minimal displacement. On a
/// tree the displacement function decreases by 2 along each step toward the
/// min set, so a minimum attained strictly inside the ball is global. A
/// search that only attains its minimum on the boundary is inconclusive and
/// reported as an error so the caller can raise the radius.
pub fn classify_isometry(
    g: &Mat<FieldElem>,
    model: &LocalModel,
    search_radius: u64,
) -> Result<IsometryClass> {
    if g.dim() != 2 {
        return Err(Error::unsupported("isometry classification only on trees (n = 2)"));
    }
    if !g.det().is_one() {
        return Err(Error::domain("classification is defined on SL(2)"));
    }
    let standard = LatticeClass::standard(model, 2);
    let b = ball(&standard, search_radius, model)?;
    let mut best: Option<(u64, usize)> = None;
    for (i, v) in b.vertices.iter().enumerate() {
        let gv = act(g, v, model)?;
        let disp = distance(v, &gv, model)?;
        if best.map(|(bd, _)| disp < bd).unwrap_or(true) {
            best = Some((disp, i));
        }
        if disp == 0 {
            break;
        }
    }
    let (min_disp, arg) = best.expect("ball is nonempty");
    if min_disp == 0 {
        return Ok(IsometryClass::Elliptic { fixed: b.vertices[arg].clone() });
    }
    if min_disp == 1 {
        // odd displacement next to an inverted edge
        let v = &b.vertices[arg];
        let gv = act(g, v, model)?;
        let ggv = act(g, &gv, model)?;
        if &ggv == v {
            return Ok(IsometryClass::EllipticEdge { edge: (v.clone(), gv) });
        }
    }
    if b.depths[arg] < search_radius {
        // interior minimum: the axis meets the ball
        return Ok(IsometryClass::Hyperbolic {
            translation_length: min_disp,
            axis_vertex: b.vertices[arg].clone(),
        });
    }
    Err(Error::Inconclusive(format!(
        "no displacement certificate within radius {search_radius}; retry with a larger radius"
    )))
}
