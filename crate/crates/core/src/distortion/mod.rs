//! Word-metric machinery: exact geodesic lengths by breadth-first search
//! over canonically hashed exact matrices, translation-length estimators,
//! uniform lower-bound scans, Z-norm estimator checks, and abelian-subgroup
//! distortion tables.

pub mod fixtures;

use std::collections::HashMap;

use num::BigRational;

use crate::arith::field::Field;
use crate::arith::{Mat, Matrix};
use crate::blocks::classify_element;
use crate::error::{Error, Result};
use crate::group::{mat_canon_cmp, MatGroup};

/// Caps shared by the estimators. All tunable from the CLI.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// BFS radius for word lengths
    pub bfs_radius: u64,
    /// largest power in translation-length sampling
    pub power_n: u32,
    /// watchdog on total matrix entry bits during powering
    pub entry_bits: usize,
    /// cap for exact order computations
    pub order_cap: u64,
    pub seed: u64,
}

impl Caps {
    /// Defaults: radius 10 for two generators, 8 for three or more; N = 16.
    pub fn default_for(gen_count: usize) -> Caps {
        Caps {
            bfs_radius: if gen_count <= 2 { 10 } else { 8 },
            power_n: 16,
            entry_bits: 1 << 20,
            order_cap: 1_000_000,
            seed: crate::DEFAULT_SEED,
        }
    }

    pub fn with_radius(mut self, r: u64) -> Caps {
        self.bfs_radius = r;
        self
    }

    pub fn with_power_n(mut self, n: u32) -> Caps {
        self.power_n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Caps {
        self.seed = seed;
        self
    }
}

/// Exact word length, or the explicit out-of-range sentinel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordLength {
    Exact(u64),
    ExceedsCap(u64),
}

impl WordLength {
    pub fn exact(self) -> Option<u64> {
        match self {
            WordLength::Exact(v) => Some(v),
            WordLength::ExceedsCap(_) => None,
        }
    }
}

/// Ball in the Cayley graph, grown lazily. Elements are compared and hashed
/// in canonical exact form, so the search is exact: distinct group elements
/// never merge.
pub struct CayleyBall {
    sym_gens: Vec<Matrix>,
    /// elements by word length
    pub layers: Vec<Vec<Matrix>>,
    index: HashMap<Matrix, u64>,
}

impl CayleyBall {
    pub fn new(group: &MatGroup) -> CayleyBall {
        let id = group.identity();
        let mut index = HashMap::new();
        index.insert(id.clone(), 0);
        CayleyBall { sym_gens: group.symmetric_gens(), layers: vec![vec![id]], index }
    }

    pub fn radius(&self) -> u64 {
        (self.layers.len() - 1) as u64
    }

    /// Grow the ball to the given radius. Each new layer is sorted into
    /// canonical order so the construction is deterministic.
    pub fn extend_to(&mut self, radius: u64) -> Result<()> {
        while self.radius() < radius {
            let d = self.radius() + 1;
            let mut next: Vec<Matrix> = vec![];
            for g in &self.layers[(d - 1) as usize] {
                for s in &self.sym_gens {
                    let h = g.mul(s);
                    if !self.index.contains_key(&h) {
                        self.index.insert(h.clone(), d);
                        next.push(h);
                    }
                }
            }
            next.sort_by(mat_canon_cmp);
            self.layers.push(next);
        }
        Ok(())
    }

    pub fn ball_size(&self) -> usize {
        self.index.len()
    }

    /// Exact geodesic length if at most `cap`, the sentinel otherwise.
    pub fn word_length(&mut self, g: &Matrix, cap: u64) -> Result<WordLength> {
        if let Some(&d) = self.index.get(g) {
            return Ok(WordLength::Exact(d));
        }
        while self.radius() < cap {
            let target = self.radius() + 1;
            self.extend_to(target)?;
            if let Some(&d) = self.index.get(g) {
                return Ok(WordLength::Exact(d));
            }
        }
        Ok(WordLength::ExceedsCap(cap))
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.index.contains_key(g)
    }

    pub fn depth_of(&self, g: &Matrix) -> Option<u64> {
        self.index.get(g).copied()
    }
}

/// Exact word length of one element (fresh ball; reuse a CayleyBall for
/// repeated queries).
pub fn word_length(group: &MatGroup, g: &Matrix, cap: u64) -> Result<WordLength> {
    let mut ball = CayleyBall::new(group);
    ball.word_length(g, cap)
}

/// Samples of l(g^n)/n and their minimum: an upper bound for the
/// translation length by subadditivity, nonincreasing in N.
#[derive(Clone, Debug)]
pub struct TauEstimate {
    pub element: Matrix,
    /// (n, l(g^n)) for every n <= N with the length computable under cap
    pub samples: Vec<(u32, u64)>,
    pub tau_hat: BigRational,
}

pub fn estimate_tau(
    group: &MatGroup,
    g: &Matrix,
    n_max: u32,
    caps: &Caps,
    ball: &mut CayleyBall,
) -> Result<TauEstimate> {
    if n_max == 0 {
        return Err(Error::domain("need at least one power"));
    }
    let mut samples = vec![];
    let mut power = group.identity();
    for n in 1..=n_max {
        power = mul_watchdog(&power, g, caps.entry_bits)?;
        if let WordLength::Exact(l) = ball.word_length(&power, caps.bfs_radius)? {
            samples.push((n, l));
        }
    }
    if samples.is_empty() {
        return Err(Error::cap(format!(
            "no power of the element has word length within the BFS radius {}",
            caps.bfs_radius
        )));
    }
    let tau_hat = samples
        .iter()
        .map(|&(n, l)| BigRational::new((l as i64).into(), (n as i64).into()))
        .min()
        .unwrap();
    Ok(TauEstimate { element: g.clone(), samples, tau_hat })
}

fn mul_watchdog(a: &Matrix, b: &Matrix, entry_bits: usize) -> Result<Matrix> {
    let prod = a.mul(b);
    if prod.size_bits() > entry_bits {
        return Err(Error::cap(format!(
            "matrix entries grew past {entry_bits} bits while powering"
        )));
    }
    Ok(prod)
}

/// Result of scanning a word ball for the least translation-length
/// estimate over infinite-order elements. The values are upper bounds for
/// the true translation lengths: a small minimum is evidence against a
/// uniform positive lower bound, never a certificate.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub scanned: usize,
    pub skipped_finite: usize,
    pub min_tau_hat: Option<BigRational>,
    pub witness: Option<Matrix>,
    pub witness_samples: Vec<(u32, u64)>,
}

pub fn uniform_lower_bound_scan(
    group: &MatGroup,
    ball_radius: u64,
    n_max: u32,
    caps: &Caps,
) -> Result<ScanReport> {
    let mut ball = CayleyBall::new(group);
    ball.extend_to(ball_radius)?;
    let elements: Vec<Matrix> = ball
        .layers
        .iter()
        .skip(1)
        .flatten()
        .cloned()
        .collect();
    let mut report = ScanReport {
        scanned: 0,
        skipped_finite: 0,
        min_tau_hat: None,
        witness: None,
        witness_samples: vec![],
    };
    for g in elements {
        let class = classify_element(&g, caps.order_cap, caps.seed)?;
        if class.is_finite() {
            report.skipped_finite += 1;
            continue;
        }
        report.scanned += 1;
        let est = estimate_tau(group, &g, n_max, caps, &mut ball)?;
        let better = report
            .min_tau_hat
            .as_ref()
            .map(|cur| est.tau_hat < *cur)
            .unwrap_or(true);
        if better {
            report.min_tau_hat = Some(est.tau_hat.clone());
            report.witness = Some(g);
            report.witness_samples = est.samples;
        }
    }
    Ok(report)
}

/// A free abelian subgroup given by commuting basis matrices; lattice
/// points map to products of powers.
#[derive(Clone, Debug)]
pub struct AbelianEmbedding {
    pub basis: Vec<Matrix>,
}

impl AbelianEmbedding {
    pub fn new(basis: Vec<Matrix>) -> Result<AbelianEmbedding> {
        if basis.is_empty() {
            return Err(Error::domain("empty abelian basis"));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::domain("abelian basis matrices must commute"));
                }
            }
        }
        Ok(AbelianEmbedding { basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn lattice_point(&self, exps: &[i64], entry_bits: usize) -> Result<Matrix> {
        if exps.len() != self.basis.len() {
            return Err(Error::domain("exponent arity mismatch"));
        }
        let mut acc = Mat::identity(self.basis[0].dim(), self.basis[0].context());
        for (b, &e) in self.basis.iter().zip(exps) {
            let p = b.pow_signed(e, Some(entry_bits))?;
            acc = mul_watchdog(&acc, &p, entry_bits)?;
        }
        Ok(acc)
    }
}

/// Estimator-level Z-norm checks on a box of lattice points: subadditivity
/// of word length along commuting powers and the homogeneity inequality
/// l(g^{nm}) <= n l(g^m). Any violation is an implementation bug.
#[derive(Clone, Debug)]
pub struct ZnormReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl ZnormReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn znorm_check(
    group: &MatGroup,
    emb: &AbelianEmbedding,
    box_radius: i64,
    n_max: u32,
    caps: &Caps,
) -> Result<ZnormReport> {
    let mut ball = CayleyBall::new(group);
    let mut report = ZnormReport { checks: 0, violations: vec![] };
    let points = exponent_box(emb.rank(), box_radius);
    let mats: Vec<(Vec<i64>, Matrix)> = points
        .iter()
        .filter(|e| e.iter().any(|&x| x != 0))
        .map(|e| Ok((e.clone(), emb.lattice_point(e, caps.entry_bits)?)))
        .collect::<Result<_>>()?;
    // commuting subadditivity at the estimator level:
    // l((gh)^n) = l(g^n h^n) <= l(g^n) + l(h^n)
    for (i, (ea, a)) in mats.iter().enumerate() {
        for (eb, b) in mats.iter().skip(i + 1) {
            for n in 1..=n_max.min(4) {
                let an = a.pow(n as u64, Some(caps.entry_bits))?;
                let bn = b.pow(n as u64, Some(caps.entry_bits))?;
                let la = ball.word_length(&an, caps.bfs_radius)?;
                let lb = ball.word_length(&bn, caps.bfs_radius)?;
                let (Some(la), Some(lb)) = (la.exact(), lb.exact()) else { continue };
                let prod = mul_watchdog(&an, &bn, caps.entry_bits)?;
                if let WordLength::Exact(lab) = ball.word_length(&prod, caps.bfs_radius)? {
                    report.checks += 1;
                    if lab > la + lb {
                        report.violations.push(format!(
                            "subadditivity failed at {ea:?}, {eb:?}, n={n}: {lab} > {la}+{lb}"
                        ));
                    }
                }
            }
        }
    }
    // homogeneity: l(g^{nm}) <= n l(g^m)
    for (e, a) in &mats {
        for m in 1..=n_max {
            for n in 1..=n_max {
                if n * m > n_max {
                    break;
                }
                let gm = a.pow(m as u64, Some(caps.entry_bits))?;
                let gnm = a.pow((n * m) as u64, Some(caps.entry_bits))?;
                let (lm, lnm) = (
                    ball.word_length(&gm, caps.bfs_radius)?,
                    ball.word_length(&gnm, caps.bfs_radius)?,
                );
                let (Some(lm), Some(lnm)) = (lm.exact(), lnm.exact()) else { continue };
                report.checks += 1;
                if lnm > (n as u64) * lm {
                    report.violations.push(format!(
                        "homogeneity failed at {e:?}: l(g^{}) = {lnm} > {n} * {lm}",
                        n * m
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// One row of the distortion table: lattice point, its l1 norm, and the
/// ambient word length when computable.
#[derive(Clone, Debug)]
pub struct DistortionRow {
    pub point: Vec<i64>,
    pub l1: u64,
    pub word_length: Option<u64>,
}

/// Distortion table over a box plus the fitted comparison constant
/// k = min l_S(a) / |a|_1. Undistorted evidence is k staying away from 0
/// as the box grows.
#[derive(Clone, Debug)]
pub struct DistortionTable {
    pub rows: Vec<DistortionRow>,
    pub fitted_k: Option<BigRational>,
}

pub fn abelian_distortion(
    group: &MatGroup,
    emb: &AbelianEmbedding,
    box_radius: i64,
    caps: &Caps,
) -> Result<DistortionTable> {
    let mut ball = CayleyBall::new(group);
    let mut rows = vec![];
    let mut fitted: Option<BigRational> = None;
    let mut seen: HashMap<Matrix, Vec<i64>> = HashMap::new();
    for e in exponent_box(emb.rank(), box_radius) {
        let l1: u64 = e.iter().map(|&x| x.unsigned_abs()).sum();
        if l1 == 0 {
            continue;
        }
        let m = emb.lattice_point(&e, caps.entry_bits)?;
        if let Some(other) = seen.insert(m.clone(), e.clone()) {
            return Err(Error::domain(format!(
                "abelian embedding is not injective on the box: {e:?} and {other:?} coincide"
            )));
        }
        let wl = ball.word_length(&m, caps.bfs_radius)?.exact();
        if let Some(l) = wl {
            let ratio = BigRational::new((l as i64).into(), (l1 as i64).into());
            fitted = Some(match fitted {
                None => ratio,
                Some(cur) => cur.min(ratio),
            });
        }
        rows.push(DistortionRow { point: e, l1, word_length: wl });
    }
    rows.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(DistortionTable { rows, fitted_k: fitted })
}

fn exponent_box(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = vec![];
        for v in out {
            for e in -radius..=radius {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Lipschitz comparison of the tree translation length against the word
/// metric through the orbit map: ell(g) <= max displacement of a generator
/// times l_S(g).
pub fn orbit_lipschitz_bound(
    group: &MatGroup,
    model: &crate::building::LocalModel,
) -> Result<u64> {
    let standard = crate::building::LatticeClass::standard(model, group.dim());
    let mut worst = 0u64;
    for s in group.symmetric_gens() {
        let sv = crate::building::act(&s, &standard, model)?;
        worst = worst.max(crate::building::distance(&standard, &sv, model)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::fixtures::fixture;
    use num::{One, Zero};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_has_length_zero() {
        let g = fixture("heisenberg").unwrap();
        assert_eq!(
            word_length(&g, &g.identity(), 3).unwrap(),
            WordLength::Exact(0)
        );
    }

    #[test]
    fn free_group_layer_sizes() {
        // Sanov generators: layers 1, 4, 12, 36
        let g = fixture("free2").unwrap();
        let mut ball = CayleyBall::new(&g);
        ball.extend_to(3).unwrap();
        let sizes: Vec<usize> = ball.layers.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 12, 36]);
    }

    #[test]
    fn heisenberg_commutator_length_four() {
        let g = fixture("heisenberg").unwrap();
        // [x, y] = x y x^{-1} y^{-1}
        let c = g.eval_word(&[0, 1, 2, 3]).unwrap();
        assert_eq!(word_length(&g, &c, 6).unwrap(), WordLength::Exact(4));
    }

    #[test]
    fn bs12_exponential_shortening() {
        let g = fixture("bs12").unwrap();
        // a^4 = t^2 a t^{-2} has length at most 5
        let a4 = g.gens()[0].pow(4, None).unwrap();
        match word_length(&g, &a4, 6).unwrap() {
            WordLength::Exact(l) => assert!(l <= 5, "l(a^4) = {l}"),
            _ => panic!("a^4 not found within radius"),
        }
    }

    #[test]
    fn word_length_symmetry_and_subadditivity() {
        let g = fixture("heisenberg").unwrap();
        let mut ball = CayleyBall::new(&g);
        ball.extend_to(4).unwrap();
        let elements: Vec<Matrix> = ball.layers.iter().flatten().cloned().collect();
        for a in elements.iter().take(12) {
            let la = ball.word_length(a, 8).unwrap().exact().unwrap();
            let lainv = ball.word_length(&a.inverse().unwrap(), 8).unwrap().exact().unwrap();
            assert_eq!(la, lainv);
            for b in elements.iter().take(12) {
                let lb = ball.word_length(b, 8).unwrap().exact().unwrap();
                if let WordLength::Exact(lab) = ball.word_length(&a.mul(b), 8).unwrap() {
                    assert!(lab <= la + lb);
                }
            }
        }
    }

    #[test]
    fn tau_hat_zsquare_is_one() {
        let g = fixture("zsquare").unwrap();
        let caps = Caps::default_for(2);
        let mut ball = CayleyBall::new(&g);
        for n in [1u32, 4, 8] {
            let est = estimate_tau(&g, &g.gens()[0], n, &caps, &mut ball).unwrap();
            assert_eq!(est.tau_hat, BigRational::one());
        }
    }

    #[test]
    fn tau_hat_decays_for_heisenberg_center() {
        let g = fixture("heisenberg").unwrap();
        let caps = Caps::default_for(2);
        let mut ball = CayleyBall::new(&g);
        let c = g.eval_word(&[0, 1, 2, 3]).unwrap();
        let est = estimate_tau(&g, &c, 4, &caps, &mut ball).unwrap();
        assert_eq!(est.samples[0], (1, 4));
        assert!(est.tau_hat <= q(2, 1), "tau_hat = {}", est.tau_hat);
        assert!(est.tau_hat < q(4, 1));
    }

    #[test]
    fn tau_hat_bs12_below_seven_eighths() {
        let g = fixture("bs12").unwrap();
        let caps = Caps::default_for(2);
        let mut ball = CayleyBall::new(&g);
        let est = estimate_tau(&g, &g.gens()[0], 8, &caps, &mut ball).unwrap();
        assert!(est.tau_hat <= q(7, 8), "tau_hat = {}", est.tau_hat);
    }

    #[test]
    fn tau_hat_nonincreasing_in_n() {
        let g = fixture("bs12").unwrap();
        let caps = Caps::default_for(2);
        let mut ball = CayleyBall::new(&g);
        let mut prev: Option<BigRational> = None;
        for n in 1..=8 {
            let est = estimate_tau(&g, &g.gens()[0], n, &caps, &mut ball).unwrap();
            if let Some(p) = prev {
                assert!(est.tau_hat <= p);
            }
            // 0 <= tau_hat <= l_S(g)
            assert!(est.tau_hat >= BigRational::zero());
            assert!(est.tau_hat <= q(1, 1));
            prev = Some(est.tau_hat);
        }
    }

    #[test]
    fn scan_zsquare_min_is_one() {
        let g = fixture("zsquare").unwrap();
        let caps = Caps::default_for(2);
        let report = uniform_lower_bound_scan(&g, 2, 4, &caps).unwrap();
        assert_eq!(report.min_tau_hat, Some(BigRational::one()));
    }

    #[test]
    fn scan_heisenberg_sees_collapse() {
        let g = fixture("heisenberg").unwrap();
        let caps = Caps::default_for(2);
        let report = uniform_lower_bound_scan(&g, 2, 4, &caps).unwrap();
        assert!(report.min_tau_hat.unwrap() <= q(2, 1));
    }

    #[test]
    fn scan_bs12_sees_shortening() {
        let g = fixture("bs12").unwrap();
        let caps = Caps::default_for(2);
        let report = uniform_lower_bound_scan(&g, 1, 8, &caps).unwrap();
        assert!(report.min_tau_hat.unwrap() <= q(7, 8));
    }

    #[test]
    fn znorm_zsquare_clean() {
        let g = fixture("zsquare").unwrap();
        let emb = AbelianEmbedding::new(g.gens().to_vec()).unwrap();
        let caps = Caps::default_for(2);
        let report = znorm_check(&g, &emb, 1, 6, &caps).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.checks > 0);
    }

    #[test]
    fn znorm_heisenberg_box() {
        let g = fixture("heisenberg").unwrap();
        let x = g.gens()[0].clone();
        let c = g.eval_word(&[0, 1, 2, 3]).unwrap();
        let emb = AbelianEmbedding::new(vec![x, c]).unwrap();
        let caps = Caps::default_for(2);
        let report = znorm_check(&g, &emb, 1, 4, &caps).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn distortion_zsquare_k_equals_one() {
        let g = fixture("zsquare").unwrap();
        let emb = AbelianEmbedding::new(g.gens().to_vec()).unwrap();
        let caps = Caps::default_for(2);
        for radius in [1i64, 2, 3] {
            let table = abelian_distortion(&g, &emb, radius, &caps).unwrap();
            assert_eq!(table.fitted_k, Some(BigRational::one()));
            for row in &table.rows {
                assert_eq!(row.word_length, Some(row.l1));
            }
        }
    }

    #[test]
    fn distortion_heisenberg_center_decays() {
        let g = fixture("heisenberg").unwrap();
        let c = g.eval_word(&[0, 1, 2, 3]).unwrap();
        let emb = AbelianEmbedding::new(vec![c]).unwrap();
        let caps = Caps { bfs_radius: 16, ..Caps::default_for(2) };
        let small = abelian_distortion(&g, &emb, 4, &caps).unwrap();
        let large = abelian_distortion(&g, &emb, 16, &caps).unwrap();
        let ks = small.fitted_k.unwrap();
        let kl = large.fitted_k.unwrap();
        assert!(kl < ks, "central direction should look distorted: {kl} !< {ks}");
    }

    #[test]
    fn injectivity_guard_fires() {
        let g = fixture("heisenberg").unwrap();
        // x and x^2 do not form a basis: x * x = x^2 collides with (0,2)/(2,0) relations
        let x = g.gens()[0].clone();
        let x2 = x.mul(&x);
        let emb = AbelianEmbedding::new(vec![x, x2]).unwrap();
        let caps = Caps::default_for(2);
        assert!(abelian_distortion(&g, &emb, 2, &caps).is_err());
    }

    #[test]
    fn cross_module_tree_length_vs_word_growth() {
        // on the Laurent fixture, the tree translation length is bounded by
        // the orbit Lipschitz constant times the word length
        let g = fixture("sl2f2_laurent").unwrap();
        let grammar = crate::arith::ScalarGrammar::for_char(2).unwrap();
        let model = crate::building::LocalModel::new(
            crate::valuations::Val1::Prime(grammar.parse_poly("t", "t").unwrap()),
            2,
        )
        .unwrap();
        let lip = orbit_lipschitz_bound(&g, &model).unwrap();
        assert!(lip >= 2);
        let mut ball = CayleyBall::new(&g);
        ball.extend_to(3).unwrap();
        for (depth, layer) in ball.layers.iter().enumerate() {
            for m in layer {
                let class =
                    crate::building::classify_isometry(m, &model, 6).unwrap();
                let ell = class.translation_length();
                assert!(ell <= lip * depth as u64);
            }
        }
    }
}
