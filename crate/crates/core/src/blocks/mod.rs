//! Simultaneous single-eigenvalue block decomposition of commuting matrix
//! families, the per-block determinant homomorphism, order/unipotency
//! classification, and the finite-index direct-factor split for central
//! free abelian subgroups.

pub mod abelian;
pub mod classify;
pub mod decomp;

pub use abelian::{
    smith_normal_form, split_direct_factor, AbelianPresentation, DirectFactorSplit, IntMat,
};
pub use classify::{classify_element, is_unipotent, unipotent_order_bound, ElementClass, DEFAULT_ORDER_CAP};
pub use decomp::{generalized_eigenspaces, lift_to, simultaneous_blocks, theta, BlockDecomp, ThetaValue};

use crate::arith::field::Field;
use crate::arith::grammar::FieldElem;
use crate::arith::Mat;
use crate::error::Result;

/// Outcome of sampling the kernel of theta on an abelian family.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub words_checked: usize,
    pub theta_trivial: usize,
    /// genuine contradictions with the block analysis (implementation bugs)
    pub violations: Vec<String>,
    /// infinite-order (virtually) unipotent kernel elements: the torsion
    /// conclusion needs the no-infinite-order-unipotent hypothesis, and
    /// these witnesses show the hypothesis fails for this family
    pub hypothesis_flags: Vec<String>,
}

impl TorsionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerate exponent vectors of l1 norm at most `radius`.
fn exponent_box(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = vec![];
        for v in out {
            let used: i64 = v.iter().map(|e: &i64| e.abs()).sum();
            for e in -(radius - used)..=(radius - used) {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Check the torsion-kernel conclusion on all words of the abelian family
/// with exponent l1-norm at most `word_radius`: every theta-trivial word
/// must have its per-block eigenvalue a d_i-th root of unity, and must be
/// of finite order unless an infinite-order unipotent witness exists.
pub fn kernel_torsion_check(
    gens: &[Mat<FieldElem>],
    decomp: &BlockDecomp,
    word_radius: i64,
    order_cap: u64,
    seed: u64,
) -> Result<TorsionReport> {
    let mut report = TorsionReport {
        words_checked: 0,
        theta_trivial: 0,
        violations: vec![],
        hypothesis_flags: vec![],
    };
    for exps in exponent_box(gens.len(), word_radius) {
        if exps.iter().all(|&e| e == 0) {
            continue;
        }
        let mut w = Mat::identity(gens[0].dim(), gens[0].context());
        for (g, &e) in gens.iter().zip(&exps) {
            w = w.mul(&g.pow_signed(e, None)?);
        }
        report.words_checked += 1;
        let th = theta(&w, decomp)?;
        if !th.is_trivial() {
            continue;
        }
        report.theta_trivial += 1;
        // per-block: when the block is triangular with equal diagonal, the
        // diagonal value mu satisfies mu^{d} = det = 1 already; verify it
        // explicitly where readable
        let blocks = decomp.blocks_of(&w)?;
        for (bi, b) in blocks.iter().enumerate() {
            let d = b.dim();
            let mu = b.at(0, 0).clone();
            let mut triangular_equal = true;
            for i in 0..d {
                if b.at(i, i) != &mu {
                    triangular_equal = false;
                }
                for j in 0..i {
                    if !b.at(i, j).is_zero() {
                        triangular_equal = false;
                    }
                }
            }
            if triangular_equal {
                let mut mud = mu.one_like();
                for _ in 0..d {
                    mud = mud.mul(&mu);
                }
                if !mud.is_one() {
                    report.violations.push(format!(
                        "word {exps:?}: block {bi} eigenvalue power mu^{d} != 1"
                    ));
                }
            }
        }
        match classify_element(&w, order_cap, seed)? {
            ElementClass::Identity | ElementClass::FiniteOrder(_) | ElementClass::FiniteOrderAboveCap => {}
            ElementClass::InfiniteOrderUnipotent => {
                report.hypothesis_flags.push(format!("word {exps:?} is an infinite-order unipotent"));
            }
            ElementClass::VirtuallyUnipotentInfinite => {
                report
                    .hypothesis_flags
                    .push(format!("word {exps:?} is virtually unipotent of infinite order"));
            }
            ElementClass::OtherInfinite => {
                report.violations.push(format!(
                    "word {exps:?} has trivial theta but a non-root-of-unity eigenvalue"
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::grammar::ScalarGrammar;
    use crate::arith::linalg::Rect;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gq() -> ScalarGrammar {
        ScalarGrammar::for_char(0).unwrap()
    }

    fn mat(g: &ScalarGrammar, n: usize, entries: &[&str]) -> Mat<FieldElem> {
        Mat::new(n, entries.iter().map(|s| g.parse_scalar(s).unwrap()).collect())
    }

    #[test]
    fn eigenspaces_diag_223() {
        let g = gq();
        let a = mat(&g, 3, &["2", "0", "0", "0", "2", "0", "0", "0", "3"]);
        let spaces = generalized_eigenspaces(&a, 7).unwrap();
        assert_eq!(spaces.len(), 2);
        let dims: Vec<usize> = spaces.iter().map(|(_, b)| b.len()).collect();
        assert_eq!(dims, vec![2, 1]);
    }

    #[test]
    fn eigenspaces_jordan() {
        let g = gq();
        let a = mat(&g, 2, &["1", "1", "0", "1"]);
        let spaces = generalized_eigenspaces(&a, 7).unwrap();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].1.len(), 2);
    }

    #[test]
    fn eigenspaces_companion_over_f2() {
        // companion of x^2+x+1: eigenvalues are the two primitive elements
        // of F_4
        let g2 = ScalarGrammar::for_char(2).unwrap();
        let a = mat(&g2, 2, &["0", "1", "1", "1"]);
        let spaces = generalized_eigenspaces(&a, 7).unwrap();
        assert_eq!(spaces.len(), 2);
        for (lam, basis) in &spaces {
            assert_eq!(basis.len(), 1);
            assert!(lam.as_constant().unwrap().as_fq().unwrap().ctx().k == 2);
        }
    }

    #[test]
    fn eigenspaces_nonsplit_q_is_unsupported() {
        let g = gq();
        let a = mat(&g, 2, &["0", "-1", "1", "-1"]); // companion of x^2+x+1
        assert!(matches!(
            generalized_eigenspaces(&a, 7),
            Err(crate::error::Error::Unsupported(_))
        ));
    }

    #[test]
    fn blocks_refine_across_generators() {
        let g = gq();
        let a = mat(&g, 3, &["1", "0", "0", "0", "1", "0", "0", "0", "2"]);
        let b = mat(&g, 3, &["3", "0", "0", "0", "5", "0", "0", "0", "7"]);
        let d = simultaneous_blocks(&[a, b], 7).unwrap();
        assert_eq!(d.block_sizes, vec![1, 1, 1]);
    }

    #[test]
    fn blocks_unipotent_single() {
        let g = gq();
        let a = mat(&g, 3, &["1", "0", "1", "0", "1", "0", "0", "0", "1"]);
        let d = simultaneous_blocks(&[a], 7).unwrap();
        assert_eq!(d.block_sizes, vec![3]);
    }

    #[test]
    fn blocks_diag_223() {
        let g = gq();
        let a = mat(&g, 3, &["2", "0", "0", "0", "2", "0", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a.clone()], 7).unwrap();
        assert_eq!(d.block_sizes, vec![2, 1]);
        // theta(a) = (4, 3)
        let th = theta(&a, &d).unwrap();
        let vals: Vec<String> = th.components.iter().map(|c| c.to_string()).collect();
        assert_eq!(vals, vec!["4", "3"]);
        assert_eq!(th.product(), a.det());
    }

    #[test]
    fn theta_identity_trivial() {
        let g = gq();
        let a = mat(&g, 3, &["2", "0", "0", "0", "2", "0", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a], 7).unwrap();
        let id = Mat::identity(3, &gq().parse_scalar("0").unwrap());
        assert!(theta(&id, &d).unwrap().is_trivial());
    }

    #[test]
    fn theta_rejects_non_centralizing() {
        let g = gq();
        let a = mat(&g, 2, &["2", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a], 7).unwrap();
        let swap = mat(&g, 2, &["0", "1", "1", "0"]);
        assert!(theta(&swap, &d).is_err());
    }

    #[test]
    fn theta_is_homomorphism_on_random_block_preserving_pairs() {
        let g = gq();
        let a = mat(&g, 3, &["2", "0", "0", "0", "2", "0", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a], 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            // block-preserving: block-diagonal matrices (2x2 invertible, 1x1 nonzero)
            let mut mk = || {
                loop {
                    let entries: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..4)).collect();
                    if entries[0] * entries[3] - entries[1] * entries[2] == 0 {
                        continue;
                    }
                    let c = rng.gen_range(1..5);
                    let strs: Vec<String> = vec![
                        entries[0].to_string(), entries[1].to_string(), "0".into(),
                        entries[2].to_string(), entries[3].to_string(), "0".into(),
                        "0".into(), "0".into(), c.to_string(),
                    ];
                    let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
                    return mat(&g, 3, &refs);
                }
            };
            let x = mk();
            let y = mk();
            let tx = theta(&x, &d).unwrap();
            let ty = theta(&y, &d).unwrap();
            let txy = theta(&x.mul(&y), &d).unwrap();
            assert_eq!(txy, tx.mul(&ty));
            assert_eq!(txy.product(), x.mul(&y).det());
        }
    }

    #[test]
    fn classify_jordan_f3_has_order_three() {
        let g3 = ScalarGrammar::for_char(3).unwrap();
        let u = mat(&g3, 2, &["1", "1", "0", "1"]);
        assert_eq!(classify_element(&u, 1000, 7).unwrap(), ElementClass::FiniteOrder(3));
    }

    #[test]
    fn classify_jordan_q_is_infinite_unipotent() {
        let g = gq();
        let u = mat(&g, 2, &["1", "1", "0", "1"]);
        assert_eq!(classify_element(&u, 1000, 7).unwrap(), ElementClass::InfiniteOrderUnipotent);
    }

    #[test]
    fn classify_rotation_quarter_turn() {
        let g = gq();
        let r = mat(&g, 2, &["0", "-1", "1", "0"]);
        assert_eq!(classify_element(&r, 1000, 7).unwrap(), ElementClass::FiniteOrder(4));
    }

    #[test]
    fn classify_hyperbolic_diag() {
        let g = gq();
        let d = mat(&g, 2, &["2", "0", "0", "1/2"]);
        assert_eq!(classify_element(&d, 1000, 7).unwrap(), ElementClass::OtherInfinite);
    }

    #[test]
    fn classify_virtually_unipotent_infinite() {
        let g = gq();
        let m = mat(&g, 2, &["-1", "1", "0", "-1"]);
        assert_eq!(
            classify_element(&m, 1000, 7).unwrap(),
            ElementClass::VirtuallyUnipotentInfinite
        );
    }

    #[test]
    fn classify_lamplighter_shifted_lamp_is_finite() {
        // conjugates of [[1,1],[0,1]] by diag(t,1) over F_2(t) stay unipotent
        let g2 = ScalarGrammar::for_char(2).unwrap();
        let lamp = mat(&g2, 2, &["1", "t^2", "0", "1"]);
        assert_eq!(classify_element(&lamp, 1000, 7).unwrap(), ElementClass::FiniteOrder(2));
    }

    #[test]
    fn classify_is_conjugation_invariant() {
        let g = gq();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let samples = [
            mat(&g, 2, &["0", "-1", "1", "0"]),
            mat(&g, 2, &["1", "1", "0", "1"]),
            mat(&g, 2, &["2", "0", "0", "1/2"]),
            mat(&g, 2, &["-1", "1", "0", "-1"]),
        ];
        for s in &samples {
            let base = classify_element(s, 1000, 7).unwrap();
            for _ in 0..20 {
                let h = loop {
                    let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..4)).collect();
                    if e[0] * e[3] - e[1] * e[2] != 0 {
                        let strs: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                        let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
                        break mat(&g, 2, &refs);
                    }
                };
                let conj = s.conjugate_by(&h).unwrap();
                assert_eq!(classify_element(&conj, 1000, 7).unwrap(), base);
            }
        }
    }

    #[test]
    fn kernel_torsion_cube_roots() {
        // <companion of x^2+x+1>: theta is plain det = 1, kernel sampled
        // words all have order dividing 3
        let g = gq();
        let c = mat(&g, 2, &["0", "-1", "1", "-1"]);
        let d = simultaneous_blocks(&[c.clone()], 7).unwrap();
        assert_eq!(d.block_sizes, vec![2]);
        let report = kernel_torsion_check(&[c.clone()], &d, 4, 1000, 7).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.theta_trivial > 0);
        assert!(report.hypothesis_flags.is_empty());
        for e in [1i64, 2, 3, 4] {
            let w = c.pow_signed(e, None).unwrap();
            let class = classify_element(&w, 1000, 7).unwrap();
            match class {
                ElementClass::Identity => assert_eq!(e % 3, 0),
                ElementClass::FiniteOrder(o) => assert!(3 % o == 0),
                other => panic!("unexpected class {other:?}"),
            }
        }
    }

    #[test]
    fn kernel_torsion_flags_heisenberg_center() {
        // <I + E13> over Q: theta trivial, infinite-order unipotent flagged
        let g = gq();
        let c = mat(&g, 3, &["1", "0", "1", "0", "1", "0", "0", "0", "1"]);
        let d = simultaneous_blocks(&[c.clone()], 7).unwrap();
        let report = kernel_torsion_check(&[c], &d, 2, 1000, 7).unwrap();
        assert!(report.passed());
        assert!(!report.hypothesis_flags.is_empty());
    }

    #[test]
    fn kernel_torsion_nontrivial_theta_empty_kernel() {
        let g = gq();
        let a = mat(&g, 2, &["2", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a.clone()], 7).unwrap();
        let report = kernel_torsion_check(&[a], &d, 3, 1000, 7).unwrap();
        assert_eq!(report.theta_trivial, 0);
        assert!(report.passed());
    }

    #[test]
    fn random_commuting_families_decompose_soundly() {
        // polynomials in one random matrix over F_5 commute; the
        // decomposition must be block-diagonal, upper triangular per block,
        // single eigenvalue per block
        let g5 = ScalarGrammar::for_char(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..25 {
            let n = rng.gen_range(2..=4);
            // random base matrix
            let m = loop {
                let strs: Vec<String> =
                    (0..n * n).map(|_| rng.gen_range(0..5u64).to_string()).collect();
                let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
                let cand = mat(&g5, n, &refs);
                if !cand.det().is_zero() {
                    break cand;
                }
            };
            // generators: invertible polynomials in m
            let mut gens = vec![];
            while gens.len() < 2 {
                let c0 = rng.gen_range(0..5u64);
                let c1 = rng.gen_range(0..5u64);
                let c2 = rng.gen_range(0..5u64);
                let id = Mat::identity(n, m.context());
                let cand = id
                    .mul_scalar(&g5.parse_scalar(&c0.to_string()).unwrap())
                    .add(&m.mul_scalar(&g5.parse_scalar(&c1.to_string()).unwrap()))
                    .add(&m.mul(&m).mul_scalar(&g5.parse_scalar(&c2.to_string()).unwrap()));
                if !cand.det().is_zero() {
                    gens.push(cand);
                }
            }
            let d = simultaneous_blocks(&gens, 7).unwrap();
            assert_eq!(d.block_sizes.iter().sum::<usize>(), n, "trial {trial}");
            for gmat in &gens {
                let blocks = d.blocks_of(gmat).unwrap();
                for b in blocks {
                    let dim = b.dim();
                    let mu = b.at(0, 0).clone();
                    for i in 0..dim {
                        assert_eq!(b.at(i, i), &mu, "equal diagonal per block");
                        for j in 0..i {
                            assert!(b.at(i, j).is_zero(), "upper triangular per block");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn centralizer_preserves_decomposition() {
        // anything commuting with the family preserves the blocks
        let g5 = ScalarGrammar::for_char(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m = mat(&g5, 3, &["1", "2", "0", "0", "1", "0", "0", "0", "3"]);
        let gens = vec![m.clone()];
        let d = simultaneous_blocks(&gens, 7).unwrap();
        for _ in 0..50 {
            // commuting elements: polynomials in m
            let c0 = rng.gen_range(0..5u64);
            let c1 = rng.gen_range(0..5u64);
            let id = Mat::identity(3, m.context());
            let x = id
                .mul_scalar(&g5.parse_scalar(&c0.to_string()).unwrap())
                .add(&m.mul_scalar(&g5.parse_scalar(&c1.to_string()).unwrap()));
            if x.det().is_zero() {
                continue;
            }
            assert!(theta(&x, &d).is_ok());
        }
    }

    #[test]
    fn block_basis_columns_span_invariantly() {
        let g = gq();
        let a = mat(&g, 4, &["2", "1", "0", "0", "0", "2", "0", "0", "0", "0", "3", "0", "0", "0", "0", "3"]);
        let d = simultaneous_blocks(&[a.clone()], 7).unwrap();
        assert_eq!(d.block_sizes, vec![2, 2]);
        // basis invertible and conjugation is block diagonal
        let r = Rect::new(4, 4, d.basis.entries().to_vec());
        assert_eq!(r.rank(), 4);
        assert!(theta(&a, &d).is_ok());
    }
}
