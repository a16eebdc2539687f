//! Lattice-class model of the Bruhat-Tits building for SL(n) over a
//! function field with a discrete valuation: canonical homothety-class
//! representatives, the SL(n) action, tree balls and isometry
//! classification for n = 2, and finite stabilizers of product points.

pub mod lattice;
pub mod stabilizer;
pub mod tree;

pub use lattice::{
    act, canonicalize_columns, contains, distance, entry_bound_in_model, normalize_lattice_class,
    relative_exponents, simplex_test, stabilizer_entry_bound, LatticeClass, LocalModel,
};
pub use stabilizer::{
    family_models, product_displacement, stabilizer_elements, standard_product_point,
    Displacement, ProductPoint,
};
pub use tree::{ball, classify_isometry, neighbors, BuildingBall, IsometryClass, DEFAULT_SEARCH_RADIUS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Field;
    use crate::arith::grammar::ScalarGrammar;
    use crate::arith::{FieldElem, Mat};
    use crate::error::Error;
    use crate::valuations::Val1;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g2() -> ScalarGrammar {
        ScalarGrammar::for_char(2).unwrap()
    }

    fn model_t(p: u64) -> LocalModel {
        let g = ScalarGrammar::for_char(p).unwrap();
        LocalModel::new(Val1::Prime(g.parse_poly("t", "t").unwrap()), p).unwrap()
    }

    fn mat2(g: &ScalarGrammar, e: [&str; 4]) -> Mat<FieldElem> {
        Mat::new(2, e.iter().map(|s| g.parse_scalar(s).unwrap()).collect())
    }

    #[test]
    fn identity_columns_are_standard() {
        let m = model_t(2);
        let g = g2();
        let id = mat2(&g, ["1", "0", "0", "1"]);
        let v = normalize_lattice_class(&id, &m).unwrap();
        assert_eq!(v, LatticeClass::standard(&m, 2));
    }

    #[test]
    fn homothety_scaling_is_invisible() {
        let m = model_t(2);
        let g = g2();
        let scaled = mat2(&g, ["t", "0", "0", "t"]);
        let v = normalize_lattice_class(&scaled, &m).unwrap();
        assert_eq!(v, LatticeClass::standard(&m, 2));
    }

    #[test]
    fn homothetic_spans_normalize_identically() {
        // columns (e1, t e2) and (t e1, t^2 e2) span homothetic lattices
        let m = model_t(2);
        let g = g2();
        let a = mat2(&g, ["1", "0", "0", "t"]);
        let b = mat2(&g, ["t", "0", "0", "t^2"]);
        let va = normalize_lattice_class(&a, &m).unwrap();
        let vb = normalize_lattice_class(&b, &m).unwrap();
        assert_eq!(va, vb);
        // cross-check by mutual lattice membership after scaling
        assert!(contains(va.rep(), vb.rep(), &m).unwrap());
        assert!(contains(vb.rep(), va.rep(), &m).unwrap());
    }

    #[test]
    fn canonical_form_unique_under_random_gl2o_and_homothety() {
        let m = model_t(2);
        let g = g2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = mat2(&g, ["1", "0", "t", "t^3"]);
        let v0 = normalize_lattice_class(&base, &m).unwrap();
        for _ in 0..100 {
            // random element of GL(2, O): product of elementary matrices
            // with polynomial entries and unit diagonal
            let mut u = Mat::identity(2, base.context());
            for _ in 0..4 {
                let c: u64 = rng.gen_range(0..2);
                let d: u64 = rng.gen_range(0..3);
                let poly = g
                    .parse_scalar(&format!("{c}+t^{d}"))
                    .unwrap();
                let mut e = Mat::identity(2, base.context());
                if rng.gen_bool(0.5) {
                    e.set(0, 1, poly);
                } else {
                    e.set(1, 0, poly);
                }
                u = u.mul(&e);
            }
            let mut candidate = base.mul(&u);
            // plus a random homothety
            let shift: i64 = rng.gen_range(-2..3);
            candidate = candidate.mul_scalar(&m.prime_pow(shift));
            let v = normalize_lattice_class(&candidate, &m).unwrap();
            assert_eq!(v, v0);
        }
    }

    #[test]
    fn singular_columns_rejected() {
        let m = model_t(2);
        let g = g2();
        let s = mat2(&g, ["1", "1", "1", "1"]);
        assert!(matches!(normalize_lattice_class(&s, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn sl2o_fixes_standard_vertex() {
        let m = model_t(2);
        let g = g2();
        let v = LatticeClass::standard(&m, 2);
        for e in [
            mat2(&g, ["1", "t^2+1", "0", "1"]),
            mat2(&g, ["1", "0", "t", "1"]),
            mat2(&g, ["1+t", "t", "1", "1"]),
        ] {
            assert!(e.det().is_one(), "fixture not in SL2");
            assert_eq!(act(&e, &v, &m).unwrap(), v);
        }
    }

    #[test]
    fn diag_t_translates_distance_two() {
        let m = model_t(2);
        let g = g2();
        let d = mat2(&g, ["t", "0", "0", "1 | t"]);
        let v = LatticeClass::standard(&m, 2);
        let dv = act(&d, &v, &m).unwrap();
        assert_eq!(distance(&v, &dv, &m).unwrap(), 2);
        // cross-check with BFS
        let b = ball(&v, 2, &m).unwrap();
        let pos = b.vertices.iter().position(|w| w == &dv).unwrap();
        assert_eq!(b.depths[pos], 2);
    }

    #[test]
    fn action_laws_on_random_pairs() {
        let m = model_t(3);
        let g3 = ScalarGrammar::for_char(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gens = [
            mat2(&g3, ["t", "0", "0", "1 | t"]),
            mat2(&g3, ["1", "1", "0", "1"]),
            mat2(&g3, ["1", "0", "t", "1"]),
            mat2(&g3, ["1", "2+t^2", "0", "1"]),
        ];
        let random_g = |rng: &mut ChaCha8Rng| {
            let mut acc = Mat::identity(2, gens[0].context());
            for _ in 0..rng.gen_range(1..5) {
                let i = rng.gen_range(0..gens.len());
                acc = if rng.gen_bool(0.5) {
                    acc.mul(&gens[i])
                } else {
                    acc.mul(&gens[i].inverse().unwrap())
                };
            }
            acc
        };
        let standard = LatticeClass::standard(&m, 2);
        let b = ball(&standard, 2, &m).unwrap();
        for _ in 0..500 {
            let g = random_g(&mut rng);
            let h = random_g(&mut rng);
            let v = b.vertices[rng.gen_range(0..b.vertices.len())].clone();
            // identity, composition, inverse
            let id = Mat::identity(2, g.context());
            assert_eq!(act(&id, &v, &m).unwrap(), v);
            let gh = g.mul(&h);
            assert_eq!(
                act(&gh, &v, &m).unwrap(),
                act(&g, &act(&h, &v, &m).unwrap(), &m).unwrap()
            );
            let gv = act(&g, &v, &m).unwrap();
            assert_eq!(act(&g.inverse().unwrap(), &gv, &m).unwrap(), v);
        }
    }

    #[test]
    fn action_requires_det_one() {
        let m = model_t(2);
        let g = g2();
        let bad = mat2(&g, ["t", "0", "0", "1"]);
        let v = LatticeClass::standard(&m, 2);
        assert!(matches!(act(&bad, &v, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn ball_layers_q2() {
        let m = model_t(2);
        let v = LatticeClass::standard(&m, 2);
        let b = ball(&v, 3, &m).unwrap();
        assert_eq!(b.layer_sizes, vec![1, 3, 6, 12]);
        assert_eq!(b.vertices.len(), 22);
        // a tree: connected with |E| = |V| - 1, so acyclic
        assert_eq!(b.edges.len(), b.vertices.len() - 1);
    }

    #[test]
    fn ball_layers_q3() {
        let m = model_t(3);
        let v = LatticeClass::standard(&m, 2);
        let b = ball(&v, 3, &m).unwrap();
        assert_eq!(b.layer_sizes, vec![1, 4, 12, 36]);
        assert_eq!(b.edges.len(), b.vertices.len() - 1);
    }

    #[test]
    fn ball_radius_zero() {
        let m = model_t(2);
        let v = LatticeClass::standard(&m, 2);
        let b = ball(&v, 0, &m).unwrap();
        assert_eq!(b.vertices.len(), 1);
        assert!(b.edges.is_empty());
    }

    #[test]
    fn degree_valuation_ball_via_substitution() {
        // the mu0 tree is the u-adic tree after u = 1/t
        let p = 2;
        let mu0 = LocalModel::new(Val1::Mu0, p).unwrap();
        let v = LatticeClass::standard(&mu0, 2);
        let b = ball(&v, 2, &mu0).unwrap();
        assert_eq!(b.layer_sizes, vec![1, 3, 6]);
        // diag(t, 1/t) becomes diag(1/u, u): still a translation of length 2
        let g = g2();
        let d = mat2(&g, ["t", "0", "0", "1 | t"]);
        let dv = act(&d, &v, &mu0).unwrap();
        assert_eq!(distance(&v, &dv, &mu0).unwrap(), 2);
    }

    #[test]
    fn simplex_adjacent_and_far() {
        let m = model_t(2);
        let g = g2();
        let v0 = LatticeClass::standard(&m, 2);
        // O + tO: adjacent
        let v1 = normalize_lattice_class(&mat2(&g, ["1", "0", "0", "t"]), &m).unwrap();
        assert!(simplex_test(&[v0.clone(), v1.clone()], &m).unwrap());
        // O + t^2 O: distance 2
        let v2 = normalize_lattice_class(&mat2(&g, ["1", "0", "0", "t^2"]), &m).unwrap();
        assert!(!simplex_test(&[v0.clone(), v2], &m).unwrap());
        // degenerate
        assert!(simplex_test(&[v0.clone(), v0.clone()], &m).unwrap());
        // simplex_test is blind to input order
        assert!(simplex_test(&[v1, v0], &m).unwrap());
    }

    #[test]
    fn simplex_rejects_mixed_valuations() {
        let m = model_t(2);
        let mu0 = LocalModel::new(Val1::Mu0, 2).unwrap();
        let a = LatticeClass::standard(&m, 2);
        let b = LatticeClass::standard(&mu0, 2);
        assert!(simplex_test(&[a, b], &m).is_err());
    }

    #[test]
    fn classify_elliptic_integral() {
        let m = model_t(2);
        let g = g2();
        let u = mat2(&g, ["1", "1", "0", "1"]);
        let c = classify_isometry(&u, &m, 4).unwrap();
        assert!(matches!(c, IsometryClass::Elliptic { .. }));
    }

    #[test]
    fn classify_hyperbolic_diag() {
        let m = model_t(2);
        let g = g2();
        let d = mat2(&g, ["t", "0", "0", "1 | t"]);
        let c = classify_isometry(&d, &m, 4).unwrap();
        match c {
            IsometryClass::Hyperbolic { translation_length, axis_vertex } => {
                assert_eq!(translation_length, 2);
                let av = act(&d, &axis_vertex, &m).unwrap();
                assert_eq!(distance(&axis_vertex, &av, &m).unwrap(), 2);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn stabilizer_bound_examples() {
        let m = model_t(2);
        let g = g2();
        let id = mat2(&g, ["1", "0", "0", "1"]);
        assert_eq!(stabilizer_entry_bound(&id, &m).unwrap(), 0);
        let h = mat2(&g, ["t", "0", "0", "1"]);
        // floor(h) = 0, floor(h^{-1}) = -1
        assert_eq!(stabilizer_entry_bound(&h, &m).unwrap(), -1);
    }

    #[test]
    fn stabilizer_of_standard_product_point() {
        // SL(2, F_2[t,1/t]) acting on the product of the t-adic and
        // degree-valuation trees: the stabilizer of the standard product
        // point is SL(2, F_2), of order 6
        let group = crate::distortion::fixtures::fixture("sl2f2_laurent").unwrap();
        let ring = crate::valuations::enumerate::laurent_ring(2).unwrap();
        let fam = crate::valuations::build_valuation_family(&ring).unwrap();
        let models = family_models(&fam, 2).unwrap();
        let point = standard_product_point(&models, 2);
        let stab = stabilizer_elements(&group, &point, &ring, &fam, 100_000).unwrap();
        assert_eq!(stab.len(), 6);
        // identity belongs
        assert!(stab.iter().any(|m| m.is_identity()));
        // closed under product and inverse
        for a in &stab {
            assert!(stab.contains(&a.inverse().unwrap()));
            for b in &stab {
                assert!(stab.contains(&a.mul(b)));
            }
        }
        // every member fixes each coordinate and obeys the entry bound
        for m in &stab {
            for (v, model) in point.coords.iter().zip(&models) {
                assert_eq!(&act(m, v, model).unwrap(), v);
                let bound = entry_bound_in_model(&v.rep().inverse().unwrap(), model).unwrap();
                for e in m.entries() {
                    assert!(model.val(&model.to_model(e)).at_least(bound));
                }
            }
        }
    }

    #[test]
    fn product_displacement_examples() {
        let group = crate::distortion::fixtures::fixture("sl2f2_laurent").unwrap();
        let g2 = g2();
        // family {prime(t), prime(t+1)}: diag(t, 1/t) moves the first
        // coordinate by 2 and fixes the second
        let vt = Val1::Prime(g2.parse_poly("t", "t").unwrap());
        let vt1 = Val1::Prime(g2.parse_poly("t+1", "t").unwrap());
        let models = vec![LocalModel::new(vt, 2).unwrap(), LocalModel::new(vt1, 2).unwrap()];
        let point = standard_product_point(&models, 2);
        let d = group.gens()[0].clone();
        let disp = product_displacement(&d, &point, &models).unwrap();
        assert_eq!(disp.squared, 4);
        assert_eq!(disp.to_string(), "2");
        // identity displaces nothing
        let id = group.identity();
        assert!(product_displacement(&id, &point, &models).unwrap().is_zero());
        // over {prime(t), mu0} both coordinates move: sqrt(8)
        let ring = crate::valuations::enumerate::laurent_ring(2).unwrap();
        let fam = crate::valuations::build_valuation_family(&ring).unwrap();
        let models2 = family_models(&fam, 2).unwrap();
        let point2 = standard_product_point(&models2, 2);
        let disp2 = product_displacement(&d, &point2, &models2).unwrap();
        assert_eq!(disp2.squared, 8);
        assert_eq!(disp2.to_string(), "sqrt(8)");
    }

    #[test]
    fn stabilizer_bound_holds_for_conjugated_elliptics() {
        // generate elements fixing the vertex h^{-1}.[standard] by
        // conjugating SL(2, O) elements, and check the entry bound
        let m = model_t(2);
        let g = g2();
        let h = mat2(&g, ["t", "0", "0", "1"]);
        let hinv = h.inverse().unwrap();
        let bound = stabilizer_entry_bound(&h, &m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let elementary = [
            mat2(&g, ["1", "1", "0", "1"]),
            mat2(&g, ["1", "t", "0", "1"]),
            mat2(&g, ["1", "0", "1", "1"]),
            mat2(&g, ["1", "0", "t^2", "1"]),
        ];
        let vertex = normalize_lattice_class(&hinv, &m).unwrap();
        for _ in 0..100 {
            let mut s = Mat::identity(2, h.context());
            for _ in 0..rng.gen_range(1..6) {
                s = s.mul(&elementary[rng.gen_range(0..elementary.len())]);
            }
            let fixer = hinv.mul(&s).mul(&h);
            assert_eq!(act(&fixer, &vertex, &m).unwrap(), vertex);
            for e in fixer.entries() {
                assert!(m.val(e).at_least(bound), "entry bound violated");
            }
        }
    }
}
