mod common;

use proptest::prelude::*;

use common::{ad_trace_gl, characteristic, CONFIGS};
use orbit_atlas::cotangent;
use orbit_atlas::flagprod;
use orbit_atlas::lagrangian::{self, GraphSpec};
use orbit_atlas::liealg::{self, AlgebraCtx};
use orbit_atlas::mat::{self, c, cr, CMat};
use orbit_atlas::orbit;
use orbit_atlas::repmodel::{self, ExteriorRep};
use orbit_atlas::sampling::{self, sample_rng, SampleRng};
use orbit_atlas::weylgrp::{self, ThetaSet, WeylElement};

fn rng(seed: u64) -> SampleRng {
    sample_rng(seed, 0, 0)
}

fn traceless(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(-2.0f64..2.0, 2 * n * n).prop_map(move |v| {
        let mut m = CMat::from_fn(n, n, |i, j| c(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
        sampling::remove_trace(&mut m);
        m
    })
}

fn config() -> impl Strategy<Value = usize> {
    0..CONFIGS.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn killing_is_symmetric_invariant_and_matches_ad((x, y) in (2usize..=4).prop_flat_map(|n| (traceless(n), traceless(n))), seed: u64) {
        let n = x.nrows();
        let ctx = AlgebraCtx::new(n).unwrap();
        let b = ctx.b(&x, &y);
        let t = ad_trace_gl(&x, &y);
        prop_assert!((b - t).norm() <= 1e-9 * t.norm().max(1.0));
        prop_assert!((b - ctx.b(&y, &x)).norm() <= 1e-12 * b.norm().max(1.0));
        let g = sampling::sample_group_element(&mut rng(seed), n, 1.0);
        let gx = mat::ad_group(&g, &x).unwrap();
        let gy = mat::ad_group(&g, &y).unwrap();
        prop_assert!((ctx.b(&gx, &gy) - b).norm() <= 1e-9 * (mat::fro(&gx) * mat::fro(&gy)).max(1.0));
    }

    #[test]
    fn root_spaces_are_orthogonal(n in 2usize..=4, a in 0usize..16, b in 0usize..16) {
        let ctx = AlgebraCtx::new(n).unwrap();
        let (i, j, k, l) = (a / 4 % n, a % 4 % n, b / 4 % n, b % 4 % n);
        prop_assume!(i != j && k != l);
        let v = ctx.b(&mat::unit(n, i, j), &mat::unit(n, k, l));
        if (k, l) == (j, i) {
            prop_assert!((v - cr(2.0 * n as f64)).norm() < 1e-14);
        } else {
            prop_assert_eq!(v, cr(0.0));
        }
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots(n in 2usize..=8) {
        let ctx = AlgebraCtx::new(n).unwrap();
        for (s, &root) in ctx.simple_roots.iter().enumerate() {
            let ha = ctx.h_alpha(root);
            for k in 1..n {
                let v = 2.0 * ctx.re_b(&ha, &ctx.fundamental_h[k - 1]) / ctx.re_b(&ha, &ha);
                let want = if s + 1 == k { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn iwasawa_factors(n in 2usize..=5, seed: u64) {
        let g = sampling::sample_group_element(&mut rng(seed), n, 2.0);
        let f = liealg::iwasawa(&g).unwrap();
        prop_assert!(mat::dist(&(&f.k * &f.a * &f.n_part), &g) <= 1e-10 * mat::fro(&g));
        prop_assert!(mat::dist(&(f.k.adjoint() * &f.k), &mat::eye(n)) < 1e-12);
        for i in 0..n {
            prop_assert!(f.a[(i, i)].re > 0.0);
            prop_assert!((f.n_part[(i, i)] - cr(1.0)).norm() < 1e-12);
            for j in 0..i {
                prop_assert!(f.n_part[(i, j)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_theta_is_an_involution(n in 3usize..=8, bits in 0u32..128) {
        let theta = ThetaSet::new(n, (1..n).filter(|k| bits >> (k - 1) & 1 == 1)).unwrap();
        let d = weylgrp::dual_theta(&theta, n);
        prop_assert_eq!(d.indices.len(), theta.indices.len());
        prop_assert_eq!(weylgrp::dual_theta(&d, n), theta);
    }

    #[test]
    fn right_action_commutes_with_k(n in 2usize..=4, seed: u64, pick in 0usize..24) {
        let ch = characteristic(n, &[]);
        let mut r = rng(seed);
        let p = sampling::sample_orbit_point(&ch, &mut r, 1.0).unwrap();
        let all = WeylElement::all(n);
        let w = &all[pick % all.len()];
        let e = mat::expm(&sampling::anti_hermitian(&mut r, n));
        let lhs = weylgrp::right_action(&ch, &mat::conj_by(&e, &p.y), w).unwrap();
        let rhs = mat::conj_by(&e, &weylgrp::right_action(&ch, &p.y, w).unwrap());
        prop_assert!(mat::dist(&lhs, &rhs) <= 1e-9 * mat::fro(&p.y));
    }

    #[test]
    fn right_action_ignores_frame_phases(n in 2usize..=4, seed: u64, pick in 0usize..24) {
        let ch = characteristic(n, &[]);
        let mut r = rng(seed);
        let p = sampling::sample_orbit_point(&ch, &mut r, 1.0).unwrap();
        let all = WeylElement::all(n);
        let w = &all[pick % all.len()];
        let m = sampling::sample_torus(&mut r, n);
        // k m with X conjugated by m* factorizes the same Y
        let k2 = &p.k * &m;
        let x2 = m.adjoint() * &p.x * &m;
        let a = weylgrp::right_action_from_frame(&ch, &p.k, &p.x, w).unwrap();
        let b = weylgrp::right_action_from_frame(&ch, &k2, &x2, w).unwrap();
        prop_assert!(mat::dist(&a, &b) <= 1e-9 * mat::fro(&p.y));
    }

    #[test]
    fn fibre_is_affine(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let nplus = orbit::plus_part(&ch, &sampling::gaussian_complex(&mut rng(seed), n, n));
        let d = mat::ad_group(&mat::expm(&nplus), ch.h0_ref()).unwrap() - ch.h0_mat();
        prop_assert!(mat::dist(&orbit::plus_part(&ch, &d), &d) <= 1e-9 * mat::fro(&d).max(1.0));
    }

    #[test]
    fn factorize_recomposes(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let p = sampling::sample_orbit_point(&ch, &mut rng(seed), 2.0).unwrap();
        prop_assert!(mat::dist(&p.recompose(&ch), &p.y) <= 1e-9 * mat::fro(&p.y));
    }

    #[test]
    fn projection_is_k_equivariant(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let mut r = rng(seed);
        let p = sampling::sample_orbit_point(&ch, &mut r, 2.0).unwrap();
        let u = sampling::sample_unitary(&mut r, n);
        let lhs = orbit::project_pi(&ch, &mat::conj_by(&u, &p.y)).unwrap();
        let rhs = mat::conj_by(&u, &orbit::project_pi(&ch, &p.y).unwrap());
        prop_assert!(mat::dist(&lhs, &rhs) < 1e-9);
    }

    #[test]
    fn iota_and_mu_are_inverse(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ctx = AlgebraCtx::new(n).unwrap();
        let ch = characteristic(n, theta);
        let p = sampling::sample_orbit_point(&ch, &mut rng(seed), 2.0).unwrap();
        let xi = cotangent::iota(&ch, &p);
        prop_assert!(mat::dist(&cotangent::mu(&ctx, &ch, &xi), &p.y) <= 1e-8);
        let back = cotangent::iota_raw(&ch, &cotangent::mu_closed(&xi)).unwrap();
        prop_assert!(back.dist(&xi) <= 1e-9 * mat::fro(&p.y));
    }

    #[test]
    fn embedded_pairs_are_transversal(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let g = sampling::sample_group_element(&mut rng(seed), n, 2.0);
        prop_assert!(flagprod::transversal(&flagprod::embed(&ch, &g).unwrap()));
    }

    #[test]
    fn sl2_pair_dictionary_roundtrips(seed: u64) {
        let ch = characteristic(2, &[]);
        let g = sampling::gaussian_complex(&mut rng(seed), 2, 2);
        let (xi, eta) = ((g[(0, 0)], g[(1, 0)]), (g[(0, 1)], g[(1, 1)]));
        prop_assume!(g.determinant().norm() > 1e-3 * mat::fro(&g).powi(2));
        let m = flagprod::pair_to_matrix_sl2(xi, eta).unwrap();
        let p = flagprod::orbit_to_pair(&ch, &m).unwrap();
        prop_assert!(flagprod::line_distance(flagprod::line_of(&p.first), xi) < 1e-9);
        prop_assert!(flagprod::line_distance(flagprod::line_of(&p.second), eta) < 1e-9);
    }

    #[test]
    fn rep_orbit_lands_in_h_mu_orbit(pick in 0usize..3, seed: u64) {
        let (n, k) = [(2, 1), (3, 1), (4, 2)][pick];
        let ctx = AlgebraCtx::new(n).unwrap();
        let rep = ExteriorRep::new(n, k).unwrap();
        let g = sampling::sample_group_element(&mut rng(seed), n, 1.0);
        let el = rep.act(&g, &rep.base_element()).unwrap();
        let m = repmodel::moment_rep(&ctx, &rep, &el);
        let h = &ctx.fundamental_h[k - 1];
        // same spectrum: power traces agree
        let (mut a, mut b) = (mat::eye(n), mat::eye(n));
        for _ in 0..n {
            a *= &m;
            b *= h;
            prop_assert!((a.trace() - b.trace()).norm() <= 1e-7 * h.norm().powi(2).max(1e-3));
        }
        // rank one with transversal kernel and image
        let e = el.endomorphism();
        let sv = e.clone().svd(false, false).singular_values;
        prop_assert!(sv.iter().skip(1).all(|s| *s <= 1e-10 * sv[0]));
        prop_assert!((el.pairing() - cr(1.0)).norm() < 1e-9);
    }

    #[test]
    fn rep_isotropy_contains_centralizer(pick in 0usize..3, seed: u64) {
        let (n, k) = [(2, 1), (3, 1), (4, 2)][pick];
        let rep = ExteriorRep::new(n, k).unwrap();
        let ch = repmodel::mu_characteristic(&AlgebraCtx::new(n).unwrap(), k).unwrap();
        let z = {
            let (_, z, _) = orbit::parabolic_split(&ch, &sampling::unit_traceless(&mut rng(seed), n));
            let mut z = z;
            sampling::remove_trace(&mut z);
            z
        };
        let base = rep.base_element();
        let dv = rep.algebra(&z) * &base.v;
        let de = rep.dual_algebra(&z) * &base.eps;
        let d = &dv * base.eps.transpose() + &base.v * de.transpose();
        prop_assert!(d.norm() < 1e-10);
    }

    #[test]
    fn graphs_have_half_dimension(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let mut r = rng(seed);
        let spec = GraphSpec::random(&mut r, n);
        let (x, _) = sampling::sample_flag_point(&ch, &mut r);
        prop_assert_eq!(lagrangian::graph_tangent_rank(&ch, &spec, &x).unwrap(), 2 * ch.dim_n_plus());
        prop_assert!(lagrangian::lagrangian_residual(&ch, &spec, 2, seed).unwrap() <= 1e-8);
    }

    #[test]
    fn r_w0_is_k_equivariant(i in config(), seed: u64) {
        let (n, theta) = CONFIGS[i];
        let ch = characteristic(n, theta);
        let mut r = rng(seed);
        let (x, _) = sampling::sample_flag_point(&ch, &mut r);
        let u = sampling::sample_unitary(&mut r, n);
        let lhs = lagrangian::r_w0_map(&ch, &mat::conj_by(&u, &x)).unwrap();
        let rhs = mat::conj_by(&u, &lagrangian::r_w0_map(&ch, &x).unwrap());
        prop_assert!(mat::dist(&lhs, &rhs) < 1e-9);
    }
}
