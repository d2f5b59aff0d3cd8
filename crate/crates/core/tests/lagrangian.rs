mod common;

use common::characteristic;
use orbit_atlas::lagrangian::{self, GraphSpec};
use orbit_atlas::liealg::weyl_basis_vectors;
use orbit_atlas::mat::{self, c, cr, CMat, C64};
use orbit_atlas::repmodel::ExteriorRep;
use orbit_atlas::sampling::{self, sample_rng};
use orbit_atlas::weylgrp;

fn sl2_fields(x: &CMat) -> (CMat, CMat) {
    let (a, z) = weyl_basis_vectors(2, 0, 1).unwrap();
    (lagrangian::induced(&a, x), lagrangian::induced(&z, x))
}

#[test]
fn metric_at_origin() {
    let ch = characteristic(2, &[]);
    let h = ch.h0_mat();
    let (a, z) = sl2_fields(&h);
    assert!((lagrangian::borel_metric(&ch, &h, &a, &a).unwrap() - 2.0).abs() < 1e-14);
    assert!((lagrangian::borel_metric(&ch, &h, &z, &z).unwrap() - 2.0).abs() < 1e-14);
    assert!(lagrangian::borel_metric(&ch, &h, &a, &z).unwrap().abs() < 1e-14);
    assert!(lagrangian::borel_metric(&ch, &h, &h, &h).is_err());
}

#[test]
fn metric_is_k_invariant() {
    let ch = characteristic(3, &[]);
    for i in 0..10 {
        let mut rng = sample_rng(101, 0, i);
        let (x, _) = sampling::sample_flag_point(&ch, &mut rng);
        let u = sampling::sample_unitary(&mut rng, 3);
        let a = sampling::anti_hermitian(&mut rng, 3);
        let b = sampling::anti_hermitian(&mut rng, 3);
        let (v, w) = (lagrangian::induced(&a, &x), lagrangian::induced(&b, &x));
        let ux = mat::conj_by(&u, &x);
        let (uv, uw) = (mat::conj_by(&u, &v), mat::conj_by(&u, &w));
        let g0 = lagrangian::borel_metric(&ch, &x, &v, &w).unwrap();
        let g1 = lagrangian::borel_metric(&ch, &ux, &uv, &uw).unwrap();
        assert!((g0 - g1).abs() < 1e-10);
    }
}

#[test]
fn complex_structure_examples() {
    let ch = characteristic(2, &[]);
    let h = ch.h0_mat();
    let (a, z) = sl2_fields(&h);
    assert!(mat::dist(&lagrangian::complex_structure(&ch, &h, &a).unwrap(), &z) < 1e-14);

    // at w~ H0 the root E12 is negative on the point, so J flips sign
    let w = weylgrp::representative(&weylgrp::principal_involution(2));
    let x = mat::conj_by(&w, &h);
    let (a, z) = sl2_fields(&x);
    assert!(mat::dist(&lagrangian::complex_structure(&ch, &x, &a).unwrap(), &(-z)) < 1e-14);
}

#[test]
fn j_squares_to_minus_one() {
    let ch = characteristic(4, &[1]);
    let mut rng = sample_rng(103, 0, 0);
    let (x, _) = sampling::sample_flag_point(&ch, &mut rng);
    for a in lagrangian::compact_basis(4) {
        let v = lagrangian::induced(&a, &x);
        let jv = lagrangian::complex_structure(&ch, &x, &v).unwrap();
        let jjv = lagrangian::complex_structure(&ch, &x, &jv).unwrap();
        assert!(mat::dist(&jjv, &(-v)) < 1e-10);
    }
}

#[test]
fn kaehler_examples() {
    let ch = characteristic(2, &[]);
    let h = ch.h0_mat();
    let (a, z) = sl2_fields(&h);
    let om = lagrangian::kaehler_form(&ch, &h, &a, &z).unwrap();
    assert!((om.abs() - 2.0).abs() < 1e-14);
    assert!(lagrangian::kaehler_form(&ch, &h, &a, &a).unwrap().abs() < 1e-14);

    let ch = characteristic(3, &[]);
    let mut rng = sample_rng(107, 0, 0);
    let (x, _) = sampling::sample_flag_point(&ch, &mut rng);
    let b: Vec<CMat> = (0..3).map(|_| sampling::anti_hermitian(&mut rng, 3)).collect();
    let v = lagrangian::induced(&b[0], &x);
    let w = lagrangian::induced(&b[1], &x);
    let o1 = lagrangian::kaehler_form(&ch, &x, &v, &w).unwrap();
    let o2 = lagrangian::kaehler_form(&ch, &x, &w, &v).unwrap();
    assert!((o1 + o2).abs() < 1e-10);
    assert!(lagrangian::kaehler_closedness(&ch, &x, [&b[0], &b[1], &b[2]], 1e-4).unwrap() <= 1e-3);
}

#[test]
fn r_w0_examples() {
    let ch = characteristic(3, &[1]);
    let r = lagrangian::r_w0_map(&ch, &ch.h0_mat()).unwrap();
    assert!(mat::dist(&r, &(-ch.h0_mat())) < 1e-14);

    // n = 2: Pauli coordinates of the point are negated, i.e. the antipodal map
    let ch = characteristic(2, &[]);
    let pauli = [
        CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
        CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]),
        mat::diag_real(&[1.0, -1.0]),
    ];
    let coords = |m: &CMat| -> Vec<f64> { pauli.iter().map(|p| (m * p).trace().re / 2.0).collect() };
    for i in 0..5 {
        let mut rng = sample_rng(109, 0, i);
        let (x, _) = sampling::sample_flag_point(&ch, &mut rng);
        let (p, q) = (coords(&x), coords(&lagrangian::r_w0_map(&ch, &x).unwrap()));
        assert!((p.iter().map(|t| t * t).sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..3 {
            assert!((p[k] + q[k]).abs() < 1e-12);
        }
        let u = sampling::sample_unitary(&mut rng, 2);
        let lhs = lagrangian::r_w0_map(&ch, &mat::conj_by(&u, &x)).unwrap();
        let rhs = mat::conj_by(&u, &lagrangian::r_w0_map(&ch, &x).unwrap());
        assert!(mat::dist(&lhs, &rhs) < 1e-12);
    }
}

#[test]
fn r_w0_certificates() {
    for theta in [&[][..], &[1][..]] {
        let ch = characteristic(3, theta);
        assert!(lagrangian::antiholomorphy_residual(&ch, 10, 1).unwrap() <= 1e-9);
        assert!(lagrangian::isometry_residual(&ch, 10, 1).unwrap() <= 1e-8);
        assert!(lagrangian::antisymplectic_residual(&ch, 10, 1).unwrap() <= 1e-8);
        assert!(lagrangian::antiholomorphy_residual_signed(&ch, 3, 1, -1.0).unwrap() >= 0.1);
        assert!(lagrangian::isometry_residual_scaled(&ch, 3, 1, 2.0).unwrap() >= 0.1);
    }
    // metric weights at the origin and its image agree root by root
    let ch = characteristic(3, &[]);
    let h = ch.h0_mat();
    let chs = ch.dual();
    for a in lagrangian::compact_basis(3) {
        let v = lagrangian::induced(&a, &h);
        let pv = lagrangian::d_r_w0(&ch, &h, &v).unwrap();
        let g = lagrangian::borel_metric(&ch, &h, &v, &v).unwrap();
        let gs = lagrangian::borel_metric(&chs, &(-&h), &pv, &pv).unwrap();
        assert!((g - gs).abs() < 1e-12);
    }
}

#[test]
fn graph_tangents() {
    let ch = characteristic(3, &[]);
    let h = ch.h0_mat();
    let plain = GraphSpec::plain(3);
    let pairs = lagrangian::graph_tangent_basis(&ch, &plain, &h).unwrap();
    assert_eq!(pairs.len(), 2 * ch.dim_n_plus());
    for (v, w) in &pairs {
        assert!(mat::dist(w, &(-v)) < 1e-14);
    }

    let mut rng = sample_rng(113, 0, 0);
    let spec = GraphSpec::random(&mut rng, 3);
    let (x, _) = sampling::sample_flag_point(&ch, &mut rng);
    assert_eq!(lagrangian::graph_tangent_rank(&ch, &spec, &x).unwrap(), 2 * ch.dim_n_plus());
    let a = sampling::anti_hermitian(&mut rng, 3);
    let s = 1e-5;
    let moved = |t: f64| mat::ad_group(&mat::expm(&(&a * cr(t))), &x).unwrap();
    let fd = (lagrangian::graph_map(&ch, &spec, &moved(s)).unwrap()
        - lagrangian::graph_map(&ch, &spec, &moved(-s)).unwrap())
        / cr(2.0 * s);
    let y = lagrangian::graph_map(&ch, &spec, &x).unwrap();
    let want = lagrangian::induced(&mat::conj_by(&spec.k_eff(), &a), &y);
    assert!(mat::dist(&fd, &want) <= 1e-5);
}

#[test]
fn lagrangian_residual_examples() {
    for theta in [&[][..], &[1][..]] {
        let ch = characteristic(3, theta);
        assert!(lagrangian::lagrangian_residual(&ch, &GraphSpec::plain(3), 50, 3).unwrap() <= 1e-8);
        let mut rng = sample_rng(127, 0, 0);
        let spec = GraphSpec::random(&mut rng, 3);
        assert!(lagrangian::lagrangian_residual(&ch, &spec, 10, 3).unwrap() <= 1e-8);
        let torus = GraphSpec::torus(sampling::sample_torus(&mut rng, 3));
        assert!(lagrangian::lagrangian_residual(&ch, &torus, 10, 3).unwrap() <= 1e-8);
    }
    let ch = characteristic(2, &[]);
    assert!(lagrangian::lagrangian_residual(&ch, &GraphSpec::plain(2), 50, 3).unwrap() <= 1e-8);
    assert!(lagrangian::identity_graph_residual(&ch, 5, 3).unwrap() >= 0.1);
    assert!(lagrangian::identity_graph_residual(&characteristic(3, &[1]), 5, 3).is_err());
    assert!(lagrangian::graph_orbit_deviation(&ch, 10, 3).unwrap() < 1e-10);
}

#[test]
fn membership_examples() {
    let rep = ExteriorRep::new(2, 1).unwrap();
    let base = rep.base_element();
    assert!(lagrangian::graph_rep_membership(&rep, &base, None));
    let mut rng = sample_rng(131, 0, 0);
    let u = sampling::sample_unitary(&mut rng, 2);
    assert!(lagrangian::graph_rep_membership(&rep, &rep.act(&u, &base).unwrap(), None));
    let e = mat::expm(&mat::unit(2, 0, 1));
    assert!(!lagrangian::graph_rep_membership(&rep, &rep.act(&e, &base).unwrap(), None));

    // torus twist: eps moved by m is recognised only when m is supplied
    let rep = ExteriorRep::new(4, 2).unwrap();
    let m = sampling::sample_torus(&mut rng, 4);
    let el = rep.act(&sampling::sample_unitary(&mut rng, 4), &rep.base_element()).unwrap();
    let twisted = orbit_atlas::repmodel::RepElement {
        v: el.v.clone(),
        eps: rep.dual_group(&m).unwrap() * &el.eps,
    };
    assert!(lagrangian::graph_rep_membership(&rep, &twisted, Some(&m)));
    assert!(!lagrangian::graph_rep_membership(&rep, &twisted, None));
}

#[test]
fn sl2_fixed_lines() {
    let i = c(0.0, 1.0);
    let found = lagrangian::fixed_lines_grid(lagrangian::sl2_r);
    assert_eq!(found.len(), 2);
    let targets: [(C64, C64); 2] = [(cr(1.0), i), (cr(1.0), -i)];
    for t in targets {
        assert!(found.iter().any(|f| orbit_atlas::flagprod::line_distance(*f, t) < 1e-10));
    }
    for t in [(cr(1.0), cr(1.0)), (cr(1.0), cr(-1.0))] {
        assert!(orbit_atlas::flagprod::line_distance(lagrangian::sl2_m_rw(t), t) < 1e-15);
    }
    // m R_w is anti-holomorphic: its fixed set is a circle, not isolated lines
    let z = c(0.6, 0.8);
    assert!(orbit_atlas::flagprod::line_distance(lagrangian::sl2_m_rw((cr(1.0), z)), (cr(1.0), z)) < 1e-15);
}
