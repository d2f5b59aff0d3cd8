mod common;

use common::riesz_oracle;
use orbit_atlas::cotangent::CotangentPoint;
use orbit_atlas::error::Error;
use orbit_atlas::liealg::AlgebraCtx;
use orbit_atlas::mat::{self, cr, CMat, CVec};
use orbit_atlas::repmodel::{self, ExteriorRep, RepElement};
use orbit_atlas::sampling::{self, sample_rng};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .collect::<Vec<_>>()
}

/// rho(X) from central differences of k x k minors of exp(tX).
fn minor_oracle(rep: &ExteriorRep, x: &CMat) -> CMat {
    let h = 1e-5;
    let minors = |g: &CMat| {
        let s = &rep.subsets;
        CMat::from_fn(s.len(), s.len(), |a, b| {
            CMat::from_fn(rep.k, rep.k, |i, j| g[(s[a][i], s[b][j])]).determinant()
        })
    };
    (minors(&mat::expm(&(x * cr(h)))) - minors(&mat::expm(&(x * cr(-h))))) / cr(2.0 * h)
}

fn random_element(rng: &mut orbit_atlas::sampling::SampleRng, d: usize) -> RepElement {
    RepElement {
        v: sampling::gaussian_complex(rng, d, 1).column(0).into_owned(),
        eps: sampling::gaussian_complex(rng, d, 1).column(0).into_owned(),
    }
}

#[test]
fn basis_is_lexicographic() {
    let rep = ExteriorRep::new(4, 2).unwrap();
    let mut want = subsets(4, 2);
    want.sort();
    assert_eq!(rep.subsets, want);
    assert_eq!(rep.dim(), repmodel::binomial(4, 2));
    assert!(ExteriorRep::new(3, 3).is_err());
    assert!(ExteriorRep::new(9, 2).is_err());
}

#[test]
fn algebra_examples() {
    let rep = ExteriorRep::new(3, 2).unwrap();
    let idx = |s: &[usize]| rep.subsets.iter().position(|t| t == s).unwrap();
    let r = rep.algebra(&mat::unit(3, 0, 1));
    let mut e23 = CVec::zeros(3);
    e23[idx(&[1, 2])] = cr(1.0);
    let mut e13 = CVec::zeros(3);
    e13[idx(&[0, 2])] = cr(1.0);
    assert_eq!(&r * &e23, e13);

    let h = mat::diag_real(&[0.5, 0.25, -0.75]);
    let v0 = rep.v0();
    assert!((rep.algebra(&h) * &v0 - &v0 * cr(0.75)).norm() < 1e-15);
    for i in 0..3 {
        for j in i + 1..3 {
            assert!((rep.algebra(&mat::unit(3, i, j)) * &v0).norm() == 0.0);
        }
    }
}

#[test]
fn algebra_matches_minor_oracle() {
    for (n, k) in [(3, 1), (3, 2), (4, 2), (5, 3)] {
        let rep = ExteriorRep::new(n, k).unwrap();
        let mut rng = sample_rng(71, n as u64, k as u64);
        let x = sampling::unit_traceless(&mut rng, n);
        assert!(mat::dist(&rep.algebra(&x), &minor_oracle(&rep, &x)) < 1e-8);
        let a = sampling::anti_hermitian(&mut rng, n);
        let ra = rep.algebra(&a);
        assert!(mat::dist(&ra, &(-ra.adjoint())) < 1e-12);
    }
}

#[test]
fn dual_action_examples() {
    let rep = ExteriorRep::new(4, 2).unwrap();
    let h = mat::diag_real(&[0.4, 0.3, -0.2, -0.5]);
    let e0 = rep.eps0();
    assert!((rep.dual_algebra(&h) * &e0 + &e0 * cr(0.7)).norm() < 1e-15);
    let rep2 = ExteriorRep::new(2, 1).unwrap();
    assert!((rep2.dual_algebra(&mat::unit(2, 1, 0)) * rep2.eps0()).norm() == 0.0);

    let mut rng = sample_rng(73, 0, 0);
    let el = random_element(&mut rng, rep.dim());
    let x = sampling::unit_traceless(&mut rng, 4);
    let lhs = (rep.dual_algebra(&x) * &el.eps).dot(&el.v);
    let rhs = el.eps.dot(&(rep.algebra(&x) * &el.v));
    assert!((lhs + rhs).norm() < 1e-12);
}

#[test]
fn trace_form_index_is_the_ratio() {
    for (n, k) in [(3, 1), (4, 2), (5, 2)] {
        let rep = ExteriorRep::new(n, k).unwrap();
        let mut rng = sample_rng(79, n as u64, k as u64);
        let x = sampling::unit_traceless(&mut rng, n);
        let y = sampling::unit_traceless(&mut rng, n);
        let lhs = (rep.algebra(&x) * rep.algebra(&y)).trace();
        let rhs = (&x * &y).trace() * rep.trace_form_index();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn moment_base_value() {
    let ctx = AlgebraCtx::new(2).unwrap();
    let rep = ExteriorRep::new(2, 1).unwrap();
    let m = repmodel::moment_rep(&ctx, &rep, &rep.base_element());
    // solve B(M, Z) = z_11 directly
    let oracle = riesz_oracle(2, |z| z[(0, 0)]);
    assert!(mat::dist(&oracle, &mat::diag_real(&[0.125, -0.125])) < 1e-15);
    assert!(mat::dist(&m, &oracle) < 1e-12);
    assert!(mat::dist(&m, &ctx.fundamental_h[0]) < 1e-12);
}

#[test]
fn moment_is_complex_linear_riesz() {
    let ctx = AlgebraCtx::new(4).unwrap();
    let rep = ExteriorRep::new(4, 2).unwrap();
    let mut rng = sample_rng(83, 0, 0);
    let el = random_element(&mut rng, rep.dim());
    let m = repmodel::moment_rep(&ctx, &rep, &el);
    let oracle = riesz_oracle(4, |z| repmodel::rep_functional(&rep, &el, z));
    assert!(mat::dist(&m, &oracle) < 1e-10);
    assert!(mat::dist(&m, &repmodel::moment_rep_trace(&ctx, &rep, &el).unwrap()) < 1e-9);
    let zero = RepElement { v: CVec::zeros(6), eps: CVec::zeros(6) };
    assert_eq!(mat::fro(&repmodel::moment_rep(&ctx, &rep, &zero)), 0.0);
}

#[test]
fn moment_equivariance() {
    let ctx = AlgebraCtx::new(3).unwrap();
    let rep = ExteriorRep::new(3, 1).unwrap();
    for i in 0..10 {
        let mut rng = sample_rng(89, 0, i);
        let el = random_element(&mut rng, 3);
        let g = sampling::sample_group_element(&mut rng, 3, 1.0);
        let lhs = repmodel::moment_rep(&ctx, &rep, &rep.act(&g, &el).unwrap());
        let rhs = mat::ad_group(&g, &repmodel::moment_rep(&ctx, &rep, &el)).unwrap();
        assert!(mat::dist(&lhs, &rhs) < 1e-10);
    }
}

#[test]
fn height_examples() {
    let rep = ExteriorRep::new(4, 2).unwrap();
    let h = mat::diag_real(&[0.4, 0.3, -0.2, -0.5]);
    let base = rep.base_element();
    let (a, b) = repmodel::height_rep(&rep, &base, &h);
    assert!((a - cr(0.7)).norm() < 1e-15 && (b - cr(0.7)).norm() < 1e-15);
    let scaled = RepElement { v: &base.v * cr(3.0), eps: &base.eps / cr(3.0) };
    let (a2, b2) = repmodel::height_rep(&rep, &scaled, &h);
    assert!((a2 - a).norm() < 1e-15 && (b2 - b).norm() < 1e-15);
}

#[test]
fn phi_examples() {
    let rep = ExteriorRep::new(3, 1).unwrap();
    let base = rep.base_element();
    let (v, e) = repmodel::phi(&base).unwrap();
    assert_eq!((v.clone(), e.clone()), (rep.v0(), rep.eps0()));
    let scaled = RepElement { v: &base.v * cr(2.0), eps: &base.eps * cr(0.5) };
    let (v2, e2) = repmodel::phi(&scaled).unwrap();
    assert!((v2 - &v).norm() < 1e-15 && (e2 - &e).norm() < 1e-15);
    let back = repmodel::phi_inv(&(v, e)).unwrap();
    assert!((back.pairing() - cr(1.0)).norm() < 1e-15);

    let mut w = CVec::zeros(3);
    w[1] = cr(1.0);
    assert!(matches!(repmodel::phi_inv(&(rep.v0(), w)), Err(Error::NotTransversal)));
}

#[test]
fn rep_to_cotangent_examples() {
    let ctx = AlgebraCtx::new(3).unwrap();
    let ch = repmodel::mu_characteristic(&ctx, 1).unwrap();
    let xi = repmodel::rep_to_cotangent(&ch, &mat::eye(3)).unwrap();
    assert!(xi.dist(&CotangentPoint::origin(&ch)) < 1e-12);
    let mut rng = sample_rng(97, 0, 0);
    let u = sampling::sample_unitary(&mut rng, 3);
    let xi = repmodel::rep_to_cotangent(&ch, &u).unwrap();
    assert!(mat::fro(&xi.w) < 1e-12);
    assert!(mat::dist(&xi.base, &mat::conj_by(&u, ch.h0_ref())) < 1e-12);
    assert!(repmodel::mu_characteristic(&ctx, 3).is_err());
}
