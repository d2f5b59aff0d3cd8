mod common;

use common::characteristic;
use orbit_atlas::cotangent::{self, CotangentPoint};
use orbit_atlas::error::Error;
use orbit_atlas::liealg::AlgebraCtx;
use orbit_atlas::mat::{self, cr, CMat};
use orbit_atlas::orbit::{self, Characteristic};
use orbit_atlas::sampling::{self, sample_rng};

fn m2(a: f64, b: f64, c: f64, d: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[cr(a), cr(b), cr(c), cr(d)])
}

#[test]
fn canonical_characteristics() {
    assert_eq!(characteristic(2, &[]).h0, vec![1.0, -1.0]);
    assert_eq!(characteristic(3, &[1]).h0, vec![1.0, 1.0, -2.0]);
    assert_eq!(characteristic(3, &[2]).h0, vec![2.0, -1.0, -1.0]);
    let ch = characteristic(4, &[1]);
    assert_eq!(ch.block_sizes, vec![2, 1, 1]);
    assert_eq!(ch.dim_n_plus(), 5);
    assert_eq!(ch.dual().h0, characteristic(4, &[3]).h0);
    assert!(Characteristic::from_diagonal(&[0.0, 0.0]).is_err());
}

#[test]
fn parabolic_split_examples() {
    let ch = characteristic(2, &[]);
    let e12 = mat::unit(2, 0, 1);
    let (m, z, p) = orbit::parabolic_split(&ch, &e12);
    assert_eq!((m, z, p), (mat::zeros(2), mat::zeros(2), e12));
    let h = ch.h0_mat();
    let (m, z, p) = orbit::parabolic_split(&ch, &h);
    assert_eq!((m, z, p), (mat::zeros(2), h, mat::zeros(2)));

    let ch = characteristic(3, &[1]);
    let e12 = mat::unit(3, 0, 1);
    assert_eq!(mat::comm(ch.h0_ref(), &e12), mat::zeros(3));
    let (m, z, p) = orbit::parabolic_split(&ch, &e12);
    assert_eq!((m, z, p), (mat::zeros(3), e12, mat::zeros(3)));
}

#[test]
fn factorize_examples() {
    let ch = characteristic(2, &[]);
    let p = orbit::factorize(&ch, &ch.h0_mat()).unwrap();
    assert!(mat::dist(&p.k, &mat::eye(2)) < 1e-12);
    assert!(mat::fro(&p.x) < 1e-12);

    let p = orbit::factorize(&ch, &m2(1.0, 1.0, 0.0, -1.0)).unwrap();
    assert!(mat::dist(&p.k, &mat::eye(2)) < 1e-12);
    assert!(mat::dist(&p.x, &mat::unit(2, 0, 1)) < 1e-12);

    // eigen oracle: +1 eigenvector of [[0,1],[1,0]] is (1,1)/sqrt 2
    let y = m2(0.0, 1.0, 1.0, 0.0);
    let p = orbit::factorize(&ch, &y).unwrap();
    let s = 0.5f64.sqrt();
    let want = m2(s, -s, s, s);
    // k is determined up to a diagonal phase on the right
    let phase = p.k.adjoint() * &want;
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((phase[(i, j)].norm() - expect).abs() < 1e-12);
        }
    }
    assert!(mat::fro(&p.x) < 1e-12);
    assert!(mat::dist(&p.recompose(&ch), &y) < 1e-12);
}

#[test]
fn factorize_recomposes_random_points() {
    for (n, theta) in common::CONFIGS {
        let ch = characteristic(n, theta);
        for i in 0..10 {
            let mut rng = sample_rng(17, n as u64, i);
            let y = sampling::sample_orbit_point(&ch, &mut rng, 2.0).unwrap().y;
            let p = orbit::factorize(&ch, &y).unwrap();
            assert!(mat::dist(&p.recompose(&ch), &y) < 1e-9 * mat::fro(&y));
            assert!(mat::dist(&(p.k.adjoint() * &p.k), &mat::eye(n)) < 1e-12);
            assert!((p.k.determinant() - cr(1.0)).norm() < 1e-12);
            assert!(mat::dist(&orbit::plus_part(&ch, &p.x), &p.x) == 0.0);
        }
    }
}

#[test]
fn factorize_errors() {
    let ch = characteristic(2, &[]);
    assert!(matches!(orbit::factorize(&ch, &m2(2.0, 0.0, 0.0, -2.0)), Err(Error::NotOnOrbit(_))));
    assert!(matches!(orbit::factorize(&ch, &m2(1.0, 0.0, 0.0, 1.0)), Err(Error::NotOnOrbit(_))));
    // single eigenvalue 1 with multiplicity 2 among a repeated-block flag: a Jordan block
    let ch = characteristic(3, &[1]);
    let y = CMat::from_row_slice(3, 3, &[
        cr(1.0), cr(0.0), cr(0.0),
        cr(0.0), cr(1.0), cr(0.0),
        cr(0.0), cr(0.0), cr(-2.0),
    ]) + mat::unit(3, 0, 1);
    assert!(matches!(orbit::factorize(&ch, &y), Err(Error::Defective(_))));
    assert!(orbit::factorize(&ch, &mat::eye(2)).is_err());
}

#[test]
fn project_pi_examples() {
    let ch = characteristic(2, &[]);
    let y = ch.h0_mat() + mat::unit(2, 0, 1);
    assert!(mat::dist(&orbit::project_pi(&ch, &y).unwrap(), &ch.h0_mat()) < 1e-12);
    let y = m2(0.0, 1.0, 1.0, 0.0);
    assert!(mat::dist(&orbit::project_pi(&ch, &y).unwrap(), &y) < 1e-12);
}

#[test]
fn kks_examples() {
    let ctx = AlgebraCtx::new(2).unwrap();
    let ch = characteristic(2, &[]);
    let h = ch.h0_mat();
    let (e12, e21) = (mat::unit(2, 0, 1), mat::unit(2, 1, 0));
    assert_eq!(orbit::kks_form(&ctx, &h, &e12, &e12), 0.0);
    let w = orbit::kks_form(&ctx, &h, &e21, &e12);
    assert!((w.abs() - 8.0).abs() < 1e-12);
    // the sign is fixed by the finite-difference canonical form on the cotangent model
    let v1 = cotangent::d_iota(&ch, &h, &e21, cotangent::FD_H).unwrap();
    let v2 = cotangent::d_iota(&ch, &h, &e12, cotangent::FD_H).unwrap();
    let om = cotangent::canonical_two_form(&ctx, &ch, &CotangentPoint::origin(&ch), &v1, &v2);
    assert!((om - w).abs() < 1e-6, "{om} vs {w}");
    assert_eq!(ctx.kks_sign, 1.0);
    assert_eq!(cotangent::calibrated_sign(), 1.0);
}
