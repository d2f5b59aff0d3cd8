#![allow(dead_code)]

use orbit_atlas::mat::{self, cr, CMat, C64};
use orbit_atlas::orbit::Characteristic;
use orbit_atlas::weylgrp::ThetaSet;

/// (n, Theta) pairs used across the acceptance and property tests.
pub const CONFIGS: [(usize, &[usize]); 5] = [(2, &[]), (3, &[]), (3, &[1]), (4, &[]), (4, &[1])];

pub fn characteristic(n: usize, theta: &[usize]) -> Characteristic {
    Characteristic::canonical(n, &ThetaSet::new(n, theta.iter().cloned()).unwrap()).unwrap()
}

/// tr(ad X ad Y) over the standard basis of gl(n); the centre contributes nothing.
pub fn ad_trace_gl(x: &CMat, y: &CMat) -> C64 {
    let n = x.nrows();
    let mut t = cr(0.0);
    for a in 0..n {
        for b in 0..n {
            let e = mat::unit(n, a, b);
            let inner = y * &e - &e * y;
            let outer = x * &inner - &inner * x;
            t += outer[(a, b)];
        }
    }
    t
}

/// Traceless M with 2n tr(M Z) = f(Z) for traceless Z, from f on projected units.
pub fn riesz_oracle<F: Fn(&CMat) -> C64>(n: usize, f: F) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut e = mat::unit(n, i, j);
            if i == j {
                for d in 0..n {
                    e[(d, d)] -= cr(1.0 / n as f64);
                }
            }
            m[(j, i)] = f(&e) / (2.0 * n as f64);
        }
    }
    m
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    mat::dist(m, &m.adjoint()) <= tol
}
