//! Pairs of flags in F_Theta x F_Theta*: the open orbit through the origin
//! pair, transversality, and the SL(2) matrix dictionary.

use crate::error::{contract, Error, Result};
use crate::cotangent::induced_flag;
use crate::lagrangian;
use crate::liealg::AlgebraCtx;
use crate::mat::{self, cr, CMat, C64, RMat};
use crate::orbit::{self, parabolic_split, Characteristic};
use crate::weylgrp::{self, WeylElement};

/// Nested subspaces spanned by the leading columns of a unitary frame.
#[derive(Debug, Clone)]
pub struct NestedFlag {
    pub frame: CMat,
    /// Strictly increasing dimensions, each < n.
    pub dims: Vec<usize>,
}

impl NestedFlag {
    pub fn new(frame: CMat, dims: Vec<usize>) -> Result<Self> {
        let n = frame.nrows();
        if frame.ncols() != n {
            return Err(contract("flag frame must be square"));
        }
        if mat::dist(&(frame.adjoint() * &frame), &mat::eye(n)) > 1e-10 {
            return Err(contract("flag frame not orthonormal"));
        }
        if dims.windows(2).any(|w| w[0] >= w[1]) || dims.iter().any(|&d| d == 0 || d >= n) {
            return Err(contract(format!("bad flag dimensions {dims:?}")));
        }
        Ok(NestedFlag { frame, dims })
    }

    pub fn n(&self) -> usize {
        self.frame.nrows()
    }

    pub fn subspace(&self, j: usize) -> CMat {
        self.frame.columns(0, self.dims[j]).into_owned()
    }

    pub fn projector(&self, j: usize) -> CMat {
        let v = self.subspace(j);
        &v * v.adjoint()
    }

    /// Largest projector distance to another flag of the same type.
    pub fn distance(&self, other: &Self) -> f64 {
        (0..self.dims.len())
            .map(|j| mat::dist(&self.projector(j), &other.projector(j)))
            .fold(0.0, f64::max)
    }

    /// Hermitian model Ad(frame) H0.
    pub fn hermitian(&self, ch: &Characteristic) -> CMat {
        mat::herm(&mat::conj_by(&self.frame, ch.h0_ref()))
    }
}

#[derive(Debug, Clone)]
pub struct FlagPair {
    pub first: NestedFlag,
    pub second: NestedFlag,
}

fn reversal(n: usize) -> CMat {
    let mut r = mat::zeros(n);
    for i in 0..n {
        r[(n - 1 - i, i)] = cr(1.0);
    }
    r
}

fn frame_of_span(g: &CMat) -> CMat {
    mat::qr_positive(g).0
}

/// (g . x0, g . w0~ y0): standard and reversed coordinate flags moved by g.
pub fn embed(ch: &Characteristic, g: &CMat) -> Result<FlagPair> {
    mat::check_square(g, ch.n, "embed")?;
    if g.determinant().norm() < 1e-300 {
        return Err(Error::NotInSl("singular g".into()));
    }
    let first = NestedFlag::new(frame_of_span(g), ch.flag_dims())?;
    let second = NestedFlag::new(frame_of_span(&(g * reversal(ch.n))), ch.dual().flag_dims())?;
    Ok(FlagPair { first, second })
}

/// Smallest singular value over complementary-dimension pairs.
pub fn transversality_margin(p: &FlagPair) -> f64 {
    let n = p.first.n();
    let mut worst = f64::INFINITY;
    for (i, &d) in p.first.dims.iter().enumerate() {
        let Some(j) = p.second.dims.iter().position(|&e| e == n - d) else {
            return 0.0;
        };
        let v = p.first.subspace(i);
        let w = p.second.subspace(j);
        let mut cat = CMat::zeros(n, n);
        cat.columns_mut(0, d).copy_from(&v);
        cat.columns_mut(d, n - d).copy_from(&w);
        worst = worst.min(mat::min_singular(&cat));
    }
    worst
}

pub fn transversal(p: &FlagPair) -> bool {
    transversality_margin(p) >= 1e-8
}

/// First flag: eigenspaces of Y in decreasing order; second: increasing order.
pub fn orbit_to_pair(ch: &Characteristic, y: &CMat) -> Result<FlagPair> {
    let a = orbit::factorize(ch, y)?;
    let chs = ch.dual();
    let b = orbit::factorize(&chs, &(-y))?;
    Ok(FlagPair {
        first: NestedFlag::new(a.k, ch.flag_dims())?,
        second: NestedFlag::new(b.k, chs.flag_dims())?,
    })
}

/// (x0, w0~ y0) moved by Weyl representatives (w1, w2).
pub fn weyl_pair(ch: &Characteristic, w1: &WeylElement, w2: &WeylElement) -> Result<FlagPair> {
    let n = ch.n;
    Ok(FlagPair {
        first: NestedFlag::new(weylgrp::representative(w1), ch.flag_dims())?,
        second: NestedFlag::new(
            frame_of_span(&(weylgrp::representative(w2) * reversal(n))),
            ch.dual().flag_dims(),
        )?,
    })
}

/// Number of (transversal, non-transversal) pairs over W x W.
pub fn weyl_orbit_split(ch: &Characteristic) -> Result<(usize, usize)> {
    let all = WeylElement::all(ch.n);
    let mut t = 0;
    let mut d = 0;
    for w1 in &all {
        for w2 in &all {
            if transversal(&weyl_pair(ch, w1, w2)?) {
                t += 1;
            } else {
                d += 1;
            }
        }
    }
    Ok((t, d))
}

fn normalize_line(v: (C64, C64)) -> Result<(C64, C64)> {
    let s = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
    if s == 0.0 {
        return Err(contract("zero vector does not span a line"));
    }
    Ok((v.0 / s, v.1 / s))
}

/// The 2x2 matrix with +1-eigenline xi and -1-eigenline eta.
pub fn pair_to_matrix_sl2(xi: (C64, C64), eta: (C64, C64)) -> Result<CMat> {
    let (x, y) = normalize_line(xi)?;
    let (z0, w0) = normalize_line(eta)?;
    let det = x * w0 - y * z0;
    if det.norm() < 1e-12 {
        return Err(Error::NotTransversal);
    }
    let (z, w) = (z0 / det, w0 / det);
    Ok(CMat::from_row_slice(
        2,
        2,
        &[w * x + y * z, -cr(2.0) * x * z, cr(2.0) * y * w, -w * x - y * z],
    ))
}

/// [[x x̄ - y ȳ, 2 x ȳ], [2 x̄ y, -x x̄ + y ȳ]] for the unit representative.
pub fn hermitian_of_line_sl2(xi: (C64, C64)) -> Result<CMat> {
    let (x, y) = normalize_line(xi)?;
    Ok(CMat::from_row_slice(
        2,
        2,
        &[
            x * x.conj() - y * y.conj(),
            cr(2.0) * x * y.conj(),
            cr(2.0) * x.conj() * y,
            -x * x.conj() + y * y.conj(),
        ],
    ))
}

pub fn line_of(flag: &NestedFlag) -> (C64, C64) {
    (flag.frame[(0, 0)], flag.frame[(1, 0)])
}

/// Distance between two lines in C^2 (projector norm).
pub fn line_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    let pa = hermitian_of_line_sl2(a).unwrap();
    let pb = hermitian_of_line_sl2(b).unwrap();
    mat::dist(&pa, &pb)
}

/// Hermitian models (x, y) of Psi(Y) in F_H0 x F_H0*, with their frames.
pub fn pair_points(ch: &Characteristic, y: &CMat) -> Result<((CMat, CMat), (CMat, CMat))> {
    let chs = ch.dual();
    let a = orbit::factorize(ch, y)?;
    let b = orbit::factorize(&chs, &(-y))?;
    let x = mat::conj_by(&a.k, ch.h0_ref());
    let ys = mat::conj_by(&b.k, chs.h0_ref());
    Ok(((x, a.k), (ys, b.k)))
}

/// max over Z of || dPsi(i Z~) + j_sign J_prod dPsi(Z~) ||.
pub fn product_complex_structure_residual_signed(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    y: &CMat,
    j_sign: f64,
) -> Result<f64> {
    let chs = ch.dual();
    let ((x, kx), (ys, ky)) = pair_points(ch, y)?;
    let mut worst = 0.0f64;
    for z in ctx.real_basis() {
        let iz = &z * mat::I;
        let vx = induced_flag(ch, &kx, &z);
        let vy = induced_flag(&chs, &ky, &z);
        let ivx = induced_flag(ch, &kx, &iz);
        let ivy = induced_flag(&chs, &ky, &iz);
        let jx = lagrangian::complex_structure(ch, &x, &vx)?;
        let jy = lagrangian::complex_structure(&chs, &ys, &vy)?;
        let rx = mat::fro(&(ivx + jx * cr(j_sign)));
        let ry = mat::fro(&(ivy + jy * cr(j_sign)));
        worst = worst.max((rx * rx + ry * ry).sqrt());
    }
    Ok(worst)
}

pub fn product_complex_structure_residual(ctx: &AlgebraCtx, ch: &Characteristic, y: &CMat) -> Result<f64> {
    product_complex_structure_residual_signed(ctx, ch, y, 1.0)
}

/// Null space of Z -> dPsi(Z~) at (H0, -H0): (real dimension, largest n^± leakage).
pub fn pair_isotropy(ctx: &AlgebraCtx, ch: &Characteristic) -> Result<(usize, f64)> {
    let chs = ch.dual();
    let ((_, kx), (_, ky)) = pair_points(ch, ch.h0_ref())?;
    let basis = ctx.real_basis();
    let cols: Vec<Vec<f64>> = basis
        .iter()
        .map(|z| {
            let mut v = mat::realify(&induced_flag(ch, &kx, z));
            v.extend(mat::realify(&induced_flag(&chs, &ky, z)));
            v
        })
        .collect();
    let m = RMat::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Internal("svd".into()))?;
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let d = basis.len();
    // singular values beyond the column count are implicitly zero
    let mut null = 0;
    let mut leak = 0.0f64;
    for r in 0..d {
        let sv = if r < svd.singular_values.len() { svd.singular_values[r] } else { 0.0 };
        if sv > 1e-8 * top {
            continue;
        }
        null += 1;
        let mut z = mat::zeros(ch.n);
        for (a, e) in basis.iter().enumerate() {
            z += e * cr(vt[(r, a)]);
        }
        let (zm, _, zp) = parabolic_split(ch, &z);
        leak = leak.max(mat::fro(&zm) + mat::fro(&zp));
    }
    Ok((null, leak))
}
