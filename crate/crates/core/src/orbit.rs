//! Adjoint orbits of characteristic elements: parabolic data, the (k, X)
//! factorization Y = k (H0 + X) k*, the projection to the flag and the KKS form.

use nalgebra::linalg::Schur;

use crate::error::{contract, Error, Result};
use crate::liealg::AlgebraCtx;
use crate::mat::{self, cr, CMat};
use crate::weylgrp::ThetaSet;

#[derive(Debug, Clone)]
pub struct Characteristic {
    pub n: usize,
    /// Weakly decreasing diagonal of H0.
    pub h0: Vec<f64>,
    pub theta: ThetaSet,
    pub block_sizes: Vec<usize>,
    block_of: Vec<usize>,
    h0m: CMat,
}

impl Characteristic {
    pub fn from_diagonal(h: &[f64]) -> Result<Self> {
        let n = h.len();
        if n < 2 {
            return Err(contract("characteristic needs n >= 2"));
        }
        let scale = h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(contract("H0 = 0 has no flag"));
        }
        let tol = 1e-12 * scale;
        if h.iter().sum::<f64>().abs() > tol * n as f64 {
            return Err(contract("H0 must be traceless"));
        }
        let mut indices = Vec::new();
        let mut block_of = vec![0; n];
        let mut block_sizes = vec![1];
        for i in 0..n - 1 {
            let d = h[i] - h[i + 1];
            if d < -tol {
                return Err(contract("H0 must be weakly decreasing"));
            }
            if d <= tol {
                indices.push(i + 1);
                *block_sizes.last_mut().unwrap() += 1;
            } else {
                block_sizes.push(1);
            }
            block_of[i + 1] = block_sizes.len() - 1;
        }
        // snap equal eigenvalues so that Theta is exact
        let mut h0 = h.to_vec();
        for i in 1..n {
            if block_of[i] == block_of[i - 1] {
                h0[i] = h0[i - 1];
            }
        }
        Ok(Characteristic {
            n,
            theta: ThetaSet::new(n, indices)?,
            block_sizes,
            block_of,
            h0m: mat::diag_real(&h0),
            h0,
        })
    }

    /// H_Theta = sum over k not in Theta of (n P_k - k I).
    pub fn canonical(n: usize, theta: &ThetaSet) -> Result<Self> {
        let theta = ThetaSet::new(n, theta.indices.iter().cloned())?;
        if theta.indices.len() == n - 1 {
            return Err(contract("Theta = all simple roots gives H = 0"));
        }
        let mut h = vec![0.0; n];
        for k in 1..n {
            if theta.contains(k) {
                continue;
            }
            for (i, hi) in h.iter_mut().enumerate() {
                *hi += if i < k { (n - k) as f64 } else { -(k as f64) };
            }
        }
        Self::from_diagonal(&h)
    }

    /// H0* = -w0 H0, as its own characteristic.
    pub fn dual(&self) -> Self {
        let h: Vec<f64> = self.h0.iter().rev().map(|x| -x).collect();
        Self::from_diagonal(&h).expect("dual of a valid characteristic")
    }

    pub fn h0_mat(&self) -> CMat {
        self.h0m.clone()
    }

    pub fn h0_ref(&self) -> &CMat {
        &self.h0m
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn is_regular(&self) -> bool {
        self.block_sizes.len() == self.n
    }

    /// Cumulative dimensions of the proper subspaces of the flag.
    pub fn flag_dims(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::new();
        for &b in &self.block_sizes[..self.block_sizes.len() - 1] {
            acc += b;
            out.push(acc);
        }
        out
    }

    /// Distinct eigenvalues in decreasing order.
    pub fn distinct(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for i in 0..self.n {
            if i == 0 || self.block_of[i] != self.block_of[i - 1] {
                out.push(self.h0[i]);
            }
        }
        out
    }

    /// Complex dimension of n^+ (= complex dimension of the flag).
    pub fn dim_n_plus(&self) -> usize {
        let mut s = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.block_of[i] != self.block_of[j] {
                    s += 1;
                }
            }
        }
        s
    }

    /// Positions (i, j), i < j, of the root spaces in n^+.
    pub fn plus_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.block_of[i] != self.block_of[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn scale(&self) -> f64 {
        mat::fro(&self.h0m)
    }
}

/// (Z^-, Z^0, Z^+): blocks below, on and above the block diagonal.
pub fn parabolic_split(ch: &Characteristic, z: &CMat) -> (CMat, CMat, CMat) {
    let n = ch.n;
    let mut m = mat::zeros(n);
    let mut o = mat::zeros(n);
    let mut p = mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (bi, bj) = (ch.block_of[i], ch.block_of[j]);
            let target = if bi > bj {
                &mut m
            } else if bi == bj {
                &mut o
            } else {
                &mut p
            };
            target[(i, j)] = z[(i, j)];
        }
    }
    (m, o, p)
}

pub fn plus_part(ch: &Characteristic, z: &CMat) -> CMat {
    let mut p = z.clone();
    for i in 0..ch.n {
        for j in 0..ch.n {
            if ch.block_of[i] >= ch.block_of[j] {
                p[(i, j)] = cr(0.0);
            }
        }
    }
    p
}

pub fn minus_part(ch: &Characteristic, z: &CMat) -> CMat {
    let mut p = z.clone();
    for i in 0..ch.n {
        for j in 0..ch.n {
            if ch.block_of[i] <= ch.block_of[j] {
                p[(i, j)] = cr(0.0);
            }
        }
    }
    p
}

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub y: CMat,
    /// Unitary, det 1.
    pub k: CMat,
    /// In n^+.
    pub x: CMat,
}

impl OrbitPoint {
    pub fn from_parts(ch: &Characteristic, k: CMat, x: CMat) -> Self {
        let y = &k * (ch.h0_mat() + &x) * k.adjoint();
        OrbitPoint { y, k, x }
    }

    pub fn recompose(&self, ch: &Characteristic) -> CMat {
        &self.k * (ch.h0_mat() + &self.x) * self.k.adjoint()
    }
}

/// Swap the adjacent diagonal entries p, p+1 of the upper triangular t.
fn swap_adjacent(t: &mut CMat, q: &mut CMat, p: usize) {
    let (t11, t12, t22) = (t[(p, p)], t[(p, p + 1)], t[(p + 1, p + 1)]);
    // eigenvector of the 2x2 block for t22 becomes the leading column
    let (mut v0, mut v1) = (t12, t22 - t11);
    let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    if nv == 0.0 {
        return;
    }
    v0 /= nv;
    v1 /= nv;
    let n = t.nrows();
    let mut g = mat::eye(n);
    g[(p, p)] = v0;
    g[(p + 1, p)] = v1;
    g[(p, p + 1)] = -v1.conj();
    g[(p + 1, p + 1)] = v0.conj();
    *t = g.adjoint() * &*t * &g;
    t[(p + 1, p)] = cr(0.0);
    *q = &*q * g;
}

/// Grouped ordered Schur factorization Y = k (H0 + X) k*.
pub fn factorize(ch: &Characteristic, y: &CMat) -> Result<OrbitPoint> {
    mat::check_square(y, ch.n, "factorize")?;
    let n = ch.n;
    let s = mat::fro(y).max(1.0);
    if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(contract("non-finite input"));
    }
    if y.trace().norm() > 1e-8 * s {
        return Err(Error::NotOnOrbit(format!("trace {}", y.trace())));
    }
    let (mut q, mut t) = Schur::new(y.clone()).unpack();
    let vals = ch.distinct();

    let mut group = vec![0usize; n];
    let mut counts = vec![0usize; vals.len()];
    let mut sums = vec![cr(0.0); vals.len()];
    for i in 0..n {
        let lam = t[(i, i)];
        let (g, d) = vals
            .iter()
            .enumerate()
            .map(|(g, &v)| (g, (lam - cr(v)).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if d > 1e-6 * s {
            return Err(Error::NotOnOrbit(format!("eigenvalue {lam} not in the spectrum of H0")));
        }
        group[i] = g;
        counts[g] += 1;
        sums[g] += lam;
    }
    if counts != ch.block_sizes {
        return Err(Error::NotOnOrbit(format!(
            "multiplicities {counts:?} differ from {:?}",
            ch.block_sizes
        )));
    }
    for (g, &v) in vals.iter().enumerate() {
        let mean = sums[g] / counts[g] as f64;
        if (mean - cr(v)).norm() > 1e-8 * s {
            return Err(Error::NotOnOrbit(format!("eigenvalue cluster {mean} vs {v}")));
        }
    }

    // bubble the groups into chamber order with adjacent swaps
    loop {
        let mut swapped = false;
        for p in 0..n - 1 {
            if group[p] > group[p + 1] {
                swap_adjacent(&mut t, &mut q, p);
                group.swap(p, p + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    mat::fix_det_last_column(&mut q);
    let m = q.adjoint() * y * &q;
    let xfull = &m - ch.h0_ref();
    let x = plus_part(ch, &xfull);
    let resid = mat::fro(&(&xfull - &x));
    if resid > 1e-8 * s {
        return Err(Error::Defective(resid));
    }
    Ok(OrbitPoint { y: y.clone(), k: q, x })
}

/// pi(Y) = Ad(k) H0 in the Hermitian model of the flag.
pub fn project_pi(ch: &Characteristic, y: &CMat) -> Result<CMat> {
    let p = factorize(ch, y)?;
    Ok(mat::herm(&mat::conj_by(&p.k, ch.h0_ref())))
}

/// s * Re B(Y, [Z1, Z2]).
pub fn kks_form(ctx: &AlgebraCtx, y: &CMat, z1: &CMat, z2: &CMat) -> f64 {
    ctx.kks_sign * ctx.re_b(y, &mat::comm(z1, z2))
}

/// Unitary frame k (det 1, columns in chamber order) of a Hermitian flag point.
pub fn hermitian_frame(ch: &Characteristic, x: &CMat, tol: f64) -> Result<CMat> {
    mat::check_square(x, ch.n, "flag point")?;
    let (vals, mut k) = mat::herm_eigen(x);
    let s = ch.scale().max(1.0);
    let dev = vals
        .iter()
        .zip(&ch.h0)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if dev > tol * s {
        return Err(Error::NotOnOrbit(format!("flag point spectrum off by {dev:e}")));
    }
    mat::fix_det_last_column(&mut k);
    Ok(k)
}
