//! Dense complex matrix helpers and the `[re, im]` JSON interchange format.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde_json::Value;

use crate::error::{contract, Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Matrix unit E_ij (0-based).
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(n);
    m[(i, j)] = cr(1.0);
    m
}

pub fn diag_real(h: &[f64]) -> CMat {
    let n = h.len();
    let mut m = zeros(n);
    for (i, &x) in h.iter().enumerate() {
        m[(i, i)] = cr(x);
    }
    m
}

pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// u x u* for unitary u.
pub fn conj_by(u: &CMat, x: &CMat) -> CMat {
    u * x * u.adjoint()
}

/// g x g^{-1} for invertible g.
pub fn ad_group(g: &CMat, x: &CMat) -> Result<CMat> {
    let gi = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotInSl("singular matrix".into()))?;
    Ok(g * x * gi)
}

pub fn expm(z: &CMat) -> CMat {
    z.clone().exp()
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

pub fn herm(a: &CMat) -> CMat {
    (a + a.adjoint()) * cr(0.5)
}

pub fn antiherm(a: &CMat) -> CMat {
    (a - a.adjoint()) * cr(0.5)
}

/// Frobenius norm.
pub fn fro(a: &CMat) -> f64 {
    a.norm()
}

pub fn dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

pub fn check_square(a: &CMat, n: usize, what: &str) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(contract(format!(
            "{what}: expected {n}x{n}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Real coordinates (all real parts, then all imaginary parts), column-major.
pub fn realify(a: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().map(|z| z.re).collect();
    v.extend(a.iter().map(|z| z.im));
    v
}

/// Rank of a real matrix with threshold `rel * sigma_max`.
pub fn rank(m: &RMat, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Matrix whose columns are the realified inputs.
pub fn real_columns(vs: &[CMat]) -> RMat {
    let cols: Vec<Vec<f64>> = vs.iter().map(realify).collect();
    let rows = cols.first().map_or(0, |c| c.len());
    RMat::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub fn min_singular(m: &CMat) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// QR with the diagonal of R made real positive.
pub fn qr_positive(g: &CMat) -> (CMat, CMat) {
    let qr = g.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    let n = r.nrows();
    for i in 0..n {
        let d = r[(i, i)];
        let a = d.norm();
        if a > 0.0 {
            let ph = d / a;
            for row in 0..q.nrows() {
                q[(row, i)] *= ph;
            }
            for col in 0..r.ncols() {
                r[(i, col)] *= ph.conj();
            }
        }
    }
    (q, r)
}

/// Multiply the last column by a phase so that det = 1 (input unitary).
pub fn fix_det_last_column(u: &mut CMat) {
    let n = u.ncols();
    let d = u.determinant();
    let ph = d / d.norm();
    for row in 0..u.nrows() {
        u[(row, n - 1)] /= ph;
    }
}

/// Hermitian eigendecomposition, eigenvalues in decreasing order.
pub fn herm_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = nalgebra::linalg::SymmetricEigen::new(herm(h));
    let n = h.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| serde_json::json!([m[(i, j)].re, m[(i, j)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<CMat> {
    let bad = || contract("matrix JSON must be an array of rows of [re, im] pairs");
    let rows = v.as_array().ok_or_else(bad)?;
    let nr = rows.len();
    if nr == 0 {
        return Err(bad());
    }
    let nc = rows[0].as_array().ok_or_else(bad)?.len();
    let mut m = CMat::zeros(nr, nc);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(bad)?;
        if row.len() != nc {
            return Err(bad());
        }
        for (j, e) in row.iter().enumerate() {
            let pair = e.as_array().ok_or_else(bad)?;
            if pair.len() != 2 {
                return Err(bad());
            }
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

pub fn vector_to_json(v: &CVec) -> Value {
    Value::Array(v.iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}

pub fn vector_from_json(v: &Value) -> Result<CVec> {
    let bad = || contract("vector JSON must be an array of [re, im] pairs");
    let items = v.as_array().ok_or_else(bad)?;
    let mut out = CVec::zeros(items.len());
    for (i, e) in items.iter().enumerate() {
        let pair = e.as_array().ok_or_else(bad)?;
        if pair.len() != 2 {
            return Err(bad());
        }
        out[i] = c(
            pair[0].as_f64().ok_or_else(bad)?,
            pair[1].as_f64().ok_or_else(bad)?,
        );
    }
    Ok(out)
}
