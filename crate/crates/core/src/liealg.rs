//! sl(n,C): basis, roots, Killing form, Cartan and Iwasawa decompositions.
//!
//! Indices are 0-based in code; a root (i, j) is the functional h_i - h_j.

use crate::error::{contract, Error, Result};
use crate::mat::{self, c, cr, CMat, RMat, C64, I};

#[derive(Debug, Clone)]
pub struct AlgebraCtx {
    pub n: usize,
    /// E_ij (i != j, row-major), then H_i = E_ii - E_{i+1,i+1}.
    pub basis: Vec<CMat>,
    pub roots: Vec<(usize, usize)>,
    pub simple_roots: Vec<(usize, usize)>,
    /// Gram matrix of Re B on the realified basis (basis, then i * basis).
    pub killing_gram: RMat,
    gram_inv: RMat,
    /// H_{mu_k}, k = 1..n-1.
    pub fundamental_h: Vec<CMat>,
    /// Global sign s in the KKS form s * Re B(Y, [Z1, Z2]).
    pub kks_sign: f64,
}

#[derive(Debug, Clone)]
pub struct IwasawaFactors {
    pub k: CMat,
    pub a: CMat,
    pub n_part: CMat,
}

pub const MAX_N: usize = 8;

impl AlgebraCtx {
    pub fn new(n: usize) -> Result<Self> {
        let s = crate::cotangent::calibrated_sign();
        Self::with_sign(n, s)
    }

    pub(crate) fn with_sign(n: usize, kks_sign: f64) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) {
            return Err(contract(format!("n must lie in 2..={MAX_N}, got {n}")));
        }
        let mut basis = Vec::with_capacity(n * n - 1);
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(mat::unit(n, i, j));
                    roots.push((i, j));
                }
            }
        }
        for i in 0..n - 1 {
            basis.push(mat::unit(n, i, i) - mat::unit(n, i + 1, i + 1));
        }
        let simple_roots = (0..n - 1).map(|i| (i, i + 1)).collect();

        let real: Vec<CMat> = basis
            .iter()
            .cloned()
            .chain(basis.iter().map(|b| b * I))
            .collect();
        let d = real.len();
        let scale = 2.0 * n as f64;
        let gram = RMat::from_fn(d, d, |a, b| scale * (&real[a] * &real[b]).trace().re);
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Internal("singular Killing Gram matrix".into()))?;

        let mut ctx = AlgebraCtx {
            n,
            basis,
            roots,
            simple_roots,
            killing_gram: gram,
            gram_inv,
            fundamental_h: Vec::new(),
            kks_sign,
        };
        ctx.fundamental_h = (1..n)
            .map(|k| ctx.riesz(|z| (0..k).map(|i| z[(i, i)].re).sum()))
            .collect();
        Ok(ctx)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis of g as a real vector space: basis, then i * basis.
    pub fn real_basis(&self) -> Vec<CMat> {
        self.basis
            .iter()
            .cloned()
            .chain(self.basis.iter().map(|b| b * I))
            .collect()
    }

    /// Basis of the compact real form su(n).
    pub fn compact_basis(&self) -> Vec<CMat> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n - 1);
        for i in 0..n {
            for j in i + 1..n {
                let (a, z) = weyl_basis_vectors(n, i, j).expect("i < j");
                out.push(a);
                out.push(z);
            }
        }
        for i in 0..n - 1 {
            out.push((mat::unit(n, i, i) - mat::unit(n, i + 1, i + 1)) * I);
        }
        out
    }

    /// B(X, Y) = 2n tr(XY), with shape checks.
    pub fn killing(&self, x: &CMat, y: &CMat) -> Result<C64> {
        mat::check_square(x, self.n, "killing X")?;
        mat::check_square(y, self.n, "killing Y")?;
        Ok(self.b(x, y))
    }

    #[inline]
    pub fn b(&self, x: &CMat, y: &CMat) -> C64 {
        let n = self.n;
        let mut t = cr(0.0);
        for i in 0..n {
            for j in 0..n {
                t += x[(i, j)] * y[(j, i)];
            }
        }
        t * (2.0 * n as f64)
    }

    /// Real pairing Re B.
    #[inline]
    pub fn re_b(&self, x: &CMat, y: &CMat) -> f64 {
        self.b(x, y).re
    }

    /// The unique traceless m with Re B(m, e) = f(e) on the realified basis.
    pub fn riesz<F: Fn(&CMat) -> f64>(&self, f: F) -> CMat {
        let real = self.real_basis();
        let rhs = nalgebra::DVector::from_iterator(real.len(), real.iter().map(&f));
        let coef = &self.gram_inv * rhs;
        let mut m = mat::zeros(self.n);
        for (a, e) in real.iter().enumerate() {
            m += e * cr(coef[a]);
        }
        m
    }

    /// Complex coordinates of a traceless matrix in `basis`.
    pub fn coords(&self, z: &CMat) -> Vec<C64> {
        let n = self.n;
        let mut out: Vec<C64> = self.roots.iter().map(|&(i, j)| z[(i, j)]).collect();
        let mut acc = cr(0.0);
        for i in 0..n - 1 {
            acc += z[(i, i)];
            out.push(acc);
        }
        out
    }

    /// Matrix of ad X in `basis`.
    pub fn ad_matrix(&self, x: &CMat) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for (b, e) in self.basis.iter().enumerate() {
            let col = self.coords(&mat::comm(x, e));
            for (a, v) in col.into_iter().enumerate() {
                m[(a, b)] = v;
            }
        }
        m
    }

    /// tr(ad X ad Y), the defining Killing form.
    pub fn killing_ad_trace(&self, x: &CMat, y: &CMat) -> C64 {
        (self.ad_matrix(x) * self.ad_matrix(y)).trace()
    }

    /// H_alpha with B(H_alpha, H) = alpha(H).
    pub fn h_alpha(&self, root: (usize, usize)) -> CMat {
        let (i, j) = root;
        self.riesz(|z| z[(i, i)].re - z[(j, j)].re)
    }
}

/// (1/2n)(P_k - (k/n) I).
pub fn closed_form_h_mu(n: usize, k: usize) -> CMat {
    let nf = n as f64;
    let h: Vec<f64> = (0..n)
        .map(|i| {
            let p = if i < k { 1.0 } else { 0.0 };
            (p - k as f64 / nf) / (2.0 * nf)
        })
        .collect();
    mat::diag_real(&h)
}

/// Z = A + X with A anti-Hermitian, X Hermitian.
pub fn cartan_split(z: &CMat) -> (CMat, CMat) {
    (mat::antiherm(z), mat::herm(z))
}

/// g = k a n with k in SU(n), a positive diagonal, n unipotent upper triangular.
pub fn iwasawa(g: &CMat) -> Result<IwasawaFactors> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(contract("iwasawa: square matrix required"));
    }
    let det = g.determinant();
    let hadamard: f64 = (0..n).map(|j| g.column(j).norm()).product::<f64>().max(1.0);
    if (det - cr(1.0)).norm() > 1e-10 * hadamard {
        return Err(Error::NotInSl(format!("det = {det}")));
    }
    let (k, r) = mat::qr_positive(g);
    let mut a = mat::zeros(n);
    let mut ainv = mat::zeros(n);
    for i in 0..n {
        a[(i, i)] = r[(i, i)];
        ainv[(i, i)] = cr(1.0 / r[(i, i)].re);
    }
    let n_part = &ainv * r;
    Ok(IwasawaFactors { k, a, n_part })
}

/// (A_alpha, Z_alpha) = (E_ij - E_ji, i(E_ij + E_ji)), i < j.
pub fn weyl_basis_vectors(n: usize, i: usize, j: usize) -> Result<(CMat, CMat)> {
    if i >= j || j >= n {
        return Err(contract(format!("root ({i},{j}) must satisfy i < j < n")));
    }
    let eij = mat::unit(n, i, j);
    let eji = mat::unit(n, j, i);
    Ok((&eij - &eji, (eij + eji) * c(0.0, 1.0)))
}
