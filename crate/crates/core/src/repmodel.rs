//! Exterior powers Λ^k C^n as representations of sl(n,C), the orbit of
//! v0 ⊗ eps0 and its moment map into the adjoint orbit of H_{mu_k}.
//!
//! Basis: lexicographic k-subsets; v0 = e_1 ∧ ... ∧ e_k is basis vector 0 and
//! eps0 is its dual-basis covector, so eps0(v0) = 1. Covectors are coefficient
//! vectors in the dual basis; eps(v) = sum eps_i v_i.

use std::collections::HashMap;

use crate::cotangent::CotangentPoint;
use crate::error::{contract, Error, Result};
use crate::liealg::{iwasawa, AlgebraCtx};
use crate::mat::{self, cr, CMat, CVec, C64};
use crate::orbit::{plus_part, Characteristic};

#[derive(Debug, Clone)]
pub struct ExteriorRep {
    pub n: usize,
    pub k: usize,
    pub subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

#[derive(Debug, Clone)]
pub struct RepElement {
    pub v: CVec,
    pub eps: CVec,
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl ExteriorRep {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if !(2..=crate::liealg::MAX_N).contains(&n) || k == 0 || k >= n || k > 4 {
            return Err(contract(format!("unsupported exterior power n={n}, k={k}")));
        }
        let subsets = k_subsets(n, k);
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(ExteriorRep { n, k, subsets, index })
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    /// rho(X) as a derivation on wedge products.
    pub fn algebra(&self, x: &CMat) -> CMat {
        let d = self.dim();
        let mut r = CMat::zeros(d, d);
        for (col, s) in self.subsets.iter().enumerate() {
            for (p, &sp) in s.iter().enumerate() {
                for i in 0..self.n {
                    let coef = x[(i, sp)];
                    if coef == cr(0.0) {
                        continue;
                    }
                    if i == sp {
                        r[(col, col)] += coef;
                        continue;
                    }
                    if s.contains(&i) {
                        continue;
                    }
                    let mut t = s.clone();
                    t[p] = i;
                    let (sorted, sign) = sort_with_sign(t);
                    r[(self.index[&sorted], col)] += coef * sign;
                }
            }
        }
        r
    }

    /// Λ^k g: entries are k x k minors det g[T, S].
    pub fn group(&self, g: &CMat) -> CMat {
        let d = self.dim();
        let k = self.k;
        CMat::from_fn(d, d, |a, b| {
            let (t, s) = (&self.subsets[a], &self.subsets[b]);
            CMat::from_fn(k, k, |i, j| g[(t[i], s[j])]).determinant()
        })
    }

    /// rho*(X) = -rho(X)^T on dual-basis coefficients.
    pub fn dual_algebra(&self, x: &CMat) -> CMat {
        -self.algebra(x).transpose()
    }

    /// rho*(g) eps = eps o rho(g^{-1}).
    pub fn dual_group(&self, g: &CMat) -> Result<CMat> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInSl("singular g".into()))?;
        Ok(self.group(&gi).transpose())
    }

    pub fn v0(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[0] = cr(1.0);
        v
    }

    pub fn eps0(&self) -> CVec {
        self.v0()
    }

    pub fn base_element(&self) -> RepElement {
        RepElement {
            v: self.v0(),
            eps: self.eps0(),
        }
    }

    pub fn act(&self, g: &CMat, el: &RepElement) -> Result<RepElement> {
        Ok(RepElement {
            v: self.group(g) * &el.v,
            eps: self.dual_group(g)? * &el.eps,
        })
    }

    /// tr(rho(X) rho(Y)) = binom(n-2, k-1) tr(XY).
    pub fn trace_form_index(&self) -> f64 {
        binomial(self.n - 2, self.k - 1) as f64
    }
}

fn sort_with_sign(mut t: Vec<usize>) -> (Vec<usize>, f64) {
    let mut sign = 1.0;
    for i in 0..t.len() {
        for j in 0..t.len() - 1 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (t, sign)
}

impl RepElement {
    pub fn pairing(&self) -> C64 {
        self.eps.dot(&self.v)
    }

    /// v ⊗ eps as the endomorphism w -> eps(w) v.
    pub fn endomorphism(&self) -> CMat {
        &self.v * self.eps.transpose()
    }
}

/// eps(rho(Z) v), complex-linear in Z.
pub fn rep_functional(rep: &ExteriorRep, el: &RepElement, z: &CMat) -> C64 {
    el.eps.dot(&(rep.algebra(z) * &el.v))
}

/// M with B(M, Z) = eps(rho(Z) v), by the Killing-Gram solve.
pub fn moment_rep(ctx: &AlgebraCtx, rep: &ExteriorRep, el: &RepElement) -> CMat {
    ctx.riesz(|z| rep_functional(rep, el, z).re)
}

/// M from the trace-form projection of v ⊗ eps onto rho(g), rescaled by the
/// ratio between the trace form of Λ^k and the Killing form.
pub fn moment_rep_trace(ctx: &AlgebraCtx, rep: &ExteriorRep, el: &RepElement) -> Result<CMat> {
    let real = ctx.real_basis();
    let reps: Vec<CMat> = real.iter().map(|e| rep.algebra(e)).collect();
    let d = real.len();
    let gram = nalgebra::DMatrix::<f64>::from_fn(d, d, |a, b| (&reps[a] * &reps[b]).trace().re);
    let t = el.endomorphism();
    let rhs = nalgebra::DVector::<f64>::from_fn(d, |a, _| (&t * &reps[a]).trace().re);
    let coef = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("trace-form Gram singular".into()))?;
    let mut p = mat::zeros(ctx.n);
    for (a, e) in real.iter().enumerate() {
        p += e * cr(coef[a]);
    }
    Ok(p * cr(rep.trace_form_index() / (2.0 * ctx.n as f64)))
}

/// (eps(rho(H) v), tr((v ⊗ eps) rho(H))).
pub fn height_rep(rep: &ExteriorRep, el: &RepElement, h: &CMat) -> (C64, C64) {
    let r = rep.algebra(h);
    (el.eps.dot(&(&r * &el.v)), (el.endomorphism() * r).trace())
}

fn normalize_projective(v: &CVec) -> Result<CVec> {
    let nv = v.norm();
    if nv == 0.0 {
        return Err(contract("zero vector has no line"));
    }
    let big = v.iter().cloned().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
    let ph = big / big.norm();
    Ok(v / (ph * nv))
}

/// ([v], [eps]) as unit representatives with the largest entry real positive.
pub fn phi(el: &RepElement) -> Result<(CVec, CVec)> {
    Ok((normalize_projective(&el.v)?, normalize_projective(&el.eps)?))
}

/// Representative of the pair with eps(v) = 1.
pub fn phi_inv(pair: &(CVec, CVec)) -> Result<RepElement> {
    let (v, e) = pair;
    let p = e.dot(v);
    if p.norm() <= 1e-12 * v.norm() * e.norm() {
        return Err(Error::NotTransversal);
    }
    Ok(RepElement {
        v: v.clone(),
        eps: e / p,
    })
}

/// Characteristic element H_{mu_k} as a characteristic.
pub fn mu_characteristic(ctx: &AlgebraCtx, k: usize) -> Result<Characteristic> {
    if k == 0 || k >= ctx.n {
        return Err(contract("fundamental weight index out of range"));
    }
    let h = &ctx.fundamental_h[k - 1];
    Characteristic::from_diagonal(&(0..ctx.n).map(|i| h[(i, i)].re).collect::<Vec<_>>())
}

/// g = k p (Iwasawa) -> (Ad(k) H_mu, Ad(k)(Ad(p) H_mu - H_mu)).
pub fn rep_to_cotangent(ch: &Characteristic, g: &CMat) -> Result<CotangentPoint> {
    let f = iwasawa(g)?;
    let p = &f.a * &f.n_part;
    let x = mat::ad_group(&p, ch.h0_ref())? - ch.h0_ref();
    let off = mat::fro(&(&x - plus_part(ch, &x)));
    if off > 1e-9 * mat::fro(&x).max(ch.scale()) {
        return Err(Error::Internal(format!("Ad(p) H_mu - H_mu leaves n+: {off:e}")));
    }
    Ok(CotangentPoint::from_frame(ch, &f.k, &x))
}
