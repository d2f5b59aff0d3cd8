//! Borel metric, canonical complex structure and Kaehler form on flags in the
//! Hermitian model Ad(K) H0; the map R_w0 and Lagrangean graphs in F x F*.
//!
//! Tangent vectors at x = Ad(u) H0 are Hermitian matrices Ad(u) v0 with v0
//! vanishing on the block diagonal. With a = h_i - h_j > 0 for i < j:
//! (v, w) = sum Re(v0_ij conj w0_ij) / a, and J multiplies the upper blocks
//! of v0 by i and the lower ones by -i (so J A_a~ = Z_a~ at the origin).

use rand::Rng;

use crate::cotangent::{induced_flag, lift_tangent};
use crate::error::{Error, Result};
use crate::mat::{self, c, cr, CMat, CVec, C64, I};
use crate::orbit::{self, Characteristic};
use crate::repmodel::{ExteriorRep, RepElement};
use crate::sampling;

fn frame(ch: &Characteristic, x: &CMat) -> Result<CMat> {
    orbit::hermitian_frame(ch, x, 1e-8)
}

/// Ad(u*) v, checked to be tangent (Hermitian, zero block diagonal).
fn at_origin(ch: &Characteristic, u: &CMat, v: &CMat) -> Result<CMat> {
    let v0 = u.adjoint() * v * u;
    let (_, z, _) = orbit::parabolic_split(ch, &v0);
    let resid = (mat::fro(&z) + mat::dist(&v0, &v0.adjoint())) / mat::fro(v).max(1.0);
    if resid > 1e-8 {
        return Err(Error::NotTangent(resid));
    }
    Ok(v0)
}

fn metric_origin(ch: &Characteristic, v0: &CMat, w0: &CMat) -> f64 {
    ch.plus_positions()
        .into_iter()
        .map(|(i, j)| (v0[(i, j)] * w0[(i, j)].conj()).re / (ch.h0[i] - ch.h0[j]))
        .sum()
}

fn j_origin(ch: &Characteristic, v0: &CMat) -> CMat {
    let (m, _, p) = orbit::parabolic_split(ch, v0);
    p * I - m * I
}

pub fn borel_metric(ch: &Characteristic, x: &CMat, v: &CMat, w: &CMat) -> Result<f64> {
    let u = frame(ch, x)?;
    Ok(metric_origin(ch, &at_origin(ch, &u, v)?, &at_origin(ch, &u, w)?))
}

pub fn complex_structure(ch: &Characteristic, x: &CMat, v: &CMat) -> Result<CMat> {
    let u = frame(ch, x)?;
    let v0 = at_origin(ch, &u, v)?;
    Ok(mat::conj_by(&u, &j_origin(ch, &v0)))
}

/// Omega(v, w) = (v, J w).
pub fn kaehler_form(ch: &Characteristic, x: &CMat, v: &CMat, w: &CMat) -> Result<f64> {
    let u = frame(ch, x)?;
    let v0 = at_origin(ch, &u, v)?;
    let w0 = at_origin(ch, &u, w)?;
    Ok(metric_origin(ch, &v0, &j_origin(ch, &w0)))
}

/// Induced field A~(x) = [A, x].
pub fn induced(a: &CMat, x: &CMat) -> CMat {
    mat::comm(a, x)
}

/// R_w0(Ad(u) H0) = Ad(u)(-H0), a point of F_{H0*} = Ad(K)(-H0).
pub fn r_w0_map(ch: &Characteristic, x: &CMat) -> Result<CMat> {
    let u = frame(ch, x)?;
    let y = mat::herm(&mat::conj_by(&u, &(-ch.h0_mat())));
    let amb = mat::dist(&y, &(-x));
    if amb > 1e-9 * ch.scale().max(1.0) {
        return Err(Error::Internal(format!("R_w0 depends on the frame: {amb:e}")));
    }
    Ok(y)
}

/// Pushforward of a tangent v at x: lift v = A~(x) with A in u(n), return A~(R x).
pub fn d_r_w0(ch: &Characteristic, x: &CMat, v: &CMat) -> Result<CMat> {
    let u = frame(ch, x)?;
    let (nv, resid) = lift_tangent(ch, &u, v);
    if resid > 1e-8 {
        return Err(Error::NotTangent(resid));
    }
    let a = &nv - nv.adjoint();
    Ok(induced(&a, &r_w0_map(ch, x)?))
}

fn tangent_basis(ch: &Characteristic, x: &CMat) -> Result<Vec<CMat>> {
    let u = frame(ch, x)?;
    let basis = compact_basis(ch.n);
    Ok(basis.iter().map(|a| induced_flag(ch, &u, a)).collect())
}

pub fn compact_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in i + 1..n {
            let (a, z) = crate::liealg::weyl_basis_vectors(n, i, j).expect("i < j");
            out.push(a);
            out.push(z);
        }
    }
    for i in 0..n - 1 {
        out.push((mat::unit(n, i, i) - mat::unit(n, i + 1, i + 1)) * I);
    }
    out
}

/// max || dR(J v) + sign J*(dR v) || over sampled points and tangent bases.
pub fn antiholomorphy_residual_signed(ch: &Characteristic, samples: usize, seed: u64, sign: f64) -> Result<f64> {
    let chs = ch.dual();
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0xA11, s as u64);
        let (x, _) = sampling::sample_flag_point(ch, &mut rng);
        let y = r_w0_map(ch, &x)?;
        for v in tangent_basis(ch, &x)? {
            let lhs = d_r_w0(ch, &x, &complex_structure(ch, &x, &v)?)?;
            let rhs = complex_structure(&chs, &y, &d_r_w0(ch, &x, &v)?)?;
            worst = worst.max(mat::fro(&(lhs + rhs * cr(sign))));
        }
    }
    Ok(worst)
}

pub fn antiholomorphy_residual(ch: &Characteristic, samples: usize, seed: u64) -> Result<f64> {
    antiholomorphy_residual_signed(ch, samples, seed, 1.0)
}

/// max |scale (dR v, dR w)* - (v, w)|.
pub fn isometry_residual_scaled(ch: &Characteristic, samples: usize, seed: u64, scale: f64) -> Result<f64> {
    let chs = ch.dual();
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0x150, s as u64);
        let (x, _) = sampling::sample_flag_point(ch, &mut rng);
        let y = r_w0_map(ch, &x)?;
        let basis = tangent_basis(ch, &x)?;
        let pushed: Vec<CMat> = basis.iter().map(|v| d_r_w0(ch, &x, v)).collect::<Result<_>>()?;
        for a in 0..basis.len() {
            for b in a..basis.len() {
                let g = borel_metric(ch, &x, &basis[a], &basis[b])?;
                let gs = borel_metric(&chs, &y, &pushed[a], &pushed[b])?;
                worst = worst.max((scale * gs - g).abs());
            }
        }
    }
    Ok(worst)
}

pub fn isometry_residual(ch: &Characteristic, samples: usize, seed: u64) -> Result<f64> {
    isometry_residual_scaled(ch, samples, seed, 1.0)
}

/// max |Omega*(dR v, dR w) + Omega(v, w)|: R_w0 pulls Omega* back to -Omega.
pub fn antisymplectic_residual(ch: &Characteristic, samples: usize, seed: u64) -> Result<f64> {
    let chs = ch.dual();
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0xA5, s as u64);
        let (x, _) = sampling::sample_flag_point(ch, &mut rng);
        let y = r_w0_map(ch, &x)?;
        let basis = tangent_basis(ch, &x)?;
        let pushed: Vec<CMat> = basis.iter().map(|v| d_r_w0(ch, &x, v)).collect::<Result<_>>()?;
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let o = kaehler_form(ch, &x, &basis[a], &basis[b])?;
                let os = kaehler_form(&chs, &y, &pushed[a], &pushed[b])?;
                worst = worst.max((os + o).abs());
            }
        }
    }
    Ok(worst)
}

/// FD probe of dOmega on the induced fields of A1, A2, A3 in u(n).
pub fn kaehler_closedness(ch: &Characteristic, x: &CMat, a: [&CMat; 3], h: f64) -> Result<f64> {
    let om = |p: &CMat, b: &CMat, c: &CMat| kaehler_form(ch, p, &induced(b, p), &induced(c, p));
    let deriv = |d: &CMat, b: &CMat, c: &CMat| -> Result<f64> {
        let xp = mat::herm(&mat::conj_by(&mat::expm(&(d * cr(h))), x));
        let xm = mat::herm(&mat::conj_by(&mat::expm(&(d * cr(-h))), x));
        Ok((om(&xp, b, c)? - om(&xm, b, c)?) / (2.0 * h))
    };
    // [A~, B~] = -[A, B]~ for the left action
    let br = |p: &CMat, q: &CMat| -mat::comm(p, q);
    let [a1, a2, a3] = a;
    let val = deriv(a1, a2, a3)? - deriv(a2, a1, a3)? + deriv(a3, a1, a2)?
        - om(x, &br(a1, a2), a3)?
        + om(x, &br(a1, a3), a2)?
        - om(x, &br(a2, a3), a1)?;
    Ok(val.abs())
}

/// Graph of k1 o m o R_w0 o k2 (m = I when absent).
#[derive(Debug, Clone)]
pub struct GraphSpec {
    pub k1: CMat,
    pub k2: CMat,
    pub m: Option<CMat>,
}

impl GraphSpec {
    pub fn plain(n: usize) -> Self {
        GraphSpec {
            k1: mat::eye(n),
            k2: mat::eye(n),
            m: None,
        }
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        GraphSpec {
            k1: sampling::sample_unitary(rng, n),
            k2: sampling::sample_unitary(rng, n),
            m: None,
        }
    }

    pub fn torus(m: CMat) -> Self {
        let n = m.nrows();
        GraphSpec {
            k1: mat::eye(n),
            k2: mat::eye(n),
            m: Some(m),
        }
    }

    /// k1 m k2, using that R_w0 commutes with K.
    pub fn k_eff(&self) -> CMat {
        match &self.m {
            Some(m) => &self.k1 * m * &self.k2,
            None => &self.k1 * &self.k2,
        }
    }
}

pub fn graph_map(ch: &Characteristic, spec: &GraphSpec, x: &CMat) -> Result<CMat> {
    let moved = mat::herm(&mat::conj_by(&spec.k2, x));
    let r = r_w0_map(ch, &moved)?;
    let k1m = match &spec.m {
        Some(m) => &spec.k1 * m,
        None => spec.k1.clone(),
    };
    Ok(mat::herm(&mat::conj_by(&k1m, &r)))
}

/// Independent pairs (A~(x), (Ad(k_eff) A)~(y)) spanning the graph tangent space.
pub fn graph_tangent_basis(ch: &Characteristic, spec: &GraphSpec, x: &CMat) -> Result<Vec<(CMat, CMat)>> {
    let y = graph_map(ch, spec, x)?;
    let ke = spec.k_eff();
    let pairs: Vec<(CMat, CMat)> = compact_basis(ch.n)
        .into_iter()
        .map(|a| {
            let b = mat::conj_by(&ke, &a);
            (induced(&a, x), induced(&b, &y))
        })
        .collect();
    let target = 2 * ch.dim_n_plus();
    let kept = rank_filter(&pairs);
    if kept.len() != target {
        return Err(Error::Internal(format!(
            "graph tangent rank {} != {target}",
            kept.len()
        )));
    }
    Ok(kept)
}

fn pair_vec(p: &(CMat, CMat)) -> Vec<f64> {
    let mut v = mat::realify(&p.0);
    v.extend(mat::realify(&p.1));
    v
}

fn rank_filter(pairs: &[(CMat, CMat)]) -> Vec<(CMat, CMat)> {
    let mut kept: Vec<(CMat, CMat)> = Vec::new();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for p in pairs {
        cols.push(pair_vec(p));
        let m = nalgebra::DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
        if mat::rank(&m, 1e-8) == cols.len() {
            kept.push(p.clone());
        } else {
            cols.pop();
        }
    }
    kept
}

/// Rank of the realified span of the graph tangents (all generators).
pub fn graph_tangent_rank(ch: &Characteristic, spec: &GraphSpec, x: &CMat) -> Result<usize> {
    let y = graph_map(ch, spec, x)?;
    let ke = spec.k_eff();
    let cols: Vec<Vec<f64>> = compact_basis(ch.n)
        .into_iter()
        .map(|a| pair_vec(&(induced(&a, x), induced(&mat::conj_by(&ke, &a), &y))))
        .collect();
    let m = nalgebra::DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
    Ok(mat::rank(&m, 1e-8))
}

fn product_form_residual(
    ch: &Characteristic,
    chs: &Characteristic,
    x: &CMat,
    y: &CMat,
    pairs: &[(CMat, CMat)],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let o = kaehler_form(ch, x, &pairs[a].0, &pairs[b].0)?;
            let os = kaehler_form(chs, y, &pairs[a].1, &pairs[b].1)?;
            worst = worst.max((o + os).abs());
        }
    }
    Ok(worst)
}

/// max |Omega(v1, v2) + Omega*(w1, w2)| over graph tangents at sampled points.
pub fn lagrangian_residual(ch: &Characteristic, spec: &GraphSpec, samples: usize, seed: u64) -> Result<f64> {
    let chs = ch.dual();
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0x1A6, s as u64);
        let (x, _) = sampling::sample_flag_point(ch, &mut rng);
        let y = graph_map(ch, spec, &x)?;
        let pairs = graph_tangent_basis(ch, spec, &x)?;
        worst = worst.max(product_form_residual(ch, &chs, &x, &y, &pairs)?);
    }
    Ok(worst)
}

/// Same residual for the graph of the identity of a self-dual flag (not Lagrangean).
pub fn identity_graph_residual(ch: &Characteristic, samples: usize, seed: u64) -> Result<f64> {
    let chs = ch.dual();
    if chs.h0.iter().zip(&ch.h0).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(crate::error::contract("identity graph needs a self-dual flag"));
    }
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0x1D, s as u64);
        let (x, _) = sampling::sample_flag_point(ch, &mut rng);
        let pairs: Vec<(CMat, CMat)> = compact_basis(ch.n)
            .into_iter()
            .map(|a| (induced(&a, &x), induced(&a, &x)))
            .collect();
        worst = worst.max(product_form_residual(ch, &chs, &x, &x, &rank_filter(&pairs))?);
    }
    Ok(worst)
}

/// ker eps = v^perp, i.e. eps (or rho*(m)^{-1} eps) proportional to conj(v).
pub fn graph_rep_membership(rep: &ExteriorRep, el: &RepElement, m: Option<&CMat>) -> bool {
    let eps: CVec = match m {
        Some(m) => rep.group(m).transpose() * &el.eps,
        None => el.eps.clone(),
    };
    let vc = el.v.map(|z| z.conj());
    let nv = vc.norm_squared();
    let ne = eps.norm();
    if nv == 0.0 || ne == 0.0 {
        return false;
    }
    let coef: C64 = vc.dotc(&eps) / nv;
    let resid = (&eps - &vc * coef).norm();
    resid <= 1e-8 * ne
}

/// SL(2): the line map of r = w~ acting on C^2, (x, y) -> (-y, x).
pub fn sl2_r(l: (C64, C64)) -> (C64, C64) {
    (-l.1, l.0)
}

/// SL(2): m o R_w on lines, (x, y) -> (conj y, conj x).
pub fn sl2_m_rw(l: (C64, C64)) -> (C64, C64) {
    (l.1.conj(), l.0.conj())
}

/// Fixed lines of a line map on CP^1 found from a 10 x 10 grid of starting
/// points by Newton's method in the affine chart (1, z).
pub fn fixed_lines_grid<F: Fn((C64, C64)) -> (C64, C64)>(f: F) -> Vec<(C64, C64)> {
    let g = |z: C64| -> Option<C64> {
        let (a, b) = f((cr(1.0), z));
        if a.norm() < 1e-14 {
            None
        } else {
            Some(b / a - z)
        }
    };
    let mut roots: Vec<C64> = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            let mut z = c(-2.25 + 0.5 * i as f64, -2.25 + 0.5 * j as f64);
            for _ in 0..60 {
                let Some(gz) = g(z) else { break };
                let h = 1e-7;
                let (Some(gp), Some(gq)) = (g(z + cr(h)), g(z + c(0.0, h))) else { break };
                // complex derivative; non-holomorphic maps will not converge and are dropped
                let dz = ((gp - gz) / h + (gq - gz) / c(0.0, h)) / 2.0;
                if dz.norm() < 1e-14 {
                    break;
                }
                z -= gz / dz;
            }
            if let Some(gz) = g(z) {
                if gz.norm() < 1e-12 && !roots.iter().any(|r| (r - z).norm() < 1e-8) {
                    roots.push(z);
                }
            }
        }
    }
    let mut out: Vec<(C64, C64)> = roots.into_iter().map(|z| (cr(1.0), z)).collect();
    // the point at infinity (0, 1)
    let inf = f((cr(0.0), cr(1.0)));
    if inf.0.norm() < 1e-14 {
        out.push((cr(0.0), cr(1.0)));
    }
    out
}

/// Max distance between graph(R_w0) points and the diagonal K-orbit of
/// (x0, w0~ y0), both built from the same unitaries.
pub fn graph_orbit_deviation(ch: &Characteristic, samples: usize, seed: u64) -> Result<f64> {
    let chs = ch.dual();
    let mut worst = 0.0f64;
    for s in 0..samples {
        let mut rng = sampling::sample_rng(seed, 0x60, s as u64);
        let u = sampling::sample_unitary(&mut rng, ch.n);
        let pair = crate::flagprod::embed(ch, &u)?;
        let (px, py) = (pair.first.hermitian(ch), pair.second.hermitian(&chs));
        let x = mat::herm(&mat::conj_by(&u, ch.h0_ref()));
        let y = r_w0_map(ch, &x)?;
        worst = worst.max(mat::dist(&px, &x)).max(mat::dist(&py, &y));
    }
    Ok(worst)
}
