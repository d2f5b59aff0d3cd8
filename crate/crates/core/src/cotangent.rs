//! The cotangent model T*F: points are (base, W) with base = Ad(k) H0 and
//! W in Ad(k) n^+, the covector being v -> Re B(W, N) where N in Ad(k) n^-
//! induces v at the base.
//!
//! Induced fields use the left action: Z~(x) = d/dt e^{tZ} . x, so that on the
//! orbit itself Z~(Y) = [Z, Y].

use std::sync::OnceLock;

use crate::error::{contract, Error, Result};
use crate::liealg::{cartan_split, AlgebraCtx};
use crate::mat::{self, cr, CMat, I};
use crate::orbit::{self, minus_part, plus_part, Characteristic, OrbitPoint};
use crate::weylgrp::ThetaSet;

#[derive(Debug, Clone)]
pub struct CotangentPoint {
    pub base: CMat,
    pub w: CMat,
    /// Frame with base = Ad(k) H0.
    pub k: CMat,
}

#[derive(Debug, Clone)]
pub struct TangentOfCotangent {
    pub dbase: CMat,
    pub dw: CMat,
}

impl TangentOfCotangent {
    pub fn norm(&self) -> f64 {
        (self.dbase.norm_squared() + self.dw.norm_squared()).sqrt()
    }

    pub fn sub(&self, o: &Self) -> Self {
        TangentOfCotangent {
            dbase: &self.dbase - &o.dbase,
            dw: &self.dw - &o.dw,
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        TangentOfCotangent {
            dbase: &self.dbase * cr(a),
            dw: &self.dw * cr(a),
        }
    }

    pub fn realify(&self) -> Vec<f64> {
        let mut v = mat::realify(&self.dbase);
        v.extend(mat::realify(&self.dw));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plus,
    Minus,
}

impl CotangentPoint {
    /// Validates W against the frame recovered from `base`.
    pub fn new(ch: &Characteristic, base: &CMat, w: &CMat) -> Result<Self> {
        let k = orbit::hermitian_frame(ch, base, 1e-8)?;
        let w0 = k.adjoint() * w * &k;
        let off = mat::fro(&(&w0 - plus_part(ch, &w0)));
        if off > 1e-9 * mat::fro(w).max(1.0) {
            return Err(contract(format!("W not in Ad(k) n+: residual {off:e}")));
        }
        Ok(CotangentPoint {
            base: mat::herm(base),
            w: w.clone(),
            k,
        })
    }

    /// (Ad(k) H0, Ad(k) X0), projecting X0 onto n^+.
    pub fn from_frame(ch: &Characteristic, k: &CMat, x0: &CMat) -> Self {
        let x0 = plus_part(ch, x0);
        CotangentPoint {
            base: mat::herm(&mat::conj_by(k, ch.h0_ref())),
            w: mat::conj_by(k, &x0),
            k: k.clone(),
        }
    }

    pub fn zero_at(ch: &Characteristic, k: &CMat) -> Self {
        Self::from_frame(ch, k, &mat::zeros(ch.n))
    }

    /// b_Theta: zero covector at the origin.
    pub fn origin(ch: &Characteristic) -> Self {
        Self::zero_at(ch, &mat::eye(ch.n))
    }

    /// W seen from the frame, in n^+.
    pub fn w0(&self) -> CMat {
        self.k.adjoint() * &self.w * &self.k
    }

    pub fn dist(&self, o: &Self) -> f64 {
        (mat::dist(&self.base, &o.base).powi(2) + mat::dist(&self.w, &o.w).powi(2)).sqrt()
    }
}

/// Z~(x) at x = Ad(k) H0: Ad(k)[Zm - Zm*, H0] with Zm the n^- part of Ad(k*)Z.
pub fn induced_flag(ch: &Characteristic, k: &CMat, z: &CMat) -> CMat {
    let z0 = k.adjoint() * z * k;
    let zm = minus_part(ch, &z0);
    let a = &zm - zm.adjoint();
    mat::conj_by(k, &mat::comm(&a, ch.h0_ref()))
}

/// N in Ad(k) n^- with N~(x) = v, and the relative residual of that identity.
pub fn lift_tangent(ch: &Characteristic, k: &CMat, v: &CMat) -> (CMat, f64) {
    let v0 = k.adjoint() * v * k;
    let n = ch.n;
    let mut n0 = mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if ch.block_of(i) > ch.block_of(j) {
                n0[(i, j)] = v0[(i, j)] / (ch.h0[j] - ch.h0[i]);
            }
        }
    }
    let back = mat::comm(&(&n0 - n0.adjoint()), ch.h0_ref());
    let resid = mat::dist(&back, &v0) / mat::fro(v).max(1.0);
    (mat::conj_by(k, &n0), resid)
}

/// xi(v) = Re B(W, N(v)).
pub fn pairing(ctx: &AlgebraCtx, ch: &Characteristic, xi: &CotangentPoint, v: &CMat) -> Result<f64> {
    let (nv, resid) = lift_tangent(ch, &xi.k, v);
    if resid > 1e-8 {
        return Err(Error::NotTangent(resid));
    }
    Ok(ctx.re_b(&xi.w, &nv))
}

/// en_Z(xi) = xi(A~(x)) + xi(S~(x)) + Re B(x, S) for Z = A + S.
pub fn energy(ctx: &AlgebraCtx, ch: &Characteristic, z: &CMat, xi: &CotangentPoint) -> f64 {
    let (a, s) = cartan_split(z);
    let lifted = |y: &CMat| {
        let (nv, _) = lift_tangent(ch, &xi.k, &induced_flag(ch, &xi.k, y));
        ctx.re_b(&xi.w, &nv)
    };
    lifted(&a) + lifted(&s) + ctx.re_b(&xi.base, &s)
}

/// Moment map by the Killing-Gram solve of Re B(m, Z) = en_Z(xi).
pub fn mu(ctx: &AlgebraCtx, ch: &Characteristic, xi: &CotangentPoint) -> CMat {
    ctx.riesz(|z| energy(ctx, ch, z, xi))
}

/// Closed form of the moment map: base + W.
pub fn mu_closed(xi: &CotangentPoint) -> CMat {
    &xi.base + &xi.w
}

pub fn iota(ch: &Characteristic, y: &OrbitPoint) -> CotangentPoint {
    CotangentPoint::from_frame(ch, &y.k, &y.x)
}

pub fn iota_raw(ch: &Characteristic, y: &CMat) -> Result<CotangentPoint> {
    Ok(iota(ch, &orbit::factorize(ch, y)?))
}

fn n_minus_real_basis(ch: &Characteristic) -> Vec<CMat> {
    let n = ch.n;
    let mut out = Vec::new();
    for (i, j) in ch.plus_positions() {
        let e = mat::unit(n, j, i);
        out.push(e.clone());
        out.push(e * I);
    }
    out
}

/// Vertical field of S in Hermitian directions: the D in Ad(k) n^+ with
/// Re B(D, N) = -Re B(N~(x), S) for every N in Ad(k) n^-.
pub fn vertical_field(ctx: &AlgebraCtx, ch: &Characteristic, k: &CMat, s: &CMat) -> Result<CMat> {
    let s0 = k.adjoint() * s * k;
    let tests = n_minus_real_basis(ch);
    let m = tests.len();
    if m == 0 {
        return Ok(mat::zeros(ch.n));
    }
    // unknowns: coefficients on the conjugate-transposed basis of n^+
    let unknowns: Vec<CMat> = tests.iter().map(|t| t.adjoint()).collect();
    let g = nalgebra::DMatrix::<f64>::from_fn(m, m, |b, a| ctx.re_b(&unknowns[a], &tests[b]));
    let rhs = nalgebra::DVector::<f64>::from_fn(m, |b, _| {
        let t = &tests[b];
        let nt = mat::comm(&(t - t.adjoint()), ch.h0_ref());
        -ctx.re_b(&nt, &s0)
    });
    let svd = g.clone().svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Internal(format!("vertical solve: {e}")))?;
    let resid = (&g * &coef - &rhs).norm();
    if resid > 1e-8 * rhs.norm().max(1.0) {
        return Err(Error::Internal(format!("vertical least squares residual {resid:e}")));
    }
    let mut d0 = mat::zeros(ch.n);
    for (a, u) in unknowns.iter().enumerate() {
        d0 += u * cr(coef[a]);
    }
    Ok(mat::conj_by(k, &d0))
}

/// Closed form of [`vertical_field`]: Ad(k)[2 S0^+, H0].
pub fn vertical_field_closed(ch: &Characteristic, k: &CMat, s: &CMat) -> CMat {
    let s0 = k.adjoint() * s * k;
    let sp = plus_part(ch, &s0) * cr(2.0);
    mat::conj_by(k, &mat::comm(&sp, ch.h0_ref()))
}

/// theta(Z) = Z# ± V_S at xi.
pub fn theta_field(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    z: &CMat,
    xi: &CotangentPoint,
    variant: Variant,
) -> Result<TangentOfCotangent> {
    theta_at(ctx, ch, z, &xi.base, &xi.w, &xi.k, variant)
}

fn theta_at(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    z: &CMat,
    _base: &CMat,
    w: &CMat,
    k: &CMat,
    variant: Variant,
) -> Result<TangentOfCotangent> {
    let (_, s) = cartan_split(z);
    let v = vertical_field(ctx, ch, k, &s)?;
    let sign = match variant {
        Variant::Plus => 1.0,
        Variant::Minus => -1.0,
    };
    Ok(TangentOfCotangent {
        dbase: induced_flag(ch, k, z),
        dw: mat::comm(z, w) + v * cr(sign),
    })
}

fn loose_frame(h: &CMat) -> CMat {
    let (_, mut k) = mat::herm_eigen(h);
    mat::fix_det_last_column(&mut k);
    k
}

/// Re-project (base, W) onto the model; returns the point and the base drift.
fn renormalize(ch: &Characteristic, base: &CMat, w: &CMat) -> (CotangentPoint, f64) {
    let k = loose_frame(base);
    let w0 = k.adjoint() * w * &k;
    let p = CotangentPoint::from_frame(ch, &k, &w0);
    let drift = mat::dist(&p.base, base);
    (p, drift)
}

/// RK4 integration of theta(Z) for time t.
pub fn flow(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    z: &CMat,
    xi: &CotangentPoint,
    t: f64,
    steps: usize,
) -> Result<CotangentPoint> {
    flow_variant(ctx, ch, z, xi, t, steps, Variant::Plus)
}

pub fn flow_variant(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    z: &CMat,
    xi: &CotangentPoint,
    t: f64,
    steps: usize,
    variant: Variant,
) -> Result<CotangentPoint> {
    if !t.is_finite() {
        return Err(contract("flow time must be finite"));
    }
    if t == 0.0 {
        return Ok(xi.clone());
    }
    if steps == 0 {
        return Err(contract("flow needs at least one step"));
    }
    let dt = t / steps as f64;
    let tol = 1e-6 * ch.scale().max(1.0);
    let mut cur = xi.clone();
    let eval = |b: &CMat, w: &CMat| -> Result<(CMat, CMat)> {
        let k = loose_frame(b);
        let f = theta_at(ctx, ch, z, b, w, &k, variant)?;
        Ok((f.dbase, f.dw))
    };
    for _ in 0..steps {
        let (b, w) = (&cur.base, &cur.w);
        let h = cr(dt);
        let h2 = cr(dt / 2.0);
        let (k1b, k1w) = eval(b, w)?;
        let (k2b, k2w) = eval(&(b + &k1b * h2), &(w + &k1w * h2))?;
        let (k3b, k3w) = eval(&(b + &k2b * h2), &(w + &k2w * h2))?;
        let (k4b, k4w) = eval(&(b + &k3b * h), &(w + &k3w * h))?;
        let sixth = cr(dt / 6.0);
        let nb = b + (k1b + &k2b * cr(2.0) + &k3b * cr(2.0) + k4b) * sixth;
        let nw = w + (k1w + &k2w * cr(2.0) + &k3w * cr(2.0) + k4w) * sixth;
        if nb.iter().chain(nw.iter()).any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::Diverged(f64::INFINITY));
        }
        let (p, drift) = renormalize(ch, &nb, &nw);
        if drift > tol {
            return Err(Error::Diverged(drift));
        }
        cur = p;
    }
    Ok(cur)
}

/// Exact cotangent lift of g: (g.x, Ad(g) W), with g.x read off from QR of g k.
pub fn lift_linear(ch: &Characteristic, g: &CMat, xi: &CotangentPoint) -> Result<CotangentPoint> {
    let (mut k2, _) = mat::qr_positive(&(g * &xi.k));
    mat::fix_det_last_column(&mut k2);
    let w = mat::ad_group(g, &xi.w)?;
    let w0 = k2.adjoint() * w * &k2;
    Ok(CotangentPoint::from_frame(ch, &k2, &w0))
}

/// Exact action g . xi = iota(Ad(g) mu(xi)).
pub fn act(ch: &Characteristic, g: &CMat, xi: &CotangentPoint) -> Result<CotangentPoint> {
    let y = mat::ad_group(g, &mu_closed(xi))?;
    iota_raw(ch, &y)
}

/// Vertical translation by t V_S.
pub fn vertical_shift(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    s: &CMat,
    xi: &CotangentPoint,
    t: f64,
) -> Result<CotangentPoint> {
    let v = vertical_field(ctx, ch, &xi.k, s)?;
    Ok(CotangentPoint {
        base: xi.base.clone(),
        w: &xi.w + v * cr(t),
        k: xi.k.clone(),
    })
}

/// c(g) = mu(g . xi) - Ad(g) mu(xi) for g = exp(Z1) ... exp(Zm), using flows.
pub fn cocycle(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    word: &[CMat],
    xi: &CotangentPoint,
    dt: f64,
) -> Result<CMat> {
    if !(dt > 0.0) {
        return Err(contract("dt must be positive"));
    }
    let steps = (1.0 / dt).round().max(1.0) as usize;
    let mut g = mat::eye(ch.n);
    let mut cur = xi.clone();
    for z in word.iter().rev() {
        cur = flow(ctx, ch, z, &cur, 1.0, steps)?;
    }
    for z in word {
        g *= mat::expm(z);
    }
    Ok(mu(ctx, ch, &cur) - mat::ad_group(&g, &mu(ctx, ch, xi))?)
}

struct Chart {
    a: [CMat; 2],
    d: [CMat; 2],
}

fn chart(ch: &Characteristic, xi: &CotangentPoint, v: [&TangentOfCotangent; 2]) -> Chart {
    let mk = |t: &TangentOfCotangent| {
        let (nv, _) = lift_tangent(ch, &xi.k, &t.dbase);
        let a = &nv - nv.adjoint();
        let d = &t.dw - mat::comm(&a, &xi.w);
        let d0 = xi.k.adjoint() * d * &xi.k;
        (a, mat::conj_by(&xi.k, &plus_part(ch, &d0)))
    };
    let (a1, d1) = mk(v[0]);
    let (a2, d2) = mk(v[1]);
    Chart {
        a: [a1, a2],
        d: [d1, d2],
    }
}

/// lambda(d/ds_j) at chart coordinates (s1, s2).
fn tautological(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    xi: &CotangentPoint,
    c: &Chart,
    s1: f64,
    s2: f64,
    j: usize,
) -> f64 {
    let e1 = mat::expm(&(&c.a[0] * cr(s1)));
    let e2 = mat::expm(&(&c.a[1] * cr(s2)));
    let g = &e1 * &e2;
    let frame = &g * &xi.k;
    let x = mat::conj_by(&frame, ch.h0_ref());
    let w = mat::conj_by(&g, &(&xi.w + &c.d[0] * cr(s1) + &c.d[1] * cr(s2)));
    let gen = if j == 0 {
        c.a[0].clone()
    } else {
        mat::conj_by(&e1, &c.a[1])
    };
    let dx = mat::comm(&gen, &x);
    let (nv, _) = lift_tangent(ch, &frame, &dx);
    ctx.re_b(&w, &nv)
}

pub const FD_H: f64 = 1e-5;

/// Omega = -d lambda, so that i_{X_F} Omega = dF; central differences in an
/// exponential chart around xi.
pub fn canonical_two_form(
    ctx: &AlgebraCtx,
    ch: &Characteristic,
    xi: &CotangentPoint,
    v1: &TangentOfCotangent,
    v2: &TangentOfCotangent,
) -> f64 {
    let c = chart(ch, xi, [v1, v2]);
    let h = FD_H;
    let d1l2 = (tautological(ctx, ch, xi, &c, h, 0.0, 1) - tautological(ctx, ch, xi, &c, -h, 0.0, 1)) / (2.0 * h);
    let d2l1 = (tautological(ctx, ch, xi, &c, 0.0, h, 0) - tautological(ctx, ch, xi, &c, 0.0, -h, 0)) / (2.0 * h);
    -(d1l2 - d2l1)
}

/// Point of the curve s -> (Ad(e^{sA}) x, Ad(e^{sA})(W + s D)) with velocity v.
pub fn exp_chart(ch: &Characteristic, xi: &CotangentPoint, v: &TangentOfCotangent, s: f64) -> CotangentPoint {
    let c = chart(ch, xi, [v, v]);
    let g = mat::expm(&(&c.a[0] * cr(s)));
    let k = &g * &xi.k;
    let w = mat::conj_by(&g, &(&xi.w + &c.d[0] * cr(s)));
    let w0 = k.adjoint() * w * &k;
    CotangentPoint::from_frame(ch, &k, &w0)
}

/// d iota along the orbit curve Ad(e^{-tZ}) Y, whose velocity is [Y, Z].
pub fn d_iota(ch: &Characteristic, y: &CMat, z: &CMat, h: f64) -> Result<TangentOfCotangent> {
    let at = |t: f64| -> Result<CotangentPoint> {
        let g = mat::expm(&(z * cr(-t)));
        iota_raw(ch, &mat::ad_group(&g, y)?)
    };
    let p = at(h)?;
    let m = at(-h)?;
    Ok(TangentOfCotangent {
        dbase: (&p.base - &m.base) / cr(2.0 * h),
        dw: (&p.w - &m.w) / cr(2.0 * h),
    })
}

/// Ratio sign of Omega(d iota [Y,Z1], d iota [Y,Z2]) to Re B(Y, [Z1, Z2]) at Y = H0,
/// for Z1 = E_ji, Z2 = E_ij on the first root between distinct blocks.
pub fn calibrate_at(ctx: &AlgebraCtx, ch: &Characteristic) -> Result<f64> {
    let (i, j) = *ch
        .plus_positions()
        .first()
        .ok_or_else(|| Error::Internal("flag is a point".into()))?;
    let n = ch.n;
    let z1 = mat::unit(n, j, i);
    let z2 = mat::unit(n, i, j);
    let y = ch.h0_mat();
    let v1 = d_iota(ch, &y, &z1, FD_H)?;
    let v2 = d_iota(ch, &y, &z2, FD_H)?;
    let om = canonical_two_form(ctx, ch, &CotangentPoint::origin(ch), &v1, &v2);
    let w = ctx.re_b(&y, &mat::comm(&z1, &z2));
    if w.abs() < 1e-12 || (om.abs() - w.abs()).abs() > 1e-4 * w.abs() {
        return Err(Error::Internal(format!(
            "calibration mismatch: canonical {om}, kks {w}"
        )));
    }
    Ok((om / w).signum())
}

/// Global KKS sign, calibrated once on sl(2) at H0.
pub fn calibrated_sign() -> f64 {
    static SIGN: OnceLock<f64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let ctx = AlgebraCtx::with_sign(2, 1.0).expect("sl(2)");
        let ch = Characteristic::canonical(2, &ThetaSet::empty()).expect("H0");
        calibrate_at(&ctx, &ch).expect("sl(2) calibration")
    })
}

/// Flow-commutator bracket: with C(s) = P_s Q_s P_{-s} Q_{-s},
/// returns (C(s) xi + C(-s) xi - 2 xi) / (2 s^2).
pub fn commutator_fd<P, Q>(xi: &CotangentPoint, p: P, q: Q, s: f64) -> Result<TangentOfCotangent>
where
    P: Fn(f64, &CotangentPoint) -> Result<CotangentPoint>,
    Q: Fn(f64, &CotangentPoint) -> Result<CotangentPoint>,
{
    let c = |s: f64| -> Result<CotangentPoint> {
        let a = q(-s, xi)?;
        let b = p(-s, &a)?;
        let c = q(s, &b)?;
        p(s, &c)
    };
    let plus = c(s)?;
    let minus = c(-s)?;
    let den = cr(2.0 * s * s);
    Ok(TangentOfCotangent {
        dbase: (&plus.base + &minus.base - &xi.base * cr(2.0)) / den,
        dw: (&plus.w + &minus.w - &xi.w * cr(2.0)) / den,
    })
}
