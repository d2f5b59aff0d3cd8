use nalgebra::linalg::Schur;
use rand::Rng;

use super::Env;
use crate::cotangent::{self, CotangentPoint, TangentOfCotangent, Variant};
use crate::error::Result;
use crate::flagprod::{self, NestedFlag};
use crate::lagrangian::{self, GraphSpec};
use crate::liealg::{self, AlgebraCtx};
use crate::mat::{self, c, cr, CMat, C64};
use crate::orbit::{self, plus_part, Characteristic};
use crate::repmodel::{self, ExteriorRep, RepElement};
use crate::sampling::{self, SampleRng};
use crate::weylgrp::{self, ThetaSet, WeylElement};

const FLOW_DT: f64 = 1e-3;
const BRACKET_S: f64 = 1e-3;

fn rel(a: &CMat, b: &CMat) -> f64 {
    mat::dist(a, b) / mat::fro(b).max(1.0)
}

fn flag(b: bool) -> f64 {
    if b {
        0.0
    } else {
        1.0
    }
}

/// Real basis of the centralizer of H0 (block-diagonal part of sl(n)).
fn centralizer_basis(ctx: &AlgebraCtx, ch: &Characteristic) -> Vec<CMat> {
    ctx.real_basis()
        .into_iter()
        .filter(|z| {
            let (m, _, p) = orbit::parabolic_split(ch, z);
            mat::fro(&m) + mat::fro(&p) == 0.0
        })
        .collect()
}

fn sorted_eigen_re(m: &CMat) -> Vec<C64> {
    let t = Schur::new(m.clone()).unpack().1;
    let mut v: Vec<C64> = (0..m.nrows()).map(|i| t[(i, i)]).collect();
    v.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
    v
}

fn random_n_plus(rng: &mut SampleRng, ch: &Characteristic) -> CMat {
    plus_part(ch, &sampling::gaussian_complex(rng, ch.n, ch.n))
}

pub(crate) fn liealg(env: &mut Env) {
    let n = env.cfg.n;
    let ctx = env.ctx;

    let r = env.par_max("killing-oracle", env.samples(50), |rng| {
        let x = sampling::unit_traceless(rng, n);
        let y = sampling::unit_traceless(rng, n);
        let b = ctx.killing(&x, &y)?;
        let t = ctx.killing_ad_trace(&x, &y);
        Ok((b - t).norm() / (2.0 * n as f64))
    });
    env.check("killing-oracle", "Killing form vs trace of ad X ad Y", env.cfg.exact(1e-9), r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for &(i, j) in &ctx.roots {
            for &(k, l) in &ctx.roots {
                let v = ctx.killing(&mat::unit(n, i, j), &mat::unit(n, k, l))?;
                let expect = if (k, l) == (j, i) { 2.0 * n as f64 } else { 0.0 };
                worst = worst.max((v - cr(expect)).norm());
            }
        }
        Ok(worst)
    })();
    env.check("root-orthogonality", "root spaces pair only with their negatives", env.cfg.exact(1e-12), r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for (k, hk) in ctx.fundamental_h.iter().enumerate() {
            worst = worst.max(mat::dist(hk, &liealg::closed_form_h_mu(n, k + 1)));
            for (j, &a) in ctx.simple_roots.iter().enumerate() {
                let ha = ctx.h_alpha(a);
                let v = 2.0 * ctx.re_b(&ha, hk) / ctx.re_b(&ha, &ha);
                let delta = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((v - delta).abs());
            }
        }
        Ok(worst)
    })();
    env.check("fundamental-duality", "coroots dual to fundamental weights", env.cfg.exact(1e-10), r);

    let r = env.par_max("iwasawa", env.samples(100), |rng| {
        let g = sampling::sample_group_element(rng, n, 2.0);
        let f = liealg::iwasawa(&g)?;
        let mut worst = rel(&(&f.k * &f.a * &f.n_part), &g);
        worst = worst.max(mat::dist(&(f.k.adjoint() * &f.k), &mat::eye(n)));
        for i in 0..n {
            if !(f.a[(i, i)].re > 0.0) || f.a[(i, i)].im != 0.0 {
                return Ok(f64::INFINITY);
            }
            worst = worst.max((f.n_part[(i, i)] - cr(1.0)).norm());
            for j in 0..i {
                worst = worst.max(f.n_part[(i, j)].norm()).max(f.a[(i, j)].norm());
            }
        }
        Ok(worst)
    });
    env.check("iwasawa", "g = k a n recomposes with the right factor shapes", env.cfg.exact(1e-10), r);

    let r = (|| -> Result<f64> {
        let m = ctx.killing_gram.clone();
        let d = m.nrows();
        if d != 2 * (n * n - 1) || mat::rank(&m, 1e-12) != d {
            return Ok(1.0);
        }
        Ok(ctx.basis.iter().map(|e| e.trace().norm()).fold(0.0, f64::max))
    })();
    env.check("basis-nondegenerate", "traceless basis with nondegenerate real Gram", 0.0, r);
}

pub(crate) fn weyl(env: &mut Env) {
    let n = env.cfg.n;
    let reg = match Characteristic::canonical(n, &ThetaSet::empty()) {
        Ok(c) => c,
        Err(e) => {
            env.check("regular-characteristic", "regular element for the Weyl suite", 0.0, Err(e));
            return;
        }
    };
    let all = if n <= 5 { WeylElement::all(n) } else { Vec::new() };

    let r = (|| -> Result<f64> {
        let w0 = weylgrp::principal_involution(n);
        let top = n * (n - 1) / 2;
        let mut bad = flag(w0.inversions() == top && w0.compose(&w0) == WeylElement::identity(n));
        if !all.is_empty() {
            let longest: Vec<_> = all.iter().filter(|w| w.inversions() == top).collect();
            bad += flag(longest.len() == 1 && *longest[0] == w0);
        }
        Ok(bad)
    })();
    env.check("longest-element", "w0 is the unique element of maximal length", 0.0, r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        let w0t = weylgrp::representative(&weylgrp::principal_involution(n));
        for k in 1..n {
            let hk = mat::unit(n, k - 1, k - 1) - mat::unit(n, k, k);
            let hd = mat::unit(n, n - k - 1, n - k - 1) - mat::unit(n, n - k, n - k);
            worst = worst.max(mat::dist(&mat::conj_by(&w0t, &hk), &(-hd)));
        }
        for mask in 0..(1usize << (n - 1)) {
            let th = ThetaSet::new(n, (1..n).filter(|k| mask >> (k - 1) & 1 == 1))?;
            let back = weylgrp::dual_theta(&weylgrp::dual_theta(&th, n), n);
            worst += flag(back == th);
        }
        Ok(worst)
    })();
    env.check("dual-involution", "-w0 permutes the simple roots as an involution", env.cfg.exact(1e-12), r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        let h = &reg.h0;
        let els: Vec<WeylElement> = if all.is_empty() {
            let mut rng = sampling::sample_rng(env.seed_for("representative"), 0, 0);
            (0..50)
                .map(|_| {
                    let mut p: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        p.swap(i, rng.random_range(0..=i));
                    }
                    WeylElement::new(p)
                })
                .collect::<Result<_>>()?
        } else {
            all.clone()
        };
        for w in &els {
            let wt = weylgrp::representative(w);
            let moved = mat::conj_by(&wt, &mat::diag_real(h));
            let inv = w.inverse();
            let expect = mat::diag_real(&(0..n).map(|i| h[inv.perm[i]]).collect::<Vec<_>>());
            worst = worst
                .max(mat::dist(&moved, &expect))
                .max(mat::dist(&(wt.adjoint() * &wt), &mat::eye(n)))
                .max((wt.determinant() - cr(1.0)).norm());
        }
        Ok(worst)
    })();
    env.check("representative", "w~ in SU(n) permutes the diagonal", env.cfg.exact(1e-12), r);

    let reg_ref = &reg;
    let pick = |rng: &mut SampleRng| -> WeylElement {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        WeylElement::new(p).expect("permutation")
    };

    let r = env.par_max("right-action-composition", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(reg_ref, rng, 1.0)?;
        let w = pick(rng);
        let v = pick(rng);
        let yw = weylgrp::right_action(reg_ref, &p.y, &w)?;
        let back = weylgrp::right_action(reg_ref, &yw, &w.inverse())?;
        let twice = weylgrp::right_action(reg_ref, &yw, &v)?;
        let once = weylgrp::right_action(reg_ref, &p.y, &w.compose(&v))?;
        Ok(rel(&back, &p.y).max(rel(&twice, &once)))
    });
    env.check("right-action-composition", "R_v R_w = R_wv and R_w^-1 R_w = id", env.cfg.exact(1e-9), r);

    let r = env.par_max("right-action-commutes", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(reg_ref, rng, 1.0)?;
        let w = pick(rng);
        let a = sampling::anti_hermitian(rng, n);
        let t: f64 = rng.random();
        let g = mat::expm(&(a * cr(t)));
        let lhs = weylgrp::right_action(reg_ref, &mat::ad_group(&g, &p.y)?, &w)?;
        let rhs = mat::ad_group(&g, &weylgrp::right_action(reg_ref, &p.y, &w)?)?;
        Ok(rel(&lhs, &rhs))
    });
    env.check("right-action-commutes", "R_w commutes with the left K action", env.cfg.exact(1e-9), r);

    let r = env.par_max("right-action-phase", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(reg_ref, rng, 1.0)?;
        let w = pick(rng);
        let t = sampling::sample_torus(rng, n);
        let k2 = &p.k * &t;
        let x2 = t.adjoint() * &p.x * &t;
        let a = weylgrp::right_action_from_frame(reg_ref, &p.k, &p.x, &w)?;
        let b = weylgrp::right_action_from_frame(reg_ref, &k2, &x2, &w)?;
        Ok(rel(&a, &b))
    });
    env.check("right-action-phase", "R_w independent of eigenvector phases", env.cfg.exact(1e-9), r);
}

pub(crate) fn orbit(env: &mut Env) {
    let n = env.cfg.n;
    let (ctx, ch) = (env.ctx, env.ch);

    let r = env.par_max("fibre-affinity", env.samples(100), |rng| {
        let nn = random_n_plus(rng, ch);
        let g = mat::expm(&nn);
        let d = mat::ad_group(&g, ch.h0_ref())? - ch.h0_ref();
        Ok(rel(&plus_part(ch, &d), &d))
    });
    env.check("fibre-affinity", "Ad(exp N) H0 - H0 stays in n+", env.cfg.exact(1e-9), r);

    let r = env.par_max("factorize-recompose", env.samples(100), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let unit = mat::dist(&(p.k.adjoint() * &p.k), &mat::eye(n));
        let inplus = mat::dist(&plus_part(ch, &p.x), &p.x) / mat::fro(&p.y);
        Ok(rel(&p.recompose(ch), &p.y).max(unit).max(inplus))
    });
    env.check("factorize-recompose", "Y = k (H0 + X) k* with X in n+", env.cfg.exact(1e-9), r);

    let r = env.par_max("pi-equivariance", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let u = sampling::sample_unitary(rng, n);
        let lhs = orbit::project_pi(ch, &mat::conj_by(&u, &p.y))?;
        let rhs = mat::conj_by(&u, &orbit::project_pi(ch, &p.y)?);
        Ok(rel(&lhs, &rhs))
    });
    env.check("pi-equivariance", "projection to the flag commutes with K", env.cfg.exact(1e-9), r);

    let r = env.par_max("pi-fibres", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let other = orbit::OrbitPoint::from_parts(ch, p.k.clone(), random_n_plus(rng, ch));
        let a = orbit::project_pi(ch, &p.y)?;
        let b = orbit::project_pi(ch, &other.y)?;
        Ok(rel(&a, &b))
    });
    env.check("pi-fibres", "projection constant on Ad(k)(H0 + n+)", env.cfg.exact(1e-9), r);

    let r = (|| -> Result<f64> {
        let basis = ctx.real_basis();
        let d = basis.len();
        let g = nalgebra::DMatrix::<f64>::from_fn(d, d, |a, b| {
            orbit::kks_form(ctx, ch.h0_ref(), &basis[a], &basis[b])
        });
        let expect = 4 * ch.dim_n_plus();
        Ok((mat::rank(&g, 1e-10) as f64 - expect as f64).abs())
    })();
    env.check("kks-rank", "KKS form has full rank on the tangent space at H0", 0.0, r);

    let r = env.par_max("kks-invariance", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let g = sampling::sample_group_element(rng, n, 1.0);
        let z1 = sampling::unit_traceless(rng, n);
        let z2 = sampling::unit_traceless(rng, n);
        let a = orbit::kks_form(ctx, &p.y, &z1, &z2);
        let b = orbit::kks_form(
            ctx,
            &mat::ad_group(&g, &p.y)?,
            &mat::ad_group(&g, &z1)?,
            &mat::ad_group(&g, &z2)?,
        );
        Ok((a - b).abs() / a.abs().max(1.0))
    });
    env.check("kks-invariance", "KKS form is Ad(G)-invariant", env.cfg.exact(1e-9), r);
}

fn tangent_dist(a: &TangentOfCotangent, b: &TangentOfCotangent) -> f64 {
    a.sub(b).norm() / b.norm().max(1.0)
}

pub(crate) fn cotangent(env: &mut Env) {
    let n = env.cfg.n;
    let (ctx, ch) = (env.ctx, env.ch);

    let r = env.par_max("iota-mu-inverse", env.samples(100), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let xi = cotangent::iota(ch, &p);
        Ok(mat::dist(&cotangent::mu(ctx, ch, &xi), &p.y))
    });
    env.check("iota-mu-inverse", "mu and iota are mutually inverse", env.cfg.exact(1e-8), r);

    let r = env.par_max("mu-zero-section", env.samples(30), |rng| {
        let origin = mat::dist(&cotangent::mu(ctx, ch, &CotangentPoint::origin(ch)), ch.h0_ref());
        let u = sampling::sample_unitary(rng, n);
        let at = cotangent::mu(ctx, ch, &CotangentPoint::zero_at(ch, &u));
        Ok(origin.max(mat::dist(&at, &mat::conj_by(&u, ch.h0_ref()))))
    });
    env.check("mu-zero-section", "mu sends the zero covector at Ad(k)H0 to Ad(k)H0", env.cfg.exact(1e-10), r);

    let r = env.par_max("mu-closed-form", env.samples(50), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let xi = cotangent::iota(ch, &p);
        Ok(rel(&cotangent::mu(ctx, ch, &xi), &cotangent::mu_closed(&xi)))
    });
    env.check("mu-closed-form", "Gram-solved mu equals base + W", env.cfg.exact(1e-9), r);

    let r = env.par_max("vertical-closed-form", env.samples(50), |rng| {
        let u = sampling::sample_unitary(rng, n);
        let s = sampling::hermitian(rng, n);
        let a = cotangent::vertical_field(ctx, ch, &u, &s)?;
        Ok(mat::dist(&a, &cotangent::vertical_field_closed(ch, &u, &s)))
    });
    env.check("vertical-closed-form", "least-squares vertical field matches its closed form", env.cfg.exact(1e-10), r);

    let r = env.par_max("iota-equivariance", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let u = sampling::sample_unitary(rng, n);
        let lhs = cotangent::iota_raw(ch, &mat::conj_by(&u, &p.y))?;
        let rhs = cotangent::lift_linear(ch, &u, &cotangent::iota(ch, &p))?;
        Ok(lhs.dist(&rhs) / mat::fro(&p.y))
    });
    env.check("iota-equivariance", "iota commutes with K", env.cfg.exact(1e-9), r);

    let steps = (1.0 / FLOW_DT).round() as usize;
    let r = env.par_max("cocycle", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let len = if rng.random::<bool>() { 2 } else { 1 };
        let word: Vec<CMat> = (0..len).map(|_| sampling::traceless_in_ball(rng, n, 1.0)).collect();
        Ok(mat::fro(&cotangent::cocycle(ctx, ch, &word, &xi, FLOW_DT)?))
    });
    env.check("cocycle", "cocycle of the flow action vanishes", env.cfg.fd(1e-6), r);

    let r = env.par_max("flow-unitary", env.samples(10), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let a = sampling::anti_hermitian(rng, n);
        let f = cotangent::flow(ctx, ch, &a, &xi, 1.0, steps)?;
        let e = cotangent::lift_linear(ch, &mat::expm(&a), &xi)?;
        Ok(f.dist(&e))
    });
    env.check("flow-unitary", "flow of a unitary generator is the linear lift", env.cfg.fd(1e-6), r);

    let r = env.par_max("mu-flow-equivariance", env.samples(10), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let z = sampling::traceless_in_ball(rng, n, 1.0);
        let t: f64 = rng.random();
        let f = cotangent::flow(ctx, ch, &z, &xi, t, steps)?;
        let lhs = cotangent::mu(ctx, ch, &f);
        let rhs = mat::ad_group(&mat::expm(&(z * cr(t))), &cotangent::mu(ctx, ch, &xi))?;
        Ok(rel(&lhs, &rhs))
    });
    env.check("mu-flow-equivariance", "mu intertwines flows with Ad", env.cfg.fd(1e-6), r);

    let r = env.par_max("a-fixed-point", env.samples(10), |rng| {
        let h: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut hm = mat::diag_real(&h);
        sampling::remove_trace(&mut hm);
        let o = CotangentPoint::origin(ch);
        let th = cotangent::theta_field(ctx, ch, &hm, &o, Variant::Plus)?;
        let f = cotangent::flow(ctx, ch, &hm, &o, 1.0, 100)?;
        Ok(th.norm().max(f.dist(&o)))
    });
    env.check("a-fixed-point", "origin of the zero section is fixed by A", env.cfg.exact(1e-10), r);

    let r = calibration_consistency(ctx, ch);
    env.check("kks-sign", "calibrated KKS sign agrees with this configuration", 0.0, r);

    let r = env.par_max("symplectic-pullback", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let z1 = sampling::unit_traceless(rng, n);
        let z2 = sampling::unit_traceless(rng, n);
        let v1 = cotangent::d_iota(ch, &p.y, &z1, cotangent::FD_H)?;
        let v2 = cotangent::d_iota(ch, &p.y, &z2, cotangent::FD_H)?;
        let om = cotangent::canonical_two_form(ctx, ch, &xi, &v1, &v2);
        let w = orbit::kks_form(ctx, &p.y, &z1, &z2);
        Ok((om - w).abs())
    });
    env.check("symplectic-pullback", "canonical form pulls back to the KKS form", env.cfg.fd(1e-4), r);

    let r = env.par_max("hamiltonian", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let z = sampling::unit_traceless(rng, n);
        let v = cotangent::d_iota(ch, &p.y, &sampling::unit_traceless(rng, n), cotangent::FD_H)?;
        let th = cotangent::theta_field(ctx, ch, &z, &xi, Variant::Plus)?;
        let lhs = cotangent::canonical_two_form(ctx, ch, &xi, &th, &v);
        let h = cotangent::FD_H;
        let ep = cotangent::energy(ctx, ch, &z, &cotangent::exp_chart(ch, &xi, &v, h));
        let em = cotangent::energy(ctx, ch, &z, &cotangent::exp_chart(ch, &xi, &v, -h));
        let rhs = (ep - em) / (2.0 * h);
        Ok((lhs - rhs).abs() / (1.0 + rhs.abs()))
    });
    env.check("hamiltonian", "theta(Z) is the Hamiltonian field of the energy", env.cfg.fd(1e-4), r);

    let r = env.par_max("vertical-isotropic", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        let xi = cotangent::iota(ch, &p);
        let vert = |rng: &mut SampleRng| TangentOfCotangent {
            dbase: mat::zeros(n),
            dw: mat::conj_by(&xi.k, &random_n_plus(rng, ch)),
        };
        let (a, b) = (vert(rng), vert(rng));
        Ok(cotangent::canonical_two_form(ctx, ch, &xi, &a, &b).abs())
    });
    env.check("vertical-isotropic", "fibres are isotropic for the canonical form", env.cfg.fd(1e-4), r);

    brackets(env);

    let (ctx, ch) = (env.ctx, env.ch);
    let o = CotangentPoint::origin(ch);
    let r = (|| -> Result<f64> {
        let cols: Vec<Vec<f64>> = ctx
            .real_basis()
            .iter()
            .map(|z| cotangent::theta_field(ctx, ch, z, &o, Variant::Plus).map(|t| t.realify()))
            .collect::<Result<_>>()?;
        let m = nalgebra::DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i]);
        Ok((mat::rank(&m, 1e-8) as f64 - (4 * ch.dim_n_plus()) as f64).abs())
    })();
    env.check("transitivity", "theta spans the tangent space at the origin", 0.0, r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for z in centralizer_basis(ctx, ch) {
            worst = worst.max(cotangent::theta_field(ctx, ch, &z, &o, Variant::Plus)?.norm());
        }
        Ok(worst)
    })();
    env.check("isotropy", "centralizer of H0 fixes the origin", env.cfg.exact(1e-10), r);
}

fn calibration_consistency(ctx: &AlgebraCtx, ch: &Characteristic) -> Result<f64> {
    let s = cotangent::calibrate_at(ctx, ch)?;
    Ok((s - ctx.kks_sign).abs())
}

/// Commutators of flows, compared with the predicted fields at random points.
fn brackets(env: &mut Env) {
    let n = env.cfg.n;
    let (ctx, ch) = (env.ctx, env.ch);
    let s = BRACKET_S;
    let tol = env.cfg.fd(1e-3);

    let lift = |z: &CMat| {
        let z = z.clone();
        move |t: f64, p: &CotangentPoint| cotangent::lift_linear(ch, &mat::expm(&(&z * cr(t))), p)
    };
    let shift = |x: &CMat| {
        let x = x.clone();
        move |t: f64, p: &CotangentPoint| cotangent::vertical_shift(ctx, ch, &x, p, t)
    };
    let vertical_at = |x: &CMat, p: &CotangentPoint| -> Result<TangentOfCotangent> {
        Ok(TangentOfCotangent {
            dbase: mat::zeros(n),
            dw: cotangent::vertical_field(ctx, ch, &p.k, x)?,
        })
    };
    let point = |rng: &mut SampleRng| -> Result<CotangentPoint> {
        Ok(cotangent::iota(ch, &sampling::sample_orbit_point(ch, rng, 1.0)?))
    };

    let r = env.par_max("bracket-horizontal-vertical", env.samples(10), |rng| {
        let xi = point(rng)?;
        let a = sampling::anti_hermitian(rng, n);
        let x = sampling::hermitian(rng, n);
        let fd = cotangent::commutator_fd(&xi, lift(&a), shift(&x), s)?;
        Ok(tangent_dist(&fd, &vertical_at(&mat::comm(&a, &x), &xi)?))
    });
    env.check("bracket-horizontal-vertical", "[A#, V_X] = V_[A,X]", tol, r);

    let r = env.par_max("bracket-symmetric", env.samples(10), |rng| {
        let xi = point(rng)?;
        let x = sampling::hermitian(rng, n);
        let y = sampling::hermitian(rng, n);
        let a = cotangent::commutator_fd(&xi, lift(&x), shift(&y), s)?;
        let b = cotangent::commutator_fd(&xi, lift(&y), shift(&x), s)?;
        Ok(tangent_dist(&a, &b))
    });
    env.check("bracket-symmetric", "[X#, V_Y] = [Y#, V_X]", tol, r);

    let r = env.par_max("bracket-vertical", env.samples(10), |rng| {
        let xi = point(rng)?;
        let x = sampling::hermitian(rng, n);
        let y = sampling::hermitian(rng, n);
        Ok(cotangent::commutator_fd(&xi, shift(&x), shift(&y), s)?.norm())
    });
    env.check("bracket-vertical", "[V_X, V_Y] = 0", tol, r);

    let r = env.par_max("theta-homomorphism", env.samples(10), |rng| {
        let xi = point(rng)?;
        let z1 = sampling::unit_traceless(rng, n);
        let z2 = sampling::unit_traceless(rng, n);
        let act = |z: CMat| move |t: f64, p: &CotangentPoint| cotangent::act(ch, &mat::expm(&(&z * cr(t))), p);
        let fd = cotangent::commutator_fd(&xi, act(z1.clone()), act(z2.clone()), s)?;
        let th = cotangent::theta_field(ctx, ch, &mat::comm(&z1, &z2), &xi, Variant::Plus)?;
        Ok(tangent_dist(&fd, &th))
    });
    env.check("theta-homomorphism", "theta preserves brackets", tol, r);

    let r = env.par_max("theta-minus-homomorphism", env.samples(10), |rng| {
        let xi = point(rng)?;
        let z1 = sampling::unit_traceless(rng, n);
        let z2 = sampling::unit_traceless(rng, n);
        let fl = |z: CMat| {
            move |t: f64, p: &CotangentPoint| cotangent::flow_variant(ctx, ch, &z, p, t, 2, Variant::Minus)
        };
        let fd = cotangent::commutator_fd(&xi, fl(z1.clone()), fl(z2.clone()), s)?;
        let th = cotangent::theta_field(ctx, ch, &mat::comm(&z1, &z2), &xi, Variant::Minus)?;
        Ok(tangent_dist(&fd, &th))
    });
    env.check("theta-minus-homomorphism", "theta with reversed vertical part preserves brackets", tol, r);
}

fn expected_transversal_pairs(ch: &Characteristic) -> usize {
    let fact = |k: usize| (1..=k).product::<usize>();
    fact(ch.n) * ch.block_sizes.iter().map(|&b| fact(b)).product::<usize>()
}

fn moved_flag(u: &CMat, f: &NestedFlag) -> Result<NestedFlag> {
    NestedFlag::new(u * &f.frame, f.dims.clone())
}

pub(crate) fn product(env: &mut Env) {
    let n = env.cfg.n;
    let (ctx, ch) = (env.ctx, env.ch);

    let r = env.par_max("embed-transversal", env.samples(100), |rng| {
        let g = sampling::sample_group_element(rng, n, 2.0);
        let m = flagprod::transversality_margin(&flagprod::embed(ch, &g)?);
        Ok(if m > 0.0 { 1e-8 / m } else { f64::INFINITY })
    });
    env.check("embed-transversal", "embedded pairs are transversal (threshold / margin)", 1.0, r);

    if n <= 5 {
        let r = (|| -> Result<f64> {
            let (t, d) = flagprod::weyl_orbit_split(ch)?;
            let all = (1..=n).product::<usize>().pow(2);
            let expect = if n == 2 { (2, 2) } else {
                let e = expected_transversal_pairs(ch);
                (e, all - e)
            };
            Ok(((t as f64 - expect.0 as f64).abs()) + (d as f64 - expect.1 as f64).abs())
        })();
        env.check("weyl-pair-split", "W x W pairs split into transversal and degenerate", 0.0, r);
    }

    let r = env.par_max("orbit-pair-transversal", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let m = flagprod::transversality_margin(&flagprod::orbit_to_pair(ch, &p.y)?);
        Ok(if m > 0.0 { 1e-8 / m } else { f64::INFINITY })
    });
    env.check("orbit-pair-transversal", "orbit points give transversal pairs (threshold / margin)", 1.0, r);

    let r = env.par_max("orbit-pair-equivariance", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 2.0)?;
        let u = sampling::sample_unitary(rng, n);
        let a = flagprod::orbit_to_pair(ch, &mat::conj_by(&u, &p.y))?;
        let b = flagprod::orbit_to_pair(ch, &p.y)?;
        let d1 = a.first.distance(&moved_flag(&u, &b.first)?);
        let d2 = a.second.distance(&moved_flag(&u, &b.second)?);
        Ok(d1.max(d2))
    });
    env.check("orbit-pair-equivariance", "orbit-to-pair map commutes with K", env.cfg.exact(1e-9), r);

    let r = flagprod::product_complex_structure_residual(ctx, ch, ch.h0_ref());
    env.check("product-j-origin", "product complex structure at (H0, -H0)", env.cfg.exact(1e-9), r);

    let r = env.par_max("product-j", env.samples(30), |rng| {
        let p = sampling::sample_orbit_point(ch, rng, 1.0)?;
        flagprod::product_complex_structure_residual(ctx, ch, &p.y)
    });
    env.check("product-j", "orbit complex structure is the product one", env.cfg.exact(1e-8), r);

    let r = flagprod::product_complex_structure_residual_signed(ctx, ch, ch.h0_ref(), -1.0);
    env.control("product-j-control", "flipped product structure is detected", 1.0, r);

    let r = flagprod::pair_isotropy(ctx, ch).map(|(null, _)| {
        let expect = 2 * (ch.block_sizes.iter().map(|b| b * b).sum::<usize>() - 1);
        (null as f64 - expect as f64).abs()
    });
    env.check("pair-isotropy-dim", "isotropy of the origin pair has the centralizer dimension", 0.0, r);
    let r = flagprod::pair_isotropy(ctx, ch).map(|(_, leak)| leak);
    env.check("pair-isotropy-span", "isotropy of the origin pair lies in the centralizer", env.cfg.exact(1e-8), r);

    if n == 2 && ch.h0 == [1.0, -1.0] {
        sl2_dictionary(env);
    }
}

fn sl2_dictionary(env: &mut Env) {
    let ch = env.ch;
    let r = env.par_max("sl2-roundtrip", env.samples(50), |rng| {
        let g = sampling::gaussian_complex(rng, 2, 2);
        let xi = (g[(0, 0)], g[(1, 0)]);
        let eta = (g[(0, 1)], g[(1, 1)]);
        let m = flagprod::pair_to_matrix_sl2(xi, eta)?;
        let p = flagprod::orbit_to_pair(ch, &m)?;
        let eig = (&m * CMat::from_column_slice(2, 1, &[xi.0, xi.1])
            - CMat::from_column_slice(2, 1, &[xi.0, xi.1]))
        .norm();
        let d = flagprod::line_distance(flagprod::line_of(&p.first), xi)
            .max(flagprod::line_distance(flagprod::line_of(&p.second), eta));
        Ok(d.max(eig / (xi.0.norm() + xi.1.norm())))
    });
    env.check("sl2-roundtrip", "pair -> matrix -> pair is the identity on SL(2)", env.cfg.exact(1e-9), r);

    let r = (|| -> Result<f64> {
        let (one, zero) = (cr(1.0), cr(0.0));
        let a = flagprod::pair_to_matrix_sl2((one, zero), (zero, one))?;
        let b = flagprod::pair_to_matrix_sl2((one, one), (zero, one))?;
        let expect_b = CMat::from_row_slice(2, 2, &[one, zero, cr(2.0), -one]);
        let p = flagprod::orbit_to_pair(ch, &expect_b)?;
        Ok(mat::dist(&a, &mat::diag_real(&[1.0, -1.0]))
            .max(mat::dist(&b, &expect_b))
            .max(flagprod::line_distance(flagprod::line_of(&p.first), (one, one)))
            .max(flagprod::line_distance(flagprod::line_of(&p.second), (zero, one))))
    })();
    env.check("sl2-examples", "explicit SL(2) eigenline matrices", env.cfg.exact(1e-12), r);
}

fn orbit_element(rep: &ExteriorRep, g: &CMat) -> Result<RepElement> {
    rep.act(g, &rep.base_element())
}

pub(crate) fn rep(env: &mut Env) {
    let n = env.cfg.n;
    let k = env.cfg.k;
    let ctx = env.ctx;
    let rep = match ExteriorRep::new(n, k) {
        Ok(r) => r,
        Err(e) => {
            env.check("exterior-power", "exterior power representation", 0.0, Err(e));
            return;
        }
    };
    let rep = &rep;
    let hmu = ctx.fundamental_h[k - 1].clone();

    let r = env.par_max("rep-equivariance", env.samples(30), |rng| {
        let g0 = sampling::sample_group_element(rng, n, 1.0);
        let g = sampling::sample_group_element(rng, n, 1.0);
        let el = orbit_element(rep, &g0)?;
        let lhs = repmodel::moment_rep(ctx, rep, &rep.act(&g, &el)?);
        let rhs = mat::ad_group(&g, &repmodel::moment_rep(ctx, rep, &el))?;
        Ok(rel(&lhs, &rhs))
    });
    env.check("rep-equivariance", "M(g.el) = Ad(g) M(el)", env.cfg.exact(1e-8), r);

    let r = (|| -> Result<f64> {
        let m = repmodel::moment_rep(ctx, rep, &rep.base_element());
        let mut worst = mat::dist(&m, &hmu).max(mat::dist(&m, &liealg::closed_form_h_mu(n, k)));
        if n == 2 {
            worst = worst.max(mat::dist(&m, &mat::diag_real(&[0.125, -0.125])));
        }
        Ok(worst)
    })();
    env.check("rep-base-value", "M(v0 x eps0) = H_mu", env.cfg.exact(1e-10), r);

    let r = env.par_max("rep-trace-projection", env.samples(20), |rng| {
        let g = sampling::sample_group_element(rng, n, 1.0);
        let el = orbit_element(rep, &g)?;
        let a = repmodel::moment_rep(ctx, rep, &el);
        let b = repmodel::moment_rep_trace(ctx, rep, &el)?;
        Ok(rel(&a, &b))
    });
    env.check("rep-trace-projection", "Killing solve agrees with trace-form projection", env.cfg.exact(1e-9), r);

    let spec: Vec<f64> = (0..n).map(|i| hmu[(i, i)].re).collect();
    let spec = &spec;
    let r = env.par_max("rep-orbit-spectrum", env.samples(50), |rng| {
        let g = sampling::sample_group_element(rng, n, 1.0);
        let m = repmodel::moment_rep(ctx, rep, &orbit_element(rep, &g)?);
        let ev = sorted_eigen_re(&m);
        Ok(ev.iter().zip(spec.iter()).map(|(a, &b)| (a - cr(b)).norm()).fold(0.0, f64::max))
    });
    env.check("rep-orbit-spectrum", "moment image lies on the orbit of H_mu", env.cfg.exact(1e-7), r);

    let r = (|| -> Result<f64> {
        let chm = repmodel::mu_characteristic(ctx, k)?;
        let base = rep.base_element();
        let mut worst = 0.0f64;
        for z in centralizer_basis(ctx, &chm) {
            let dv = rep.algebra(&z) * &base.v;
            let de = rep.dual_algebra(&z) * &base.eps;
            let t = &dv * base.eps.transpose() + &base.v * de.transpose();
            worst = worst.max(t.norm());
        }
        Ok(worst)
    })();
    env.check("rep-isotropy", "centralizer of H_mu fixes v0 x eps0", env.cfg.exact(1e-10), r);

    let r = env.par_max("rep-rank-one", env.samples(30), |rng| {
        let g = sampling::sample_group_element(rng, n, 1.0);
        let el = orbit_element(rep, &g)?;
        let sv = el.endomorphism().singular_values();
        let mut s: Vec<f64> = sv.iter().cloned().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let second = if s.len() > 1 { s[1] / s[0] } else { 0.0 };
        Ok(second.max((el.pairing() - cr(1.0)).norm()))
    });
    env.check("rep-rank-one", "orbit elements are rank one with eps(v) = 1", env.cfg.exact(1e-10), r);

    let r = env.par_max("rep-height", env.samples(30), |rng| {
        let g = sampling::sample_group_element(rng, n, 1.0);
        let el = orbit_element(rep, &g)?;
        let h = sampling::unit_traceless(rng, n);
        let (a, b) = repmodel::height_rep(rep, &el, &h);
        let m = repmodel::moment_rep(ctx, rep, &el);
        let pair = ctx.b(&m, &h);
        Ok((a - b).norm().max((a - pair).norm()) / a.norm().max(1.0))
    });
    env.check("rep-height", "height function formulas agree with M", env.cfg.exact(1e-9), r);

    let r = (|| -> Result<f64> {
        let chm = repmodel::mu_characteristic(ctx, k)?;
        let chm = &chm;
        env.par_max("rep-to-cotangent", env.samples(50), |rng| {
            let g = sampling::sample_group_element(rng, n, 1.0);
            let a = repmodel::rep_to_cotangent(chm, &g)?;
            let b = cotangent::iota_raw(chm, &mat::ad_group(&g, chm.h0_ref())?)?;
            Ok(a.dist(&b) / mat::fro(&b.w).max(1.0))
        })
    })();
    env.check("rep-to-cotangent", "Iwasawa route agrees with iota", env.cfg.exact(1e-9), r);

    let r = env.par_max("rep-phi-roundtrip", env.samples(30), |rng| {
        let g = sampling::sample_group_element(rng, n, 1.0);
        let el = orbit_element(rep, &g)?;
        let back = repmodel::phi_inv(&repmodel::phi(&el)?)?;
        Ok(rel(&back.endomorphism(), &el.endomorphism()))
    });
    env.check("rep-phi-roundtrip", "Phi is inverted by the normalized section", env.cfg.exact(1e-10), r);

    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for x in &ctx.basis {
            for y in &ctx.basis {
                let lhs = rep.algebra(&mat::comm(x, y));
                let (rx, ry) = (rep.algebra(x), rep.algebra(y));
                worst = worst.max(mat::dist(&lhs, &mat::comm(&rx, &ry)));
            }
        }
        Ok(worst)
    })();
    env.check("rep-derivation", "rho is a Lie algebra homomorphism", env.cfg.exact(1e-9), r);
}

/// Tangent basis at x from induced fields of the compact basis.
fn flag_tangents(ch: &Characteristic, x: &CMat) -> Result<Vec<CMat>> {
    let u = orbit::hermitian_frame(ch, x, 1e-8)?;
    Ok(lagrangian::compact_basis(ch.n)
        .iter()
        .map(|a| cotangent::induced_flag(ch, &u, a))
        .collect())
}

pub(crate) fn lagrangian(env: &mut Env) {
    let n = env.cfg.n;
    let ch = env.ch;
    let chs = ch.dual();
    let chs = &chs;

    let r = (|| -> Result<f64> {
        let x = ch.h0_mat();
        let mut worst = 0.0f64;
        for (i, j) in ch.plus_positions() {
            let (a, z) = liealg::weyl_basis_vectors(n, i, j)?;
            let (ta, tz) = (lagrangian::induced(&a, &x), lagrangian::induced(&z, &x));
            let alpha = ch.h0[i] - ch.h0[j];
            worst = worst
                .max((lagrangian::borel_metric(ch, &x, &ta, &ta)? - alpha).abs())
                .max(lagrangian::borel_metric(ch, &x, &ta, &tz)?.abs())
                .max(mat::dist(&lagrangian::complex_structure(ch, &x, &ta)?, &tz))
                .max(mat::dist(&lagrangian::complex_structure(ch, &x, &tz)?, &(-&ta)));
        }
        Ok(worst)
    })();
    env.check("origin-metric", "metric and J on root vectors at H0", env.cfg.exact(1e-12), r);

    if n <= 5 {
        let r = (|| -> Result<f64> {
            let mut worst = 0.0f64;
            for w in WeylElement::all(n) {
                let wt = weylgrp::representative(&w);
                let x = mat::herm(&mat::conj_by(&wt, ch.h0_ref()));
                for i in 0..n {
                    for j in i + 1..n {
                        let alpha = (x[(i, i)] - x[(j, j)]).re;
                        if alpha.abs() < 1e-12 {
                            continue;
                        }
                        let (a, z) = liealg::weyl_basis_vectors(n, i, j)?;
                        let ta = lagrangian::induced(&a, &x);
                        let tz = lagrangian::induced(&z, &x);
                        let j_a = lagrangian::complex_structure(ch, &x, &ta)?;
                        worst = worst.max(mat::dist(&j_a, &(tz * cr(alpha.signum()))));
                    }
                }
            }
            Ok(worst)
        })();
        env.check("weyl-point-j", "J at Weyl points follows the sign of alpha", env.cfg.exact(1e-12), r);
    }

    let r = env.par_max("j-squared", env.samples(30), |rng| {
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let mut worst = 0.0f64;
        let basis = flag_tangents(ch, &x)?;
        for v in &basis {
            let jj = lagrangian::complex_structure(ch, &x, &lagrangian::complex_structure(ch, &x, v)?)?;
            worst = worst.max(mat::dist(&jj, &(-v)));
        }
        for a in &basis {
            for b in &basis {
                let o1 = lagrangian::kaehler_form(ch, &x, a, b)?;
                let o2 = lagrangian::kaehler_form(ch, &x, b, a)?;
                worst = worst.max((o1 + o2).abs());
            }
        }
        Ok(worst)
    });
    env.check("j-squared", "J^2 = -1 and the Kaehler form is antisymmetric", env.cfg.exact(1e-10), r);

    let r = env.par_max("metric-invariance", env.samples(30), |rng| {
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let u = sampling::sample_unitary(rng, n);
        let ux = mat::herm(&mat::conj_by(&u, &x));
        let basis = flag_tangents(ch, &x)?;
        let mut worst = 0.0f64;
        for a in 0..basis.len() {
            for b in a..basis.len() {
                let g = lagrangian::borel_metric(ch, &x, &basis[a], &basis[b])?;
                let gu = lagrangian::borel_metric(
                    ch,
                    &ux,
                    &mat::conj_by(&u, &basis[a]),
                    &mat::conj_by(&u, &basis[b]),
                )?;
                worst = worst.max((g - gu).abs());
            }
        }
        Ok(worst)
    });
    env.check("metric-invariance", "Borel metric is K-invariant", env.cfg.exact(1e-9), r);

    let r = env.par_max("kaehler-closed", env.samples(10), |rng| {
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let a: Vec<CMat> = (0..3).map(|_| sampling::anti_hermitian(rng, n)).collect();
        lagrangian::kaehler_closedness(ch, &x, [&a[0], &a[1], &a[2]], 1e-4)
    });
    env.check("kaehler-closed", "Kaehler form is closed", env.cfg.fd(1e-3), r);

    let seed = env.seed_for("r-w0");
    let count = env.samples(50);

    let r = env.par_max("r-w0-map", env.samples(50), |rng| {
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let u = sampling::sample_unitary(rng, n);
        let y = lagrangian::r_w0_map(ch, &x)?;
        let moved = lagrangian::r_w0_map(ch, &mat::herm(&mat::conj_by(&u, &x)))?;
        Ok(mat::dist(&y, &(-&x)).max(mat::dist(&moved, &mat::conj_by(&u, &y))))
    });
    env.check("r-w0-map", "R_w0 is well defined, equals -x and commutes with K", env.cfg.exact(1e-9), r);

    env.check(
        "anti-holomorphic",
        "R_w0 intertwines J with -J*",
        env.cfg.exact(1e-8),
        lagrangian::antiholomorphy_residual(ch, count, seed),
    );
    env.control(
        "anti-holomorphic-control",
        "holomorphy residual of R_w0 is large",
        0.1,
        lagrangian::antiholomorphy_residual_signed(ch, count.min(5), seed, -1.0),
    );
    env.check(
        "isometry",
        "R_w0 is a Borel isometry",
        env.cfg.exact(1e-8),
        lagrangian::isometry_residual(ch, count, seed),
    );
    env.control(
        "isometry-control",
        "scaled metric is detected",
        0.1,
        lagrangian::isometry_residual_scaled(ch, count.min(5), seed, 2.0),
    );
    env.check(
        "anti-symplectic",
        "R_w0 pulls the Kaehler form back to its negative",
        env.cfg.exact(1e-8),
        lagrangian::antisymplectic_residual(ch, count, seed),
    );
    let r = env.par_max("anti-symplectic-control", 5, |rng| {
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let y = lagrangian::r_w0_map(ch, &x)?;
        let basis = flag_tangents(ch, &x)?;
        let mut worst = 0.0f64;
        for a in &basis {
            for b in &basis {
                let o = lagrangian::kaehler_form(ch, &x, a, b)?;
                let pa = lagrangian::d_r_w0(ch, &x, a)?;
                let pb = lagrangian::d_r_w0(ch, &x, b)?;
                worst = worst.max((lagrangian::kaehler_form(chs, &y, &pa, &pb)? - o).abs());
            }
        }
        Ok(worst)
    });
    env.control("anti-symplectic-control", "symplectic (unsigned) version fails", 0.1, r);

    let gcount = env.samples(20);
    let r = (|| -> Result<f64> {
        let mut worst = lagrangian::lagrangian_residual(ch, &GraphSpec::plain(n), gcount, seed)?;
        for i in 0..10u64 {
            let mut rng = sampling::sample_rng(seed, 0x6A, i);
            let spec = GraphSpec::random(&mut rng, n);
            worst = worst.max(lagrangian::lagrangian_residual(ch, &spec, gcount.min(5), seed ^ i)?);
        }
        let mut rng = sampling::sample_rng(seed, 0x70, 0);
        let spec = GraphSpec::torus(sampling::sample_torus(&mut rng, n));
        worst = worst.max(lagrangian::lagrangian_residual(ch, &spec, gcount.min(5), seed)?);
        Ok(worst)
    })();
    env.check("lagrangian-graphs", "graphs of k1 m R_w0 k2 are Lagrangean", env.cfg.exact(1e-8), r);

    let r = env.par_max("graph-half-dimension", env.samples(20), |rng| {
        let spec = GraphSpec::random(rng, n);
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let rank = lagrangian::graph_tangent_rank(ch, &spec, &x)?;
        Ok((rank as f64 - (2 * ch.dim_n_plus()) as f64).abs())
    });
    env.check("graph-half-dimension", "graph tangent spaces have half dimension", 0.0, r);

    let r = env.par_max("graph-pushforward", env.samples(20), |rng| {
        let spec = GraphSpec::random(rng, n);
        let (x, _) = sampling::sample_flag_point(ch, rng);
        let a = sampling::anti_hermitian(rng, n);
        let h = 1e-5;
        let at = |t: f64| -> Result<CMat> {
            let xt = mat::herm(&mat::conj_by(&mat::expm(&(&a * cr(t))), &x));
            lagrangian::graph_map(ch, &spec, &xt)
        };
        let fd = (at(h)? - at(-h)?) / cr(2.0 * h);
        let y = lagrangian::graph_map(ch, &spec, &x)?;
        let exact = lagrangian::induced(&mat::conj_by(&spec.k_eff(), &a), &y);
        Ok(mat::dist(&fd, &exact))
    });
    env.check("graph-pushforward", "exact pushforward matches finite differences", env.cfg.fd(1e-5), r);

    if ch.dual().h0 == ch.h0 {
        env.control(
            "identity-graph-control",
            "identity graph is not Lagrangean",
            0.1,
            lagrangian::identity_graph_residual(ch, 3, seed),
        );
    }

    env.check(
        "graph-k-orbit",
        "graph of R_w0 is the K-orbit of the origin pair",
        env.cfg.exact(1e-8),
        lagrangian::graph_orbit_deviation(ch, env.samples(50), seed),
    );

    rep_membership(env);

    if n == 2 {
        sl2_lagrangians(env);
    }
}

/// Membership test against construction labels and Hermitian-moment oracle.
fn rep_membership(env: &mut Env) {
    let n = env.cfg.n;
    let k = env.cfg.k;
    let ctx = env.ctx;
    let rep = match ExteriorRep::new(n, k) {
        Ok(r) => r,
        Err(e) => {
            env.check("rep-graph-membership", "kernel of eps is v-perp", 0.0, Err(e));
            return;
        }
    };
    let rep = &rep;
    let r = env.par_max("rep-graph-membership", env.samples(50), |rng| {
        let in_k = rng.random::<bool>();
        let torus = rng.random::<bool>();
        let g = if in_k {
            sampling::sample_unitary(rng, n)
        } else {
            sampling::sample_group_element(rng, n, 1.0)
        };
        let el = orbit_element(rep, &g)?;
        let m = sampling::sample_torus(rng, n);
        let (el, m) = if torus {
            let eps = rep.dual_group(&m)? * &el.eps;
            (RepElement { v: el.v, eps }, Some(m))
        } else {
            (el, None)
        };
        let test = lagrangian::graph_rep_membership(rep, &el, m.as_ref());
        // oracle: undo m, then the element is in the K-orbit iff M is Hermitian
        let plain = match &m {
            Some(m) => RepElement {
                v: el.v.clone(),
                eps: rep.group(m).transpose() * &el.eps,
            },
            None => el.clone(),
        };
        let mm = repmodel::moment_rep(ctx, rep, &plain);
        let herm = mat::dist(&mm, &mm.adjoint()) <= 1e-8 * mat::fro(&mm).max(1.0);
        Ok(flag(test == in_k && herm == in_k))
    });
    env.check("rep-graph-membership", "kernel of eps is v-perp exactly on the K-orbit", 0.0, r);

    let r = (|| -> Result<f64> {
        let base = rep.base_element();
        // exp(E_{k,k+1}) fixes v0 but tilts eps0
        let e = mat::expm(&mat::unit(n, k - 1, k));
        let pushed = rep.act(&e, &base)?;
        let mut bad = flag(lagrangian::graph_rep_membership(rep, &base, None));
        bad += flag(!lagrangian::graph_rep_membership(rep, &pushed, None));
        Ok(bad)
    })();
    env.check("rep-graph-examples", "v0 x eps0 is in the graph and a unipotent element moves it out", 0.0, r);
}

fn sl2_lagrangians(env: &mut Env) {
    let lines = [
        (cr(1.0), c(0.0, 1.0)),
        (cr(1.0), c(0.0, -1.0)),
        (cr(1.0), cr(1.0)),
        (cr(1.0), cr(-1.0)),
    ];
    let r = (|| -> Result<f64> {
        let found = lagrangian::fixed_lines_grid(lagrangian::sl2_r);
        let mut worst = (found.len() as f64 - 2.0).abs();
        for f in &found {
            let d = lines[..2]
                .iter()
                .map(|l| flagprod::line_distance(*f, *l))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        for l in &lines[..2] {
            worst = worst.max(flagprod::line_distance(lagrangian::sl2_r(*l), *l));
        }
        for l in &lines[2..] {
            worst = worst.max(flagprod::line_distance(lagrangian::sl2_m_rw(*l), *l));
        }
        Ok(worst)
    })();
    env.check("sl2-fixed-lines", "fixed lines of r and m R_w on CP^1", env.cfg.exact(1e-10), r);

    let r = env.par_max("sl2-graph-matrices", env.samples(50), |rng| {
        let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let (x, y) = (t.cos(), t.sin());
        let m = flagprod::pair_to_matrix_sl2((cr(x), cr(y)), lagrangian::sl2_r((cr(x), cr(y))))?;
        let expect = mat::diag_real(&[x * x - y * y, -x * x + y * y])
            + (mat::unit(2, 0, 1) + mat::unit(2, 1, 0)) * cr(2.0 * x * y);
        let a: f64 = rng.random::<f64>() * 2.0;
        let (p, q) = (rng.random::<f64>() * 6.3, rng.random::<f64>() * 6.3);
        let (u, v) = (c(0.0, p).exp() * a.cosh(), c(0.0, q).exp() * a.sinh());
        let m2 = flagprod::pair_to_matrix_sl2((u, v), lagrangian::sl2_m_rw((u, v)))?;
        let s = u.norm_sqr() + v.norm_sqr();
        let expect2 = CMat::from_row_slice(2, 2, &[cr(s), -u * v.conj() * 2.0, v * u.conj() * 2.0, cr(-s)]);
        Ok(mat::dist(&m, &expect).max(rel(&m2, &expect2)))
    });
    env.check("sl2-graph-matrices", "explicit SL(2) graph matrices", env.cfg.exact(1e-12), r);
}
