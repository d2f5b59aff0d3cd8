//! Deterministic random sampling of algebra, group and orbit elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::mat::{self, c, cr, CMat};
use crate::orbit::{self, Characteristic, OrbitPoint};

pub type SampleRng = ChaCha8Rng;

/// Per-sample generator: seed xor index, further split by a check salt.
pub fn sample_rng(seed: u64, salt: u64, index: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64((seed ^ index).wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

pub fn gaussian_complex<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

pub fn remove_trace(z: &mut CMat) {
    let n = z.nrows();
    let t = z.trace() / n as f64;
    for i in 0..n {
        z[(i, i)] -= t;
    }
}

/// Gaussian traceless matrix with unit Frobenius norm.
pub fn unit_traceless<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let mut z = gaussian_complex(rng, n, n);
    remove_trace(&mut z);
    let s = mat::fro(&z);
    z / cr(s)
}

/// Traceless Z with ||Z|| <= radius (uniform radial factor).
pub fn traceless_in_ball<R: Rng>(rng: &mut R, n: usize, radius: f64) -> CMat {
    if radius == 0.0 {
        return mat::zeros(n);
    }
    let r: f64 = rng.random::<f64>() * radius;
    unit_traceless(rng, n) * cr(r)
}

pub fn anti_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    mat::antiherm(&unit_traceless(rng, n))
}

pub fn hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    mat::herm(&unit_traceless(rng, n))
}

/// exp(Z), Z traceless with ||Z|| <= radius; det 1.
pub fn sample_group_element<R: Rng>(rng: &mut R, n: usize, radius: f64) -> CMat {
    let z = traceless_in_ball(rng, n, radius);
    let mut g = mat::expm(&z);
    // remove the roundoff in det so the factorizations see det = 1
    let d = g.determinant();
    g /= d.powf(1.0 / n as f64);
    g
}

/// Haar unitary from QR of a Gaussian matrix, phase-corrected to det 1.
pub fn sample_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_complex(rng, n, n);
    let (mut q, _) = mat::qr_positive(&g);
    let d = q.determinant();
    let ph = (d / d.norm()).powf(1.0 / n as f64);
    q /= ph;
    q
}

/// Diagonal unitary with det 1.
pub fn sample_torus<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
    let mean = angles.iter().sum::<f64>() / n as f64;
    for a in &mut angles {
        *a -= mean;
    }
    let mut m = mat::zeros(n);
    for (i, a) in angles.iter().enumerate() {
        m[(i, i)] = c(a.cos(), a.sin());
    }
    m
}

/// Y = Ad(exp Z) H0 with ||Z|| <= radius, factorized.
pub fn sample_orbit_point<R: Rng>(ch: &Characteristic, rng: &mut R, radius: f64) -> Result<OrbitPoint> {
    let g = sample_group_element(rng, ch.n, radius);
    let y = mat::ad_group(&g, ch.h0_ref())?;
    orbit::factorize(ch, &y)
}

/// Hermitian flag point Ad(u) H0 with its frame.
pub fn sample_flag_point<R: Rng>(ch: &Characteristic, rng: &mut R) -> (CMat, CMat) {
    let u = sample_unitary(rng, ch.n);
    (mat::herm(&mat::conj_by(&u, ch.h0_ref())), u)
}
