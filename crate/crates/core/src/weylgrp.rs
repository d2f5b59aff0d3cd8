//! Weyl group of A_{n-1} as permutations, signed-permutation representatives,
//! the longest element and the right action on regular orbits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::mat::{self, cr, CMat};
use crate::orbit::{self, Characteristic};

/// `perm[i] = w(i)`, 0-based. Serialized in 1-based one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(contract(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        Ok(WeylElement { perm })
    }

    pub fn from_one_line(one_based: &[usize]) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(contract("one-line notation is 1-based"));
        }
        Self::new(one_based.iter().map(|&p| p - 1).collect())
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p + 1).collect()
    }

    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        WeylElement { perm: inv }
    }

    /// (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        WeylElement {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inversions(&self) -> usize {
        let p = &self.perm;
        let mut c = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self) -> f64 {
        if self.inversions() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// All of S_n in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<WeylElement>) {
            let n = used.len();
            if cur.len() == n {
                out.push(WeylElement { perm: cur.clone() });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        WeylElement::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

/// Subset of simple roots, 1-based: k stands for (k, k+1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ThetaSet {
    pub indices: BTreeSet<usize>,
}

impl ThetaSet {
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k >= n) {
            return Err(contract(format!("simple root index {bad} outside 1..{}", n - 1)));
        }
        Ok(ThetaSet { indices })
    }

    pub fn empty() -> Self {
        ThetaSet::default()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.contains(&k)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.indices.iter().cloned().collect()
    }
}

/// Longest element i -> n+1-i.
pub fn principal_involution(n: usize) -> WeylElement {
    WeylElement {
        perm: (0..n).rev().collect(),
    }
}

/// Theta* = -w0 Theta, i.e. k -> n-k.
pub fn dual_theta(theta: &ThetaSet, n: usize) -> ThetaSet {
    ThetaSet {
        indices: theta.indices.iter().map(|&k| n - k).collect(),
    }
}

/// Signed permutation matrix in SU(n) with w~ e_i = ±e_{w(i)}.
/// An odd permutation gets its first row negated.
pub fn representative(w: &WeylElement) -> CMat {
    let n = w.n();
    let mut p = mat::zeros(n);
    for (i, &wi) in w.perm.iter().enumerate() {
        p[(wi, i)] = cr(1.0);
    }
    if w.sign() < 0.0 {
        for j in 0..n {
            p[(0, j)] = -p[(0, j)];
        }
    }
    p
}

/// Unit upper triangular N with (H0 + X) N = N H0; requires distinct eigenvalues.
pub fn upper_eigenvectors(h: &[f64], t: &CMat) -> CMat {
    let n = h.len();
    let mut nm = mat::eye(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut s = cr(0.0);
            for l in i + 1..=j {
                s += t[(i, l)] * nm[(l, j)];
            }
            nm[(i, j)] = s / (h[j] - h[i]);
        }
    }
    nm
}

fn regular_gap(ch: &Characteristic, y: &CMat) -> Result<()> {
    let h = &ch.h0;
    let gap = h
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-6 * mat::fro(y).max(1e-300) {
        return Err(Error::NotRegular(gap));
    }
    Ok(())
}

/// R_w(g H0 g^{-1}) = g (w~ H0 w~^{-1}) g^{-1} on a regular orbit.
pub fn right_action(ch: &Characteristic, y: &CMat, w: &WeylElement) -> Result<CMat> {
    if w.n() != ch.n {
        return Err(contract("Weyl element and characteristic sizes differ"));
    }
    regular_gap(ch, y)?;
    let p = orbit::factorize(ch, y)?;
    right_action_from_frame(ch, &p.k, &p.x, w)
}

/// Same as [`right_action`] from an explicit factorization y = k (H0 + x) k*.
pub fn right_action_from_frame(
    ch: &Characteristic,
    k: &CMat,
    x: &CMat,
    w: &WeylElement,
) -> Result<CMat> {
    let t = ch.h0_mat() + x;
    regular_gap(ch, &t)?;
    let nm = upper_eigenvectors(&ch.h0, &t);
    let nm_inv = nm
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal("unipotent matrix not invertible".into()))?;
    let wt = representative(w);
    let moved = mat::conj_by(&wt, &ch.h0_mat());
    Ok(k * nm * moved * nm_inv * k.adjoint())
}
