//! Brute-force oracles shared by the integration tests. They recompute each
//! quantity by a route that does not go through the library code under test.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use multisidon::field::{Elem, Extension};
use multisidon::subspace::Subspace;
use rand::Rng;

pub fn random_nonzero<R: Rng>(ext: &Extension, rng: &mut R) -> Elem {
    Elem(rng.gen_range(1..ext.order()))
}

/// x^(q^i) by repeated powering.
fn q_power(ext: &Extension, x: Elem, i: u32) -> Elem {
    let gf = ext.gf();
    (0..i).fold(x, |acc, _| gf.pow(acc, ext.q() as u64))
}

/// Product of the d conjugates x, x^q, ..., x^(q^(d-1)).
pub fn norm_to_base(ext: &Extension, x: Elem, d: u32) -> Elem {
    let gf = ext.gf();
    (0..d).fold(Elem::ONE, |acc, i| gf.mul(acc, q_power(ext, x, i)))
}

/// Sum of the n conjugates of x in F_{q^n}.
pub fn absolute_trace(ext: &Extension, x: Elem) -> Elem {
    let gf = ext.gf();
    (0..ext.n()).fold(Elem::ZERO, |acc, i| gf.add(acc, q_power(ext, x, i)))
}

/// {y : Tr(uy) = 0 for all u ∈ U} by scanning the field.
pub fn trace_dual(u: &Subspace) -> Subspace {
    let ext = u.ext();
    let basis = u.fq_basis();
    let gf = ext.gf();
    let members: Vec<Elem> = gf
        .elements()
        .filter(|&y| basis.iter().all(|&b| absolute_trace(ext, gf.mul(b, y)).is_zero()))
        .collect();
    Subspace::span(ext, &members).unwrap()
}

/// Point weights of L_{U_1 x U_2} in PG(1, q^n), one intersection per point:
/// ⟨(0,1)⟩ has weight dim U_2, ⟨(1,a)⟩ has weight dim(U_1 ∩ a^{-1}U_2).
/// Weight-0 points are included under key 0.
pub fn line_weights(u1: &Subspace, u2: &Subspace) -> BTreeMap<usize, u64> {
    let ext = u1.ext();
    let gf = ext.gf();
    let mut out = BTreeMap::new();
    *out.entry(u2.dim()).or_insert(0) += 1;
    for a in gf.elements() {
        let w = if a.is_zero() {
            u1.dim()
        } else {
            u1.intersect_dim(&u2.scalar_mul(gf.inv(a)).unwrap()).unwrap()
        };
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

/// Minimum subspace distance over all pairs of distinct codewords.
pub fn pairwise_min_distance(words: &[Subspace]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let d = words[i].dim() + words[j].dim() - 2 * words[i].intersect_dim(&words[j]).unwrap();
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// Distinct subspaces among αU for all nonzero α.
pub fn orbit_size(u: &Subspace) -> usize {
    let gf = u.ext().gf();
    let mut seen: Vec<Subspace> = gf.elements().skip(1).map(|a| u.scalar_mul(a).unwrap()).collect();
    seen.sort();
    seen.dedup();
    seen.len()
}

/// A uniformly random k-dimensional F_q-subspace, by rejection on spans.
pub fn random_subspace<R: Rng>(ext: &Arc<Extension>, k: usize, rng: &mut R) -> Subspace {
    loop {
        let v: Vec<Elem> = (0..k).map(|_| random_nonzero(ext, rng)).collect();
        let u = Subspace::span(ext, &v).unwrap();
        if u.dim() == k {
            return u;
        }
    }
}

/// A random F_q-basis of F_{q^n}.
pub fn random_basis<R: Rng>(ext: &Arc<Extension>, rng: &mut R) -> Vec<Elem> {
    let n = ext.n() as usize;
    let mut out: Vec<Elem> = Vec::new();
    while out.len() < n {
        let x = random_nonzero(ext, rng);
        out.push(x);
        if Subspace::span(ext, &out).unwrap().dim() < out.len() {
            out.pop();
        }
    }
    out
}
