//! Explicit constructions: monomial families W_{μ x^{q^s}, ξ}, the code data
//! of the G_{n,s} family, and the specialized equivalence tests for them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Extension, FieldError, LinearizedPoly};
use crate::sidon::{
    automorphisms, family_equivalence, graph_subspace, matching_scalar, AutomorphismSet, EquivalenceWitness,
    SidonError, SubspaceFamily,
};
use crate::subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("extension degree {0} is odd; these constructions live in F_(q^2t)")]
    OddDegree(u32),
    #[error("twist s = {s} is not coprime to t = {t}")]
    TwistNotCoprime { s: u32, t: u32 },
    #[error("ξ = {0} lies in F_(q^t)")]
    XiInSubfield(u32),
    #[error("μ_{index} = {value} is zero or not in F_(q^t)")]
    BadMu { index: usize, value: u32 },
    #[error("r = {r} exceeds the bound {max}")]
    TooMany { r: usize, max: usize },
    #[error("q = 2 admits only a single monomial subspace")]
    BinaryField,
    #[error("N(μ_{i}) = N(μ_{j})")]
    NormsCoincide { i: usize, j: usize },
    #[error("N(μ_{i} μ_{j} ξ^(q^t+1)) = 1")]
    ProductNorm { i: usize, j: usize },
    #[error("N(μ_{i}^2 ξ^(q^t+1)) = 1, which the kernel argument also excludes when t >= 3")]
    DiagonalNorm { i: usize },
    #[error("q must be at least 3 for this construction")]
    BaseFieldTooSmall,
    #[error("no primitive element of F_(q^t) satisfies the power-image condition")]
    NoQualifyingW,
    #[error("families have different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("no parameters satisfy the conditions")]
    NoParameters,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Sidon(#[from] SidonError),
    #[error(transparent)]
    Subspace(#[from] crate::subspace::SubspaceError),
}

/// Parameters of {W_{μ_i x^{q^s}, ξ}}; elements refer to the ambient F_{q^2t}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialParams {
    pub s: u32,
    pub xi: Elem,
    pub mus: Vec<Elem>,
    #[serde(default)]
    pub append_subfield: bool,
}

fn half_degree(ext: &Extension) -> Result<u32, ConstructError> {
    if !ext.n().is_multiple_of(2) {
        return Err(ConstructError::OddDegree(ext.n()));
    }
    Ok(ext.n() / 2)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// N_{q^t/q}(x) for x in F_{q^t}.
fn norm_t(ext: &Extension, t: u32, x: Elem) -> Elem {
    ext.norm_between(x, t, 1).expect("t divides n")
}

impl MonomialParams {
    /// Checks every hypothesis; the diagonal (i = j) norm condition is only
    /// needed, and only enforced, for t >= 3.
    pub fn validate(&self, ext: &Extension) -> Result<(), ConstructError> {
        let t = half_degree(ext)?;
        let gf = ext.gf();
        if gcd(self.s, t) != 1 {
            return Err(ConstructError::TwistNotCoprime { s: self.s, t });
        }
        if !gf.contains(self.xi) || ext.in_subfield(self.xi, t) {
            return Err(ConstructError::XiInSubfield(self.xi.0));
        }
        for (index, &m) in self.mus.iter().enumerate() {
            if m.is_zero() || !gf.contains(m) || !ext.in_subfield(m, t) {
                return Err(ConstructError::BadMu { index, value: m.0 });
            }
        }
        let q = ext.q() as usize;
        let r = self.mus.len();
        if r == 0 {
            return Err(ConstructError::TooMany { r, max: q - 1 });
        }
        if q == 2 && r >= 2 {
            return Err(ConstructError::BinaryField);
        }
        if r > q - 1 {
            return Err(ConstructError::TooMany { r, max: q - 1 });
        }
        let nxi = norm_t(ext, t, ext.norm_between(self.xi, ext.n(), t)?);
        let norms: Vec<Elem> = self.mus.iter().map(|&m| norm_t(ext, t, m)).collect();
        for i in 0..r {
            if t >= 3 && gf.mul(gf.mul(norms[i], norms[i]), nxi) == Elem::ONE {
                return Err(ConstructError::DiagonalNorm { i });
            }
            for j in i + 1..r {
                if norms[i] == norms[j] {
                    return Err(ConstructError::NormsCoincide { i, j });
                }
                if gf.mul(gf.mul(norms[i], norms[j]), nxi) == Elem::ONE {
                    return Err(ConstructError::ProductNorm { i, j });
                }
            }
        }
        Ok(())
    }

    /// Deterministic parameters: ξ and then μ_1 < μ_2 < ... ascending in
    /// integer order, each the first choice compatible with the earlier ones.
    pub fn search(ext: &Extension, s: u32, r: usize, append_subfield: bool) -> Result<Self, ConstructError> {
        let t = half_degree(ext)?;
        let q = ext.q() as usize;
        if gcd(s, t) != 1 {
            return Err(ConstructError::TwistNotCoprime { s, t });
        }
        if q == 2 && r >= 2 {
            return Err(ConstructError::BinaryField);
        }
        if r == 0 || r > q - 1 {
            return Err(ConstructError::TooMany { r, max: q - 1 });
        }
        let mut sub: Vec<Elem> = ext.subfield_elements(t)[1..].to_vec();
        sub.sort();
        for xi in ext.gf().elements().filter(|&x| !ext.in_subfield(x, t)) {
            let mut mus = Vec::new();
            for &m in &sub {
                mus.push(m);
                let p = MonomialParams {
                    s,
                    xi,
                    mus: mus.clone(),
                    append_subfield,
                };
                if p.validate(ext).is_err() {
                    mus.pop();
                } else if mus.len() == r {
                    return Ok(p);
                }
            }
        }
        Err(ConstructError::NoParameters)
    }
}

/// W_{μ x^{q^s}, ξ} = {u + ξ μ u^{q^s} : u ∈ F_{q^t}}.
pub fn monomial_subspace(ext: &Arc<Extension>, s: u32, mu: Elem, xi: Elem) -> Result<Subspace, ConstructError> {
    let t = half_degree(ext)?;
    let f = LinearizedPoly::monomial(Arc::clone(ext), t, s, mu, 1)?;
    Ok(graph_subspace(&f, xi)?)
}

/// The family {W_{μ_i x^{q^s}, ξ}}, followed by F_{q^t} when requested.
pub fn monomial_family(ext: &Arc<Extension>, p: &MonomialParams) -> Result<SubspaceFamily, ConstructError> {
    p.validate(ext)?;
    let t = half_degree(ext)?;
    let mut members = p
        .mus
        .iter()
        .map(|&m| monomial_subspace(ext, p.s, m, p.xi))
        .collect::<Result<Vec<_>, _>>()?;
    if p.append_subfield {
        members.push(Subspace::subfield(ext, t)?);
    }
    Ok(SubspaceFamily::new(members)?)
}

/// Data of the G_{n,s} code family: V_i = {u + u^{q^s} γ_i : u ∈ F_{q^t}},
/// γ_i = w^i γ_0, 0 <= i < τ = floor((q-1)/2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RothCodeParams {
    pub q: u32,
    pub t: u32,
    pub s: u32,
    pub w: Elem,
    pub b: Elem,
    pub gamma0: Elem,
    pub tau: usize,
}

impl RothCodeParams {
    pub fn gammas(&self, ext: &Extension) -> Vec<Elem> {
        let gf = ext.gf();
        (0..self.tau)
            .map(|i| gf.mul(gf.pow(self.w, i as u64), self.gamma0))
            .collect()
    }

    /// The same family as monomial parameters: μ_i = w^i, ξ = γ_0.
    pub fn as_monomial(&self, ext: &Extension, append_subfield: bool) -> MonomialParams {
        let gf = ext.gf();
        MonomialParams {
            s: self.s,
            xi: self.gamma0,
            mus: (0..self.tau).map(|i| gf.pow(self.w, i as u64)).collect(),
            append_subfield,
        }
    }

    pub fn family(&self, ext: &Arc<Extension>, append_subfield: bool) -> Result<SubspaceFamily, ConstructError> {
        monomial_family(ext, &self.as_monomial(ext, append_subfield))
    }
}

/// Smallest primitive w of F_{q^t} outside the (q^s - 1)-th powers, then the
/// smallest b with x^2 + bx + w irreducible over F_{q^t}; γ_0 is the smaller root.
pub fn roth_code_params(ext: &Arc<Extension>, s: u32) -> Result<RothCodeParams, ConstructError> {
    let t = half_degree(ext)?;
    let q = ext.q();
    if q < 3 {
        return Err(ConstructError::BaseFieldTooSmall);
    }
    if gcd(s, t) != 1 {
        return Err(ConstructError::TwistNotCoprime { s, t });
    }
    let gf = ext.gf();
    let w = ext.smallest_primitive_in(t);
    // The (q^s - 1)-power image is the index-(q-1) subgroup of F_{q^t}^*.
    let index_exp = (ext.q_pow(t) - 1) / (q as u64 - 1);
    if gf.pow(w, index_exp) == Elem::ONE {
        return Err(ConstructError::NoQualifyingW);
    }
    // Roots of x^2 + bx + w are the γ outside F_{q^t} with γ^(q^t+1) = w.
    let g = gf.primitive();
    let h = gf.pow(g, ext.q_pow(t) + 1);
    let mut ell = 0u64;
    let mut acc = Elem::ONE;
    while acc != w {
        acc = gf.mul(acc, h);
        ell += 1;
    }
    let base = gf.pow(g, ell);
    let z = gf.pow(g, ext.q_pow(t) - 1);
    let mut best: Option<(Elem, Elem)> = None;
    let mut gamma = base;
    for _ in 0..=ext.q_pow(t) {
        if !ext.in_subfield(gamma, t) {
            let conj = ext.frob(gamma, t as i64);
            let b = gf.neg(gf.add(gamma, conj));
            let root = gamma.min(conj);
            if best.is_none_or(|(bb, _)| b < bb) {
                best = Some((b, root));
            }
        }
        gamma = gf.mul(gamma, z);
    }
    let (b, gamma0) = best.ok_or(ConstructError::NoQualifyingW)?;
    debug_assert_eq!(gf.pow(gamma0, ext.q_pow(t) + 1), w);
    Ok(RothCodeParams {
        q,
        t,
        s,
        w,
        b,
        gamma0,
        tau: ((q - 1) / 2) as usize,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialClause {
    /// s ≡ s' (mod t), B = 0, N(A μ̄^ρ / μ) = 1.
    SameTwist,
    /// s ≡ -s' (mod t), B = -A a, N(μ A b μ̄^ρ) = 1.
    OppositeTwist,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialEquivalence {
    /// Whether some automorphism and permutation satisfy the clauses.
    pub clauses_hold: bool,
    /// Clause used for each i, for the first (ρ, σ) that satisfies them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clauses: Option<Vec<MonomialClause>>,
    /// A validated witness P_i = λ_i (Q_{σ(i)})^ρ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquivalenceWitness>,
    /// Set when t = 2: the clauses are not complete there, so the generic
    /// search decides.
    pub generic_fallback: bool,
}

impl MonomialEquivalence {
    pub fn equivalent(&self) -> bool {
        self.witness.is_some()
    }
}

fn clause_for(
    ext: &Extension,
    t: u32,
    p: &MonomialParams,
    q: &MonomialParams,
    mu: Elem,
    mubar_rho: Elem,
    coeffs: (Elem, Elem, Elem, Elem),
) -> Option<MonomialClause> {
    let gf = ext.gf();
    let (a, b, big_a, big_b) = coeffs;
    let tt = t as i64;
    let same = (p.s as i64 - q.s as i64).rem_euclid(tt) == 0;
    let opposite = (p.s as i64 + q.s as i64).rem_euclid(tt) == 0;
    if same && big_b.is_zero() && norm_t(ext, t, gf.div(gf.mul(big_a, mubar_rho), mu)) == Elem::ONE {
        return Some(MonomialClause::SameTwist);
    }
    if opposite
        && big_b == gf.neg(gf.mul(big_a, a))
        && norm_t(ext, t, gf.mul(gf.mul(mu, big_a), gf.mul(b, mubar_rho))) == Elem::ONE
    {
        return Some(MonomialClause::OppositeTwist);
    }
    None
}

/// Decides whether {W_{μ_i x^{q^s}, ξ}} = {λ_i W_{μ̄_σ(i) x^{q^s'}, η}^ρ} by
/// the clause test, then recovers and validates the scalars.
pub fn monomial_equivalence(
    ext: &Arc<Extension>,
    p: &MonomialParams,
    q: &MonomialParams,
) -> Result<MonomialEquivalence, ConstructError> {
    p.validate(ext)?;
    q.validate(ext)?;
    if p.mus.len() != q.mus.len() || p.append_subfield != q.append_subfield {
        return Err(ConstructError::SizeMismatch(p.mus.len(), q.mus.len()));
    }
    let t = half_degree(ext)?;
    let gf = ext.gf();
    let r = p.mus.len();
    let xi = p.xi;
    let a = gf.add(xi, ext.frob(xi, t as i64));
    let b = gf.neg(gf.mul(xi, ext.frob(xi, t as i64)));
    let fam_p = monomial_family(ext, p)?;
    let fam_q = monomial_family(ext, q)?;
    let mut first_clauses = None;
    for rho in automorphisms(ext, AutomorphismSet::Semilinear) {
        let eta_rho = gf.frobenius_p(q.xi, rho);
        // η^ρ = A ξ + B
        let den = gf.sub(xi, ext.frob(xi, t as i64));
        let big_a = gf.div(gf.sub(eta_rho, ext.frob(eta_rho, t as i64)), den);
        let big_b = gf.sub(eta_rho, gf.mul(big_a, xi));
        let table: Vec<Vec<Option<MonomialClause>>> = p
            .mus
            .iter()
            .map(|&mu| {
                q.mus
                    .iter()
                    .map(|&mb| clause_for(ext, t, p, q, mu, gf.frobenius_p(mb, rho), (a, b, big_a, big_b)))
                    .collect()
            })
            .collect();
        for sigma in permutations(r) {
            if !(0..r).all(|i| table[i][sigma[i]].is_some()) {
                continue;
            }
            let clauses: Vec<MonomialClause> = (0..r).map(|i| table[i][sigma[i]].unwrap()).collect();
            first_clauses.get_or_insert_with(|| clauses.clone());
            let mut full_sigma = sigma.clone();
            if p.append_subfield {
                full_sigma.push(r);
            }
            let mut lambdas = Vec::with_capacity(full_sigma.len());
            for (i, &c) in full_sigma.iter().enumerate() {
                let target = &fam_p.members()[i];
                let image = fam_q.members()[c].frobenius_image(rho);
                match matching_scalar(target, &image) {
                    Some(l) => lambdas.push(l),
                    None => break,
                }
            }
            if lambdas.len() == full_sigma.len() {
                let w = EquivalenceWitness {
                    sigma: full_sigma,
                    lambdas,
                    rho,
                };
                if w.validates(&fam_q, &fam_p) {
                    return Ok(MonomialEquivalence {
                        clauses_hold: true,
                        clauses: Some(clauses),
                        witness: Some(w),
                        generic_fallback: false,
                    });
                }
            }
        }
    }
    let mut verdict = MonomialEquivalence {
        clauses_hold: first_clauses.is_some(),
        clauses: first_clauses,
        witness: None,
        generic_fallback: false,
    };
    if t < 3 {
        verdict.generic_fallback = true;
        verdict.witness = family_equivalence(&fam_q, &fam_p, AutomorphismSet::Semilinear)?;
    }
    Ok(verdict)
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(r - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, r - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Why two families cannot be equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedVerdict {
    pub inequivalent: bool,
    /// Members that are F_{q^d}-linear for some d > 1, per family.
    pub linear_members: (usize, usize),
    /// Whether the generic search also finds no witness.
    pub generic_agrees: bool,
}

/// A pure monomial family against one carrying F_{q^t}: scalar multiples and
/// automorphisms preserve the largest field of linearity, F_{q^t} is linear
/// over F_{q^t} and the monomial subspaces only over F_q, so no equivalence
/// exists. The generic search is run as a cross-check.
pub fn mixed_inequivalence_check(
    ext: &Arc<Extension>,
    pure: &MonomialParams,
    augmented: &MonomialParams,
) -> Result<MixedVerdict, ConstructError> {
    half_degree(ext)?;
    let fa = monomial_family(ext, pure)?;
    let fb = monomial_family(ext, augmented)?;
    let count = |f: &SubspaceFamily| -> Result<usize, ConstructError> {
        let mut c = 0;
        for u in f.members() {
            if u.orbit_stabilizer()?.stabilizer_degree > 1 {
                c += 1;
            }
        }
        Ok(c)
    };
    let linear_members = (count(&fa)?, count(&fb)?);
    let inequivalent = linear_members.0 != linear_members.1 || fa.len() != fb.len();
    let generic = family_equivalence(&fa, &fb, AutomorphismSet::Semilinear)?;
    Ok(MixedVerdict {
        inequivalent,
        linear_members,
        generic_agrees: generic.is_none() == inequivalent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sidon::{is_multi_sidon, MultiRoute};

    fn ext(q: u32, n: u32) -> Arc<Extension> {
        Extension::build(q, n).unwrap()
    }

    #[test]
    fn search_finds_valid_params() {
        let e = ext(3, 4);
        let p = MonomialParams::search(&e, 1, 2, false).unwrap();
        assert_eq!(p.mus.len(), 2);
        let fam = monomial_family(&e, &p).unwrap();
        assert!(is_multi_sidon(&fam, MultiRoute::Profile).unwrap().result);
        let aug = MonomialParams {
            append_subfield: true,
            ..p
        };
        assert_eq!(monomial_family(&e, &aug).unwrap().len(), 3);
    }

    #[test]
    fn validation_names_the_failure() {
        let e = ext(3, 4);
        let p = MonomialParams::search(&e, 1, 2, false).unwrap();
        let same = MonomialParams {
            mus: vec![p.mus[0], p.mus[0]],
            ..p.clone()
        };
        assert_eq!(same.validate(&e), Err(ConstructError::NormsCoincide { i: 0, j: 1 }));
        let bad_s = MonomialParams { s: 2, ..p.clone() };
        assert_eq!(bad_s.validate(&e), Err(ConstructError::TwistNotCoprime { s: 2, t: 2 }));
        let too_many = MonomialParams {
            mus: vec![p.mus[0], p.mus[1], p.mus[1]],
            ..p.clone()
        };
        assert!(matches!(too_many.validate(&e), Err(ConstructError::TooMany { .. })));
        let e2 = ext(2, 4);
        let bin = MonomialParams {
            s: 1,
            xi: e2.smallest_outside(2),
            mus: vec![Elem(1), Elem(1)],
            append_subfield: false,
        };
        assert_eq!(bin.validate(&e2), Err(ConstructError::BinaryField));
    }

    #[test]
    fn roth_params_small_cases() {
        let e = ext(5, 4);
        let rp = roth_code_params(&e, 1).unwrap();
        assert_eq!(rp.tau, 2);
        let gf = e.gf();
        assert_eq!(gf.pow(rp.gamma0, 26), rp.w);
        assert!(!e.in_subfield(rp.gamma0, 2));
        // γ_0 is a root of x^2 + bx + w
        let val = gf.add(gf.add(gf.mul(rp.gamma0, rp.gamma0), gf.mul(rp.b, rp.gamma0)), rp.w);
        assert!(val.is_zero());
        rp.as_monomial(&e, false).validate(&e).unwrap();
        assert_eq!(roth_code_params(&ext(3, 4), 1).unwrap().tau, 1);
        assert_eq!(roth_code_params(&ext(2, 4), 1), Err(ConstructError::BaseFieldTooSmall));
    }

    #[test]
    fn roth_q4_t3_is_multi_sidon() {
        let e = ext(4, 6);
        let rp = roth_code_params(&e, 2).unwrap();
        assert_eq!(rp.tau, 1);
        let fam = rp.family(&e, false).unwrap();
        assert!(is_multi_sidon(&fam, MultiRoute::Profile).unwrap().result);
    }

    #[test]
    fn equivalence_with_itself() {
        let e = ext(3, 4);
        let p = MonomialParams::search(&e, 1, 2, false).unwrap();
        let v = monomial_equivalence(&e, &p, &p).unwrap();
        assert!(v.clauses_hold);
        assert!(v.witness.is_some());
    }

    #[test]
    fn mixed_pair_is_inequivalent() {
        let e = ext(3, 4);
        let p = MonomialParams::search(&e, 1, 2, false).unwrap();
        let aug = MonomialParams {
            mus: vec![p.mus[0]],
            append_subfield: true,
            ..p.clone()
        };
        let v = mixed_inequivalence_check(&e, &p, &aug).unwrap();
        assert!(v.inequivalent && v.generic_agrees);
        assert_eq!(v.linear_members, (0, 1));
    }
}
