//! F_q-subspaces of F_{q^n}, their scalar orbits, and product/quotient sets.
//!
//! A subspace is stored as the reduced echelon F_p-basis of its underlying
//! F_p-space. For prime q this is the F_q reduced echelon form itself; for
//! q = p^e it is an equally canonical encoding of the same subspace, and
//! equality of subspaces is equality of the stored rows either way.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Elem, Extension, FieldError};
use crate::fp::FpBasis;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("subspaces live in different fields")]
    FieldMismatch,
    #[error("element {0} is not in the ambient field")]
    ForeignElement(u32),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("operation undefined for the zero subspace")]
    ZeroSubspace,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An F_q-subspace of F_{q^n} in canonical form.
#[derive(Clone)]
pub struct Subspace {
    ext: Arc<Extension>,
    basis: FpBasis,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && *self.ext == *other.ext
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.basis.cmp(&other.basis)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {}, {:?})", self.dim(), self.basis.rows())
    }
}

/// Stabilizer data of a scalar orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OrbitInfo {
    /// Largest d with the subspace closed under multiplication by F_{q^d}.
    pub stabilizer_degree: u32,
    /// (q^n - 1)/(q^d - 1).
    pub orbit_size: u64,
}

/// d with (q^d - 1)/(q - 1) = count.
pub(crate) fn dim_from_class_count(q: u32, count: u64) -> usize {
    let mut d = 0usize;
    let mut acc = 0u64;
    let mut pw = 1u64;
    while acc < count {
        acc += pw;
        pw *= q as u64;
        d += 1;
    }
    debug_assert_eq!(acc, count, "class count is not a projective space size");
    d
}

/// For each class αF_q^* with U ∩ αV ≠ 0: the dimension of U ∩ αV and one α.
#[derive(Clone, Debug)]
pub struct IntersectionProfile {
    q: u32,
    entries: Vec<(Elem, usize)>,
}

impl IntersectionProfile {
    /// (α, dim(U ∩ αV)) for every class with a nontrivial intersection,
    /// ordered by first discovery.
    pub fn entries(&self) -> &[(Elem, usize)] {
        &self.entries
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

impl Subspace {
    fn from_basis(ext: Arc<Extension>, basis: FpBasis) -> Self {
        Subspace { ext, basis }
    }

    /// The F_q-span of `vectors`, canonicalized.
    pub fn span(ext: &Arc<Extension>, vectors: &[Elem]) -> Result<Self, SubspaceError> {
        let gf = ext.gf();
        let fq = ext.base_fp_basis();
        let mut basis = FpBasis::new();
        for &v in vectors {
            if !gf.contains(v) {
                return Err(SubspaceError::ForeignElement(v.0));
            }
            for &w in &fq {
                basis.insert(gf, gf.mul(w, v));
            }
        }
        Ok(Subspace::from_basis(Arc::clone(ext), basis))
    }

    pub fn zero(ext: &Arc<Extension>) -> Self {
        Subspace::from_basis(Arc::clone(ext), FpBasis::new())
    }

    /// F_{q^d} as an F_q-subspace.
    pub fn subfield(ext: &Arc<Extension>, d: u32) -> Result<Self, SubspaceError> {
        if d == 0 || !ext.n().is_multiple_of(d) {
            return Err(FieldError::NotADivisor { d, n: ext.n() }.into());
        }
        Subspace::span(ext, &ext.subfield_basis(d))
    }

    pub fn whole(ext: &Arc<Extension>) -> Self {
        Subspace::subfield(ext, ext.n()).expect("n divides n")
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn fp_basis(&self) -> &FpBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rank() / self.ext.e() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rank() == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), SubspaceError> {
        if Arc::ptr_eq(&self.ext, &other.ext) || *self.ext == *other.ext {
            Ok(())
        } else {
            Err(SubspaceError::FieldMismatch)
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.basis.contains(self.ext.gf(), x)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.rows().iter().all(|&v| self.contains(v))
    }

    /// A deterministic F_q-basis, chosen greedily from the canonical rows.
    pub fn fq_basis(&self) -> Vec<Elem> {
        if self.ext.e() == 1 {
            return self.basis.rows().to_vec();
        }
        let gf = self.ext.gf();
        let fq = self.ext.base_fp_basis();
        let mut seen = FpBasis::new();
        let mut out = Vec::with_capacity(self.dim());
        for &row in self.basis.rows() {
            if !seen.contains(gf, row) {
                out.push(row);
                for &w in &fq {
                    seen.insert(gf, gf.mul(w, row));
                }
            }
        }
        out
    }

    /// Every vector of the subspace, zero first.
    pub fn elements(&self) -> Vec<Elem> {
        self.basis.elements(self.ext.gf())
    }

    /// One nonzero vector from each F_q^*-class: b_i + sum_{j>i} c_j b_j.
    pub fn class_reps(&self) -> Vec<Elem> {
        let gf = self.ext.gf();
        let b = self.fq_basis();
        let fq = self.ext.base_elements();
        let mut out = Vec::new();
        for i in (0..b.len()).rev() {
            // tails: all F_q-combinations of b_{i+1..}
            let start = out.len();
            out.push(b[i]);
            for &bj in &b[i + 1..] {
                let len = out.len();
                for &c in &fq[1..] {
                    let cb = gf.mul(c, bj);
                    for k in start..len {
                        let v = gf.add(out[k], cb);
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    pub fn scalar_mul(&self, alpha: Elem) -> Result<Subspace, SubspaceError> {
        if alpha.is_zero() {
            return Err(SubspaceError::ZeroScalar);
        }
        if !self.ext.gf().contains(alpha) {
            return Err(SubspaceError::ForeignElement(alpha.0));
        }
        Ok(self.scale_unchecked(alpha))
    }

    pub(crate) fn scale_unchecked(&self, alpha: Elem) -> Subspace {
        let gf = self.ext.gf();
        let basis = FpBasis::from_vectors(gf, self.basis.rows().iter().map(|&v| gf.mul(alpha, v)));
        Subspace::from_basis(Arc::clone(&self.ext), basis)
    }

    /// Whether αU = self, tested row by row without canonicalizing αU.
    pub(crate) fn equals_scaled(&self, other: &Subspace, alpha: Elem) -> bool {
        let gf = self.ext.gf();
        self.basis.rank() == other.basis.rank() && other.basis.rows().iter().all(|&v| self.contains(gf.mul(alpha, v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.same_field(other)?;
        Ok(Subspace::from_basis(
            Arc::clone(&self.ext),
            self.basis.join(self.ext.gf(), &other.basis),
        ))
    }

    /// dim U + dim V - dim(U + V).
    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize, SubspaceError> {
        self.same_field(other)?;
        Ok(self.intersect_dim_unchecked(other))
    }

    pub(crate) fn intersect_dim_unchecked(&self, other: &Subspace) -> usize {
        let joined = self.basis.join(self.ext.gf(), &other.basis).rank();
        (self.basis.rank() + other.basis.rank() - joined) / self.ext.e() as usize
    }

    /// dim(U ∩ αV) without materializing αV.
    pub(crate) fn intersect_dim_scaled(&self, other: &Subspace, alpha: Elem) -> usize {
        let gf = self.ext.gf();
        let mut joined = self.basis.clone();
        let mut added = 0;
        for &v in other.basis.rows() {
            if joined.insert(gf, gf.mul(alpha, v)) {
                added += 1;
            }
        }
        (other.basis.rank() - added) / self.ext.e() as usize
    }

    /// U ∩ V.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.same_field(other)?;
        let gf = self.ext.gf();
        let mut basis = FpBasis::new();
        if self.basis.rank() <= other.basis.rank() {
            for v in self.elements() {
                if other.contains(v) {
                    basis.insert(gf, v);
                }
            }
        } else {
            return other.intersection(self);
        }
        Ok(Subspace::from_basis(Arc::clone(&self.ext), basis))
    }

    /// {u^(p^j) : u ∈ U}; an F_q-subspace whenever the automorphism fixes F_q,
    /// which holds for every automorphism since F_q is characteristic in F_{q^n}.
    pub fn frobenius_image(&self, j: u32) -> Subspace {
        let gf = self.ext.gf();
        let basis = FpBasis::from_vectors(gf, self.basis.rows().iter().map(|&v| gf.frobenius_p(v, j)));
        Subspace::from_basis(Arc::clone(&self.ext), basis)
    }

    /// Whether U is closed under multiplication by F_{q^d}.
    pub fn is_linear_over(&self, d: u32) -> bool {
        let gamma = self.ext.subfield_generator(d);
        self.equals_scaled(self, gamma)
    }

    pub fn orbit_stabilizer(&self) -> Result<OrbitInfo, SubspaceError> {
        if self.is_zero() {
            return Err(SubspaceError::ZeroSubspace);
        }
        let n = self.ext.n();
        let k = self.dim() as u32;
        let mut divisors: Vec<u32> = self.ext.divisors();
        divisors.reverse();
        let d = divisors
            .into_iter()
            .find(|&d| k.is_multiple_of(d) && (d == 1 || self.is_linear_over(d)))
            .expect("d = 1 always qualifies");
        Ok(OrbitInfo {
            stabilizer_degree: d,
            orbit_size: (self.ext.q_pow(n) - 1) / (self.ext.q_pow(d) - 1),
        })
    }

    /// The F_q-span of all products uv.
    pub fn product_span(&self, other: &Subspace) -> Result<Subspace, SubspaceError> {
        self.same_field(other)?;
        let gf = self.ext.gf();
        let mut basis = FpBasis::new();
        for &a in self.basis.rows() {
            for &b in other.basis.rows() {
                basis.insert(gf, gf.mul(a, b));
            }
        }
        Ok(Subspace::from_basis(Arc::clone(&self.ext), basis))
    }

    /// {u/v : u ∈ U, v ∈ U \ {0}} as a sorted set.
    pub fn quotient_set(&self) -> Result<BTreeSet<Elem>, SubspaceError> {
        if self.is_zero() {
            return Err(SubspaceError::ZeroSubspace);
        }
        let gf = self.ext.gf();
        let elems = self.elements();
        let mut out = BTreeSet::new();
        for &v in &elems[1..] {
            let vi = gf.inv(v);
            for &u in &elems {
                out.insert(gf.mul(u, vi));
            }
        }
        Ok(out)
    }

    /// Dimension of U ∩ αV for every class αF_q^* where it is nonzero, from
    /// one pass over pairs of class representatives: u = αv holds for exactly
    /// (q^d - 1)/(q - 1) pairs of classes when dim(U ∩ αV) = d.
    pub fn intersection_profile(&self, other: &Subspace) -> Result<IntersectionProfile, SubspaceError> {
        self.same_field(other)?;
        Ok(self.intersection_profile_unchecked(other))
    }

    pub(crate) fn intersection_profile_unchecked(&self, other: &Subspace) -> IntersectionProfile {
        let ext = &*self.ext;
        let gf = ext.gf();
        let ru = self.class_reps();
        let rv = other.class_reps();
        let rv_inv: Vec<Elem> = rv.iter().map(|&b| gf.inv(b)).collect();
        let ku: Vec<Elem> = ru.iter().map(|&a| ext.class_key(a)).collect();
        let kv: Vec<Elem> = rv_inv.iter().map(|&b| ext.class_key(b)).collect();
        let mut index: HashMap<Elem, usize> = HashMap::new();
        let mut counts: Vec<(Elem, u64)> = Vec::new();
        for (i, &ka) in ku.iter().enumerate() {
            for (j, &kb) in kv.iter().enumerate() {
                let key = gf.mul(ka, kb);
                match index.get(&key) {
                    Some(&slot) => counts[slot].1 += 1,
                    None => {
                        index.insert(key, counts.len());
                        counts.push((gf.mul(ru[i], rv_inv[j]), 1));
                    }
                }
            }
        }
        let q = ext.q();
        IntersectionProfile {
            q,
            entries: counts
                .into_iter()
                .map(|(alpha, c)| (alpha, dim_from_class_count(q, c)))
                .collect(),
        }
    }
}
