//! Sidon, multi-Sidon and weak multi-Sidon verification, the canonical form
//! of maximum families with its polynomial criterion, and family equivalence.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Extension, FieldError, LinearizedPoly};
use crate::subspace::{Subspace, SubspaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SidonError {
    #[error("a family needs at least one subspace")]
    EmptyFamily,
    #[error("family members live in different fields")]
    FieldMismatch,
    #[error("subspace {index} has dimension {dim}, below the required 2")]
    DimensionTooSmall { index: usize, dim: usize },
    #[error("canonical forms need n even and every dimension n/2")]
    NotMaximum,
    #[error("eta {0} lies in the half-degree subfield")]
    EtaInSubfield(u32),
    #[error("expected {expected} eta values, got {got}")]
    EtaCount { expected: usize, got: usize },
    #[error("no scalar separates subspace {0} from eta F_(q^t); this contradicts the existence argument")]
    NoSeparatingScalar(usize),
    #[error("canonical form is inconsistent: {0}")]
    MalformedCanonicalForm(String),
    #[error("pairwise intersection hypothesis fails: dim(U_{i} ∩ αU_{j}) = {dim} for α = {alpha}")]
    HypothesisViolated {
        family: usize,
        i: usize,
        j: usize,
        alpha: u32,
        dim: usize,
    },
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An ordered list of subspaces of one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    ext: Arc<Extension>,
    members: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(members: Vec<Subspace>) -> Result<Self, SidonError> {
        let first = members.first().ok_or(SidonError::EmptyFamily)?;
        let ext = Arc::clone(first.ext());
        if members.iter().any(|u| **u.ext() != *ext) {
            return Err(SidonError::FieldMismatch);
        }
        Ok(SubspaceFamily { ext, members })
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|u| u.dim()).collect()
    }

    fn require_dim_two(&self) -> Result<(), SidonError> {
        match self.members.iter().enumerate().find(|(_, u)| u.dim() < 2) {
            Some((index, u)) => Err(SidonError::DimensionTooSmall { index, dim: u.dim() }),
            None => Ok(()),
        }
    }

    /// Pairs (i, j) with i <= j in lexicographic order.
    fn pairs(&self) -> Vec<(usize, usize)> {
        let r = self.members.len();
        (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect()
    }
}

/// Which computation backs a Sidon verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SidonRoute {
    /// Orbit size plus dim(U ∩ αU) <= 1 for α outside F_q.
    OrbitIntersection,
    /// Unique factorization of products up to F_q-scalars.
    Definitional,
}

/// Which computation backs a multi-Sidon verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiRoute {
    /// One pass over pairs of class representatives per (i, j).
    Profile,
    /// dim(U_i ∩ αU_j) for every coset representative α.
    AlphaScan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SidonWitness {
    /// The subspace is linear over a larger field, so its orbit is short.
    ShortOrbit { index: usize, stabilizer_degree: u32 },
    /// αU_j = U_i with i != j, or α outside F_q with i = j.
    SharedOrbit { i: usize, j: usize, alpha: Elem },
    /// dim(U_i ∩ αU_j) >= 2 without equality.
    LargeIntersection {
        i: usize,
        j: usize,
        alpha: Elem,
        dim: usize,
    },
    /// ab = cd with {aF_q, bF_q} != {cF_q, dF_q}; a, c from U_i and b, d from U_j.
    Factorization {
        i: usize,
        j: usize,
        a: Elem,
        b: Elem,
        c: Elem,
        d: Elem,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SidonWitness>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            result: true,
            witness: None,
        }
    }

    fn fail(w: SidonWitness) -> Self {
        Verdict {
            result: false,
            witness: Some(w),
        }
    }
}

pub fn is_sidon(u: &Subspace, route: SidonRoute) -> Result<Verdict, SidonError> {
    let fam = SubspaceFamily::new(vec![u.clone()])?;
    match route {
        SidonRoute::OrbitIntersection => is_multi_sidon(&fam, MultiRoute::Profile),
        SidonRoute::Definitional => {
            fam.require_dim_two()?;
            Ok(factorization_check(&fam))
        }
    }
}

/// Orbit-size clause for every member.
fn orbit_clause(f: &SubspaceFamily) -> Result<Option<SidonWitness>, SidonError> {
    for (index, u) in f.members.iter().enumerate() {
        let info = u.orbit_stabilizer()?;
        if info.stabilizer_degree != 1 {
            return Ok(Some(SidonWitness::ShortOrbit {
                index,
                stabilizer_degree: info.stabilizer_degree,
            }));
        }
    }
    Ok(None)
}

/// Classify dim(U_i ∩ αU_j) = dim: equality of subspaces (allowed only for
/// i = j with α in F_q) or an intersection that is too large.
fn classify(f: &SubspaceFamily, i: usize, j: usize, alpha: Elem, dim: usize) -> Option<SidonWitness> {
    if dim <= 1 {
        return None;
    }
    let (ui, uj) = (&f.members[i], &f.members[j]);
    let equal = dim == ui.dim() && dim == uj.dim();
    if equal {
        if i == j && f.ext.in_subfield(alpha, 1) {
            None
        } else {
            Some(SidonWitness::SharedOrbit { i, j, alpha })
        }
    } else {
        Some(SidonWitness::LargeIntersection { i, j, alpha, dim })
    }
}

fn pair_failure_profile(f: &SubspaceFamily, i: usize, j: usize) -> Option<SidonWitness> {
    let profile = f.members[i].intersection_profile_unchecked(&f.members[j]);
    let mut worst: Option<SidonWitness> = None;
    for &(alpha, dim) in profile.entries() {
        if let Some(w) = classify(f, i, j, alpha, dim) {
            // shared orbits are reported before large intersections
            let shared = matches!(w, SidonWitness::SharedOrbit { .. });
            if shared {
                return Some(w);
            }
            worst.get_or_insert(w);
        }
    }
    worst
}

fn pair_failure_scan(f: &SubspaceFamily, i: usize, j: usize) -> Option<SidonWitness> {
    let (ui, uj) = (&f.members[i], &f.members[j]);
    let mut worst: Option<SidonWitness> = None;
    for alpha in f.ext.coset_reps() {
        let dim = ui.intersect_dim_scaled(uj, alpha);
        if let Some(w) = classify(f, i, j, alpha, dim) {
            if matches!(w, SidonWitness::SharedOrbit { .. }) {
                return Some(w);
            }
            worst.get_or_insert(w);
        }
    }
    worst
}

/// Multi-Sidon test: full-size orbits, pairwise distinct orbits, and
/// dim(U_i ∩ αU_j) <= 1 whenever U_i != αU_j. Shared orbits are reported
/// (clause b) before oversized intersections (clause c).
pub fn is_multi_sidon(f: &SubspaceFamily, route: MultiRoute) -> Result<Verdict, SidonError> {
    f.require_dim_two()?;
    if let Some(w) = orbit_clause(f)? {
        return Ok(Verdict::fail(w));
    }
    let pairs = f.pairs();
    let failures: Vec<Option<SidonWitness>> = pairs
        .par_iter()
        .map(|&(i, j)| match route {
            MultiRoute::Profile => pair_failure_profile(f, i, j),
            MultiRoute::AlphaScan => pair_failure_scan(f, i, j),
        })
        .collect();
    let shared = failures
        .iter()
        .flatten()
        .find(|w| matches!(w, SidonWitness::SharedOrbit { .. }));
    if let Some(w) = shared.or_else(|| failures.iter().flatten().next()) {
        return Ok(Verdict::fail(w.clone()));
    }
    Ok(Verdict::pass())
}

/// Product-uniqueness check over F_q^*-class representatives, for every pair
/// i <= j: ab = cd (a, c in U_i; b, d in U_j) forces {aF_q, bF_q} = {cF_q, dF_q}.
fn factorization_check(f: &SubspaceFamily) -> Verdict {
    let ext = &*f.ext;
    let gf = ext.gf();
    let reps: Vec<Vec<Elem>> = f.members.iter().map(|u| u.class_reps()).collect();
    let keys: Vec<Vec<Elem>> = reps
        .iter()
        .map(|r| r.iter().map(|&x| ext.class_key(x)).collect())
        .collect();
    let results: Vec<Option<SidonWitness>> = f
        .pairs()
        .par_iter()
        .map(|&(i, j)| {
            // product class -> (a, b, sorted class keys of the pair)
            let mut seen: HashMap<Elem, (Elem, Elem, (Elem, Elem))> = HashMap::new();
            for (ia, &a) in reps[i].iter().enumerate() {
                let start = if i == j { ia } else { 0 };
                for (ib, &b) in reps[j].iter().enumerate().skip(start) {
                    let (ka, kb) = (keys[i][ia], keys[j][ib]);
                    let pk = gf.mul(ka, kb);
                    let pair = if ka <= kb { (ka, kb) } else { (kb, ka) };
                    match seen.get(&pk) {
                        None => {
                            seen.insert(pk, (a, b, pair));
                        }
                        Some(&(c0, d0, other)) if other != pair => {
                            // rescale so that a b = c d exactly
                            let c = gf.div(gf.mul(a, b), d0);
                            debug_assert_eq!(ext.class_key(c), ext.class_key(c0));
                            return Some(SidonWitness::Factorization { i, j, a, b, c, d: d0 });
                        }
                        Some(_) => {}
                    }
                }
            }
            None
        })
        .collect();
    match results.into_iter().flatten().next() {
        Some(w) => Verdict::fail(w),
        None => Verdict::pass(),
    }
}

/// Weak multi-Sidon test by brute force over class representatives.
pub fn is_weak_multi_sidon(f: &SubspaceFamily) -> Verdict {
    factorization_check(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanClass {
    MinimumSpan,
    MaximumSpan,
    /// Both bounds coincide (every k_i <= 3 and equality at both ends).
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub square_dims: Vec<usize>,
    pub total: usize,
    pub lower: usize,
    pub upper: usize,
    pub class: SpanClass,
    /// Whether 2∑k_i <= D <= ∑C(k_i+1, 2) holds; only evaluated for
    /// multi-Sidon families with every k_i >= 3.
    pub bounds_hold: Option<bool>,
}

pub fn span_class(f: &SubspaceFamily) -> Result<SpanReport, SidonError> {
    let square_dims: Vec<usize> = f
        .members
        .iter()
        .map(|u| u.product_span(u).map(|s| s.dim()))
        .collect::<Result<_, _>>()?;
    let total: usize = square_dims.iter().sum();
    let dims = f.dims();
    let lower: usize = dims.iter().map(|k| 2 * k).sum();
    let upper: usize = dims.iter().map(|k| k * (k + 1) / 2).sum();
    let class = match (total == lower, total == upper) {
        (true, true) => SpanClass::Both,
        (true, false) => SpanClass::MinimumSpan,
        (false, true) => SpanClass::MaximumSpan,
        (false, false) => SpanClass::Neither,
    };
    let bounds_hold = if dims.iter().all(|&k| k >= 3) && is_multi_sidon(f, MultiRoute::Profile)?.result {
        Some(lower <= total && total <= upper)
    } else {
        None
    };
    Ok(SpanReport {
        square_dims,
        total,
        lower,
        upper,
        class,
        bounds_hold,
    })
}

/// W_{f,η} = {x + η f(x) : x ∈ F_{q^t}} for f acting on F_{q^t}.
pub fn graph_subspace(f: &LinearizedPoly, eta: Elem) -> Result<Subspace, SidonError> {
    let ext = f.ext();
    let gf = ext.gf();
    let t = f.field_degree();
    let vecs: Vec<Elem> = ext
        .subfield_basis(t)
        .into_iter()
        .map(|x| gf.add(x, gf.mul(eta, f.eval(x))))
        .collect();
    Ok(Subspace::span(ext, &vecs)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPart {
    pub f: LinearizedPoly,
    pub eta: Elem,
    /// λ with λU = W_{f,η}.
    pub lambda: Elem,
}

/// Canonical form of a maximum family: λ_i U_i = W_{f_i,η_i} with
/// η_i^2 = a_i η_i + b_i and η_i = A_{i,j} η_j + B_{i,j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub t: u32,
    pub parts: Vec<CanonicalPart>,
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
    pub big_a: Vec<Vec<Elem>>,
    pub big_b: Vec<Vec<Elem>>,
}

/// x + η y with x, y in F_{q^t}; returns (x, y).
fn split(ext: &Extension, t: u32, w: Elem, eta: Elem) -> (Elem, Elem) {
    let gf = ext.gf();
    let den = gf.sub(eta, ext.frob(eta, t as i64));
    let y = gf.div(gf.sub(w, ext.frob(w, t as i64)), den);
    let x = gf.sub(w, gf.mul(eta, y));
    (x, y)
}

pub fn canonical_form(f: &SubspaceFamily, etas: Option<&[Elem]>) -> Result<CanonicalForm, SidonError> {
    let ext = &f.ext;
    let gf = ext.gf();
    let n = ext.n();
    if !n.is_multiple_of(2) || f.members.iter().any(|u| u.dim() != n as usize / 2) {
        return Err(SidonError::NotMaximum);
    }
    let t = n / 2;
    let r = f.len();
    let etas: Vec<Elem> = match etas {
        Some(e) if e.len() != r => {
            return Err(SidonError::EtaCount {
                expected: r,
                got: e.len(),
            })
        }
        Some(e) => e.to_vec(),
        None => vec![ext.smallest_outside(t); r],
    };
    if let Some(e) = etas.iter().find(|&&e| !gf.contains(e) || ext.in_subfield(e, t)) {
        return Err(SidonError::EtaInSubfield(e.0));
    }
    let reps = ext.coset_reps();
    let mut parts = Vec::with_capacity(r);
    for (idx, (u, &eta)) in f.members.iter().zip(&etas).enumerate() {
        let line = Subspace::span(
            ext,
            &ext.subfield_basis(t)
                .iter()
                .map(|&x| gf.mul(eta, x))
                .collect::<Vec<_>>(),
        )?;
        let lambda = reps
            .iter()
            .copied()
            .find(|&l| u.scale_unchecked(l).intersect_dim_unchecked(&line) == 0)
            .ok_or(SidonError::NoSeparatingScalar(idx))?;
        let basis: Vec<Elem> = u.fq_basis().into_iter().map(|w| gf.mul(lambda, w)).collect();
        let (xs, ys): (Vec<Elem>, Vec<Elem>) = basis.iter().map(|&w| split(ext, t, w, eta)).unzip();
        let poly = LinearizedPoly::interpolate(Arc::clone(ext), t, &xs, &ys)?;
        parts.push(CanonicalPart { f: poly, eta, lambda });
    }
    let a = etas.iter().map(|&e| gf.add(e, ext.frob(e, t as i64))).collect();
    let b = etas.iter().map(|&e| gf.neg(gf.mul(e, ext.frob(e, t as i64)))).collect();
    let mut big_a = vec![vec![Elem::ZERO; r]; r];
    let mut big_b = vec![vec![Elem::ZERO; r]; r];
    for i in 0..r {
        for j in 0..r {
            let (bij, aij) = split(ext, t, etas[i], etas[j]);
            big_a[i][j] = aij;
            big_b[i][j] = bij;
        }
    }
    Ok(CanonicalForm {
        t,
        parts,
        a,
        b,
        big_a,
        big_b,
    })
}

impl CanonicalForm {
    /// Recomputes the structure constants and each W_{f_i,η_i}.
    pub fn validate(&self, f: &SubspaceFamily) -> Result<(), SidonError> {
        let ext = &f.ext;
        let gf = ext.gf();
        let bad = |m: &str| Err(SidonError::MalformedCanonicalForm(m.to_string()));
        if self.parts.len() != f.len() || self.t * 2 != ext.n() {
            return bad("sizes");
        }
        for (i, part) in self.parts.iter().enumerate() {
            let eta = part.eta;
            let sq = gf.mul(eta, eta);
            if sq != gf.add(gf.mul(self.a[i], eta), self.b[i]) {
                return bad("eta^2 != a eta + b");
            }
            if graph_subspace(&part.f, eta)? != f.members[i].scalar_mul(part.lambda)? {
                return bad("λU != W_{f,η}");
            }
            for (j, other) in self.parts.iter().enumerate() {
                let rhs = gf.add(gf.mul(self.big_a[i][j], other.eta), self.big_b[i][j]);
                if rhs != eta {
                    return bad("eta_i != A eta_j + B");
                }
            }
        }
        Ok(())
    }
}

/// Failure certificate of the polynomial criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWitness {
    pub i: usize,
    pub j: usize,
    pub alpha0: Elem,
    pub alpha1: Elem,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyVerdict {
    pub result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PolyWitness>,
}

/// For i <= j and α = α_0 + α_1 η_i != 0, the F_q-linear map
/// v -> f_i(u) - (α_1 v + α_0 A y + α_1 A a_i y + α_1 B y), with y = f_j(v),
/// u = α_0 v + α_1 A b_i y + α_0 B y, A = A_{j,i}, B = B_{j,i},
/// has kernel {v : u + η_i f_i(u) = α(v + η_j f_j(v))}; it must have
/// dimension <= 1 unless W_i = αW_j with i = j and α in F_q.
pub fn poly_criterion(c: &CanonicalForm) -> Result<PolyVerdict, SidonError> {
    let r = c.parts.len();
    if c.a.len() != r || c.b.len() != r || c.big_a.len() != r || c.big_b.len() != r {
        return Err(SidonError::MalformedCanonicalForm("structure constant sizes".into()));
    }
    let Some(first) = c.parts.first() else {
        return Err(SidonError::EmptyFamily);
    };
    let ext = Arc::clone(first.f.ext());
    let gf = ext.gf();
    let t = c.t;
    let sub = ext.subfield_elements(t);
    let alphas: Vec<(Elem, Elem)> = sub
        .iter()
        .flat_map(|&a0| sub.iter().map(move |&a1| (a0, a1)))
        .filter(|&(a0, a1)| !(a0.is_zero() && a1.is_zero()))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let full = t as usize;
    let results: Vec<Option<PolyWitness>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (fi, fj) = (&c.parts[i].f, &c.parts[j].f);
            let (big_a, big_b) = (c.big_a[j][i], c.big_b[j][i]);
            let (ai, bi) = (c.a[i], c.b[i]);
            for &(a0, a1) in &alphas {
                let map = |v: Elem| {
                    let y = fj.eval(v);
                    let u = gf.add(
                        gf.add(gf.mul(a0, v), gf.mul(gf.mul(a1, gf.mul(big_a, bi)), y)),
                        gf.mul(gf.mul(a0, big_b), y),
                    );
                    let rhs = gf.add(
                        gf.add(gf.mul(a1, v), gf.mul(gf.mul(a0, big_a), y)),
                        gf.add(gf.mul(gf.mul(a1, gf.mul(big_a, ai)), y), gf.mul(gf.mul(a1, big_b), y)),
                    );
                    gf.sub(fi.eval(u), rhs)
                };
                let dim = crate::field::fq_kernel_dim(&ext, t, map);
                let allowed = dim <= 1 || (dim == full && i == j && a1.is_zero() && ext.in_subfield(a0, 1));
                if !allowed {
                    return Some(PolyWitness {
                        i,
                        j,
                        alpha0: a0,
                        alpha1: a1,
                        kernel_dim: dim,
                    });
                }
            }
            None
        })
        .collect();
    Ok(match results.into_iter().flatten().next() {
        Some(w) => PolyVerdict {
            result: false,
            witness: Some(w),
        },
        None => PolyVerdict {
            result: true,
            witness: None,
        },
    })
}

/// Which automorphisms an equivalence search may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutomorphismSet {
    /// x -> x^(q^j): fixes F_q.
    Linear,
    /// x -> x^(p^j): all of Aut(F_{q^n}).
    Semilinear,
}

/// B_i = λ_i (A_{σ(i)})^ρ with ρ: x -> x^(p^rho).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub sigma: Vec<usize>,
    pub lambdas: Vec<Elem>,
    pub rho: u32,
}

impl EquivalenceWitness {
    pub fn identity(r: usize) -> Self {
        EquivalenceWitness {
            sigma: (0..r).collect(),
            lambdas: vec![Elem::ONE; r],
            rho: 0,
        }
    }

    /// Applies the witness: the family with members λ_i A_{σ(i)}^ρ.
    pub fn apply(&self, a: &SubspaceFamily) -> Result<SubspaceFamily, SidonError> {
        let members = self
            .sigma
            .iter()
            .zip(&self.lambdas)
            .map(|(&s, &l)| a.members[s].frobenius_image(self.rho).scalar_mul(l))
            .collect::<Result<Vec<_>, _>>()?;
        SubspaceFamily::new(members)
    }

    pub fn validates(&self, a: &SubspaceFamily, b: &SubspaceFamily) -> bool {
        let r = a.len();
        if b.len() != r || self.sigma.len() != r || self.lambdas.len() != r {
            return false;
        }
        let mut seen = vec![false; r];
        for &s in &self.sigma {
            if s >= r || std::mem::replace(&mut seen[s], true) {
                return false;
            }
        }
        match self.apply(a) {
            Ok(img) => img.members == b.members,
            Err(_) => false,
        }
    }

    /// Witness for B -> A: A_{σ(i)} = (λ_i^-1)^(ρ^-1) B_i^(ρ^-1).
    pub fn inverse(&self, ext: &Extension) -> Self {
        let gf = ext.gf();
        let m = gf.degree();
        let rho_inv = (m - self.rho % m) % m;
        let r = self.sigma.len();
        let mut sigma = vec![0; r];
        let mut lambdas = vec![Elem::ONE; r];
        for i in 0..r {
            let s = self.sigma[i];
            sigma[s] = i;
            lambdas[s] = gf.frobenius_p(gf.inv(self.lambdas[i]), rho_inv);
        }
        EquivalenceWitness {
            sigma,
            lambdas,
            rho: rho_inv,
        }
    }

    /// If self maps A to B and `next` maps B to C, the witness mapping A to C.
    pub fn then(&self, next: &Self, ext: &Extension) -> Self {
        let gf = ext.gf();
        let m = gf.degree();
        let sigma = next.sigma.iter().map(|&t| self.sigma[t]).collect();
        let lambdas = next
            .sigma
            .iter()
            .zip(&next.lambdas)
            .map(|(&t, &mu)| gf.mul(mu, gf.frobenius_p(self.lambdas[t], next.rho)))
            .collect();
        EquivalenceWitness {
            sigma,
            lambdas,
            rho: (self.rho + next.rho) % m,
        }
    }
}

/// The intersection hypothesis of the equivalence criterion:
/// dim(U_i ∩ αU_j) <= 1 unless U_i = αU_j.
pub fn check_intersection_hypothesis(f: &SubspaceFamily, family: usize) -> Result<(), SidonError> {
    for (i, j) in f.pairs() {
        let (ui, uj) = (&f.members[i], &f.members[j]);
        let profile = ui.intersection_profile_unchecked(uj);
        for &(alpha, dim) in profile.entries() {
            let equal = dim == ui.dim() && dim == uj.dim();
            if dim > 1 && !equal {
                return Err(SidonError::HypothesisViolated {
                    family,
                    i,
                    j,
                    alpha: alpha.0,
                    dim,
                });
            }
        }
    }
    Ok(())
}

/// Scalars λ with λV = W, found as w_0/v for one fixed w_0 ∈ W and v over the
/// class representatives of V (F_q^* multiples give the same subspace).
pub(crate) fn matching_scalar(w: &Subspace, v: &Subspace) -> Option<Elem> {
    if w.dim() != v.dim() {
        return None;
    }
    if w.is_zero() {
        return Some(Elem::ONE);
    }
    let gf = w.ext().gf();
    let w0 = w.fq_basis()[0];
    v.class_reps()
        .into_iter()
        .map(|x| gf.div(w0, x))
        .find(|&l| w.equals_scaled(v, l))
}

fn find_matching(compat: &[Vec<Option<Elem>>]) -> Option<Vec<usize>> {
    fn go(i: usize, compat: &[Vec<Option<Elem>>], used: &mut [bool], out: &mut Vec<usize>) -> bool {
        if i == compat.len() {
            return true;
        }
        for c in 0..compat.len() {
            if !used[c] && compat[i][c].is_some() {
                used[c] = true;
                out.push(c);
                if go(i + 1, compat, used, out) {
                    return true;
                }
                out.pop();
                used[c] = false;
            }
        }
        false
    }
    let mut used = vec![false; compat.len()];
    let mut out = Vec::new();
    go(0, compat, &mut used, &mut out).then_some(out)
}

/// Automorphism exponents (powers of p) allowed by `autos`.
pub fn automorphisms(ext: &Extension, autos: AutomorphismSet) -> Vec<u32> {
    let m = ext.gf().degree();
    match autos {
        AutomorphismSet::Semilinear => (0..m).collect(),
        AutomorphismSet::Linear => (0..ext.n()).map(|j| j * ext.e()).collect(),
    }
}

/// Searches for B_i = λ_i A_{σ(i)}^ρ. Both families must satisfy the
/// intersection hypothesis; a violation is an error, not an inequivalence.
pub fn family_equivalence(
    a: &SubspaceFamily,
    b: &SubspaceFamily,
    autos: AutomorphismSet,
) -> Result<Option<EquivalenceWitness>, SidonError> {
    if *a.ext != *b.ext {
        return Err(SidonError::FieldMismatch);
    }
    check_intersection_hypothesis(a, 0)?;
    check_intersection_hypothesis(b, 1)?;
    if a.len() != b.len() {
        return Ok(None);
    }
    let mut da = a.dims();
    let mut db = b.dims();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(None);
    }
    let r = a.len();
    for rho in automorphisms(&a.ext, autos) {
        let images: Vec<Subspace> = a.members.iter().map(|u| u.frobenius_image(rho)).collect();
        let compat: Vec<Vec<Option<Elem>>> = b
            .members
            .par_iter()
            .map(|w| images.iter().map(|v| matching_scalar(w, v)).collect())
            .collect();
        if let Some(sigma) = find_matching(&compat) {
            let lambdas = (0..r).map(|i| compat[i][sigma[i]].expect("matched")).collect();
            let w = EquivalenceWitness { sigma, lambdas, rho };
            debug_assert!(w.validates(a, b));
            return Ok(Some(w));
        }
    }
    Ok(None)
}
