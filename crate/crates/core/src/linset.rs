//! F_q-linear sets L_U in PG(r-1, q^n): weight spectra, heavy points, the
//! hyperplane weights of the dual, normalization to a Cartesian product, and
//! the projection-map representation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::matrix::{invert, vec_mul};
use crate::field::{projection_polys, Elem, Extension, FieldError, LinearizedPoly};
use crate::fp::FpMatrix;
use crate::sidon::{is_sidon, SidonError, SidonRoute, SubspaceFamily};
use crate::subspace::{Subspace, SubspaceError};

/// Default enumeration guard: at most 3^16 vectors.
pub const DEFAULT_ENUM_CAP: u64 = 43_046_721;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinsetError {
    #[error("enumeration of {size} vectors exceeds the cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("vectors must have {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generating vectors are F_q-dependent")]
    DependentVectors,
    #[error("the subspace is zero")]
    ZeroRank,
    #[error("U is not a Sidon space")]
    NotSidon,
    #[error("linear set size {got} differs from the closed form {expected}")]
    SizeMismatch { expected: u128, got: u128 },
    #[error("rank {rank} is not rn/2 = {half} (r = {r}, n = {n})")]
    RankNotHalf {
        rank: usize,
        half: usize,
        r: usize,
        n: usize,
    },
    #[error("heavy points are not the r coordinate points")]
    HeavyPointsMismatch,
    #[error("the given points are dependent")]
    DependentPoints,
    #[error("point weights sum to {got}, expected the rank {expected}")]
    WeightSumMismatch { expected: usize, got: usize },
    #[error("rank {k} exceeds (r-1)n = {bound}")]
    RankTooLarge { k: usize, bound: usize },
    #[error("need at least {0} coordinates")]
    TooFewCoordinates(usize),
    #[error("parts do not form a direct sum of the whole field")]
    NotADecomposition,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Sidon(#[from] SidonError),
}

/// An F_q-subspace of F_{q^n}^r given by an F_q-basis.
#[derive(Clone, Debug)]
pub struct VectorSpace {
    ext: Arc<Extension>,
    r: usize,
    basis: Vec<Vec<Elem>>,
}

fn flatten_digits(ext: &Extension, v: &[Elem]) -> Vec<u32> {
    let gf = ext.gf();
    v.iter().flat_map(|&x| gf.digits(x)).collect()
}

impl VectorSpace {
    /// Checks F_q-independence of the rows.
    pub fn new(ext: &Arc<Extension>, r: usize, basis: Vec<Vec<Elem>>) -> Result<Self, LinsetError> {
        let gf = ext.gf();
        for v in &basis {
            if v.len() != r {
                return Err(LinsetError::LengthMismatch {
                    expected: r,
                    got: v.len(),
                });
            }
            if let Some(&x) = v.iter().find(|&&x| !gf.contains(x)) {
                return Err(FieldError::ForeignElement(x.0).into());
            }
        }
        let space = VectorSpace {
            ext: Arc::clone(ext),
            r,
            basis,
        };
        if space.fp_rank() != space.basis.len() * ext.e() as usize {
            return Err(LinsetError::DependentVectors);
        }
        Ok(space)
    }

    /// F_q-span of arbitrary vectors, reduced to a basis greedily.
    pub fn span(ext: &Arc<Extension>, r: usize, vectors: &[Vec<Elem>]) -> Result<Self, LinsetError> {
        let mut kept: Vec<Vec<Elem>> = Vec::new();
        for v in vectors {
            kept.push(v.clone());
            if VectorSpace::new(ext, r, kept.clone()).is_err() {
                kept.pop();
            }
        }
        VectorSpace::new(ext, r, kept)
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    fn fp_rows(&self) -> Vec<Vec<u32>> {
        let gf = self.ext.gf();
        let fq = self.ext.base_fp_basis();
        self.basis
            .iter()
            .flat_map(|v| {
                fq.iter()
                    .map(move |&w| v.iter().map(|&x| gf.mul(w, x)).collect::<Vec<_>>())
            })
            .map(|v| flatten_digits(&self.ext, &v))
            .collect()
    }

    fn fp_rank(&self) -> usize {
        let cols = self.r * self.ext.gf().degree() as usize;
        FpMatrix::new(self.ext.p(), cols, self.fp_rows()).rank()
    }

    /// Image under x -> x M for an r x r matrix over F_{q^n}.
    pub fn transform(&self, m: &[Vec<Elem>]) -> Result<Self, LinsetError> {
        let gf = self.ext.gf();
        let basis = self.basis.iter().map(|v| vec_mul(gf, v, m)).collect();
        VectorSpace::new(&self.ext, self.r, basis)
    }

    /// Whether `other` spans the same F_q-space.
    pub fn same_space(&self, other: &VectorSpace) -> bool {
        if self.r != other.r || self.rank() != other.rank() || *self.ext != *other.ext {
            return false;
        }
        let cols = self.r * self.ext.gf().degree() as usize;
        let mut rows = self.fp_rows();
        rows.extend(other.fp_rows());
        FpMatrix::new(self.ext.p(), cols, rows).rank() == self.rank() * self.ext.e() as usize
    }

    /// U ∩ ⟨e_i⟩ read off in coordinate i.
    pub fn coordinate_factor(&self, i: usize) -> Result<Subspace, LinsetError> {
        let gf = self.ext.gf();
        let m = gf.degree() as usize;
        let fq = self.ext.base_fp_basis();
        let vectors: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .flat_map(|v| {
                fq.iter()
                    .map(move |&w| v.iter().map(|&x| gf.mul(w, x)).collect::<Vec<_>>())
            })
            .collect();
        // combinations c with sum_a c_a v_a vanishing outside coordinate i
        let cols = vectors.len();
        let mut rows = vec![vec![0u32; cols]; (self.r - 1) * m];
        for (a, v) in vectors.iter().enumerate() {
            let mut row = 0;
            for (j, &x) in v.iter().enumerate() {
                if j == i {
                    continue;
                }
                for (d, digit) in gf.digits(x).into_iter().enumerate() {
                    rows[row + d][a] = digit;
                }
                row += m;
            }
        }
        let null = FpMatrix::new(self.ext.p(), cols, rows).nullspace();
        let elems: Vec<Elem> = null
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&vectors)
                    .fold(Elem::ZERO, |acc, (&ca, v)| gf.axpy(acc, ca, v[i]))
            })
            .collect();
        Ok(Subspace::span(&self.ext, &elems)?)
    }
}

/// U_1 x ... x U_r.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    factors: Vec<Subspace>,
    space: VectorSpace,
}

impl ProductSpace {
    pub fn new(factors: Vec<Subspace>) -> Result<Self, LinsetError> {
        let first = factors.first().ok_or(LinsetError::ZeroRank)?;
        let ext = Arc::clone(first.ext());
        if factors.iter().any(|u| **u.ext() != *ext) {
            return Err(SubspaceError::FieldMismatch.into());
        }
        let r = factors.len();
        let mut basis = Vec::new();
        for (i, u) in factors.iter().enumerate() {
            for b in u.fq_basis() {
                let mut v = vec![Elem::ZERO; r];
                v[i] = b;
                basis.push(v);
            }
        }
        Ok(ProductSpace {
            space: VectorSpace::new(&ext, r, basis)?,
            factors,
        })
    }

    pub fn from_family(f: &SubspaceFamily) -> Result<Self, LinsetError> {
        ProductSpace::new(f.members().to_vec())
    }

    pub fn factors(&self) -> &[Subspace] {
        &self.factors
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }
}

/// Scales v so that its first nonzero coordinate is 1; `None` for zero.
pub fn normalize_point(ext: &Extension, v: &[Elem]) -> Option<Vec<Elem>> {
    let gf = ext.gf();
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let inv = gf.inv(lead);
    Some(v.iter().map(|&x| gf.mul(inv, x)).collect())
}

fn check_cap(q: u32, k: usize, cap: u64) -> Result<u64, LinsetError> {
    let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(LinsetError::CapExceeded { size, cap });
    }
    Ok(size as u64)
}

/// Vector multiplicity m_P of every point of L_U.
pub fn point_multiplicities(v: &VectorSpace, cap: u64) -> Result<HashMap<Vec<Elem>, u64>, LinsetError> {
    if v.rank() == 0 {
        return Err(LinsetError::ZeroRank);
    }
    let ext = &v.ext;
    let gf = ext.gf();
    let q = ext.q() as u64;
    let k = v.rank();
    let total = check_cap(ext.q(), k, cap)?;
    let fq = ext.base_elements();
    // mult[i][c] = fq[c] * v_i
    let mult: Vec<Vec<Vec<Elem>>> = v
        .basis
        .iter()
        .map(|b| fq.iter().map(|&c| b.iter().map(|&x| gf.mul(c, x)).collect()).collect())
        .collect();
    let chunks = (total / 4096).clamp(1, 256);
    let step = total.div_ceil(chunks);
    let maps: Vec<HashMap<Vec<Elem>, u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * step;
            let end = ((c + 1) * step).min(total);
            let mut local = HashMap::new();
            if start >= end {
                return local;
            }
            let mut digits = vec![0usize; k];
            let mut x = start;
            for d in digits.iter_mut() {
                *d = (x % q) as usize;
                x /= q;
            }
            let mut sum = vec![Elem::ZERO; v.r];
            for (i, &d) in digits.iter().enumerate() {
                for (s, &y) in sum.iter_mut().zip(&mult[i][d]) {
                    *s = gf.add(*s, y);
                }
            }
            for _ in start..end {
                if let Some(p) = normalize_point(ext, &sum) {
                    *local.entry(p).or_insert(0) += 1;
                }
                // odometer step
                for (i, d) in digits.iter_mut().enumerate() {
                    let old = *d;
                    *d = (old + 1) % q as usize;
                    for ((s, &a), &b) in sum.iter_mut().zip(&mult[i][old]).zip(&mult[i][*d]) {
                        *s = gf.add(gf.sub(*s, a), b);
                    }
                    if *d != 0 {
                        break;
                    }
                }
            }
            local
        })
        .collect();
    let mut out: HashMap<Vec<Elem>, u64> = HashMap::new();
    for m in maps {
        for (p, c) in m {
            *out.entry(p).or_insert(0) += c;
        }
    }
    Ok(out)
}

/// w with m = q^w - 1.
fn weight_of(q: u64, m: u64) -> usize {
    let mut w = 0;
    let mut acc = 1u64;
    while acc - 1 < m {
        acc *= q;
        w += 1;
    }
    debug_assert_eq!(acc - 1, m, "multiplicity is not q^w - 1");
    w
}

fn geometric(q: u128, k: u32) -> u128 {
    (0..k).map(|i| q.pow(i)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpectrum {
    /// weight -> N_i, for i >= 1.
    pub counts: BTreeMap<usize, u64>,
    pub size: u64,
    pub rank: usize,
    pub q: u32,
    /// Points of PG(r-1, q^n) outside L_U, when it fits in 128 bits.
    pub n0: Option<u128>,
    pub identities_ok: bool,
}

impl WeightSpectrum {
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    /// |L_U| = N_1 + ... + N_k.
    pub fn size_identity(&self) -> bool {
        self.counts.values().sum::<u64>() == self.size
    }

    /// sum_i N_i (q^(i-1) + ... + 1) = q^(k-1) + ... + 1.
    pub fn vector_identity(&self) -> bool {
        let q = self.q as u128;
        let lhs: u128 = self
            .counts
            .iter()
            .map(|(&w, &n)| n as u128 * geometric(q, w as u32))
            .sum();
        lhs == geometric(q, self.rank as u32)
    }

    /// |L_U| <= (q^k - 1)/(q - 1).
    pub fn size_bound(&self) -> bool {
        (self.size as u128) <= geometric(self.q as u128, self.rank as u32)
    }
}

fn points_in_projective_space(ext: &Extension, r: usize) -> Option<u128> {
    let qn = ext.q_pow(ext.n()) as u128;
    let num = qn.checked_pow(r as u32)?.checked_sub(1)?;
    Some(num / (qn - 1))
}

pub fn spectrum_from(mults: &HashMap<Vec<Elem>, u64>, v: &VectorSpace) -> WeightSpectrum {
    let q = v.ext.q() as u64;
    let mut counts = BTreeMap::new();
    for &m in mults.values() {
        *counts.entry(weight_of(q, m)).or_insert(0) += 1;
    }
    let size = mults.len() as u64;
    let n0 = points_in_projective_space(&v.ext, v.r).map(|t| t - size as u128);
    let mut s = WeightSpectrum {
        counts,
        size,
        rank: v.rank(),
        q: v.ext.q(),
        n0,
        identities_ok: false,
    };
    s.identities_ok = s.size_identity() && s.vector_identity() && s.size_bound();
    s
}

pub fn weight_spectrum(v: &VectorSpace, cap: u64) -> Result<WeightSpectrum, LinsetError> {
    let mults = point_multiplicities(v, cap)?;
    Ok(spectrum_from(&mults, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavyPoint {
    pub point: Vec<Elem>,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavyPointReport {
    /// Points of weight >= 2, sorted.
    pub heavy: Vec<HeavyPoint>,
    /// Heavy points are exactly the ⟨e_i⟩ with weights k_i (all k_i >= 2).
    pub coordinate_points_only: bool,
    /// dim(U_i ∩ αU_j) <= 1 for all i != j and α.
    pub cross_intersections_ok: bool,
    /// w <= n/2 for every heavy point; set when only coordinate points are heavy.
    pub weight_bound_ok: Option<bool>,
    /// rank <= rn/2; set under the same hypothesis.
    pub rank_bound_ok: Option<bool>,
    pub spectrum: WeightSpectrum,
}

pub fn heavy_points_analysis(v: &ProductSpace, cap: u64) -> Result<HeavyPointReport, LinsetError> {
    let ext = v.space.ext();
    let r = v.space.r;
    let n = ext.n() as usize;
    let q = ext.q() as u64;
    let mults = point_multiplicities(&v.space, cap)?;
    let mut heavy: Vec<HeavyPoint> = mults
        .iter()
        .map(|(p, &m)| HeavyPoint {
            point: p.clone(),
            weight: weight_of(q, m),
        })
        .filter(|h| h.weight >= 2)
        .collect();
    heavy.sort_by(|a, b| b.point.cmp(&a.point));
    let mut expected: Vec<HeavyPoint> = v
        .factors
        .iter()
        .enumerate()
        .filter(|(_, u)| u.dim() >= 2)
        .map(|(i, u)| {
            let mut e = vec![Elem::ZERO; r];
            e[i] = Elem::ONE;
            HeavyPoint {
                point: e,
                weight: u.dim(),
            }
        })
        .collect();
    expected.sort_by(|a, b| b.point.cmp(&a.point));
    let all_heavy = v.factors.iter().all(|u| u.dim() >= 2);
    let coordinate_points_only = all_heavy && heavy == expected;
    let mut cross_intersections_ok = true;
    'outer: for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let prof = v.factors[i].intersection_profile(&v.factors[j])?;
            if prof.entries().iter().any(|&(_, d)| d > 1) {
                cross_intersections_ok = false;
                break 'outer;
            }
        }
    }
    let hyp = coordinate_points_only && v.rank() <= (r.saturating_sub(1)) * n;
    let weight_bound_ok = hyp.then(|| heavy.iter().all(|h| 2 * h.weight <= n));
    let rank_bound_ok = hyp.then(|| 2 * v.rank() <= r * n);
    Ok(HeavyPointReport {
        heavy,
        coordinate_points_only,
        cross_intersections_ok,
        weight_bound_ok,
        rank_bound_ok,
        spectrum: spectrum_from(&mults, &v.space),
    })
}

/// sum_i (q^{k_i}-1)/(q-1) (q^{k_i} - q) <= q^n - q, the count bound for
/// multi-Sidon families.
pub fn family_count_bound(q: u32, n: u32, dims: &[usize]) -> bool {
    let q = q as u128;
    let lhs: u128 = dims
        .iter()
        .map(|&k| geometric(q, k as u32) * (q.pow(k as u32) - q))
        .sum();
    lhs <= q.pow(n) - q
}

/// (q^k-1)/(q-1) (q^k - q) + q + 1.
pub fn sidon_size_formula(q: u32, k: usize) -> u128 {
    let q = q as u128;
    geometric(q, k as u32) * (q.pow(k as u32) - q) + q + 1
}

/// |L_{U x U}| for a Sidon space U, checked against the closed form.
pub fn sidon_linearset_size(u: &Subspace, cap: u64) -> Result<u64, LinsetError> {
    if !is_sidon(u, SidonRoute::OrbitIntersection)?.result {
        return Err(LinsetError::NotSidon);
    }
    let v = ProductSpace::new(vec![u.clone(), u.clone()])?;
    let s = weight_spectrum(&v.space, cap)?;
    let expected = sidon_size_formula(u.ext().q(), u.dim());
    if s.size as u128 != expected {
        return Err(LinsetError::SizeMismatch {
            expected,
            got: s.size as u128,
        });
    }
    Ok(s.size)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneReport {
    /// Dual weight -> number of hyperplanes.
    pub counts: BTreeMap<usize, u128>,
    pub total: u128,
    /// rn/2 - n, rn/2 - n + 1, and the top weight rn/2 - n + n/2 that the
    /// transfer gives for the heavy points.
    pub weights: [usize; 3],
    /// The top weight written as rn/2 - n + r; equal to ours only when r = n/2.
    pub stated_top_weight: usize,
}

/// Weights of the hyperplanes of PG(r-1, q^n) with respect to the dual of
/// L_U, by transfer from point weights: w*(P^τ) = w(P) + rn - k - n.
pub fn hyperplane_weights(v: &ProductSpace, cap: u64) -> Result<HyperplaneReport, LinsetError> {
    let ext = v.space.ext();
    let r = v.space.r;
    let n = ext.n() as usize;
    if r < 2 {
        return Err(LinsetError::TooFewCoordinates(2));
    }
    if !(r * n).is_multiple_of(2) || 2 * v.rank() != r * n {
        return Err(LinsetError::RankNotHalf {
            rank: v.rank(),
            half: r * n / 2,
            r,
            n,
        });
    }
    let rep = heavy_points_analysis(v, cap)?;
    if !rep.coordinate_points_only {
        return Err(LinsetError::HeavyPointsMismatch);
    }
    let base = r * n / 2 - n;
    let total = points_in_projective_space(ext, r).ok_or(LinsetError::CapExceeded { size: u128::MAX, cap })?;
    let mut counts = BTreeMap::new();
    for (&w, &c) in &rep.spectrum.counts {
        *counts.entry(w + base).or_insert(0u128) += c as u128;
    }
    counts.insert(base, total - rep.spectrum.size as u128);
    Ok(HyperplaneReport {
        counts,
        total,
        weights: [base, base + 1, base + n / 2],
        stated_top_weight: base + r,
    })
}

/// Output of `structure_normalize`: W · witness = product.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub product: ProductSpace,
    /// r x r matrix over F_{q^n}: M^{-1} diag(λ).
    pub witness: Vec<Vec<Elem>>,
    /// The λ_i when k <= n, making λ_1U_1 + ... + λ_rU_r direct.
    pub lambdas: Option<Vec<Elem>>,
}

/// Sends the points to ⟨e_i⟩ and reads off the factors; for k <= n also
/// rescales them into a direct sum by scanning λ in ascending order.
pub fn structure_normalize(w: &VectorSpace, points: &[Vec<Elem>]) -> Result<Normalization, LinsetError> {
    let ext = w.ext();
    let gf = ext.gf();
    let r = w.r;
    let n = ext.n() as usize;
    if points.len() != r || points.iter().any(|p| p.len() != r) {
        return Err(LinsetError::LengthMismatch {
            expected: r,
            got: points.len(),
        });
    }
    let k = w.rank();
    if k > (r - 1) * n {
        return Err(LinsetError::RankTooLarge { k, bound: (r - 1) * n });
    }
    let m_inv = invert(gf, points).ok_or(LinsetError::DependentPoints)?;
    let u = w.transform(&m_inv)?;
    let factors = (0..r).map(|i| u.coordinate_factor(i)).collect::<Result<Vec<_>, _>>()?;
    let got: usize = factors.iter().map(|f| f.dim()).sum();
    if got != k {
        return Err(LinsetError::WeightSumMismatch { expected: k, got });
    }
    let mut lambdas = None;
    let mut scaled = factors.clone();
    if k <= n {
        let mut ls = vec![Elem::ONE];
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            let lam = gf
                .elements()
                .skip(1)
                .find(|&l| acc.intersect_dim_scaled(f, l) == 0)
                .expect("a separating scalar exists when k <= n");
            let g = f.scalar_mul(lam)?;
            acc = acc.sum(&g)?;
            ls.push(lam);
        }
        scaled = factors
            .iter()
            .zip(&ls)
            .map(|(f, &l)| f.scalar_mul(l))
            .collect::<Result<_, _>>()?;
        lambdas = Some(ls);
    }
    let diag = lambdas.clone().unwrap_or_else(|| vec![Elem::ONE; r]);
    let witness: Vec<Vec<Elem>> = m_inv
        .iter()
        .map(|row| row.iter().zip(&diag).map(|(&x, &l)| gf.mul(x, l)).collect())
        .collect();
    Ok(Normalization {
        product: ProductSpace::new(scaled)?,
        witness,
        lambdas,
    })
}

#[derive(Clone, Debug)]
pub struct ProjectionReport {
    /// p_1, ..., p_r; only p_2, ..., p_r enter L_p.
    pub polys: Vec<LinearizedPoly>,
    pub sum_is_identity: bool,
    /// p_i ∘ p_j = δ_ij p_i.
    pub orthogonal_idempotents: bool,
    /// image(p_i) = U_i.
    pub images_match: bool,
    /// L_p equals the image of L_{U_1 x ... x U_r} under the all-ones-first-row matrix.
    pub set_equality: bool,
}

/// Projection maps of F_{q^n} = U_1 ⊕ ... ⊕ U_r and an exhaustive check of
/// their properties and of the point-set identity.
pub fn projection_form(parts: &[Subspace]) -> Result<ProjectionReport, LinsetError> {
    let ext = Arc::clone(parts.first().ok_or(LinsetError::NotADecomposition)?.ext());
    let gf = ext.gf();
    let bases: Vec<Vec<Elem>> = parts.iter().map(|u| u.fq_basis()).collect();
    let polys = projection_polys(&ext, &bases).map_err(|e| match e {
        FieldError::NotADecomposition => LinsetError::NotADecomposition,
        other => other.into(),
    })?;
    let all: Vec<Elem> = gf.elements().collect();
    let images: Vec<Vec<Elem>> = polys.iter().map(|p| all.iter().map(|&x| p.eval(x)).collect()).collect();
    let sum_is_identity = all
        .iter()
        .enumerate()
        .all(|(idx, &x)| images.iter().fold(Elem::ZERO, |acc, im| gf.add(acc, im[idx])) == x);
    let r = parts.len();
    let mut orthogonal_idempotents = true;
    for i in 0..r {
        for j in 0..r {
            let ok = images[j].iter().zip(&images[i]).all(|(&pj, &pi)| {
                let lhs = polys[i].eval(pj);
                if i == j {
                    lhs == pi
                } else {
                    lhs.is_zero()
                }
            });
            orthogonal_idempotents &= ok;
        }
    }
    let images_match = parts
        .iter()
        .zip(&images)
        .all(|(u, im)| Subspace::span(&ext, im).map(|s| &s == u).unwrap_or(false));
    // f(u) = (sum u_i, u_2, ..., u_r) for u in the product
    let product = ProductSpace::new(parts.to_vec())?;
    let mut via_product: Vec<Vec<Elem>> = Vec::new();
    let fq = ext.base_elements();
    let q = fq.len();
    let basis = product.space.basis();
    let total = check_cap(ext.q(), basis.len(), DEFAULT_ENUM_CAP)?;
    for idx in 1..total {
        let mut x = idx;
        let mut v = vec![Elem::ZERO; r];
        for b in basis {
            let c = fq[(x % q as u64) as usize];
            x /= q as u64;
            for (s, &y) in v.iter_mut().zip(b) {
                *s = gf.add(*s, gf.mul(c, y));
            }
        }
        let first = v.iter().fold(Elem::ZERO, |acc, &y| gf.add(acc, y));
        let mut fv = v.clone();
        fv[0] = first;
        via_product.extend(normalize_point(&ext, &fv));
    }
    let mut via_polys: Vec<Vec<Elem>> = all[1..]
        .iter()
        .enumerate()
        .filter_map(|(idx, &x)| {
            let mut v = vec![x];
            v.extend(images[1..].iter().map(|im| im[idx + 1]));
            normalize_point(&ext, &v)
        })
        .collect();
    via_product.sort();
    via_product.dedup();
    via_polys.sort();
    via_polys.dedup();
    Ok(ProjectionReport {
        polys,
        sum_is_identity,
        orthogonal_idempotents,
        images_match,
        set_equality: via_product == via_polys,
    })
}
