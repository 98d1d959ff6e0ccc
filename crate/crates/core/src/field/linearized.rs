use std::fmt;
use std::sync::Arc;

use super::ext::{gcd, Extension};
use super::gf::Elem;
use super::FieldError;
use crate::fp::FpBasis;

/// A q^s-polynomial sum a_i x^(q^(s i)) over the subfield F_{q^d} of an
/// extension, reduced modulo x^(q^d) - x, so at most d coefficients.
#[derive(Clone)]
pub struct LinearizedPoly {
    ext: Arc<Extension>,
    d: u32,
    s: u32,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LinearizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearizedPoly")
            .field("d", &self.d)
            .field("s", &self.s)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PartialEq for LinearizedPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ext == *other.ext && self.d == other.d && self.s == other.s && self.coeffs == other.coeffs
    }
}

impl Eq for LinearizedPoly {}

/// F_q-dimension of the kernel of an F_q-linear map on F_{q^d}.
pub(crate) fn fq_kernel_dim<F: Fn(Elem) -> Elem>(ext: &Extension, d: u32, f: F) -> usize {
    let gf = ext.gf();
    let basis = ext.subfield_fp_basis(d);
    let mut image = FpBasis::new();
    for b in &basis {
        image.insert(gf, f(*b));
    }
    (basis.len() - image.rank()) / ext.e() as usize
}

impl LinearizedPoly {
    /// Coefficient i multiplies x^(q^(s i)); indices at or beyond d wrap around.
    pub fn new(ext: Arc<Extension>, d: u32, s: u32, coeffs: Vec<Elem>) -> Result<Self, FieldError> {
        if d == 0 || !ext.n().is_multiple_of(d) {
            return Err(FieldError::NotADivisor { d, n: ext.n() });
        }
        if d > 1 && gcd(s as u64, d as u64) != 1 {
            return Err(FieldError::TwistNotCoprime { s, d });
        }
        let gf = ext.gf();
        let mut reduced = vec![Elem::ZERO; d as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            if !gf.contains(c) || !ext.in_subfield(c, d) {
                return Err(FieldError::ForeignElement(c.0));
            }
            let slot = &mut reduced[i % d as usize];
            *slot = gf.add(*slot, c);
        }
        let s = if d == 1 { 1 } else { s % d };
        let mut p = LinearizedPoly {
            ext,
            d,
            s,
            coeffs: reduced,
        };
        p.trim();
        Ok(p)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero(ext: Arc<Extension>, d: u32, s: u32) -> Result<Self, FieldError> {
        Self::new(ext, d, s, Vec::new())
    }

    pub fn identity(ext: Arc<Extension>, d: u32, s: u32) -> Result<Self, FieldError> {
        Self::new(ext, d, s, vec![Elem::ONE])
    }

    /// c x^(q^(s i)).
    pub fn monomial(ext: Arc<Extension>, d: u32, s: u32, c: Elem, i: usize) -> Result<Self, FieldError> {
        let mut coeffs = vec![Elem::ZERO; i + 1];
        coeffs[i] = c;
        Self::new(ext, d, s, coeffs)
    }

    /// The trace polynomial of F_{q^d} over F_q.
    pub fn trace(ext: Arc<Extension>, d: u32) -> Result<Self, FieldError> {
        Self::new(ext, d, 1, vec![Elem::ONE; d as usize])
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    /// Degree of the subfield the polynomial acts on.
    pub fn field_degree(&self) -> u32 {
        self.d
    }

    pub fn twist(&self) -> u32 {
        self.s
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// q^s-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let gf = self.ext.gf();
        let mut acc = Elem::ZERO;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let xi = self.ext.frob(x, self.s as i64 * i as i64);
                acc = gf.add(acc, gf.mul(c, xi));
            }
        }
        acc
    }

    fn check_compatible(&self, other: &Self) -> Result<(), FieldError> {
        if *self.ext != *other.ext || self.d != other.d {
            return Err(FieldError::FieldMismatch);
        }
        if self.s != other.s && !(self.coeffs.len() <= 1 || other.coeffs.len() <= 1) {
            return Err(FieldError::TwistMismatch(self.s, other.s));
        }
        Ok(())
    }

    /// The twist to use for a result combining `self` and `other`.
    fn joint_twist(&self, other: &Self) -> u32 {
        if self.coeffs.len() > 1 {
            self.s
        } else {
            other.s
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_compatible(other)?;
        let gf = self.ext.gf();
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| gf.add(self.coeff(i), other.coeff(i))).collect();
        Self::new(Arc::clone(&self.ext), self.d, self.joint_twist(other), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.scale(self.ext.gf().neg(Elem::ONE)))
    }

    /// c f(x).
    pub fn scale(&self, c: Elem) -> Self {
        let gf = self.ext.gf();
        let mut p = self.clone();
        for x in p.coeffs.iter_mut() {
            *x = gf.mul(*x, c);
        }
        p.trim();
        p
    }

    /// f(g(x)) modulo x^(q^d) - x.
    pub fn compose(&self, g: &Self) -> Result<Self, FieldError> {
        self.check_compatible(g)?;
        let gf = self.ext.gf();
        let s = self.joint_twist(g);
        let d = self.d as usize;
        let mut coeffs = vec![Elem::ZERO; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                let bi = self.ext.frob(b, s as i64 * i as i64);
                let slot = &mut coeffs[(i + j) % d];
                *slot = gf.add(*slot, gf.mul(a, bi));
            }
        }
        Self::new(Arc::clone(&self.ext), self.d, s, coeffs)
    }

    /// Kernel dimension over F_q via the rank of the induced F_q-linear map,
    /// with the degree bound and the norm identity for the extremal case
    /// checked on the way out.
    pub fn kernel_dim(&self) -> Result<usize, FieldError> {
        let Some(k) = self.degree() else {
            return Err(FieldError::ZeroPolynomial);
        };
        let dim = self.kernel_dim_unchecked();
        if dim > k {
            return Err(FieldError::KernelBoundViolated { dim, degree: k });
        }
        if dim == k && k > 0 && !self.norm_identity_holds() {
            return Err(FieldError::NormIdentityFailed);
        }
        Ok(dim)
    }

    /// Kernel dimension without the bound checks; the zero polynomial gives d.
    pub fn kernel_dim_unchecked(&self) -> usize {
        fq_kernel_dim(&self.ext, self.d, |x| self.eval(x))
    }

    /// N(a_0) = (-1)^(d k) N(a_k) with norms from F_{q^d} to F_q.
    pub fn norm_identity_holds(&self) -> bool {
        let Some(k) = self.degree() else { return false };
        let gf = self.ext.gf();
        let n0 = self.ext.norm_between(self.coeff(0), self.d, 1).expect("d divides n");
        let nk = self.ext.norm_between(self.coeff(k), self.d, 1).expect("d divides n");
        let rhs = if (self.d as usize * k) % 2 == 1 { gf.neg(nk) } else { nk };
        n0 == rhs
    }

    /// Number of roots in F_{q^d} by exhaustive evaluation.
    pub fn count_roots_exhaustive(&self) -> usize {
        self.ext
            .subfield_elements(self.d)
            .into_iter()
            .filter(|&x| self.eval(x).is_zero())
            .count()
    }

    /// The unique q-polynomial (s = 1) over F_{q^d} taking `values[k]` at
    /// `basis[k]`, where `basis` is an F_q-basis of F_{q^d}:
    /// c_j = sum_k values[k] (basis*_k)^(q^j).
    pub fn interpolate(ext: Arc<Extension>, d: u32, basis: &[Elem], values: &[Elem]) -> Result<Self, FieldError> {
        if values.len() != basis.len() {
            return Err(FieldError::WrongBasisSize {
                expected: basis.len(),
                got: values.len(),
            });
        }
        let dual = ext.dual_basis_in(basis, d)?;
        let gf = ext.gf();
        let coeffs = (0..d as i64)
            .map(|j| {
                values
                    .iter()
                    .zip(&dual)
                    .fold(Elem::ZERO, |acc, (&v, &b)| gf.add(acc, gf.mul(v, ext.frob(b, j))))
            })
            .collect();
        Self::new(ext, d, 1, coeffs)
    }
}

/// Projection maps for a decomposition F_{q^n} = U_1 ⊕ ... ⊕ U_r given by
/// F_q-bases of the parts: p_i = sum_j xi_ij Tr(xi*_ij x).
pub fn projection_polys(ext: &Arc<Extension>, parts: &[Vec<Elem>]) -> Result<Vec<LinearizedPoly>, FieldError> {
    let all: Vec<Elem> = parts.iter().flatten().copied().collect();
    if all.len() != ext.n() as usize {
        return Err(FieldError::NotADecomposition);
    }
    let dual = ext.dual_basis(&all).map_err(|e| match e {
        FieldError::DependentBasis => FieldError::NotADecomposition,
        other => other,
    })?;
    let gf = ext.gf();
    let mut out = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for part in parts {
        let coeffs = (0..ext.n() as i64)
            .map(|l| {
                part.iter().enumerate().fold(Elem::ZERO, |acc, (j, &xi)| {
                    gf.add(acc, gf.mul(xi, ext.frob(dual[offset + j], l)))
                })
            })
            .collect();
        out.push(LinearizedPoly::new(Arc::clone(ext), ext.n(), 1, coeffs)?);
        offset += part.len();
    }
    Ok(out)
}
