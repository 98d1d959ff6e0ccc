use std::sync::Arc;

use super::gf::{prime_factors, Elem, GaloisField};
use super::matrix;
use super::FieldError;

/// F_{q^n} viewed over F_q, where q = p^e and n = m/e.
///
/// Subfields F_{q^d} are realized as fixed fields of the d-th power of the
/// q-Frobenius; no second modulus is involved.
#[derive(Debug, Clone)]
pub struct Extension {
    gf: Arc<GaloisField>,
    e: u32,
    n: u32,
    q: u32,
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && *self.gf == *other.gf
    }
}

impl Eq for Extension {}

impl Extension {
    pub fn new(gf: Arc<GaloisField>, q: u32) -> Result<Self, FieldError> {
        let p = gf.characteristic();
        let mut e = 0;
        let mut acc = 1u64;
        while acc < q as u64 {
            acc *= p as u64;
            e += 1;
        }
        if acc != q as u64 || e == 0 {
            return Err(FieldError::BadBaseField { p, q });
        }
        if !gf.degree().is_multiple_of(e) {
            return Err(FieldError::NotASubfield { q });
        }
        let n = gf.degree() / e;
        Ok(Extension { gf, e, n, q })
    }

    /// Convenience: GF(q^n) with the default modulus, viewed over F_q.
    pub fn build(q: u32, n: u32) -> Result<Arc<Self>, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        let gf = GaloisField::new(p, e * n)?;
        Ok(Arc::new(Extension::new(Arc::new(gf), q)?))
    }

    #[inline]
    pub fn gf(&self) -> &GaloisField {
        &self.gf
    }

    pub fn gf_arc(&self) -> Arc<GaloisField> {
        Arc::clone(&self.gf)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// q = p^e.
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.gf.characteristic()
    }

    pub fn order(&self) -> u32 {
        self.gf.order()
    }

    /// q^d as u64.
    pub fn q_pow(&self, d: u32) -> u64 {
        (self.q as u64).pow(d)
    }

    fn check_divisor(&self, d: u32) -> Result<(), FieldError> {
        if d == 0 || !self.n.is_multiple_of(d) {
            Err(FieldError::NotADivisor { d, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn divisors(&self) -> Vec<u32> {
        (1..=self.n).filter(|d| self.n.is_multiple_of(*d)).collect()
    }

    /// x^(q^j), j taken modulo n.
    #[inline]
    pub fn frob(&self, x: Elem, j: i64) -> Elem {
        let j = j.rem_euclid(self.n as i64) as u32;
        self.gf.frobenius_p(x, j * self.e)
    }

    /// Relative norm N_{q^n/q^d}(x) = x^((q^n-1)/(q^d-1)).
    pub fn norm(&self, x: Elem, d: u32) -> Result<Elem, FieldError> {
        self.check_divisor(d)?;
        Ok(self.norm_unchecked(x, d))
    }

    pub(crate) fn norm_unchecked(&self, x: Elem, d: u32) -> Elem {
        let e = (self.q_pow(self.n) - 1) / (self.q_pow(d) - 1);
        self.gf.pow(x, e)
    }

    /// Norm from the degree-`from` subfield down to the degree-`to` subfield.
    pub fn norm_between(&self, x: Elem, from: u32, to: u32) -> Result<Elem, FieldError> {
        self.check_divisor(from)?;
        if to == 0 || !from.is_multiple_of(to) {
            return Err(FieldError::NotADivisor { d: to, n: from });
        }
        let e = (self.q_pow(from) - 1) / (self.q_pow(to) - 1);
        Ok(self.gf.pow(x, e))
    }

    /// Relative trace Tr_{q^n/q^d}(x) = sum of x^(q^(d i)), 0 <= i < n/d.
    pub fn trace(&self, x: Elem, d: u32) -> Result<Elem, FieldError> {
        self.check_divisor(d)?;
        Ok(self.trace_between_unchecked(x, self.n, d))
    }

    /// Trace from the degree-`from` subfield down to the degree-`to` subfield.
    pub fn trace_between(&self, x: Elem, from: u32, to: u32) -> Result<Elem, FieldError> {
        self.check_divisor(from)?;
        if to == 0 || !from.is_multiple_of(to) {
            return Err(FieldError::NotADivisor { d: to, n: from });
        }
        Ok(self.trace_between_unchecked(x, from, to))
    }

    pub(crate) fn trace_between_unchecked(&self, x: Elem, from: u32, to: u32) -> Elem {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..from / to {
            acc = self.gf.add(acc, y);
            y = self.frob(y, to as i64);
        }
        acc
    }

    /// Membership in F_{q^d}: a single Frobenius comparison.
    pub fn in_subfield(&self, x: Elem, d: u32) -> bool {
        self.frob(x, d as i64) == x
    }

    /// Generator of F_{q^d}^*, namely g^((q^n-1)/(q^d-1)).
    pub fn subfield_generator(&self, d: u32) -> Elem {
        self.gf.exp((self.q_pow(self.n) - 1) / (self.q_pow(d) - 1))
    }

    /// Generator of F_q^*.
    pub fn base_generator(&self) -> Elem {
        self.subfield_generator(1)
    }

    /// All elements of F_{q^d}, zero first.
    pub fn subfield_elements(&self, d: u32) -> Vec<Elem> {
        let h = self.subfield_generator(d);
        let size = self.q_pow(d) - 1;
        let mut out = Vec::with_capacity(size as usize + 1);
        out.push(Elem::ZERO);
        let mut x = Elem::ONE;
        for _ in 0..size {
            out.push(x);
            x = self.gf.mul(x, h);
        }
        out
    }

    /// The elements of F_q, zero first and in ascending integer order otherwise.
    pub fn base_elements(&self) -> Vec<Elem> {
        let mut v = self.subfield_elements(1);
        v[1..].sort();
        v
    }

    /// An F_p-basis of F_q: powers 1, w, ..., w^(e-1) of a generator w.
    pub fn base_fp_basis(&self) -> Vec<Elem> {
        let w = self.base_generator();
        let mut out = Vec::with_capacity(self.e as usize);
        let mut x = Elem::ONE;
        for _ in 0..self.e {
            out.push(x);
            x = self.gf.mul(x, w);
        }
        out
    }

    /// An F_q-basis of F_{q^d}: powers of a primitive element of the subfield.
    pub fn subfield_basis(&self, d: u32) -> Vec<Elem> {
        if d == self.n {
            // The power basis of the modulus root; its F_p-span is everything
            // only when q = p, so use powers of the primitive element instead.
            if self.e == 1 {
                return (0..self.n).map(|i| Elem(self.p().pow(i))).collect();
            }
        }
        let h = self.subfield_generator(d);
        let mut out = Vec::with_capacity(d as usize);
        let mut x = Elem::ONE;
        for _ in 0..d {
            out.push(x);
            x = self.gf.mul(x, h);
        }
        out
    }

    /// An F_p-basis of F_{q^d}: products of an F_q-basis with an F_p-basis of F_q.
    pub fn subfield_fp_basis(&self, d: u32) -> Vec<Elem> {
        let fq = self.base_fp_basis();
        let mut out = Vec::with_capacity((d * self.e) as usize);
        for b in self.subfield_basis(d) {
            for &w in &fq {
                out.push(self.gf.mul(b, w));
            }
        }
        out
    }

    /// Key identifying the coset x F_q^*: x^(q-1). Zero maps to zero.
    #[inline]
    pub fn class_key(&self, x: Elem) -> Elem {
        if self.q == 2 {
            return x;
        }
        self.gf.pow(x, (self.q - 1) as u64)
    }

    /// Number of cosets of F_q^* in F_{q^n}^*.
    pub fn coset_count(&self) -> u64 {
        (self.q_pow(self.n) - 1) / (self.q as u64 - 1)
    }

    /// Representatives g^i, 0 <= i < (q^n-1)/(q-1), of F_{q^n}^*/F_q^*.
    pub fn coset_reps(&self) -> Vec<Elem> {
        let g = self.gf.primitive();
        let count = self.coset_count() as usize;
        let mut out = Vec::with_capacity(count);
        let mut x = Elem::ONE;
        for _ in 0..count {
            out.push(x);
            x = self.gf.mul(x, g);
        }
        out
    }

    /// Smallest element (integer order) not in F_{q^d}.
    pub fn smallest_outside(&self, d: u32) -> Elem {
        self.gf
            .elements()
            .find(|&x| !self.in_subfield(x, d))
            .expect("proper subfield has a complement")
    }

    /// Smallest element of F_{q^d} of multiplicative order q^d - 1.
    pub fn smallest_primitive_in(&self, d: u32) -> Elem {
        let h = self.subfield_generator(d);
        let ord = self.q_pow(d) - 1;
        let mut best: Option<Elem> = None;
        let mut x = Elem::ONE;
        for i in 0..ord {
            if gcd(i, ord) == 1 && best.is_none_or(|b| x < b) {
                best = Some(x);
            }
            x = self.gf.mul(x, h);
        }
        best.expect("cyclic group has a generator")
    }

    /// Dual basis with respect to Tr_{q^d/q}, for an F_q-basis of F_{q^d}.
    pub fn dual_basis_in(&self, basis: &[Elem], d: u32) -> Result<Vec<Elem>, FieldError> {
        self.check_divisor(d)?;
        if basis.len() != d as usize {
            return Err(FieldError::WrongBasisSize {
                expected: d as usize,
                got: basis.len(),
            });
        }
        if let Some(x) = basis.iter().find(|x| !self.in_subfield(**x, d)) {
            return Err(FieldError::ForeignElement(x.0));
        }
        let gf = &*self.gf;
        let gram: Vec<Vec<Elem>> = basis
            .iter()
            .map(|&a| {
                basis
                    .iter()
                    .map(|&b| self.trace_between_unchecked(gf.mul(a, b), d, 1))
                    .collect()
            })
            .collect();
        let inv = matrix::invert(gf, &gram).ok_or(FieldError::DependentBasis)?;
        Ok((0..basis.len())
            .map(|j| {
                basis
                    .iter()
                    .enumerate()
                    .fold(Elem::ZERO, |acc, (l, &b)| gf.add(acc, gf.mul(inv[j][l], b)))
            })
            .collect())
    }

    /// Dual basis of an F_q-basis of F_{q^n} with respect to Tr_{q^n/q}.
    pub fn dual_basis(&self, basis: &[Elem]) -> Result<Vec<Elem>, FieldError> {
        self.dual_basis_in(basis, self.n)
    }

    /// Multiplicative order of x.
    pub fn multiplicative_order(&self, x: Elem) -> u64 {
        self.gf.multiplicative_order(x)
    }

    /// Whether x generates the multiplicative group of F_{q^d}; x must lie in it.
    pub fn is_primitive_in(&self, x: Elem, d: u32) -> bool {
        if x.is_zero() {
            return false;
        }
        let ord = self.q_pow(d) - 1;
        prime_factors(ord)
            .into_iter()
            .all(|r| self.gf.pow(x, ord / r) != Elem::ONE)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// (p, e) with q = p^e, if q is a prime power.
pub(crate) fn prime_power(q: u32) -> Option<(u32, u32)> {
    let f = prime_factors(q as u64);
    if f.len() != 1 {
        return None;
    }
    let p = f[0] as u32;
    let mut e = 0;
    let mut x = q;
    while x > 1 {
        x /= p;
        e += 1;
    }
    Some((p, e))
}
