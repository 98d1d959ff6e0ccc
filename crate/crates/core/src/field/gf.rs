use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::poly;
use super::FieldError;

/// Fields at or below this many elements get log/antilog/Zech tables.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 20;

/// Largest supported field order; element integers must fit comfortably in `u32`.
const MAX_ORDER: u64 = 1 << 31;

const NO_ZECH: u32 = u32::MAX;

/// A field element, stored as the base-p evaluation of its coefficient vector
/// over the power basis of the modulus root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    /// exp[i] = g^i for 0 <= i < 2(N-1), doubled so sums of two logs index directly.
    exp: Vec<u32>,
    /// log[x] for nonzero x; log[0] is unused.
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), or `NO_ZECH` when 1 + g^k = 0.
    zech: Vec<u32>,
}

/// The finite field GF(p^m).
pub struct GaloisField {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    radix: Vec<u32>,
    primitive: Elem,
    tables: Option<Tables>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("spec", &self.spec())
            .field("primitive", &self.primitive)
            .field("tabled", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds GF(p^m). Without a supplied modulus the lexicographically smallest
/// monic irreducible (coefficients compared low degree first) is used.
pub fn make_field(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<GaloisField, FieldError> {
    GaloisField::with_table_cap(p, m, modulus, DEFAULT_TABLE_CAP)
}

impl GaloisField {
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        make_field(p, m, None)
    }

    pub fn with_table_cap(p: u32, m: u32, modulus: Option<&[u32]>, table_cap: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_ORDER);
        let order = order.ok_or(FieldError::TooLarge { p, m })? as u32;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 || c[m as usize] != 1 || c.iter().any(|&x| x >= p) {
                    return Err(FieldError::BadModulus(c.to_vec()));
                }
                if !poly::is_irreducible(c, p) {
                    return Err(FieldError::ReducibleModulus(c.to_vec()));
                }
                c.to_vec()
            }
            None => smallest_irreducible(p, m),
        };
        let radix = (0..=m).map(|i| p.pow(i)).collect();
        let mut field = GaloisField {
            p,
            m,
            order,
            modulus,
            radix,
            primitive: Elem::ONE,
            tables: None,
        };
        field.primitive = field.find_primitive();
        if order as u64 <= table_cap {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The smallest element (in integer order) of full multiplicative order.
    #[inline]
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn is_tabled(&self) -> bool {
        self.tables.is_some()
    }

    /// `gf(p^m; c0,c1,...,1)` with ascending modulus coefficients.
    pub fn spec(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("gf({}^{}; {})", self.p, self.m, coeffs.join(","))
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.order
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    #[inline]
    pub fn digit(&self, x: Elem, i: u32) -> u32 {
        if self.p == 2 {
            (x.0 >> i) & 1
        } else {
            (x.0 / self.radix[i as usize]) % self.p
        }
    }

    pub fn digits(&self, x: Elem) -> Vec<u32> {
        (0..self.m).map(|i| self.digit(x, i)).collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let mut v = 0u32;
        for (i, &d) in digits.iter().enumerate().take(self.m as usize) {
            v += (d % self.p) * self.radix[i];
        }
        Elem(v)
    }

    /// Index of the highest nonzero coordinate, if any.
    #[inline]
    pub(crate) fn leading_digit(&self, x: Elem) -> Option<u32> {
        if x.0 == 0 {
            return None;
        }
        if self.p == 2 {
            return Some(31 - x.0.leading_zeros());
        }
        (0..self.m).rev().find(|&i| x.0 >= self.radix[i as usize])
    }

    #[inline]
    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n1 = self.order - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + n1 - la };
                let z = t.zech[d as usize];
                if z == NO_ZECH {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(la + z) as usize])
                }
            }
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let half = (self.order - 1) / 2;
                Elem(t.exp[(t.log[a.0 as usize] + half) as usize])
            }
            None => {
                let mut x = a.0;
                let mut out = 0;
                let mut scale = 1;
                while x > 0 {
                    let d = x % self.p;
                    out += ((self.p - d) % self.p) * scale;
                    scale *= self.p;
                    x /= self.p;
                }
                Elem(out)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.m as usize;
        let p = self.p as u64;
        let mut ad = [0u64; 32];
        let mut bd = [0u64; 32];
        let (mut x, mut y) = (a, b);
        for i in 0..m {
            ad[i] = (x % self.p) as u64;
            bd[i] = (y % self.p) as u64;
            x /= self.p;
            y /= self.p;
        }
        // Lazy reduction: every partial sum stays below 2m p^2, far from overflow.
        let mut prod = [0u64; 64];
        for i in 0..m {
            if ad[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += ad[i] * bd[j];
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..m {
                prod[k - m + i] += (p - c) * self.modulus[i] as u64;
            }
        }
        for x in prod.iter_mut().take(m) {
            *x %= p;
        }
        let mut out = 0u32;
        for i in (0..m).rev() {
            out = out * self.p + prod[i] as u32;
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => Elem(self.mul_slow(a.0, b.0)),
        }
    }

    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Elem(t.exp[((self.order - 1 - l) % (self.order - 1)) as usize])
            }
            None => self.pow(a, self.order as u64 - 2),
        }
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n1 = (self.order - 1) as u64;
        let e = e % n1;
        if e == 0 {
            return Elem::ONE;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u64;
                Elem(t.exp[(l * e % n1) as usize])
            }
            None => {
                let mut result = 1u32;
                let mut base = a.0;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        result = self.mul_slow(result, base);
                    }
                    base = self.mul_slow(base, base);
                    e >>= 1;
                }
                Elem(result)
            }
        }
    }

    /// x -> x^(p^j), the j-th power of the absolute Frobenius.
    pub fn frobenius_p(&self, a: Elem, j: u32) -> Elem {
        let j = j % self.m;
        if j == 0 || a.0 <= 1 {
            return a;
        }
        let n1 = (self.order - 1) as u64;
        let mut e = 1u64;
        for _ in 0..j {
            e = e * self.p as u64 % n1;
        }
        if e == 0 {
            e = n1;
        }
        self.pow(a, e)
    }

    /// Discrete logarithm base the primitive element; tabled fields only.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a.0 as usize])
    }

    /// g^i for the distinguished primitive element g.
    pub fn exp(&self, i: u64) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.exp[(i % (self.order as u64 - 1)) as usize]),
            None => self.pow(self.primitive, i),
        }
    }

    /// x + c*y with c a prime-field scalar.
    #[inline]
    pub(crate) fn axpy(&self, x: Elem, c: u32, y: Elem) -> Elem {
        let c = c % self.p;
        if c == 0 {
            return x;
        }
        if self.p == 2 {
            return Elem(x.0 ^ y.0);
        }
        if self.tables.is_some() {
            return self.add(x, self.mul(Elem(c), y));
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        let mut scale = 1;
        while a > 0 || b > 0 {
            let d = (a % self.p + c * (b % self.p)) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        Elem(out)
    }

    /// c*y with c a prime-field scalar.
    #[inline]
    pub(crate) fn scale_fp(&self, c: u32, y: Elem) -> Elem {
        self.axpy(Elem::ZERO, c, y)
    }

    pub(crate) fn inv_fp(&self, c: u32) -> u32 {
        self.inv(Elem(c % self.p)).0
    }

    pub fn multiplicative_order(&self, a: Elem) -> u64 {
        assert!(!a.is_zero(), "order of zero");
        let n1 = self.order as u64 - 1;
        let mut ord = n1;
        for r in prime_factors(n1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == Elem::ONE {
                ord /= r;
            }
        }
        ord
    }

    fn find_primitive(&self) -> Elem {
        let n1 = self.order as u64 - 1;
        if n1 == 1 {
            return Elem::ONE;
        }
        let factors = prime_factors(n1);
        (2..self.order)
            .map(Elem)
            .find(|&g| factors.iter().all(|&r| self.pow(g, n1 / r) != Elem::ONE))
            .expect("a finite field has a primitive element")
    }

    fn build_tables(&self) -> Tables {
        let n1 = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let g = self.primitive.0;
        // Multiplication by g as a linear map: images of the power basis.
        let images: Vec<u32> = (0..self.m).map(|i| self.mul_slow(g, self.radix[i as usize])).collect();
        let mut x = 1u32;
        for i in 0..n1 {
            exp[i] = x;
            exp[i + n1] = x;
            log[x as usize] = i as u32;
            x = if self.p == 2 {
                let mut acc = 0u32;
                let mut bits = x;
                let mut k = 0;
                while bits != 0 {
                    if bits & 1 == 1 {
                        acc ^= images[k];
                    }
                    bits >>= 1;
                    k += 1;
                }
                acc
            } else {
                self.mul_slow(x, g)
            };
        }
        let mut zech = vec![NO_ZECH; n1.max(1)];
        for (k, slot) in zech.iter_mut().enumerate().take(n1) {
            let v = exp[k];
            let d0 = v % self.p;
            let s = v - d0 + (d0 + 1) % self.p;
            if s != 0 {
                *slot = log[s as usize];
            }
        }
        Tables { exp, log, zech }
    }
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        // c0 is the most significant position of the enumeration index.
        let mut coeffs = vec![0u32; m as usize + 1];
        let mut rest = idx;
        for i in (0..m as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[m as usize] = 1;
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Parsed form of a field spec string `gf(p^m; c0,...,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<GaloisField, FieldError> {
        make_field(self.p, self.m, self.modulus.as_deref())
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadSpec(s.to_string());
        let body = s
            .trim()
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (head, tail) = match body.split_once(';') {
            Some((h, t)) => (h, Some(t)),
            None => (body, None),
        };
        let (p, m) = head.trim().split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let m: u32 = m.trim().parse().map_err(|_| bad())?;
        let modulus = match tail {
            Some(t) if !t.trim().is_empty() => Some(
                t.split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            _ => None,
        };
        Ok(FieldSpec { p, m, modulus })
    }
}
