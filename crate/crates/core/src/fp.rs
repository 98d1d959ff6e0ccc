//! Linear algebra over the prime field F_p.
//!
//! `FpBasis` row-reduces field elements viewed as coordinate vectors over F_p
//! (digit i is the coefficient of the i-th power of the modulus root).
//! `FpMatrix` is a plain dense matrix used for tuples in F_{q^n}^r.

use crate::field::{Elem, GaloisField};

/// Reduced row-echelon F_p-basis of a subspace of GF(p^m), pivots on the most
/// significant digit. Two bases of the same space are identical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpBasis {
    /// Sorted by pivot position, highest first.
    rows: Vec<Elem>,
}

impl FpBasis {
    pub fn new() -> Self {
        FpBasis { rows: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = Elem>>(gf: &GaloisField, vectors: I) -> Self {
        let mut b = FpBasis::new();
        for v in vectors {
            b.insert(gf, v);
        }
        b
    }

    pub fn rows(&self) -> &[Elem] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn pivot(gf: &GaloisField, row: Elem) -> u32 {
        gf.leading_digit(row).expect("rows are nonzero")
    }

    /// Remainder of `x` after elimination against the basis.
    pub fn reduce(&self, gf: &GaloisField, mut x: Elem) -> Elem {
        let p = gf.characteristic();
        for &row in &self.rows {
            let piv = Self::pivot(gf, row);
            let d = gf.digit(x, piv);
            if d != 0 {
                x = gf.axpy(x, p - d, row);
            }
        }
        x
    }

    pub fn contains(&self, gf: &GaloisField, x: Elem) -> bool {
        self.reduce(gf, x).is_zero()
    }

    /// Adds `x` to the span; returns whether the rank grew.
    pub fn insert(&mut self, gf: &GaloisField, x: Elem) -> bool {
        let r = self.reduce(gf, x);
        if r.is_zero() {
            return false;
        }
        let piv = Self::pivot(gf, r);
        let lead = gf.digit(r, piv);
        let r = gf.scale_fp(gf.inv_fp(lead), r);
        let p = gf.characteristic();
        for row in self.rows.iter_mut() {
            let d = gf.digit(*row, piv);
            if d != 0 {
                *row = gf.axpy(*row, p - d, r);
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|&row| Self::pivot(gf, row) < piv)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, r);
        true
    }

    /// Span of the union.
    pub fn join(&self, gf: &GaloisField, other: &FpBasis) -> FpBasis {
        let mut out = self.clone();
        for &v in &other.rows {
            out.insert(gf, v);
        }
        out
    }

    /// Enumerates all p^rank vectors of the span, zero first.
    pub fn elements(&self, gf: &GaloisField) -> Vec<Elem> {
        let p = gf.characteristic();
        let mut out = vec![Elem::ZERO];
        for &row in &self.rows {
            let len = out.len();
            for c in 1..p {
                for i in 0..len {
                    let v = gf.axpy(out[i], c, row);
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Dense matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

impl FpMatrix {
    pub fn new(p: u32, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        FpMatrix { p, cols, rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Reduced row-echelon form with zero rows removed, and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, pr);
            let inv = inv_mod(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = (*x as u64 * inv as u64 % p as u64) as u32;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = ((*x as u64 + (p - f) as u64 * y as u64) % p as u64) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (
            FpMatrix {
                p,
                cols: self.cols,
                rows: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : A x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (row, &pc) in r.rows.iter().zip(&pivots) {
                    v[pc] = (self.p - row[f]) % self.p;
                }
                v
            })
            .collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let rows = (0..self.cols)
            .map(|c| self.rows.iter().map(|r| r[c]).collect())
            .collect();
        FpMatrix {
            p: self.p,
            cols: self.rows.len(),
            rows,
        }
    }
}
