//! Small dense matrices with entries in a `GaloisField`.

use super::gf::{Elem, GaloisField};

pub(crate) type Matrix = Vec<Vec<Elem>>;

/// Gauss-Jordan inverse; `None` if singular.
pub(crate) fn invert(gf: &GaloisField, a: &[Vec<Elem>]) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = gf.inv(m[col][col]);
        for x in m[col].iter_mut() {
            *x = gf.mul(*x, inv);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let c = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = gf.sub(*x, gf.mul(c, p));
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix: (x M)_j = sum_i x_i M_ij.
pub(crate) fn vec_mul(gf: &GaloisField, x: &[Elem], m: &[Vec<Elem>]) -> Vec<Elem> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| {
            x.iter()
                .zip(m)
                .fold(Elem::ZERO, |acc, (&xi, row)| gf.add(acc, gf.mul(xi, row[j])))
        })
        .collect()
}
