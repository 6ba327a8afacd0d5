//! Exact linear algebra on dense rational matrices stored as lists of rows.

use num_traits::Zero;

use crate::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(m: &[Vec<Q>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r[col..ncols].iter_mut().zip(&pivot[col..ncols]) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel {c : m c = 0}, with `ncols` unknowns.
pub fn kernel(m: &[Vec<Q>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::from_integer(1.into());
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[i][free].clone();
        }
        out.push(v);
    }
    out
}

/// Linear combinations: sum_i coeffs[i] * rows[i].
pub fn combine(coeffs: &[Q], rows: &[Vec<Q>]) -> Vec<Q> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = vec![Q::zero(); n];
    for (c, r) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            *o += c * x;
        }
    }
    out
}

/// Columns of m listed in `cols`.
pub fn select_columns(m: &[Vec<Q>], cols: &[usize]) -> Matrix {
    m.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()
}

pub fn transpose(m: &[Vec<Q>], ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p1::poly::q;
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn small_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &m {
                let s: Q = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 0..5)) {
            let m: Matrix = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let k = kernel(&m, 4);
            prop_assert_eq!(rank(&m) + k.len(), 4);
            prop_assert_eq!(rank(&k), k.len());
            for v in &k {
                for r in &m {
                    let s: Q = r.iter().zip(v).map(|(a, b)| a * b).sum();
                    prop_assert!(s.is_zero());
                }
            }
        }
    }
}
