//! Dense linear algebra over a [`BaseField`]. Vectors are `Vec<u32>` rows.

use crate::ffield::BaseField;

/// Reduced row echelon form: nonzero rows, pivots strictly increasing,
/// pivot entries 1 and pivot columns zero elsewhere.
pub fn rref(k: &BaseField, mut rows: Vec<Vec<u32>>, cols: usize) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = k.sub(*x, k.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(k: &BaseField, rows: &[Vec<u32>], cols: usize) -> usize {
    rref(k, rows.to_vec(), cols).0.len()
}

/// Basis of `{ λ : Σ λ_i rows_i = 0 }`.
pub fn left_kernel(k: &BaseField, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let m = rows.len();
    let aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let (red, _) = rref(k, aug, cols + m);
    red.into_iter().filter(|row| row[..cols].iter().all(|&x| x == 0)).map(|row| row[cols..].to_vec()).collect()
}

/// Basis of `{ x : M x = 0 }` for `M` given by its rows.
pub fn right_kernel(k: &BaseField, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let (red, pivots) = rref(k, rows.to_vec(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; cols];
            x[f] = 1;
            for (row, &p) in red.iter().zip(&pivots) {
                x[p] = k.neg(row[f]);
            }
            x
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(k: &BaseField, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let aug: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let (red, pivots) = rref(k, aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot(k: &BaseField, x: &[u32], y: &[u32]) -> u32 {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
}

/// `Σ c_i rows_i`.
pub fn combine(k: &BaseField, coeffs: &[u32], rows: &[Vec<u32>], cols: usize) -> Vec<u32> {
    let mut out = vec![0u32; cols];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = k.add(*o, k.mul(c, x));
            }
        }
    }
    out
}
