//! Dense exact linear algebra over the rationals (row-major `Vec<QVec>`).

use num_traits::{One, Zero};

use crate::rational::{dot, QVec, Q};

pub type QMat = Vec<QVec>;

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(m: &[QVec]) -> QMat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[QVec], v: &[Q]) -> QVec {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> QMat {
    let bt = transpose(b);
    a.iter().map(|r| bt.iter().map(|c| dot(r, c)).collect()).collect()
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(m: &[QVec]) -> (QMat, Vec<usize>) {
    let mut a: QMat = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[QVec]) -> usize {
    rref(m).1.len()
}

/// Determinant by fraction-free elimination on rationals.
pub fn det(m: &[QVec]) -> Q {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
    }
    d
}

pub fn inverse(m: &[QVec]) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution of `m x = b`, or `None` when inconsistent.
pub fn solve(m: &[QVec], b: &[Q]) -> Option<QVec> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: QMat = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = red[r][cols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace(m: &[QVec], cols: usize) -> QMat {
    if m.is_empty() {
        return identity(cols);
    }
    let (red, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); cols];
            x[f] = Q::one();
            for (r, &c) in piv.iter().enumerate() {
                x[c] = -red[r][f].clone();
            }
            x
        })
        .collect()
}

/// Float mirror of an exact matrix.
pub fn to_f64_mat(m: &[QVec]) -> Vec<Vec<f64>> {
    m.iter().map(|r| crate::rational::to_f64_vec(r)).collect()
}

/// Solve a small dense float system by partial pivoting; `None` if singular.
pub fn solve_f64(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    let lu = a.lu();
    lu.solve(&rhs).map(|x| x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf, qvec};

    #[test]
    fn inverse_and_det() {
        let m = vec![qvec(&[2, 1]), qvec(&[1, 1])];
        assert_eq!(det(&m), q(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![qvec(&[1, -1]), qvec(&[-1, 2])]);
        assert!(inverse(&[qvec(&[1, 2]), qvec(&[2, 4])]).is_none());
    }

    #[test]
    fn solve_and_nullspace() {
        let m = vec![qvec(&[1, 2, 3]), qvec(&[0, 1, 1])];
        let x = solve(&m, &qvec(&[6, 2])).unwrap();
        assert_eq!(mat_vec(&m, &x), qvec(&[6, 2]));
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(mat_vec(&m, &ns[0]), qvec(&[0, 0]));
        assert!(solve(&[qvec(&[1, 1]), qvec(&[2, 2])], &qvec(&[1, 3])).is_none());
        assert_eq!(det(&[vec![qf(1, 2)]]), qf(1, 2));
    }
}
