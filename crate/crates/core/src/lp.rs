//! Exact feasibility LP: is `v` a nonnegative combination of given columns?
//!
//! Phase-I tableau simplex over the rationals with Bland's rule, so it
//! terminates without cycling and the certificate is exact.

use num_traits::{One, Signed, Zero};

use crate::rational::{QVec, Q};

/// Returns coefficients `λ ≥ 0` with `Σ λ_j cols[j] = v`, or `None`.
pub fn nonneg_combination(cols: &[QVec], v: &[Q]) -> Option<QVec> {
    let d = v.len();
    let m = cols.len();
    if d == 0 {
        return Some(vec![Q::zero(); m]);
    }
    // Rows: constraints. Columns: m structural + d artificial + rhs.
    let width = m + d + 1;
    let mut t: Vec<QVec> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let flip = v[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for (j, c) in cols.iter().enumerate() {
            row[j] = if flip { -c[i].clone() } else { c[i].clone() };
        }
        row[m + i] = Q::one();
        row[width - 1] = v[i].abs();
        t.push(row);
    }
    let mut basis: Vec<usize> = (m..m + d).collect();
    // Objective: minimize sum of artificials; reduced costs row.
    let mut obj = vec![Q::zero(); width];
    for row in &t {
        for (j, x) in row.iter().enumerate() {
            if j < m || j == width - 1 {
                obj[j] -= x;
            }
        }
    }
    loop {
        // Bland: smallest index with negative reduced cost.
        let Some(enter) = (0..m + d).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded in phase I cannot happen (objective bounded below by 0)
            break;
        };
        pivot(&mut t, &mut obj, r, enter);
        basis[r] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut lambda = vec![Q::zero(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            lambda[b] = t[i][width - 1].clone();
        } else if !t[i][width - 1].is_zero() {
            return None;
        }
    }
    Some(lambda)
}

fn pivot(t: &mut [QVec], obj: &mut QVec, r: usize, c: usize) {
    let inv = Q::one() / &t[r][c];
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec};

    #[test]
    fn feasible_and_infeasible() {
        let gens = vec![qvec(&[1, 0]), qvec(&[1, 1])];
        let lam = nonneg_combination(&gens, &qvec(&[3, 1])).unwrap();
        assert_eq!(lam, qvec(&[2, 1]));
        assert!(nonneg_combination(&gens, &qvec(&[-1, 0])).is_none());
        assert!(nonneg_combination(&gens, &qvec(&[0, 1])).is_none());
        let lam = nonneg_combination(&gens, &[qf(1, 2), qf(1, 2)]).unwrap();
        assert_eq!(lam, vec![qf(0, 1), qf(1, 2)]);
    }

    #[test]
    fn redundant_generators() {
        let gens = vec![qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[1, 1, 0]), qvec(&[0, 0, 1])];
        assert!(nonneg_combination(&gens, &qvec(&[2, 3, 4])).is_some());
        assert!(nonneg_combination(&gens, &qvec(&[2, -3, 4])).is_none());
    }
}
