//! Small exact linear algebra: rank and square solves.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{common_denominator, Rational};

/// Rank of a rational matrix, via fraction-free (Bareiss) elimination on the
/// row-wise integer scaling.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = common_denominator(r);
            r.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(p) = (rank..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..n_rows {
            for j in col + 1..n_cols {
                let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Affine rank of a point set: `rank([1 | x]) - 1`, or `None` when empty.
pub fn affine_rank(points: &[Vec<Rational>]) -> Option<usize> {
    if points.is_empty() {
        return None;
    }
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r = Vec::with_capacity(p.len() + 1);
            r.push(Rational::one());
            r.extend(p.iter().cloned());
            r
        })
        .collect();
    Some(rank(&rows) - 1)
}

/// Solves `A x = b` for square nonsingular `A`; `None` when singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col].clone();
        for j in col..=n {
            m[col][j] /= &piv;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
