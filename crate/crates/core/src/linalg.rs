//! Dense exact linear algebra over the rationals.
//!
//! Matrices here are at desk scale (tens of rows), so everything is plain
//! `Vec<Vec<Rational>>` with row-major indexing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for (k, aik) in row.iter().enumerate() {
                        if !aik.is_zero() && !b[k][j].is_zero() {
                            acc += aik * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[Rational], a: &Matrix) -> Vec<Rational> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut out = vec![Rational::zero(); cols];
    for (vi, row) in v.iter().zip(a) {
        if vi.is_zero() {
            continue;
        }
        for (o, aij) in out.iter_mut().zip(row) {
            if !aij.is_zero() {
                *o += vi * aij;
            }
        }
    }
    out
}

pub fn scale(a: &Matrix, c: &Rational) -> Matrix {
    a.iter()
        .map(|row| row.iter().map(|x| x * c).collect())
        .collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// `a - λI`.
pub fn shift(a: &Matrix, lambda: &Rational) -> Matrix {
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    m
}

pub fn trace(a: &Matrix) -> Rational {
    a.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators;
/// the scale factors are divided back out at the end.
pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale_prod = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "determinant of a non-square matrix");
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale_prod *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Rational::new(sign * &m[n - 1][n - 1], scale_prod)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
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
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    if !a[r][j].is_zero() {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{v : a v = 0}`.
pub fn null_space(a: &Matrix) -> Vec<Vec<Rational>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}
