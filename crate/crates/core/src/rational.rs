//! Small exact rational linear algebra over `ℚ`: ranks, solving, inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Int, IntMatrix};

pub type Rat = BigRational;

fn to_rat_rows(a: &IntMatrix) -> Vec<Vec<Rat>> {
    a.to_rows().into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect()
}

/// Reduced row echelon form in place, returning the pivot columns.
fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(a: &IntMatrix) -> usize {
    let mut m = to_rat_rows(a);
    rref(&mut m, a.ncols()).len()
}

/// One rational solution of `A·x = b`, if the system is consistent.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Rat>> {
    assert_eq!(a.nrows(), b.len());
    let n = a.ncols();
    let mut m: Vec<Vec<Rat>> = to_rat_rows(a)
        .into_iter()
        .zip(b)
        .map(|(mut r, x)| {
            r.push(Rat::from_integer(x.clone()));
            r
        })
        .collect();
    let pivots = rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = m[row][n].clone();
    }
    Some(x)
}

/// Inverse over `ℚ` of a square matrix, as rows.
pub fn inverse(a: &IntMatrix) -> Option<Vec<Vec<Rat>>> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut m: Vec<Vec<Rat>> = to_rat_rows(a)
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `M·A·M⁻¹`, provided `M` is invertible over `ℚ` and the result is integral.
pub fn conjugate(m: &IntMatrix, a: &IntMatrix) -> Option<IntMatrix> {
    let inv = inverse(m)?;
    let ma = to_rat_rows(&(m * a));
    let n = m.nrows();
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Rat::zero();
            for k in 0..n {
                s += &ma[i][k] * &inv[k][j];
            }
            if !s.is_integer() {
                return None;
            }
            out[(i, j)] = s.to_integer();
        }
    }
    Some(out)
}

/// The integer vector `v` if every entry of the rational vector is integral.
pub fn to_integral(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
