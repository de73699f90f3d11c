//! Hermite and Smith normal forms over an exact integer scalar.

use crate::matrix::Matrix;
use crate::scalar::IntScalar;

/// Row-style Hermite normal form `H = U·A`.
///
/// `H` is in row echelon form, every pivot is positive and entries above a
/// pivot lie in `[0, pivot)`. Rows `rank..` of `H` are zero.
#[derive(Clone, Debug)]
pub struct Hermite<T> {
    pub form: Matrix<T>,
    pub transform: Option<Matrix<T>>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Smith normal form `U·A·V = D` together with `V⁻¹`.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: IntScalar> Smith<T> {
    /// The diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|v| !v.is_zero()).count()
    }
}

/// Quotient rounding to the nearest integer, so the remainder is at most `|b|/2`.
fn nearest_quotient<T: IntScalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_mod_floor(b);
    let two = T::one() + T::one();
    // floor division leaves r with the sign of b, so stepping q up moves r
    // toward zero from the other side
    if (r * two).abs() > b.abs() {
        q + T::one()
    } else {
        q
    }
}

pub fn hermite_normal_form<T: IntScalar>(a: &Matrix<T>, track: bool) -> Hermite<T> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut h = a.clone();
    let mut u = if track { Some(Matrix::identity(m)) } else { None };
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(p, r);
            if let Some(u) = u.as_mut() {
                u.swap_rows(p, r);
            }
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&h[(i, col)], &h[(r, col)]);
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &neg);
                }
                if !h[(i, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            let q = h[(i, col)].div_floor(&h[(r, col)]);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(i, r, &neg);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, r, &neg);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Hermite { form: h, transform: u, rank: r, pivots }
}

/// The nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn row_lattice_basis<T: IntScalar>(a: &Matrix<T>) -> Matrix<T> {
    let h = hermite_normal_form(a, false);
    let idx: Vec<usize> = (0..h.rank).collect();
    h.form.select_rows(&idx)
}

pub fn smith_normal_form<T: IntScalar>(a: &Matrix<T>) -> Smith<T> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let mut v_inv = Matrix::identity(n);

    // column op helpers keep (d, v, v_inv) consistent: d <- d E, v <- v E, v_inv <- E^-1 v_inv
    fn col_add<T: IntScalar>(d: &mut Matrix<T>, v: &mut Matrix<T>, vi: &mut Matrix<T>, target: usize, src: usize, c: &T) {
        d.add_column_multiple(target, src, c);
        v.add_column_multiple(target, src, c);
        let neg = -c.clone();
        vi.add_row_multiple(src, target, &neg);
    }
    fn col_swap<T: IntScalar>(d: &mut Matrix<T>, v: &mut Matrix<T>, vi: &mut Matrix<T>, a: usize, b: usize) {
        d.swap_columns(a, b);
        v.swap_columns(a, b);
        vi.swap_rows(a, b);
    }

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { u, d, v, v_inv };
            };
            d.swap_rows(pi, t);
            u.swap_rows(pi, t);
            col_swap(&mut d, &mut v, &mut v_inv, pj, t);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&d[(i, t)], &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&d[(t, j)], &d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block
            let piv = d[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v, v_inv }
}

/// A basis (as rows, in Hermite form) of the integer kernel `{x : A·x = 0}`.
pub fn integer_kernel<T: IntScalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(n);
    }
    let h = hermite_normal_form(&a.transpose(), true);
    let u = h.transform.expect("transform tracked");
    let idx: Vec<usize> = (h.rank..n).collect();
    let k = u.select_rows(&idx);
    if k.nrows() == 0 {
        return k;
    }
    row_lattice_basis(&k)
}

/// Basis of `(ℚ·L) ∩ ℤⁿ` for the row lattice `L` of `basis`.
pub fn saturate<T: IntScalar>(basis: &Matrix<T>) -> Matrix<T> {
    let perp = integer_kernel(basis);
    if perp.nrows() == 0 {
        return Matrix::identity(basis.ncols());
    }
    integer_kernel(&perp)
}
