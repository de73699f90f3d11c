//! Sublattices of `ℤⁿ` with canonical (Hermite) bases.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::normal_form::{integer_kernel, row_lattice_basis, saturate, smith_normal_form};
use crate::{Int, IntMatrix};

/// A sublattice of `ℤ^ambient_rank`, stored by its row Hermite basis.
///
/// Because the basis is canonical, two sublattices are equal exactly when
/// their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubLattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl SubLattice {
    /// The lattice spanned by the rows of `generators` (which may be dependent).
    pub fn from_generators(ambient_rank: usize, generators: &IntMatrix) -> Self {
        assert_eq!(generators.ncols(), ambient_rank, "generator length differs from ambient rank");
        if generators.nrows() == 0 {
            return Self::zero(ambient_rank);
        }
        SubLattice { ambient_rank, basis: row_lattice_basis(generators) }
    }

    pub fn from_vectors(ambient_rank: usize, vectors: &[Vec<Int>]) -> Self {
        Self::from_generators(ambient_rank, &IntMatrix::from_rows(ambient_rank, vectors.to_vec()))
    }

    pub fn zero(ambient_rank: usize) -> Self {
        SubLattice { ambient_rank, basis: IntMatrix::zeros(0, ambient_rank) }
    }

    pub fn full(ambient_rank: usize) -> Self {
        SubLattice { ambient_rank, basis: IntMatrix::identity(ambient_rank) }
    }

    /// `{x ∈ ℤⁿ : A·x = 0}`, saturated.
    pub fn kernel_of(a: &IntMatrix) -> Self {
        SubLattice { ambient_rank: a.ncols(), basis: integer_kernel(a) }
    }

    /// The column span of `a` inside `ℤ^{rows(a)}`.
    pub fn image_of(a: &IntMatrix) -> Self {
        Self::from_generators(a.nrows(), &a.transpose())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Int>> {
        self.basis.to_rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient_rank, "vector length differs from ambient rank");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for r in 0..self.rank() {
            let row = self.basis.row(r);
            let c = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            // entries left of the pivot must already be cleared
            if rest[..c].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, rem) = num_integer::Integer::div_rem(&rest[c], &row[c]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
            coords.push(q);
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &SubLattice) -> bool {
        other.basis.to_rows().iter().all(|r| self.contains(r))
    }

    /// The vector with the given coordinates.
    pub fn combination(&self, coords: &[Int]) -> Vec<Int> {
        self.basis.vec_mul(coords)
    }

    pub fn sum(&self, other: &SubLattice) -> SubLattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        Self::from_generators(self.ambient_rank, &self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &SubLattice) -> SubLattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient_rank);
        }
        // x·B1 = y·B2  <=>  (x, -y) in the left kernel of [B1; B2]
        let stacked = self.basis.vstack(&other.basis);
        let k = integer_kernel(&stacked.transpose());
        let n1 = self.rank();
        let xs: Vec<Vec<Int>> = k.to_rows().into_iter().map(|r| self.basis.vec_mul(&r[..n1])).collect();
        Self::from_vectors(self.ambient_rank, &xs)
    }

    /// The image of the lattice under the map `a` (acting on column vectors).
    pub fn map(&self, a: &IntMatrix) -> SubLattice {
        assert_eq!(a.ncols(), self.ambient_rank);
        let imgs: Vec<Vec<Int>> = self.basis.to_rows().iter().map(|r| a.mul_vec(r)).collect();
        Self::from_vectors(a.nrows(), &imgs)
    }

    /// `{x : A·x ∈ target}`.
    pub fn preimage(a: &IntMatrix, target: &SubLattice) -> SubLattice {
        assert_eq!(a.nrows(), target.ambient_rank);
        let n = a.ncols();
        if target.is_zero() {
            return Self::kernel_of(a);
        }
        let aug = a.hstack(&(-&target.basis.transpose()));
        let k = integer_kernel(&aug);
        let xs: Vec<Vec<Int>> = k.to_rows().into_iter().map(|r| r[..n].to_vec()).collect();
        Self::from_vectors(n, &xs)
    }

    /// `{x ∈ ℤⁿ : (C·x)ᵣ ≡ 0 mod mᵣ for every row r}` with positive moduli.
    pub fn congruence_kernel(c: &IntMatrix, moduli: &[Int]) -> SubLattice {
        assert_eq!(c.nrows(), moduli.len());
        let n = c.ncols();
        let e = moduli.iter().fold(BigInt::one(), |a, m| num_integer::Integer::lcm(&a, m));
        if e.is_one() {
            return Self::full(n);
        }
        // scale each congruence to the common modulus e, then reduce the rows
        // modulo e before solving
        let mut rows: Vec<Vec<Int>> = (0..c.nrows())
            .map(|r| {
                let f = &e / &moduli[r];
                c.row(r).iter().map(|x| x * &f).collect()
            })
            .collect();
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = e.clone();
            rows.push(v);
        }
        let b = row_lattice_basis(&IntMatrix::from_rows(n, rows));
        let target = SubLattice::from_generators(n, &IntMatrix::identity(n).scale(&e));
        Self::preimage(&b, &target)
    }

    pub fn saturation(&self) -> SubLattice {
        if self.is_zero() {
            return self.clone();
        }
        SubLattice { ambient_rank: self.ambient_rank, basis: saturate(&self.basis) }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// `[other : self]` when `self ⊆ other` and the ranks agree.
    pub fn index_in(&self, other: &SubLattice) -> Result<Int> {
        if !other.contains_lattice(self) {
            return Err(Error::NotContained);
        }
        if self.rank() < other.rank() {
            return Err(Error::InfiniteQuotient { numerator: other.rank(), denominator: self.rank() });
        }
        let c = self.coordinates_matrix_in(other);
        Ok(c.determinant().abs())
    }

    /// Coordinates of this lattice's basis in `other`'s basis, one row each.
    pub(crate) fn coordinates_matrix_in(&self, other: &SubLattice) -> IntMatrix {
        let rows: Vec<Vec<Int>> = self
            .basis
            .to_rows()
            .iter()
            .map(|r| other.coordinates(r).expect("containment checked"))
            .collect();
        IntMatrix::from_rows(other.rank(), rows)
    }

    /// An integer matrix `R` with `basis · R = I`, which exists exactly when
    /// the lattice is saturated. Then `v · R` gives coordinates for any `v`
    /// in the lattice, and extends them linearly to all of `ℤⁿ`.
    pub fn integral_right_inverse(&self) -> Option<IntMatrix> {
        let k = self.rank();
        if k == 0 {
            return Some(IntMatrix::zeros(self.ambient_rank, 0));
        }
        let s = smith_normal_form(&self.basis);
        if s.diagonal().iter().any(|d| !d.is_one()) {
            return None;
        }
        // U B V = [I 0]  =>  B · (V [I;0] U) = I
        let mut sel = IntMatrix::zeros(self.ambient_rank, k);
        for i in 0..k {
            sel[(i, i)] = BigInt::one();
        }
        Some(&(&s.v * &sel) * &s.u)
    }
}

/// Solves `A·x = b` over the integers, returning one solution if any exists.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.nrows(), b.len());
    let s = smith_normal_form(a);
    // A = U⁻¹ D V⁻¹; A x = b  <=>  D (V⁻¹ x) = U b
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); a.ncols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(c, &d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Solves `A·X = B` column by column.
pub fn solve_integer_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let cols: Option<Vec<Vec<Int>>> = (0..b.ncols()).map(|j| solve_integer(a, &b.column(j))).collect();
    Some(IntMatrix::from_columns(a.ncols(), &cols?))
}

/// Integer inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if !a.is_square() || !a.determinant().abs().is_one() {
        return None;
    }
    solve_integer_matrix(a, &IntMatrix::identity(a.nrows()))
}
