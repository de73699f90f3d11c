//! Exact elements of `ℚ/ℤ` and `ℚ/ℤ`-valued characters of lattices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::SubLattice;
use crate::{Int, IntMatrix};

/// A reduced fraction `a/b` with `0 ≤ a < b` and `gcd(a, b) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QModZ {
    num: Int,
    den: Int,
}

impl QModZ {
    /// The class of `num/den`. Panics if `den` is zero.
    pub fn new(num: Int, den: Int) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den < BigInt::zero() { (-num, -den) } else { (num, den) };
        let num = num.mod_floor(&den);
        if num.is_zero() {
            return QModZ::zero();
        }
        let g = num.gcd(&den);
        QModZ { num: num / &g, den: den / g }
    }

    pub fn from_i64(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Self {
        QModZ { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn numerator(&self) -> &Int {
        &self.num
    }

    pub fn denominator(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The order of the element, which is its reduced denominator.
    pub fn order(&self) -> &Int {
        &self.den
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self::new(&self.num * k, self.den.clone())
    }
}

impl Default for QModZ {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &QModZ {
    type Output = QModZ;
    fn add(self, rhs: &QModZ) -> QModZ {
        QModZ::new(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
    }
}

impl Add for QModZ {
    type Output = QModZ;
    fn add(self, rhs: QModZ) -> QModZ {
        &self + &rhs
    }
}

impl Sub for &QModZ {
    type Output = QModZ;
    fn sub(self, rhs: &QModZ) -> QModZ {
        self + &(-rhs)
    }
}

impl Neg for &QModZ {
    type Output = QModZ;
    fn neg(self) -> QModZ {
        QModZ::new(-&self.num, self.den.clone())
    }
}

impl Neg for QModZ {
    type Output = QModZ;
    fn neg(self) -> QModZ {
        -&self
    }
}

impl Mul<&Int> for &QModZ {
    type Output = QModZ;
    fn mul(self, k: &Int) -> QModZ {
        self.scale(k)
    }
}

impl std::iter::Sum for QModZ {
    fn sum<I: Iterator<Item = QModZ>>(iter: I) -> QModZ {
        iter.fold(QModZ::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for QModZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for QModZ {
    type Err = Error;

    /// Accepts `"a/b"` or a bare integer `"a"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a fraction: {s:?}"));
        let s = s.trim();
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let a: BigInt = a.parse().map_err(|_| bad())?;
        let b: BigInt = b.parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        Ok(QModZ::new(a, b))
    }
}

/// A homomorphism `ℤⁿ → ℚ/ℤ`, given by its values on the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionCharacter {
    values: Vec<QModZ>,
}

impl TorsionCharacter {
    pub fn new(values: Vec<QModZ>) -> Self {
        TorsionCharacter { values }
    }

    pub fn zero(rank: usize) -> Self {
        TorsionCharacter { values: vec![QModZ::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[QModZ] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(QModZ::is_zero)
    }

    pub fn eval(&self, v: &[Int]) -> QModZ {
        assert_eq!(v.len(), self.values.len(), "vector length differs from character rank");
        self.values.iter().zip(v).map(|(c, x)| c.scale(x)).sum()
    }

    /// `χ ∘ A` for a map `A` into this character's lattice (acting on columns).
    pub fn pull_back(&self, a: &IntMatrix) -> TorsionCharacter {
        assert_eq!(a.nrows(), self.rank());
        TorsionCharacter { values: (0..a.ncols()).map(|j| self.eval(&a.column(j))).collect() }
    }

    /// Whether `χ` vanishes on every basis vector of `l`.
    pub fn vanishes_on(&self, l: &SubLattice) -> bool {
        l.basis_vectors().iter().all(|v| self.eval(v).is_zero())
    }

    pub fn add(&self, other: &TorsionCharacter) -> TorsionCharacter {
        TorsionCharacter { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Int) -> TorsionCharacter {
        TorsionCharacter { values: self.values.iter().map(|a| a.scale(k)).collect() }
    }

    /// The least `m ≥ 1` with `m·χ = 0`.
    pub fn order(&self) -> Int {
        self.values.iter().fold(BigInt::one(), |a, v| a.lcm(v.order()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;

    #[test]
    fn normalization() {
        assert_eq!(QModZ::from_i64(3, 4), QModZ::from_i64(-1, 4));
        assert_eq!(QModZ::from_i64(2, 4), QModZ::from_i64(1, 2));
        assert_eq!(QModZ::from_i64(5, 5), QModZ::zero());
        assert_eq!(QModZ::from_i64(1, -3), QModZ::from_i64(2, 3));
        assert_eq!(QModZ::from_i64(-1, 4).to_string(), "3/4");
        assert_eq!(QModZ::zero().to_string(), "0/1");
    }

    #[test]
    fn arithmetic() {
        let a = QModZ::from_i64(1, 2);
        assert!((&a + &a).is_zero());
        assert_eq!(&QModZ::from_i64(1, 3) + &QModZ::from_i64(1, 6), a);
        assert_eq!(-QModZ::from_i64(1, 4), QModZ::from_i64(3, 4));
        assert_eq!(QModZ::from_i64(1, 4).scale(&BigInt::from(6)), a);
    }

    #[test]
    fn parsing() {
        assert_eq!("6/8".parse::<QModZ>().unwrap(), QModZ::from_i64(3, 4));
        assert_eq!("2".parse::<QModZ>().unwrap(), QModZ::zero());
        assert!("1/0".parse::<QModZ>().is_err());
        assert!("x".parse::<QModZ>().is_err());
    }

    #[test]
    fn characters() {
        let chi = TorsionCharacter::new(vec![QModZ::from_i64(1, 2), QModZ::from_i64(1, 3)]);
        assert_eq!(chi.eval(&int_vec(&[1, 1])), QModZ::from_i64(5, 6));
        assert_eq!(chi.order(), BigInt::from(6));
        let two = IntMatrix::from_i64_rows(&[&[2], &[0]]);
        assert!(chi.pull_back(&two).is_zero());
        assert!(chi.vanishes_on(&SubLattice::from_vectors(2, &[int_vec(&[2, 3])])));
    }
}
