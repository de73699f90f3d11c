//! The integer scalar abstraction used by the matrix and normal-form layer.
//!
//! Everything above the normal forms works with [`num_bigint::BigInt`], but the
//! elimination routines themselves only need a Euclidean ring with signs, so
//! they are written against [`IntScalar`] and can be instantiated with machine
//! integers when the caller knows entries stay small.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// An exact integer type usable in matrix computations.
pub trait IntScalar:
    Clone + Debug + Display + Eq + Ord + Hash + Integer + NumAssign + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot hold i64 value")
    }

    /// Extended gcd `(g, x, y)` with `g >= 0` and `x*a + y*b = g`.
    fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }
}

impl<T> IntScalar for T where
    T: Clone + Debug + Display + Eq + Ord + Hash + Integer + NumAssign + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn xgcd_is_normalized() {
        for (a, b) in [(12i64, -18i64), (-4, 6), (0, -5), (7, 0), (0, 0)] {
            let (g, x, y) = i64::xgcd(&a, &b);
            assert!(g >= 0);
            assert_eq!(x * a + y * b, g);
            let (gb, xb, yb) = BigInt::xgcd(&BigInt::from(a), &BigInt::from(b));
            assert_eq!(gb, BigInt::from(g));
            assert_eq!(xb * a + yb * b, gb);
        }
    }
}
