//! Truncated Laurent series over `𝔽_p`, valuations, the normalized absolute
//! value `|x| = p^{−v(x)}`, strong regularity for split tori and the
//! discriminant term `Δ_IV`.
//!
//! A series is known modulo `t^N` for its absolute precision `N`, or exactly
//! when `N` is absent. Arithmetic propagates precision pessimistically.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::reductive::RootDatum;
use crate::IntMatrix;

/// Relative precision used when an exact series has to be inverted.
pub const DEFAULT_PRECISION: usize = 32;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p−2) is the inverse
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

/// An element of `𝔽_p((t))` known to some precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    p: u64,
    val: i64,
    coeffs: Vec<u64>,
    abs_prec: Option<i64>,
}

impl LaurentSeries {
    /// `Σ coeffs[k]·t^(start+k) + O(t^(start+precision))`, or an exact
    /// polynomial when `precision` is `None`. Coefficients may be any
    /// integers; they are reduced mod `p`.
    pub fn new(p: u64, start: i64, coeffs: &[i64], precision: Option<usize>) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        let abs_prec = precision.map(|n| start + n as i64);
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        Ok(Self::normalized(p, start, reduced, abs_prec))
    }

    fn normalized(p: u64, start: i64, mut coeffs: Vec<u64>, abs_prec: Option<i64>) -> Self {
        if let Some(n) = abs_prec {
            let keep = (n - start).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => LaurentSeries { p, val: abs_prec.unwrap_or(0), coeffs: Vec::new(), abs_prec },
            Some(k) => {
                coeffs.drain(..k);
                while coeffs.last() == Some(&0) {
                    coeffs.pop();
                }
                LaurentSeries { p, val: start + k as i64, coeffs, abs_prec }
            }
        }
    }

    /// `c·t^e`, exact.
    pub fn monomial(p: u64, c: i64, e: i64) -> Result<Self> {
        Self::new(p, e, &[c], None)
    }

    pub fn constant(p: u64, c: i64) -> Result<Self> {
        Self::monomial(p, c, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1).expect("checked prime")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn absolute_precision(&self) -> Option<i64> {
        self.abs_prec
    }

    /// Coefficients from the leading term on.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Zero as far as the known terms go.
    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.abs_prec.is_none()
    }

    /// Number of known terms from the leading one; `None` if exact.
    pub fn relative_precision(&self) -> Option<usize> {
        self.abs_prec.map(|n| (n - self.val).max(0) as usize)
    }

    fn coeff(&self, e: i64) -> u64 {
        if e < self.val {
            return 0;
        }
        self.coeffs.get((e - self.val) as usize).copied().unwrap_or(0)
    }

    fn check_field(&self, other: &LaurentSeries) {
        assert_eq!(self.p, other.p, "series over different prime fields");
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        self.check_field(other);
        let abs_prec = match (self.abs_prec, other.abs_prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self::normalized(self.p, 0, Vec::new(), abs_prec);
        }
        let start = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.val,
            (_, true) => self.val,
            _ => self.val.min(other.val),
        };
        let end = (self.val + self.coeffs.len() as i64).max(other.val + other.coeffs.len() as i64);
        let end = abs_prec.map_or(end, |n| end.min(n));
        let coeffs = (start..end.max(start)).map(|e| (self.coeff(e) + other.coeff(e)) % self.p).collect();
        Self::normalized(self.p, start, coeffs, abs_prec)
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        LaurentSeries { p: self.p, val: self.val, coeffs, abs_prec: self.abs_prec }
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        self.check_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::normalized(self.p, 0, Vec::new(), None);
        }
        // O(t^a)·y is O(t^(a + v(y))); an unknown-zero factor contributes its bound
        let bound = |x: &LaurentSeries, y: &LaurentSeries| x.abs_prec.map(|a| a + y.val);
        let abs_prec = match (bound(self, other), bound(other, self)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::normalized(self.p, 0, Vec::new(), abs_prec);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + a as u128 * b as u128) % self.p as u128) as u64;
            }
        }
        Self::normalized(self.p, self.val + other.val, out, abs_prec)
    }

    /// `1/x`, to `DEFAULT_PRECISION` relative terms when `x` is exact and not
    /// a monomial.
    pub fn inverse(&self) -> Result<LaurentSeries> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroWithinPrecision);
        }
        if self.abs_prec.is_none() && self.coeffs.len() == 1 {
            let c = inv_mod(self.coeffs[0], self.p);
            return Ok(LaurentSeries { p: self.p, val: -self.val, coeffs: vec![c], abs_prec: None });
        }
        let n = self.relative_precision().unwrap_or(DEFAULT_PRECISION);
        let b0 = inv_mod(self.coeffs[0], self.p);
        let p = self.p as u128;
        let mut b: Vec<u64> = vec![b0];
        for k in 1..n {
            let mut s: u128 = 0;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = (s + self.coeffs[i] as u128 * b[k - i] as u128) % p;
            }
            b.push(((p - s) % p * b0 as u128 % p) as u64);
        }
        Ok(Self::normalized(self.p, -self.val, b, Some(-self.val + n as i64)))
    }

    pub fn pow(&self, e: i64) -> Result<LaurentSeries> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Self::one(self.p);
        for _ in 0..e.unsigned_abs() {
            result = result.mul(&base);
        }
        Ok(result)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                terms.push(format!("{c}·t^{}", self.val + k as i64));
            }
        }
        if let Some(n) = self.abs_prec {
            terms.push(format!("O(t^{n})"));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// `v(x)`; fails when no known coefficient is nonzero.
pub fn valuation(x: &LaurentSeries) -> Result<i64> {
    if x.coeffs.is_empty() {
        return Err(Error::ZeroWithinPrecision);
    }
    Ok(x.val)
}

/// `q^e` with a rational exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuedNumber {
    pub base: u64,
    pub exponent: BigRational,
}

impl ValuedNumber {
    pub fn new(base: u64, exponent: BigRational) -> Self {
        ValuedNumber { base, exponent }
    }

    pub fn one(base: u64) -> Self {
        Self::new(base, BigRational::zero())
    }

    pub fn mul(&self, other: &ValuedNumber) -> ValuedNumber {
        assert_eq!(self.base, other.base, "different bases");
        Self::new(self.base, &self.exponent + &other.exponent)
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }
}

impl fmt::Display for ValuedNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_integer() && !self.exponent.is_negative() {
            write!(f, "{}^{}", self.base, self.exponent)
        } else {
            write!(f, "{}^({})", self.base, self.exponent)
        }
    }
}

/// `|x| = p^{−v(x)}`.
pub fn abs_value(x: &LaurentSeries) -> Result<ValuedNumber> {
    let v = valuation(x)?;
    Ok(ValuedNumber::new(x.p, BigRational::from_integer(BigInt::from(-v))))
}

fn check_split(rd: &RootDatum, gamma: &[LaurentSeries]) -> Result<()> {
    if rd.cochar_lattice().actions().iter().any(|a| !a.is_identity()) {
        return Err(Error::InvalidInput("strong regularity is implemented for split data only".into()));
    }
    if gamma.len() != rd.rank() {
        return Err(Error::DimensionMismatch("one series per cocharacter basis vector".into()));
    }
    if gamma.iter().any(LaurentSeries::is_zero_within_precision) {
        return Err(Error::ZeroWithinPrecision);
    }
    if gamma.windows(2).any(|w| w[0].p != w[1].p) {
        return Err(Error::InvalidInput("series over different prime fields".into()));
    }
    Ok(())
}

/// `α(γ) = Π γᵢ^{αᵢ}`.
pub fn evaluate_character(alpha: &[crate::Int], gamma: &[LaurentSeries]) -> Result<LaurentSeries> {
    let mut out = LaurentSeries::one(gamma[0].p);
    for (a, g) in alpha.iter().zip(gamma) {
        let e: i64 = a.try_into().map_err(|_| Error::InvalidInput("exponent too large".into()))?;
        out = out.mul(&g.pow(e)?);
    }
    Ok(out)
}

/// `α(γ) − 1` for every root, in root order.
fn root_differences(rd: &RootDatum, gamma: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
    let one = LaurentSeries::one(gamma[0].p);
    rd.roots().iter().map(|a| Ok(evaluate_character(a, gamma)?.sub(&one))).collect()
}

/// Whether `α(γ) ≠ 1` for every root. Needs trivial action.
pub fn is_strongly_regular(rd: &RootDatum, gamma: &[LaurentSeries]) -> Result<bool> {
    check_split(rd, gamma)?;
    for d in root_differences(rd, gamma)? {
        if d.is_exact_zero() {
            return Ok(false);
        }
        if d.is_zero_within_precision() {
            return Err(Error::PrecisionInsufficient("whether α(γ) = 1".into()));
        }
    }
    Ok(true)
}

/// `w·γ` for `w` acting on `Y`: `(w·γ)ᵢ = Π_j γ_j^{w_ij}`.
pub fn weyl_act(w: &IntMatrix, gamma: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
    (0..w.nrows()).map(|i| evaluate_character(w.row(i), gamma)).collect()
}

/// `p^{−(v_G − v_H)/2}` with `v_G = Σ_{α ∈ R_G} v(α(γ) − 1)` and `v_H` the same
/// sum over the roots of `H`, which must be roots of `G`.
pub fn delta_iv(rd_g: &RootDatum, rd_h: &RootDatum, gamma: &[LaurentSeries]) -> Result<ValuedNumber> {
    if rd_h.rank() != rd_g.rank() || rd_h.roots().iter().any(|a| !rd_g.roots().contains(a)) {
        return Err(Error::InvalidInput("roots of H must be roots of G".into()));
    }
    if !is_strongly_regular(rd_g, gamma)? {
        return Err(Error::NotStronglyRegular);
    }
    let diffs = root_differences(rd_g, gamma)?;
    let mut v_g = 0i64;
    let mut v_h = 0i64;
    for (a, d) in rd_g.roots().iter().zip(&diffs) {
        let v = valuation(d)?;
        v_g += v;
        if rd_h.roots().contains(a) {
            v_h += v;
        }
    }
    Ok(ValuedNumber::new(gamma[0].p, BigRational::new(BigInt::from(-(v_g - v_h)), BigInt::from(2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductive::Form;

    fn s(p: u64, start: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::new(p, start, c, None).unwrap()
    }

    #[test]
    fn valuations_and_absolute_values() {
        assert_eq!(valuation(&s(3, 2, &[1, 1])).unwrap(), 2);
        assert_eq!(valuation(&s(3, 0, &[1, 1])).unwrap(), 0);
        let x = s(3, 0, &[1, 1]);
        let y = x.mul(&x.inverse().unwrap()).sub(&LaurentSeries::one(3));
        assert_eq!(valuation(&y).unwrap_err(), Error::ZeroWithinPrecision);
        assert_eq!(abs_value(&s(3, 1, &[1])).unwrap().exponent, BigRational::from_integer((-1).into()));
        assert!(abs_value(&LaurentSeries::constant(3, 5).unwrap()).unwrap().is_one());
        assert_eq!(abs_value(&s(3, -2, &[1])).unwrap().exponent, BigRational::from_integer(2.into()));
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let x = s(3, 0, &[1, 1]);
        let inv = x.inverse().unwrap();
        // 1 − t + t² − …
        assert_eq!(&inv.coefficients()[..4], &[1, 2, 1, 2]);
        assert_eq!(inv.absolute_precision(), Some(DEFAULT_PRECISION as i64));
    }

    #[test]
    fn precision_bookkeeping() {
        let x = LaurentSeries::new(5, 0, &[1, 2, 3], Some(3)).unwrap();
        let y = s(5, 1, &[1]);
        assert_eq!(x.mul(&y).absolute_precision(), Some(4));
        assert_eq!(x.add(&y).absolute_precision(), Some(3));
        let z = LaurentSeries::new(5, 0, &[0, 0], Some(2)).unwrap();
        assert!(z.is_zero_within_precision() && !z.is_exact_zero());
    }

    #[test]
    fn strong_regularity_sl2() {
        let sl2 = RootDatum::type_a(2, Form::SimplyConnected).unwrap();
        assert!(is_strongly_regular(&sl2, &[s(3, 1, &[1])]).unwrap());
        assert!(!is_strongly_regular(&sl2, &[LaurentSeries::one(3)]).unwrap());
        assert!(!is_strongly_regular(&sl2, &[LaurentSeries::constant(3, -1).unwrap()]).unwrap());
        let near_one = LaurentSeries::new(3, 0, &[1, 0, 0], Some(3)).unwrap();
        assert_eq!(is_strongly_regular(&sl2, &[near_one]).unwrap_err().code(), "PrecisionInsufficient");
    }

    #[test]
    fn delta_iv_sl2() {
        let sl2 = RootDatum::type_a(2, Form::SimplyConnected).unwrap();
        let torus = sl2.subsystem(&[]).unwrap();
        let half = |n: i64| BigRational::new(n.into(), 2.into());
        assert_eq!(delta_iv(&sl2, &torus, &[s(3, 0, &[1, 1])]).unwrap().exponent, half(-2));
        assert_eq!(delta_iv(&sl2, &torus, &[s(3, 1, &[1])]).unwrap().exponent, half(2));
        assert!(delta_iv(&sl2, &sl2, &[s(3, 1, &[1])]).unwrap().is_one());
        assert_eq!(delta_iv(&sl2, &torus, &[LaurentSeries::one(3)]).unwrap_err().code(), "NotStronglyRegular");
    }
}
