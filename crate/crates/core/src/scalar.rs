//! The two coefficient kinds used throughout: exact arbitrary-precision
//! rationals for identity verification and `f64` for the solver and the
//! closed-form oracle paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Coefficient arithmetic shared by polynomials, moment sequences and
/// matrices. Exact-rational values stay in lowest terms with positive
/// denominator (guaranteed by the underlying rational type).
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Whether the kind is exact; exact kinds use exact sign tests for
    /// pivots, the float kind uses a relative tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Division; callers must rule out zero (exact) or tiny (float)
    /// divisors beforehand, as the LDL pivot checks do.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;

    /// Render for reports: `p/q` for rationals, shortest round-trip
    /// decimal for floats.
    fn render(&self) -> String;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        let q = self / rhs;
        assert!(!q.is_nan(), "float operation produced NaN");
        q
    }
    fn neg(&self) -> Self {
        -self
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        ToPrimitive::to_f64(q).expect("rational out of f64 range")
    }

    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// Convenience alias used by the exact verification paths.
pub type Rational = BigRational;

/// Parse `p`, `p/q` or a plain decimal integer into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_render_lowest_terms() {
        let q = BigRational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(q.render(), "-3/2");
        assert_eq!(BigRational::from_int(5).render(), "5");
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_rational("3/8").unwrap().render(), "3/8");
        assert_eq!(parse_rational("-2").unwrap().render(), "-2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
