//! Exact rational scalars.
//!
//! Every matrix entry and every shift `c` is an arbitrary-precision rational
//! kept in canonical form (positive denominator, reduced).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarParseError;

/// Exact rational number used for all matrix arithmetic.
pub type Scalar = BigRational;

/// Sign of a scalar, used when reading off inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

pub fn sign(x: &Scalar) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.25`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let s = text.trim();
    let bad = || ScalarParseError(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mantissa = BigInt::from_str(&format!("{digits}{frac}")).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = Scalar::new(mantissa, den);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s).map(Scalar::from_integer).map_err(|_| bad())
}

/// Formats as `p` for integers and `p/q` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn format_list(xs: &[Scalar]) -> String {
    xs.iter().map(format_scalar).collect::<Vec<_>>().join(",")
}
