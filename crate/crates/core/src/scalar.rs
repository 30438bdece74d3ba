//! Exact rational arithmetic used by every module in the crate.
//!
//! All coordinates, slopes and matrix entries are arbitrary-precision
//! rationals in canonical reduced form. No floating point appears anywhere
//! in the computational core; the containment and disjointness conditions
//! checked elsewhere are open/closed set conditions for which rounding
//! would be unsound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar. `BigRational` keeps the canonical invariants
/// (denominator positive, fraction fully reduced) by construction.
pub type Scalar = BigRational;

/// Small rational constant, mostly for fixtures and tests.
pub fn rat(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer constant as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`: expected `p` or `p/q` with integer p, q")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse a rational written as `p/q` or as a plain integer `p`.
///
/// Decimal and exponent literals are rejected; exact input is part of the
/// file-format contract.
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let parse_int = |p: &str| -> Result<BigInt, ScalarParseError> {
        let p = p.trim();
        if p.is_empty() {
            return Err(ScalarParseError::Invalid(s.to_string()));
        }
        p.parse::<BigInt>()
            .map_err(|_| ScalarParseError::Invalid(s.to_string()))
    };
    match t.split_once('/') {
        None => Ok(Scalar::from(parse_int(t)?)),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(ScalarParseError::ZeroDenominator(s.to_string()));
            }
            Ok(Scalar::new(numer, denom))
        }
    }
}

/// Render a scalar in the `p/q` form used by the file formats. Integers are
/// written without the denominator, which `parse_scalar` accepts back.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn mod1(x: &Scalar) -> Scalar {
    x - x.floor()
}

/// Floor as an `i64`; all grid indices in this crate are desk-scale.
pub fn floor_i64(x: &Scalar) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("grid index exceeds i64 range")
}

/// True if `x` is an integer.
pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}
