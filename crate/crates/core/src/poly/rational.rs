use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Parses `7`, `-3`, `3/2` or `-1/4`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {text:?}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid rational"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid rational"))?;
    if den == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}
