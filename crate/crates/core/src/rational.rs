//! Exact rational arithmetic helpers.
//!
//! All geometry and event times in this crate are exact rationals. Robot
//! speeds are in {-1, 0, +1}, so every derived quantity (positions, event
//! times, periods, waiting times) stays rational and comparisons are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Shorthand for the rational `n / d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer rational `n`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qmax(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn qmin(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

/// Least common multiple of two positive rationals: the smallest positive
/// rational that is an integer multiple of both.
pub fn qlcm(a: &Q, b: &Q) -> Q {
    assert!(a.is_positive() && b.is_positive());
    // lcm(p1/q1, p2/q2) = lcm(p1, p2) / gcd(q1, q2)
    Q::new(
        a.numer().lcm(b.numer()),
        a.denom().gcd(b.denom()),
    )
}

/// `a mod m` for positive modulus, result in `[0, m)`.
pub fn qmod(a: &Q, m: &Q) -> Q {
    assert!(m.is_positive());
    let quot = (a / m).floor();
    a - quot * m
}

/// Renders a rational as `p/q`, or as a bare integer when the denominator
/// is one. This is the exact wire form used in reports and instance files.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Approximate decimal rendering, for human-oriented report columns.
pub fn fmt_q_dec(x: &Q) -> String {
    match x.to_f64() {
        Some(v) => format!("{v}"),
        None => fmt_q(x),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed number `{input}`")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses a rational from `p/q`, integer, or decimal (`0.5`) notation.
/// Decimal inputs are exact: `0.1` parses as `1/10`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = int.abs() * &scale + frac;
        let mag = if negative { -mag } else { mag };
        return Ok(Q::new(mag, scale));
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}
