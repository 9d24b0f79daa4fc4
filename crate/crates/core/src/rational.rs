//! Exact rational helpers and the `p/q` text form used for every rational
//! that leaves the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` with `q > 0` and `gcd(p, q) = 1`; integers print as `p`.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::ResourceLimit(format!("integer {x} does not fit in 64 bits")))
}

pub fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::ResourceLimit(format!("integer {x} does not fit in 128 bits")))
}

/// Integer part of a rational known to be integral.
pub fn integral(x: &Rat) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Internal(format!("expected an integer, got {}", format_rat(x))));
    }
    to_i64(x.numer())
}

pub fn floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// Integers `t` with `(t - center)^2 <= radius_sq`, as an inclusive range.
/// Returns `None` when the range is empty.
pub fn integer_interval(center: &Rat, radius_sq: &Rat) -> Option<(BigInt, BigInt)> {
    if radius_sq.is_negative() {
        return None;
    }
    let inside = |t: &BigInt| {
        let d = Rat::from_integer(t.clone()) - center;
        &d * &d <= *radius_sq
    };
    let s = floor(radius_sq).sqrt();
    let mut lo = floor(center) - &s - BigInt::one();
    let mut hi = ceil(center) + &s + BigInt::one();
    while lo <= hi && !inside(&lo) {
        lo += 1;
    }
    while hi >= lo && !inside(&hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
