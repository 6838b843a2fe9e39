//! Scalar helpers for exact integer and rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Integer {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(v: &Integer) -> Rational {
    BigRational::from_integer(v.clone())
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Representative of `x mod 1` in `(-1/2, 1/2]`.
pub fn centered(x: &Rational) -> Rational {
    let f = frac(x);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if f > half {
        f - BigRational::one()
    } else {
        f
    }
}

/// Integer part of an integral rational. Panics if `x` is not integral.
pub fn to_integer(x: &Rational) -> Integer {
    assert!(is_integral(x), "expected an integer, got {x}");
    x.numer().clone()
}

/// `x mod m` in `[0, |m|)`; `m = 0` leaves `x` unchanged.
pub fn reduce_mod(x: &Integer, m: &Integer) -> Integer {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(&m.abs())
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
