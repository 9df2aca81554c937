//! Exact scalars and univariate rational functions.
//!
//! [`Rat`] is the number type for every exact computation in the crate.
//! [`Poly`] and [`RatFn`] carry the symbolic functions of the counterexample
//! family and their derivatives.

mod poly;
mod ratfn;

pub use poly::Poly;
pub use ratfn::RatFn;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in canonical form.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("pole at x = {0}")]
    Pole(Rat),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn two_pow(e: i64) -> Rat {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Parses `p/q`, a bare integer, or a decimal literal such as `-0.125` or `1e-3`.
pub fn parse_rat(s: &str) -> Result<Rat, ScalarError> {
    let t = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    parse_decimal(t).ok_or_else(err)
}

fn parse_decimal(t: &str) -> Option<Rat> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        Rat::from_integer(n * p)
    } else {
        Rat::new(n, p)
    })
}

/// Formats a rational as `p/q`, omitting `/1` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Plain decimal rendering with `sig` significant digits, rounded half to even.
pub fn to_decimal(r: &Rat, sig: usize) -> String {
    assert!(sig > 0, "at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let mag = r.abs();
    // exponent e with 10^e <= mag < 10^(e+1)
    let mut e: i64 = {
        let digits_num = mag.numer().to_string().len() as i64;
        let digits_den = mag.denom().to_string().len() as i64;
        digits_num - digits_den
    };
    while pow10(e) > mag {
        e -= 1;
    }
    while pow10(e + 1) <= mag {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &mag * pow10(shift);
    let mut digits = round_half_even(&scaled);
    let mut point = e;
    if digits >= num_traits::pow(BigInt::from(10u32), sig) {
        digits /= 10u32;
        point += 1;
    }
    let s = digits.to_string();
    debug_assert_eq!(s.len(), sig);
    let body = if point < 0 {
        format!("0.{}{}", "0".repeat((-point - 1) as usize), s)
    } else if (point as usize) + 1 >= s.len() {
        format!("{}{}", s, "0".repeat(point as usize + 1 - s.len()))
    } else {
        let (a, b) = s.split_at(point as usize + 1);
        format!("{a}.{b}")
    };
    if r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(e: i64) -> Rat {
    let p = num_traits::pow(BigInt::from(10u32), e.unsigned_abs() as usize);
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

fn round_half_even(q: &Rat) -> BigInt {
    let (fl, rem) = q.numer().div_mod_floor(q.denom());
    let twice = &rem * 2u32;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1u32,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1u32
            }
        }
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude().sqrt();
    let d = r.denom().magnitude().sqrt();
    if &(&n * &n) == r.numer().magnitude() && &(&d * &d) == r.denom().magnitude() {
        Some(Rat::new(BigInt::from_biguint(Sign::Plus, n), BigInt::from_biguint(Sign::Plus, d)))
    } else {
        None
    }
}
