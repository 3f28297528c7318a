//! Exact arithmetic: rationals, polar rationals, Laurent polynomials in `q` with
//! rational exponents, and group-algebra elements over a weight lattice.

mod charelem;
mod laurent;
mod polar;

pub use charelem::{char_mul, CharElement};
pub use laurent::{laurent_div, laurent_eval, Evaluated, LaurentPoly, RadicalValue, DEFAULT_GRID};
pub use polar::PolarRational;

use crate::error::{invalid, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;
/// Small rational used for exponents, phases and weight coordinates.
pub type Rat = Ratio<i64>;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn rat_to_big(r: &Rat) -> Rational {
    rational(*r.numer(), *r.denom())
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().or_else(|_| invalid(format!("bad rational '{s}'")))?;
        let d: BigInt = d.trim().parse().or_else(|_| invalid(format!("bad rational '{s}'")))?;
        if d.is_zero() {
            return invalid(format!("zero denominator in '{s}'"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return invalid(format!("bad decimal '{s}'"));
        }
        let n: BigInt = digits.parse().unwrap();
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().or_else(|_| invalid(format!("bad rational '{s}'")))?;
    Ok(BigRational::from_integer(n))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let r = parse_rational(s)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rat::new(n, d)),
        _ => invalid(format!("rational '{s}' out of range")),
    }
}

/// Formats as `"p/q"`, or `"p"` when integral.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    // Scale down huge operands so the quotient stays finite.
    let (n, d) = (r.numer(), r.denom());
    let (nb, db) = (n.bits() as i64, d.bits() as i64);
    if nb < 1000 && db < 1000 {
        return n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN);
    }
    let shift = (nb - db) - 60;
    let scaled = if shift > 0 {
        BigRational::new(n.clone(), d.clone() << shift as usize)
    } else {
        BigRational::new(n.clone() << (-shift) as usize, d.clone())
    };
    let v = scaled.numer().to_f64().unwrap_or(f64::NAN) / scaled.denom().to_f64().unwrap_or(f64::NAN);
    v * 2f64.powi(shift as i32)
}

/// Exact `k`-th root of a non-negative big integer, if it exists.
pub fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a positive rational, if it exists.
pub fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 1 {
        return Some(r.clone());
    }
    if r.is_negative() {
        return None;
    }
    let n = exact_int_root(r.numer(), k)?;
    let d = exact_int_root(r.denom(), k)?;
    Some(BigRational::new(n, d))
}

/// Integer power with negative exponents allowed (`r` must be nonzero then).
pub fn rpow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub(crate) fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}


/// Formats a float with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{:.16e}", x)
}
