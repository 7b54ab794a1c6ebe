//! Helpers around [`BigRational`], the exact coefficient type used everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Exact rational number. Always normalised: positive denominator, lowest terms.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-1/16"`, `"+2/4"`. Decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q` or `p`; the inverse of [`parse_rational`].
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: shift both down before converting
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Exact conversion of a finite float (every finite `f64` is dyadic).
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Rounds `x` to the dyadic grid `2^-bits` (toward zero) and returns it exactly.
pub fn dyadic(x: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let m = (x * scale).trunc();
    Rational::new(
        BigInt::from(m as i128),
        BigInt::one() << bits as usize,
    )
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Floor of the real `k`-th root of a non-negative integer.
pub fn int_root_floor(n: &BigInt, k: u32) -> BigInt {
    debug_assert!(!n.is_negative());
    n.nth_root(k)
}

/// Exact `k`-th root of `r` if it is rational (sign-aware for odd `k`).
pub fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if r.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-r, k).map(|x| -x);
    }
    let n = int_root_floor(r.numer(), k);
    let d = int_root_floor(r.denom(), k);
    let cand = Rational::new(n, d);
    (pow(&cand, k) == *r).then_some(cand)
}

/// Largest `N / 2^bits` not exceeding the positive real `base^(1/k)`.
pub fn root_lower_bound(base: &Rational, k: u32, bits: u32) -> Rational {
    debug_assert!(base.is_positive());
    let scaled = (base.numer() << (bits as usize * k as usize)) / base.denom();
    let n = int_root_floor(&scaled, k);
    Rational::new(n, BigInt::one() << bits as usize)
}
