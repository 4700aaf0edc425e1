//! The exact rational scalar type and small integer helpers used throughout.
//!
//! `Rational` is `num_rational::BigRational`: it is always stored in lowest
//! terms with a positive denominator, and its `Display`/`FromStr` forms are
//! exactly the "p/q" (or "p" when q = 1) wire format the CLI reuses.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// (2n+1)!! = 1 * 3 * ... * (2n+1).
pub fn odd_double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = 3i64;
    for _ in 0..n {
        acc *= k;
        k += 2;
    }
    acc
}

/// Product (2a+1)(2a+3)...(2b-1) for a <= b, i.e. (2b-1)!!/(2a-1)!!.
pub fn odd_ratio(a: u64, b: u64) -> BigInt {
    debug_assert!(a <= b);
    let mut acc = BigInt::one();
    let mut k = 2 * a + 1;
    while k < 2 * b {
        acc *= k;
        k += 2;
    }
    acc
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
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

/// Render a rational as "p/q", or "p" when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the "p/q" / "p" format back into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.parse().ok()?;
            let den: BigInt = q.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

/// True when the rational is a nonnegative integer.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}
