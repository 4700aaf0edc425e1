//! Arbitrary-precision binary floating point on top of big integers.
//!
//! A value is mantissa · 2^exp with the mantissa kept to at most `prec`
//! bits, rounded half-to-even. This is not IEEE; it is a small, auditable
//! dyadic-rational layer sufficient for the numeric outputs here: exact
//! rationals are converted at the last step, magnitudes span roughly
//! 10^±70, and thirty to fifty significant digits are carried with guard
//! bits. Every value is also an exact dyadic rational, which the Bessel
//! certification relies on.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fps::rational::{rat_int, Rational};

/// Working precision in bits for a requested number of significant decimal
/// digits, with guard bits on top. 2^(17/5) > 10, so digits·17/5 bits always
/// suffice to separate decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    digits * 17 / 5 + 32
}

#[derive(Debug, Clone)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
    prec: u32,
}

fn bit_len(n: &BigInt) -> u64 {
    n.bits()
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_bigint(n: BigInt, prec: u32) -> Self {
        Self::rounded(n, 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(n), prec)
    }

    pub fn from_u64(n: u64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(n), prec)
    }

    /// Round an exact rational to `prec` bits.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        // Scale the numerator so the quotient carries prec+2 significant bits.
        let shift = (bit_len(den) as i64 + prec as i64 + 2) - bit_len(num) as i64;
        let shift = shift.max(0);
        let scaled = num << shift as u64;
        let (q, rem) = scaled.div_rem(den);
        // Round the division to nearest (ties toward even via the mantissa
        // rounding that follows; here compare twice the remainder).
        let q = if (&rem * 2_i64).magnitude() >= den.magnitude() {
            if num.sign() == Sign::Minus { q - 1 } else { q + 1 }
        } else {
            q
        };
        Self::rounded(q, -shift, prec)
    }

    /// Normalize: keep at most prec bits of mantissa, round half-to-even.
    fn rounded(mantissa: BigInt, exp: i64, prec: u32) -> Self {
        let bits = bit_len(&mantissa);
        if bits <= prec as u64 {
            return BigFloat { mantissa, exp, prec };
        }
        let drop = bits - prec as u64;
        let (sign, mag) = (mantissa.sign(), mantissa.magnitude().clone());
        let kept = &mag >> drop;
        let half = num_bigint::BigUint::one() << (drop - 1);
        let rem = &mag - (&kept << drop);
        let round_up = match rem.cmp(&half) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => kept.is_odd(),
        };
        let kept = if round_up { kept + 1u32 } else { kept };
        let m = BigInt::from_biguint(if kept.is_zero() { Sign::NoSign } else { sign }, kept);
        BigFloat { mantissa: m, exp: exp + drop as i64, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// The exact value as a rational (every BigFloat is dyadic).
    pub fn to_rational(&self) -> Rational {
        let two_exp = |e: u64| BigInt::one() << e;
        if self.exp >= 0 {
            Rational::from(&self.mantissa * two_exp(self.exp as u64))
        } else {
            Rational::new(self.mantissa.clone(), two_exp((-self.exp) as u64))
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), exp: self.exp, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::rounded(other.mantissa.clone(), other.exp, prec);
        }
        if other.is_zero() {
            return Self::rounded(self.mantissa.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let gap = (hi.exp - lo.exp) as u64;
        // Beyond this gap the smaller operand is below half an ulp of the
        // result; adding it exactly would only bloat the intermediate.
        if gap > prec as u64 + bit_len(&lo.mantissa) + 64 {
            return Self::rounded(hi.mantissa.clone(), hi.exp, prec);
        }
        let sum = (&hi.mantissa << gap) + &lo.mantissa;
        Self::rounded(sum, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::rounded(&self.mantissa * &other.mantissa, self.exp + other.exp, prec)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift =
            (bit_len(&other.mantissa) as i64 + prec as i64 + 2) - bit_len(&self.mantissa) as i64;
        let shift = shift.max(0);
        let scaled = &self.mantissa << shift as u64;
        let (q, rem) = scaled.div_rem(&other.mantissa);
        let q = if (&rem * 2_i64).magnitude() >= other.mantissa.magnitude() {
            if q.is_negative() { q - 1 } else { q + 1 }
        } else {
            q
        };
        Self::rounded(q, self.exp - other.exp - shift, prec)
    }

    pub fn recip(&self) -> Self {
        Self::from_i64(1, self.prec).div(self)
    }

    /// Integer power, negative exponents through the reciprocal.
    pub fn powi(&self, exp: i64) -> Self {
        if exp == 0 {
            return Self::from_i64(1, self.prec);
        }
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::from_i64(1, self.prec);
        let mut pow = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&pow);
            }
            e >>= 1;
            if e > 0 {
                pow = pow.mul(&pow);
            }
        }
        acc
    }

    /// Square root of a nonnegative value, correct to about an ulp.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        // Shift so the exponent is even and the mantissa carries about
        // 2(prec+2) bits, then take the integer square root.
        let want_bits = 2 * (self.prec as u64 + 2);
        let cur = bit_len(&self.mantissa);
        let mut shift = want_bits.saturating_sub(cur) as i64;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << shift as u64;
        let root = scaled.sqrt();
        // Round to nearest: root is the floor; bump if (root + 1/2)^2 < scaled.
        let bump = (&root * &root + &root) < scaled;
        let root = if bump { root + 1 } else { root };
        Self::rounded(root, (self.exp - shift) / 2, self.prec)
    }

    /// Exact comparison of the underlying dyadic rationals.
    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        self.to_rational().cmp(&other.to_rational())
    }

    /// Decimal rendering with the given number of significant digits.
    /// Fixed-point notation inside a readable magnitude range, otherwise
    /// scientific notation. Deterministic (derived from the exact value).
    pub fn to_decimal(&self, digits: u32) -> String {
        decimal_string(&self.to_rational(), digits)
    }
}

/// Render an exact rational with `digits` significant decimal digits.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let mut e: i64 = 0;
    let ten = rat_int(10);
    let one = Rational::one();
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < one {
        scaled *= &ten;
        e -= 1;
    }
    // First `digits` digits of a / 10^e, rounded to nearest.
    let pow = |k: u32| -> Rational {
        let mut p = Rational::one();
        for _ in 0..k {
            p *= &ten;
        }
        p
    };
    let scaled = &a * pow(digits - 1) * pow_signed(-e);
    let int_part = rounded_to_integer(&scaled);
    let mut digits_str = int_part.to_string();
    // Rounding may carry over to one extra digit (e.g. 999.6 -> 1000);
    // the extra digit is then a trailing zero and can be cut.
    if digits_str.len() as u32 > digits {
        e += 1;
        digits_str.truncate(digits as usize);
    }
    let mantissa_digits = digits_str;

    let body = if (-4..=8).contains(&e) {
        if e >= 0 {
            let e = e as usize;
            if e + 1 >= mantissa_digits.len() {
                let zeros = e + 1 - mantissa_digits.len();
                format!("{}{}", mantissa_digits, "0".repeat(zeros))
            } else {
                format!("{}.{}", &mantissa_digits[..e + 1], &mantissa_digits[e + 1..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), mantissa_digits)
        }
    } else if mantissa_digits.len() == 1 {
        format!("{}e{}", mantissa_digits, e)
    } else {
        format!("{}.{}e{}", &mantissa_digits[..1], &mantissa_digits[1..], e)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn pow_signed(e: i64) -> Rational {
    let ten = rat_int(10);
    let mut p = Rational::one();
    for _ in 0..e.unsigned_abs() {
        p *= &ten;
    }
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn rounded_to_integer(r: &Rational) -> BigInt {
    let floor = r.floor().to_integer();
    let frac = r - Rational::from(floor.clone());
    if frac >= rat_int(1) / rat_int(2) {
        floor + 1
    } else {
        floor
    }
}

/// π as an exact-rational partial sum of the Machin formula
/// 16·atan(1/5) − 4·atan(1/239), truncated below the target precision,
/// then rounded to a BigFloat.
pub fn pi(prec: u32) -> BigFloat {
    let target_bits = prec + 16;
    let a = atan_inv_rational(5, target_bits);
    let b = atan_inv_rational(239, target_bits);
    let value = rat_int(16) * a - rat_int(4) * b;
    BigFloat::from_rational(&value, prec)
}

/// atan(1/x) = Σ (−1)^k / ((2k+1) x^(2k+1)) as an exact partial sum with the
/// tail smaller than 2^(−target_bits). Alternating with decreasing terms, so
/// the truncation error is below the first omitted term.
fn atan_inv_rational(x: i64, target_bits: u32) -> Rational {
    let mut acc = Rational::zero();
    let mut power = rat_int(x); // x^(2k+1)
    let xsq = rat_int(x * x);
    let threshold = {
        let denom = BigInt::one() << target_bits;
        Rational::new(BigInt::one(), denom)
    };
    let mut k: i64 = 0;
    loop {
        let term = (power.clone() * rat_int(2 * k + 1)).recip();
        if term < threshold {
            break;
        }
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        power *= &xsq;
        k += 1;
    }
    acc
}

/// √π at the given precision.
pub fn sqrt_pi(prec: u32) -> BigFloat {
    pi(prec + 8).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::rational::rat;

    const P: u32 = 160;

    #[test]
    fn round_trip_small_rationals() {
        for (n, d) in [(1i64, 3i64), (-7, 16), (355, 113), (1, 1_000_000)] {
            let r = rat(n, d);
            let f = BigFloat::from_rational(&r, P);
            let back = f.to_rational();
            let err = (back - &r).abs();
            // Error within 2^(1-prec) of the magnitude.
            let bound = r.abs() * Rational::new(BigInt::from(4), BigInt::one() << P);
            assert!(err <= bound, "{n}/{d} rounded too coarsely");
        }
        // Dyadic rationals are represented exactly.
        let f = BigFloat::from_rational(&rat(-3, 8), P);
        assert_eq!(f.to_rational(), rat(-3, 8));
    }

    #[test]
    fn arithmetic_matches_exact_rationals() {
        let a = BigFloat::from_rational(&rat(7, 5), P);
        let b = BigFloat::from_rational(&rat(-2, 3), P);
        let close = |x: &BigFloat, want: Rational| {
            let err = (x.to_rational() - &want).abs();
            let bound = Rational::new(BigInt::one(), BigInt::one() << (P - 10));
            assert!(err < bound);
        };
        close(&a.add(&b), rat(11, 15));
        close(&a.sub(&b), rat(31, 15));
        close(&a.mul(&b), rat(-14, 15));
        close(&a.div(&b), rat(-21, 10));
        close(&a.powi(3), rat(343, 125));
        close(&a.powi(-2), rat(25, 49));
    }

    #[test]
    fn sqrt_squares_back() {
        let x = BigFloat::from_rational(&rat(2, 1), P);
        let s = x.sqrt();
        let err = (s.mul(&s).to_rational() - rat(2, 1)).abs();
        let bound = Rational::new(BigInt::one(), BigInt::one() << (P - 12));
        assert!(err < bound);
        // 30-digit check of sqrt(2).
        assert!(s.to_decimal(30).starts_with("1.4142135623730950488016887242"));
    }

    #[test]
    fn pi_digits() {
        let p = pi(bits_for_digits(40));
        assert!(p
            .to_decimal(40)
            .starts_with("3.14159265358979323846264338327950288419"));
    }

    #[test]
    fn decimal_forms() {
        assert_eq!(decimal_string(&rat(1, 8), 3), "0.125");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-0.125");
        assert_eq!(decimal_string(&rat(1000, 1), 4), "1000");
        assert_eq!(decimal_string(&rat(1, 1000000), 3), "1.00e-6");
        assert_eq!(decimal_string(&rat(2, 3), 4), "0.6667");
        // Carry across a digit boundary: 0.9996 at 3 digits -> 1.00.
        assert_eq!(decimal_string(&rat(9996, 10000), 3), "1.00");
        assert_eq!(decimal_string(&rat(138, 100000), 2), "0.0014");
    }

    #[test]
    fn comparisons_are_exact() {
        let a = BigFloat::from_rational(&rat(1, 3), P);
        let c = BigFloat::from_rational(&rat(2, 3), P);
        assert_eq!(a.cmp_value(&c), std::cmp::Ordering::Less);
        assert_eq!(c.cmp_value(&a), std::cmp::Ordering::Greater);
        assert_eq!(a.cmp_value(&a.clone()), std::cmp::Ordering::Equal);
        // Different working precisions round 1/3 differently; the exact
        // comparison of the stored dyadic values still sees that.
        let b = BigFloat::from_rational(&rat(1, 3), P + 40);
        assert_ne!(a.cmp_value(&b), std::cmp::Ordering::Equal);
    }
}
