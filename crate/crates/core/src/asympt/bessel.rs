//! Certified evaluation of the Bessel functions J₀ and J₁ near the origin,
//! and the first positive zero of J₀.
//!
//! Everything rides on one fact: for an alternating series whose terms
//! decrease monotonically in absolute value, a partial sum differs from the
//! limit by less than the first omitted term. The series
//!   J₀(z) = Σ (−1)^m u^m/(m!)²,   J₁(z) = √u · Σ (−1)^m u^m/(m!(m+1)!)
//! with u = z²/4 have term ratio u/(m+1)² (resp. u/((m+1)(m+2))), which is
//! below 1 once m+1 > √u. Evaluation happens in exact rational arithmetic at
//! a dyadic argument, so partial sums bracket the true value and sign
//! determinations are certificates, not heuristics.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bigfloat::BigFloat;
use super::AsymptError;
use crate::fps::rational::{rat_int, Rational};

/// Arguments are accepted up to this magnitude; the zero hunted here is
/// below 3, so the bound is generous while keeping √u ≤ 8 small.
const MAX_ABS_Z: i64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J0,
    J1,
}

/// Exact evaluation of J₀ or J₁ at a rational point: returns a value S and a
/// rigorous bound E with |J(z) − S| < E, both exact rationals.
pub fn bessel_rational(
    kind: BesselKind,
    z: &Rational,
    tail_bound: &Rational,
) -> Result<(Rational, Rational), AsymptError> {
    if z.abs() > rat_int(MAX_ABS_Z) {
        return Err(AsymptError::ArgumentOutOfRange {
            max_abs: MAX_ABS_Z,
            got: format!("{z}"),
        });
    }
    let u = z * z / rat_int(4);
    // term_m for J0: (-1)^m u^m/(m!)²; for J1 the same with (m!(m+1)!) and
    // an overall factor z/2.
    let mut sum = Rational::zero();
    let mut term = Rational::one(); // magnitude of the m-th term
    let mut m: u64 = 0;
    loop {
        sum += if m % 2 == 0 { term.clone() } else { -term.clone() };
        // Next term magnitude.
        let next = match kind {
            BesselKind::J0 => {
                let d = BigInt::from(m + 1) * BigInt::from(m + 1);
                &term * &u / Rational::from(d)
            }
            BesselKind::J1 => {
                let d = BigInt::from(m + 1) * BigInt::from(m + 2);
                &term * &u / Rational::from(d)
            }
        };
        m += 1;
        term = next;
        // The alternating-tail bound applies once terms are decreasing
        // (m ≥ √u, guaranteed by m ≥ 8 for |z| ≤ 16); then stop as soon as
        // the next term is inside the requested bound.
        if m >= 8 && term < *tail_bound {
            break;
        }
        if m > 10_000 {
            return Err(AsymptError::BracketFailure {
                width: "series failed to converge".into(),
            });
        }
    }
    let (value, err) = match kind {
        BesselKind::J0 => (sum, term),
        BesselKind::J1 => {
            let factor = z / rat_int(2);
            (sum * &factor, term * factor.abs())
        }
    };
    Ok((value, err))
}

/// Exact evaluation of x(y) = √y·J₁(2√y) = Σ (−1)^m y^{m+1}/(m!(m+1)!)
/// at a rational point with a rigorous alternating-tail bound, avoiding the
/// irrational intermediate √y.  Returns (S, E) with |x(y) − S| < E.
pub fn x_series_at(y: &Rational, tail_bound: &Rational) -> Result<(Rational, Rational), AsymptError> {
    if y.abs() > rat_int(MAX_ABS_Z * MAX_ABS_Z / 4) {
        return Err(AsymptError::ArgumentOutOfRange {
            max_abs: MAX_ABS_Z * MAX_ABS_Z / 4,
            got: format!("{y}"),
        });
    }
    let mut sum = Rational::zero();
    let mut term = y.clone(); // magnitude of the m-th term, starting at y
    let mut m: u64 = 0;
    loop {
        sum += if m % 2 == 0 { term.clone() } else { -term.clone() };
        let d = BigInt::from(m + 1) * BigInt::from(m + 2);
        term = &term * y / Rational::from(d);
        m += 1;
        // Terms decrease once (m+1)(m+2) > y; m ≥ 8 covers |y| ≤ 64.
        if m >= 8 && term.abs() < *tail_bound {
            break;
        }
        if m > 10_000 {
            return Err(AsymptError::BracketFailure {
                width: "series failed to converge".into(),
            });
        }
    }
    Ok((sum, term.abs()))
}

/// Certified sign of J at a rational point: +1, −1, or an error when the
/// value is too close to zero to separate from the error bound at the given
/// resolution.
pub fn certified_sign(
    kind: BesselKind,
    z: &Rational,
    resolution_bits: u32,
) -> Result<i32, AsymptError> {
    let bound = Rational::new(BigInt::one(), BigInt::one() << resolution_bits);
    let (value, err) = bessel_rational(kind, z, &bound)?;
    if value.abs() > err {
        Ok(if value.is_negative() { -1 } else { 1 })
    } else {
        Err(AsymptError::PrecisionUnattainable {
            requested: format!("sign at {z}"),
            bits: resolution_bits,
        })
    }
}

/// J₀ or J₁ at a high-precision float argument, evaluated through the exact
/// series with a tail below one ulp of the working precision.
pub fn bessel_eval(kind: BesselKind, z: &BigFloat) -> Result<BigFloat, AsymptError> {
    let prec = z.prec();
    let bound = Rational::new(BigInt::one(), BigInt::one() << (prec + 8));
    let (value, _err) = bessel_rational(kind, &z.to_rational(), &bound)?;
    Ok(BigFloat::from_rational(&value, prec))
}

/// The first positive zero of J₀, certified.
#[derive(Debug, Clone)]
pub struct J0Zero {
    /// Midpoint of the final bracket, rounded to the working precision.
    pub value: BigFloat,
    /// Exact rational bracket with certified opposite signs of J₀.
    pub bracket: (Rational, Rational),
    /// Exact bracket width (≤ the requested tolerance).
    pub width: Rational,
}

/// Locate the first positive zero of J₀ to within `eps` (exact rational
/// tolerance), carrying `prec` bits of working precision.
///
/// The search starts from the certified sign change on [2, 3], refines by
/// Newton steps z ← z + J₀(z)/J₁(z) (J₀′ = −J₁), and finishes by certifying
/// an explicit sign-change bracket of width ≤ eps around the result. The
/// returned value is never uncertified: if certification fails, an error is
/// raised instead.
pub fn solve_j0(eps: &Rational, prec: u32) -> Result<J0Zero, AsymptError> {
    if eps <= &Rational::zero() {
        return Err(AsymptError::BracketFailure { width: format!("{eps}") });
    }
    // The tolerance must be certifiable: series tails and rounding live at
    // 2^-(prec-8); refuse eps below that rather than return uncertified digits.
    let ulp = Rational::new(BigInt::one(), BigInt::one() << (prec.saturating_sub(8)));
    if *eps < ulp {
        return Err(AsymptError::PrecisionUnattainable {
            requested: format!("{eps}"),
            bits: prec,
        });
    }

    // Certified starting bracket.
    let mut lo = rat_int(2);
    let mut hi = rat_int(3);
    let sign_lo = certified_sign(BesselKind::J0, &lo, prec)?;
    let sign_hi = certified_sign(BesselKind::J0, &hi, prec)?;
    if sign_lo <= 0 || sign_hi >= 0 {
        return Err(AsymptError::BracketFailure { width: "initial [2,3]".into() });
    }

    // A few bisection steps to get Newton into its quadratic basin.
    for _ in 0..4 {
        let mid = (&lo + &hi) / rat_int(2);
        match certified_sign(BesselKind::J0, &mid, prec)? {
            s if s > 0 => lo = mid,
            _ => hi = mid,
        }
    }

    // Newton iteration in float arithmetic; quadratic convergence makes the
    // iteration count logarithmic in the precision.
    let mut z = BigFloat::from_rational(&((&lo + &hi) / rat_int(2)), prec);
    let step_goal = BigFloat::from_rational(&(eps / rat_int(16)), prec);
    for _ in 0..64 {
        let j0 = bessel_eval(BesselKind::J0, &z)?;
        let j1 = bessel_eval(BesselKind::J1, &z)?;
        let step = j0.div(&j1);
        z = z.add(&step);
        if step.abs().cmp_value(&step_goal) == std::cmp::Ordering::Less {
            break;
        }
    }

    // Certify a final bracket of width eps around the Newton result.
    let half = eps / rat_int(2);
    let center = z.to_rational();
    let mut blo = &center - &half;
    let mut bhi = &center + &half;
    if certified_sign(BesselKind::J0, &blo, prec)? <= 0
        || certified_sign(BesselKind::J0, &bhi, prec)? >= 0
    {
        return Err(AsymptError::BracketFailure { width: format!("{eps}") });
    }
    // Narrow the certified bracket to eps by bisection (the Newton point is
    // typically far more accurate; this keeps the certificate tight even if
    // it were not).
    while (&bhi - &blo) > *eps {
        let mid = (&blo + &bhi) / rat_int(2);
        match certified_sign(BesselKind::J0, &mid, prec)? {
            s if s > 0 => blo = mid,
            _ => bhi = mid,
        }
    }
    let width = &bhi - &blo;
    let mid = (&blo + &bhi) / rat_int(2);
    Ok(J0Zero {
        value: BigFloat::from_rational(&mid, prec),
        bracket: (blo, bhi),
        width,
    })
}
