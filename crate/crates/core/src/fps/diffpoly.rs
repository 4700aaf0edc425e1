//! Polynomials in an infinite family U1, U2, U3, ... where U1 may appear
//! with negative exponents, together with the derivation D(Uj) = U(j+1).
//!
//! These model expressions built from successive derivatives of a single
//! unknown function: substituting Uj -> the j-th derivative of the function
//! turns D into the ordinary derivative. The Laurent variable U1 plays the
//! role of the first derivative, which is invertible wherever it is nonzero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::{rat_int, Rational};
use super::uniseries::UniSeries;
use super::FpsError;

/// Monomial key: exponent of U1 (possibly negative), then exponents of
/// U2, U3, ... with trailing zeros trimmed.
type Key = (i64, Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Key, Rational>,
}

fn trim(mut hi: Vec<u32>) -> Vec<u32> {
    while hi.last() == Some(&0) {
        hi.pop();
    }
    hi
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(value: Rational) -> Self {
        let mut p = DiffPoly::default();
        if !value.is_zero() {
            p.terms.insert((0, Vec::new()), value);
        }
        p
    }

    /// The variable Uj (j >= 1).
    pub fn u(j: u32) -> Self {
        assert!(j >= 1, "variables are numbered from U1");
        let mut p = DiffPoly::default();
        if j == 1 {
            p.terms.insert((1, Vec::new()), Rational::one());
        } else {
            let mut hi = vec![0u32; (j - 1) as usize];
            hi[(j - 2) as usize] = 1;
            p.terms.insert((0, hi), Rational::one());
        }
        p
    }

    /// U1^k for any integer k, including negative powers.
    pub fn u1_pow(k: i64) -> Self {
        let mut p = DiffPoly::default();
        p.terms.insert((k, Vec::new()), Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of U1^a * U2^hi[0] * U3^hi[1] * ...
    pub fn coeff(&self, a: i64, hi: &[u32]) -> Rational {
        let key = (a, trim(hi.to_vec()));
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, Vec<u32>), &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: Key, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (key.0, trim(key.1));
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = DiffPoly::default();
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = DiffPoly::default();
        for ((a1, hi1), c1) in &self.terms {
            for ((a2, hi2), c2) in &other.terms {
                let mut hi = vec![0u32; hi1.len().max(hi2.len())];
                for (i, &e) in hi1.iter().enumerate() {
                    hi[i] += e;
                }
                for (i, &e) in hi2.iter().enumerate() {
                    hi[i] += e;
                }
                out.add_term((a1 + a2, hi), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = DiffPoly::one();
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// The derivation with D(Uj) = U(j+1), extended by the Leibniz rule.
    /// Negative powers of U1 follow the usual rule D(U1^a) = a U1^(a-1) U2.
    pub fn derive(&self) -> Self {
        let mut out = DiffPoly::default();
        for ((a, hi), c) in &self.terms {
            if *a != 0 {
                let mut hi2 = hi.clone();
                if hi2.is_empty() {
                    hi2.push(0);
                }
                hi2[0] += 1;
                out.add_term((a - 1, hi2), c * rat_int(*a));
            }
            for (i, &e) in hi.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut hi2 = hi.clone();
                hi2[i] -= 1;
                if hi2.len() <= i + 1 {
                    hi2.resize(i + 2, 0);
                }
                hi2[i + 1] += 1;
                out.add_term((*a, hi2), c * rat_int(e as i64));
            }
        }
        out
    }

    /// Substitute a power series for each variable: `u[j]` replaces U(j+1).
    /// `u[0]` needs a nonzero constant term whenever U1 appears with a
    /// negative exponent.
    pub fn evaluate(&self, u: &[UniSeries]) -> Result<UniSeries, FpsError> {
        let order = u.iter().map(UniSeries::order).min().unwrap_or(0);
        let mut out = UniSeries::zero(order);
        for ((a, hi), c) in &self.terms {
            assert!(
                hi.len() < u.len() || hi.iter().all(|&e| e == 0),
                "no series supplied for a variable that occurs"
            );
            let mut term = u[0].pow(*a)?;
            for (i, &e) in hi.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&u[i + 1].pow(e as i64)?);
                }
            }
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    #[test]
    fn derivation_on_the_variables() {
        assert_eq!(DiffPoly::u(1).derive(), DiffPoly::u(2));
        assert_eq!(DiffPoly::u(3).derive(), DiffPoly::u(4));
        assert_eq!(DiffPoly::one().derive(), DiffPoly::zero());
    }

    #[test]
    fn derivation_on_negative_powers() {
        // D(U1^-1) = -U2 U1^-2
        let d = DiffPoly::u1_pow(-1).derive();
        assert_eq!(d, DiffPoly::u1_pow(-2).mul(&DiffPoly::u(2)).scale(&rat(-1, 1)));
    }

    #[test]
    fn leibniz_rule() {
        let f = DiffPoly::u(1).mul(&DiffPoly::u(2));
        let expect = DiffPoly::u(2)
            .pow(2)
            .add(&DiffPoly::u(1).mul(&DiffPoly::u(3)));
        assert_eq!(f.derive(), expect);
    }

    #[test]
    fn laurent_exponents_cancel() {
        let p = DiffPoly::u1_pow(-3).mul(&DiffPoly::u1_pow(3));
        assert_eq!(p, DiffPoly::one());
    }

    #[test]
    fn derive_matches_hand_computation() {
        // D(U2 U1^-3) = U3 U1^-3 - 3 U2^2 U1^-4
        let i2 = DiffPoly::u(2).mul(&DiffPoly::u1_pow(-3));
        let d = i2.derive();
        assert_eq!(d.coeff(-3, &[0, 1]), rat(1, 1));
        assert_eq!(d.coeff(-4, &[2]), rat(-3, 1));
        assert_eq!(d.num_terms(), 2);
    }

    #[test]
    fn evaluate_substitutes_series() {
        // U2 U1^-2 at U1 = 1 + x, U2 = 1 gives (1+x)^-2 = 1 - 2x + 3x^2 - ...
        let p = DiffPoly::u(2).mul(&DiffPoly::u1_pow(-2));
        let mut u1 = UniSeries::one(4);
        u1.set_coeff(1, rat(1, 1));
        let u2 = UniSeries::one(4);
        let s = p.evaluate(&[u1, u2]).unwrap();
        for k in 0..=4 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.coeff(k), rat(sign * (k as i64 + 1), 1));
        }
    }
}
