//! Truncated univariate power series over exact rationals.
//!
//! A series stores coefficients for degrees `0..=order`. Binary operations
//! truncate to the minimum operand order; `derivative` loses one order and
//! `antiderivative` gains one, so the stated order is always the full range
//! of degrees on which the coefficients are exact.

use num_traits::{One, Zero};

use super::rational::{rat_int, Rational};
use super::FpsError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least its constant term");
        UniSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The identity series x (requires order >= 1).
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[1] = Rational::one();
        s
    }

    /// Inclusive truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of x^n; zero above the truncation order.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, value: Rational) {
        assert!(n < self.coeffs.len());
        self.coeffs[n] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Drop coefficients above `order` (or keep everything if already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let len = (order + 1).min(self.coeffs.len());
        UniSeries { coeffs: self.coeffs[..len].to_vec() }
    }

    pub fn neg(&self) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        UniSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        UniSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        UniSeries { coeffs }
    }

    /// Quotient self/other; `other` must have a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self, FpsError> {
        if other.coeffs[0].is_zero() {
            return Err(FpsError::DivisorConstantTermZero);
        }
        let n = self.order().min(other.order());
        let inv_b0 = other.coeffs[0].recip();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                let b = &other.coeffs[j];
                if !b.is_zero() && !coeffs[k - j].is_zero() {
                    acc -= b * &coeffs[k - j];
                }
            }
            coeffs[k] = acc * &inv_b0;
        }
        Ok(UniSeries { coeffs })
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, FpsError> {
        if !self.coeffs[0].is_zero() {
            return Err(FpsError::ExpConstantTermNonzero);
        }
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[0] = Rational::one();
        // e' = f' e termwise: n e_n = sum_{k=1..n} k f_k e_{n-k}
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                let f = &self.coeffs[k];
                if !f.is_zero() && !coeffs[m - k].is_zero() {
                    acc += f * &coeffs[m - k] * rat_int(k as i64);
                }
            }
            coeffs[m] = acc / rat_int(m as i64);
        }
        Ok(UniSeries { coeffs })
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self, FpsError> {
        if !self.coeffs[0].is_one() {
            return Err(FpsError::LogConstantTermNotOne);
        }
        // (log f)' = f'/f, then integrate; the division is safe since f(0)=1.
        let n = self.order();
        if n == 0 {
            return Ok(UniSeries::zero(0));
        }
        let ratio = self.derivative().div(&self.truncate(n - 1))?;
        Ok(ratio.antiderivative())
    }

    /// Integer power. Negative exponents require a nonzero constant term.
    pub fn pow(&self, exp: i64) -> Result<Self, FpsError> {
        if exp == 0 {
            return Ok(UniSeries::one(self.order()));
        }
        let base = if exp < 0 {
            UniSeries::one(self.order()).div(self)?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut result = UniSeries::one(self.order());
        let mut power = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&power);
            }
            e >>= 1;
            if e > 0 {
                power = power.mul(&power);
            }
        }
        Ok(result)
    }

    /// Termwise derivative; the result is exact one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return UniSeries::zero(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| &self.coeffs[k] * rat_int(k as i64))
            .collect();
        UniSeries { coeffs }
    }

    /// Termwise antiderivative with constant term 0; gains one order.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[k + 1] = c / rat_int((k + 1) as i64);
            }
        }
        UniSeries { coeffs }
    }

    /// Composition self(inner); `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, FpsError> {
        if !inner.coeffs[0].is_zero() {
            return Err(FpsError::ComposeInnerConstantNonzero);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner evaluation from the top coefficient down.
        let mut result = UniSeries::zero(n);
        result.coeffs[0] = self.coeff(n);
        for k in (0..n).rev() {
            result = result.mul(&inner);
            result.coeffs[0] += &self.coeffs[k];
        }
        Ok(result)
    }

    /// Compositional inverse g with self(g(x)) = x, via Lagrange inversion:
    /// g_n = [y^(n-1)] (y/f(y))^n / n.
    pub fn revert(&self) -> Result<Self, FpsError> {
        if !self.coeffs[0].is_zero() || self.coeff(1).is_zero() {
            return Err(FpsError::NotInvertible);
        }
        let n = self.order();
        // h = y/f(y) = 1/(f_1 + f_2 y + ...), exact to order n-1.
        let shifted = UniSeries { coeffs: self.coeffs[1..].to_vec() };
        let h = UniSeries::one(n - 1).div(&shifted)?;
        let mut coeffs = vec![Rational::zero(); n + 1];
        let mut power = h.clone();
        for m in 1..=n {
            coeffs[m] = power.coeff(m - 1) / rat_int(m as i64);
            if m < n {
                power = power.mul(&h);
            }
        }
        Ok(UniSeries { coeffs })
    }
}
