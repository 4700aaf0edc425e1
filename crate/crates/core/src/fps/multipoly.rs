//! Weighted multivariate polynomials over exact rationals, truncated by
//! total weight.
//!
//! Each ring fixes a positive weight per variable and a truncation bound;
//! monomials whose total weight exceeds the bound are discarded, so the ring
//! behaves like a graded power series ring kept exact up to the bound.
//! Exponent vectors are stored with trailing zeros trimmed, making the key
//! for a monomial canonical.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::{rat_int, Rational};
use super::FpsError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    weights: Vec<u32>,
    truncation: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl MultiPoly {
    /// The zero polynomial in a ring with the given variable weights.
    pub fn zero(weights: Vec<u32>, truncation: u32) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "variable weights must be positive");
        MultiPoly { weights, truncation, terms: BTreeMap::new() }
    }

    pub fn constant(weights: Vec<u32>, truncation: u32, value: Rational) -> Self {
        let mut p = Self::zero(weights, truncation);
        if !value.is_zero() {
            p.terms.insert(Vec::new(), value);
        }
        p
    }

    pub fn one(weights: Vec<u32>, truncation: u32) -> Self {
        Self::constant(weights, truncation, Rational::one())
    }

    /// The monomial with the given exponents and coefficient 1.
    pub fn monomial(weights: Vec<u32>, truncation: u32, exps: Vec<u32>) -> Self {
        let mut p = Self::zero(weights, truncation);
        p.add_term(exps, Rational::one());
        p
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.weights == other.weights
    }

    /// Total weight of an exponent vector in this ring.
    pub fn term_weight(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .enumerate()
            .map(|(i, &e)| e * self.weights[i])
            .sum()
    }

    /// Add `coeff * x^exps` in place, dropping it if it exceeds the truncation.
    pub fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let exps = trim(exps);
        assert!(exps.len() <= self.weights.len(), "exponent vector has too many variables");
        if self.term_weight(&exps) > self.truncation {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let key = trim(exps.to_vec());
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Iterate over (exponents, coefficient) pairs in canonical key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.weights.clone(), self.truncation);
        if s.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, FpsError> {
        if !self.same_ring(other) {
            return Err(FpsError::WeightMismatch);
        }
        let truncation = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.weights.clone(), truncation);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FpsError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FpsError> {
        if !self.same_ring(other) {
            return Err(FpsError::WeightMismatch);
        }
        let truncation = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.weights.clone(), truncation);
        for (ea, ca) in &self.terms {
            let wa = self.term_weight(ea);
            if wa > truncation {
                continue;
            }
            for (eb, cb) in &other.terms {
                if wa + other.term_weight(eb) > truncation {
                    continue;
                }
                let mut exps = vec![0u32; ea.len().max(eb.len())];
                for (i, &e) in ea.iter().enumerate() {
                    exps[i] += e;
                }
                for (i, &e) in eb.iter().enumerate() {
                    exps[i] += e;
                }
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Result<Self, FpsError> {
        let mut result = Self::one(self.weights.clone(), self.truncation);
        for _ in 0..exp {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// exp of a polynomial with zero constant term. Terminates because every
    /// variable has positive weight, so powers eventually exceed the bound.
    pub fn exp(&self) -> Result<Self, FpsError> {
        if !self.coeff(&[]).is_zero() {
            return Err(FpsError::ExpConstantTermNonzero);
        }
        let mut result = Self::one(self.weights.clone(), self.truncation);
        let mut term = result.clone();
        for k in 1..=(self.truncation as i64 + 1) {
            term = term.mul(self)?.scale(&rat_int(k).recip());
            if term.is_zero() {
                break;
            }
            result = result.add(&term)?;
        }
        Ok(result)
    }

    /// log of a polynomial with constant term 1.
    pub fn log(&self) -> Result<Self, FpsError> {
        if !self.coeff(&[]).is_one() {
            return Err(FpsError::LogConstantTermNotOne);
        }
        let u = self.sub(&Self::one(self.weights.clone(), self.truncation))?;
        let mut result = Self::zero(self.weights.clone(), self.truncation);
        let mut power = Self::one(self.weights.clone(), self.truncation);
        for k in 1..=(self.truncation as i64 + 1) {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = result.add(&power.scale(&(rat_int(sign) / rat_int(k))))?;
        }
        Ok(result)
    }

    /// The sum of all terms of exact total weight `w`.
    pub fn homogeneous_part(&self, w: u32) -> Self {
        let mut out = Self::zero(self.weights.clone(), self.truncation);
        for (e, c) in &self.terms {
            if self.term_weight(e) == w {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Largest total weight among the stored terms (0 for the zero polynomial).
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|e| self.term_weight(e)).max().unwrap_or(0)
    }

    /// Substitute an image polynomial for each variable. All images must live
    /// in one common target ring; the result lives there too.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, FpsError> {
        assert!(
            images.len() >= self.num_vars(),
            "substitution needs an image for every variable"
        );
        for (i, im) in images.iter().enumerate() {
            if !im.same_ring(&images[0]) || im.truncation != images[0].truncation {
                return Err(FpsError::SubstitutionRingMismatch { var: i });
            }
        }
        let target_weights =
            images.first().map(|im| im.weights.clone()).unwrap_or_default();
        let target_trunc =
            images.first().map(|im| im.truncation).unwrap_or(self.truncation);
        let mut out = MultiPoly::zero(target_weights.clone(), target_trunc);

        // Cache powers of each image as they are needed.
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|im| vec![MultiPoly::one(target_weights.clone(), target_trunc), im.clone()])
            .collect();

        for (exps, coeff) in &self.terms {
            let mut term = MultiPoly::constant(target_weights.clone(), target_trunc, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}
