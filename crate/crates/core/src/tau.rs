//! Intersection numbers of cotangent-line classes on moduli spaces of
//! stable curves.
//!
//! A bracket ⟨τ_{d1}···τ_{dn}⟩ at genus g is the integral of the product of
//! ψ-class powers over the compactified moduli space of stable genus-g curves
//! with n marked points. The values are computed exactly by the standard
//! recursion package: the dimension and stability conventions (anything out
//! of range integrates to zero), the closed form at genus zero, the string
//! and dilaton equations, and the double-factorial recursion on the largest
//! index, seeded by the two base cases ⟨τ₀³⟩₀ = 1 and ⟨τ₁⟩₁ = 1/24.
//!
//! The module also provides the genus-g free-energy polynomial over a finite
//! window of insertion variables, and the Painlevé-I coefficient sequence
//! whose terms encode the pure-τ₂ brackets ⟨τ₂^{3g−3}⟩.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fps::multipoly::MultiPoly;
use crate::fps::rational::{
    factorial, odd_double_factorial, odd_ratio, rat, rat_int, Rational,
};

/// Canonical index of a bracket: genus together with the multiset of
/// descendant indices, stored sorted descending so that equal multisets
/// compare equal as keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauKey {
    genus: u32,
    descendants: Vec<u32>,
}

impl TauKey {
    pub fn new(genus: u32, descendants: &[u32]) -> Self {
        let mut ds = descendants.to_vec();
        ds.sort_unstable_by(|a, b| b.cmp(a));
        TauKey { genus, descendants: ds }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn descendants(&self) -> &[u32] {
        &self.descendants
    }

    pub fn n(&self) -> usize {
        self.descendants.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.descendants.iter().map(|&d| d as u64).sum()
    }

    /// 2g − 2 + n > 0: the moduli space is nonempty of positive dimension
    /// count, i.e. the curve class admits no infinitesimal automorphisms.
    pub fn is_stable(&self) -> bool {
        2 * (self.genus as i64) - 2 + self.n() as i64 > 0
    }

    /// Σd_i = 3g − 3 + n, the complex dimension of the moduli space.
    pub fn degree_matches_dimension(&self) -> bool {
        self.total_degree() as i64 == 3 * (self.genus as i64) - 3 + self.n() as i64
    }
}

/// Shared memo table for bracket values. Entries never change once written,
/// so concurrent recomputation races are benign: every writer inserts the
/// same value.
#[derive(Debug, Default)]
pub struct TauTable {
    memo: RwLock<HashMap<TauKey, Rational>>,
}

impl TauTable {
    pub fn new() -> Self {
        TauTable::default()
    }

    pub fn len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// ⟨τ_{d1}···τ_{dn}⟩ at the given genus. Total: unstable inputs and
    /// degree/dimension mismatches yield 0.
    pub fn bracket(&self, genus: u32, descendants: &[u32]) -> Rational {
        self.eval(&TauKey::new(genus, descendants))
    }

    pub fn bracket_key(&self, key: &TauKey) -> Rational {
        self.eval(key)
    }

    fn eval(&self, key: &TauKey) -> Rational {
        if !key.is_stable() || !key.degree_matches_dimension() {
            return Rational::zero();
        }
        if key.genus == 0 {
            return genus0_closed(&key.descendants);
        }
        if let Some(v) = self.memo.read().unwrap().get(key) {
            return v.clone();
        }
        let value = self.compute(key);
        self.memo
            .write()
            .unwrap()
            .entry(key.clone())
            .or_insert(value.clone());
        value
    }

    fn compute(&self, key: &TauKey) -> Rational {
        let g = key.genus;
        let ds = &key.descendants;
        let n = ds.len();

        // Base case ⟨τ₁⟩₁ = 1/24; must precede the dilaton branch, which
        // would otherwise reduce it to the unstable empty bracket.
        if g == 1 && *ds == [1] {
            return rat(1, 24);
        }

        // String equation: ⟨τ₀ Π τ_{d_j}⟩ = Σ_j ⟨... τ_{d_j − 1} ...⟩.
        // Descending order puts any zero at the end.
        if ds.last() == Some(&0) {
            let rest = &ds[..n - 1];
            let mut acc = Rational::zero();
            for j in 0..rest.len() {
                if rest[j] == 0 {
                    continue;
                }
                let mut lowered = rest.to_vec();
                lowered[j] -= 1;
                acc += self.bracket(g, &lowered);
            }
            return acc;
        }

        // Dilaton equation: ⟨τ₁ X⟩ = (2g − 2 + |X|) ⟨X⟩.
        if ds.last() == Some(&1) {
            let rest = &ds[..n - 1];
            let factor = 2 * (g as i64) - 2 + rest.len() as i64;
            return rat_int(factor) * self.bracket(g, rest);
        }

        // All indices are now >= 2 and g >= 1. Apply the double-factorial
        // recursion to the largest index d1:
        //   (2d1+1)!! <tau_{d1} P> = sum_j [(2(d1+d_j)-1)!!/(2d_j-1)!!] <tau_{d1+d_j-1} P\{j}>
        //     + 1/2 sum_{a+b=d1-2} (2a+1)!!(2b+1)!! [ <tau_a tau_b P>_{g-1}
        //         + sum over genus splits and ordered subsets <tau_a P_I><tau_b P_J> ].
        let d1 = ds[0];
        let rest: Vec<u32> = ds[1..].to_vec();
        let mut acc = Rational::zero();

        for j in 0..rest.len() {
            let mut merged = Vec::with_capacity(rest.len());
            merged.push(d1 + rest[j] - 1);
            merged.extend(rest.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &d)| d));
            let coeff = odd_ratio(rest[j] as u64, (d1 + rest[j]) as u64);
            acc += Rational::from(coeff) * self.bracket(g, &merged);
        }

        let mut boundary = Rational::zero();
        for a in 0..=(d1 - 2) {
            let b = d1 - 2 - a;
            let weight: BigInt =
                odd_double_factorial(a as u64) * odd_double_factorial(b as u64);

            // One handle removed: both new insertions on a genus g−1 surface.
            let mut lower = rest.clone();
            lower.push(a);
            lower.push(b);
            let mut inner = self.bracket(g - 1, &lower);

            // Surface split in two: ordered genus split and ordered
            // distribution of the remaining insertions.
            for g1 in 0..=g {
                let g2 = g - g1;
                for mask in 0u32..(1 << rest.len()) {
                    let mut left = vec![a];
                    let mut right = vec![b];
                    for (i, &d) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            left.push(d);
                        } else {
                            right.push(d);
                        }
                    }
                    let lv = self.bracket(g1, &left);
                    if lv.is_zero() {
                        continue;
                    }
                    inner += lv * self.bracket(g2, &right);
                }
            }
            boundary += Rational::from(weight) * inner;
        }
        acc += boundary / rat_int(2);

        acc / Rational::from(odd_double_factorial(d1 as u64))
    }
}

/// Closed form at genus zero: ⟨τ_{d1}···τ_{dn}⟩₀ = (n−3)!/Π d_i! when
/// Σd_i = n − 3 and n ≥ 3, else 0. Follows from the string equation alone,
/// which is how the tests vet it.
pub fn genus0_closed(descendants: &[u32]) -> Rational {
    let n = descendants.len();
    let total: u64 = descendants.iter().map(|&d| d as u64).sum();
    if n < 3 || total != (n - 3) as u64 {
        return Rational::zero();
    }
    let mut denom = BigInt::one();
    for &d in descendants {
        denom *= factorial(d as u64);
    }
    Rational::new(factorial((n - 3) as u64), denom)
}

/// Coefficients b₀..b_{g_max} of the Painlevé-I expansion:
/// b₀ = −1, b₁ = 1/24, and
/// b_{g+1} = (25g² − 1)/24 · b_g + ½ Σ_{m=1}^{g} b_{g+1−m} b_m.
pub fn painleve_b(g_max: u32) -> Vec<Rational> {
    let mut b = vec![-Rational::one()];
    if g_max >= 1 {
        b.push(rat(1, 24));
    }
    for g in 1..g_max as usize {
        let mut next = rat_int(25 * (g as i64) * (g as i64) - 1) / rat_int(24) * &b[g];
        let mut cross = Rational::zero();
        for m in 1..=g {
            cross += &b[g + 1 - m] * &b[m];
        }
        next += cross / rat_int(2);
        b.push(next);
    }
    b
}

/// ⟨τ₂^{3g−3}⟩ recovered from the Painlevé-I coefficient:
/// b_g = (5g−3)(5g−5)/(2^g (3g−3)!) · ⟨τ₂^{3g−3}⟩ for g ≥ 2.
pub fn tau2_power_from_b(g: u32) -> Rational {
    assert!(g >= 2, "the inversion formula applies from genus 2 on");
    let b = painleve_b(g).pop().unwrap();
    let g = g as i64;
    b * Rational::from(BigInt::from(2).pow(g as u32) * factorial((3 * g - 3) as u64))
        / rat_int((5 * g - 3) * (5 * g - 5))
}

/// The free-energy polynomial of one genus over a finite window: the sum of
/// ⟨τ₀^{l₀}τ₁^{l₁}···⟩_g Π t_i^{l_i}/l_i! over all exponent profiles with at
/// most `max_insertions` total insertions and indices at most `max_index`.
/// The window bounds ride along because the full series is infinite and any
/// truncated representation must declare what it covers.
#[derive(Debug, Clone)]
pub struct FreeEnergyWindow {
    pub genus: u32,
    pub max_insertions: u32,
    pub max_index: u32,
    /// Polynomial in t₀..t_{max_index}; every variable has weight 1, so the
    /// truncation weight counts insertions.
    pub poly: MultiPoly,
}

pub fn free_energy_poly(
    table: &TauTable,
    genus: u32,
    max_insertions: u32,
    max_index: u32,
) -> FreeEnergyWindow {
    let weights = vec![1u32; (max_index + 1) as usize];
    let mut poly = MultiPoly::zero(weights, max_insertions);
    let mut profile = vec![0u32; (max_index + 1) as usize];
    fill_profiles(table, genus, max_insertions, 0, &mut profile, &mut poly);
    FreeEnergyWindow { genus, max_insertions, max_index, poly }
}

fn fill_profiles(
    table: &TauTable,
    genus: u32,
    budget: u32,
    var: usize,
    profile: &mut Vec<u32>,
    poly: &mut MultiPoly,
) {
    if var == profile.len() {
        // Dimension selection: Σ i·l_i = 3g − 3 + Σ l_i; skip profiles that
        // cannot carry a nonzero bracket.
        let n: i64 = profile.iter().map(|&l| l as i64).sum();
        let deg: i64 = profile.iter().enumerate().map(|(i, &l)| i as i64 * l as i64).sum();
        if n == 0 || deg != 3 * (genus as i64) - 3 + n {
            return;
        }
        let mut ds = Vec::with_capacity(n as usize);
        for (i, &l) in profile.iter().enumerate() {
            ds.extend(std::iter::repeat(i as u32).take(l as usize));
        }
        let bracket = table.bracket(genus, &ds);
        if bracket.is_zero() {
            return;
        }
        let mut denom = BigInt::one();
        for &l in profile.iter() {
            denom *= factorial(l as u64);
        }
        poly.add_term(profile.clone(), bracket / Rational::from(denom));
        return;
    }
    for l in 0..=budget {
        profile[var] = l;
        fill_profiles(table, genus, budget - l, var + 1, profile, poly);
    }
    profile[var] = 0;
}
