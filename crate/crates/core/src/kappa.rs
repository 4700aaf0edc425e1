//! κ-class intersection numbers and higher Weil–Petersson volumes.
//!
//! The central device is the transform expressing a κ-monomial bracket
//! through ψ-brackets: for a multi-index m = (m₁, m₂, …),
//!
//! ```text
//! ⟨κ₁^{m₁}κ₂^{m₂}⋯⟩_{g,n} = Πm_a! · Σ_k (−1)^{‖m‖−k}/k!
//!     Σ_{m = m⁽¹⁾+⋯+m⁽ᵏ⁾, m⁽ⁱ⁾≠0} ⟨τ₀ⁿ τ_{|m⁽¹⁾|+1} ⋯ τ_{|m⁽ᵏ⁾|+1}⟩_g / (m⁽¹⁾!⋯m⁽ᵏ⁾!)
//! ```
//!
//! where |m| = Σ a·m_a and ‖m‖ = Σ m_a.  The inner sum runs over *ordered*
//! decompositions into nonzero multi-indices; we enumerate unordered
//! multisets of parts and carry the multinomial count of orderings, an
//! exponential-to-subexponential reduction that is equivalence-tested
//! against the ordered sum at small sizes.
//!
//! On top of the transform sit the Weil–Petersson volumes
//! V_{g,n} = ⟨κ₁^{3g−3+n}⟩, their physical normalization (2π²)^d V/d!,
//! the generating function K_g(x; s₁, s₂, …), the two families of Schur
//! polynomials, and the verifier for the identity expressing K_g as the
//! descendant free energy evaluated at Schur-polynomial arguments.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::asympt::bigfloat::{bits_for_digits, pi, BigFloat};
use crate::fps::multipoly::MultiPoly;
use crate::fps::rational::{factorial, Rational};
use crate::tau::{free_energy_poly, TauTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("the zero multi-index cannot be decomposed into nonzero parts")]
    ZeroMultiIndex,
    #[error("({genus},{n}) is unstable: 2g-2+n must be positive")]
    UnstableInput { genus: u32, n: u32 },
    #[error(
        "comparison window max_weight={max_weight} is below the smallest \
         admissible monomial weight {needed} at genus {genus}"
    )]
    WindowTooSmall { genus: u32, max_weight: u32, needed: u32 },
    #[error(
        "volume table conflict at ({genus},{n}): {existing} from {existing_provenance} \
         vs {new} from {new_provenance}"
    )]
    ProvenanceConflict {
        genus: u32,
        n: u32,
        existing: String,
        existing_provenance: &'static str,
        new: String,
        new_provenance: &'static str,
    },
}

/// Exponent vector of a κ-monomial: `exponents[a-1]` is the power of κ_a.
/// Trailing zeros are trimmed, so equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        MultiIndex { exponents }
    }

    pub fn zero() -> Self {
        MultiIndex { exponents: Vec::new() }
    }

    /// The multi-index with exponents given by part multiplicities:
    /// `from_parts(&[2, 1, 1])` is κ₁²κ₂.
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut exponents = Vec::new();
        for &a in parts {
            assert!(a >= 1, "parts must be positive kappa indices");
            if exponents.len() < a as usize {
                exponents.resize(a as usize, 0);
            }
            exponents[a as usize - 1] += 1;
        }
        MultiIndex::new(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// |m| = Σ a·m_a — the total cohomological degree of the κ-monomial.
    pub fn weight(&self) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u64 + 1) * e as u64)
            .sum()
    }

    /// ‖m‖ = Σ m_a — the number of κ-factors.
    pub fn length(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// m! = Π m_a!
    pub fn factorial_product(&self) -> BigInt {
        let mut out = BigInt::one();
        for &e in &self.exponents {
            out *= factorial(e as u64);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All multisets of nonzero multi-indices summing componentwise to `m`,
/// each listed once with the number of ordered decompositions it stands
/// for (the multinomial of its part multiplicities).  Within a multiset,
/// parts appear in lexicographically non-increasing order; multisets are
/// emitted in depth-first order with larger leading parts first, so the
/// output order is deterministic.
pub fn vector_partitions(m: &MultiIndex) -> Result<Vec<(Vec<MultiIndex>, BigInt)>, KappaError> {
    if m.is_zero() {
        return Err(KappaError::ZeroMultiIndex);
    }
    let rem: Vec<u32> = m.exponents().to_vec();
    let cap = rem.clone();
    let mut out = Vec::new();
    let mut current = Vec::new();
    partition_recurse(&rem, &cap, &mut current, &mut out);
    Ok(out)
}

fn partition_recurse(
    rem: &[u32],
    cap: &[u32],
    current: &mut Vec<Vec<u32>>,
    out: &mut Vec<(Vec<MultiIndex>, BigInt)>,
) {
    if rem.iter().all(|&e| e == 0) {
        let parts: Vec<MultiIndex> = current.iter().map(|p| MultiIndex::new(p.clone())).collect();
        let count = ordered_decomposition_count(current);
        out.push((parts, count));
        return;
    }
    // Candidate next parts: componentwise below the remainder, nonzero, and
    // lexicographically at most the previous part; visit larger parts first.
    let mut candidates = componentwise_subvectors(rem);
    candidates.retain(|v| v.iter().any(|&e| e != 0) && v.as_slice() <= cap);
    candidates.sort();
    candidates.reverse();
    for part in candidates {
        let next_rem: Vec<u32> = rem.iter().zip(&part).map(|(&r, &p)| r - p).collect();
        current.push(part.clone());
        partition_recurse(&next_rem, &part, current, out);
        current.pop();
    }
}

/// Every vector v with 0 ≤ v_i ≤ rem_i, in odometer order.
fn componentwise_subvectors(rem: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; rem.len()]];
    for (i, &r) in rem.iter().enumerate() {
        let prev = std::mem::take(&mut out);
        for v in prev {
            for e in 0..=r {
                let mut w = v.clone();
                w[i] = e;
                out.push(w);
            }
        }
    }
    out
}

/// k!/Π(multiplicities)! for a list of parts already grouped (equal parts
/// adjacent, as produced by the non-increasing enumeration).
fn ordered_decomposition_count(parts: &[Vec<u32>]) -> BigInt {
    let mut count = factorial(parts.len() as u64);
    let mut run = 1u64;
    for i in 1..=parts.len() {
        if i < parts.len() && parts[i] == parts[i - 1] {
            run += 1;
        } else {
            count /= factorial(run);
            run = 1;
        }
    }
    count
}

/// ⟨κ₁^{m₁}κ₂^{m₂}⋯⟩ on the moduli space of genus-g curves with n marked
/// points.  Total function: unstable (g,n) and mismatched degree
/// (|m| ≠ 3g−3+n) give 0.
pub fn kappa_bracket(table: &TauTable, genus: u32, n: u32, m: &MultiIndex) -> Rational {
    if 2 * genus as i64 - 2 + n as i64 <= 0 {
        return Rational::zero();
    }
    let dim = 3 * genus as i64 - 3 + n as i64;
    if m.weight() as i64 != dim {
        return Rational::zero();
    }
    if m.is_zero() {
        return table.bracket(genus, &vec![0; n as usize]);
    }
    let mut sum = Rational::zero();
    for (parts, ordered_count) in vector_partitions(m).expect("nonzero multi-index") {
        let k = parts.len();
        let mut descendants = vec![0u32; n as usize];
        let mut part_factorials = BigInt::one();
        for p in &parts {
            descendants.push(p.weight() as u32 + 1);
            part_factorials *= p.factorial_product();
        }
        let value = table.bracket(genus, &descendants);
        if value.is_zero() {
            continue;
        }
        let term = value * Rational::from(ordered_count)
            / Rational::from(factorial(k as u64) * part_factorials);
        if (m.length() as usize + k) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum * Rational::from(m.factorial_product())
}

/// V_{g,n} = ⟨κ₁^{3g−3+n}⟩, with V = 0 for unstable (g,n) and V_{0,3} = 1.
pub fn wp_volume(table: &TauTable, genus: u32, n: u32) -> Rational {
    if 2 * genus as i64 - 2 + n as i64 <= 0 {
        return Rational::zero();
    }
    let d = (3 * genus as i64 - 3 + n as i64) as u32;
    let m = if d == 0 {
        MultiIndex::zero()
    } else {
        MultiIndex::new(vec![d])
    };
    kappa_bracket(table, genus, n, &m)
}

/// Scale a normalized volume to the Weil–Petersson symplectic
/// normalization: (2π²)^dim·value/dim!, as a float carrying `digits`
/// significant decimal digits.
pub fn physical_scale(value: &Rational, dim: u32, digits: u32) -> BigFloat {
    let prec = bits_for_digits(digits) + 8;
    let exact = value / Rational::from(factorial(dim as u64));
    let pi2_twice = pi(prec).powi(2).mul(&BigFloat::from_i64(2, prec));
    pi2_twice
        .powi(dim as i64)
        .mul(&BigFloat::from_rational(&exact, prec))
}

/// The volume in the Weil–Petersson symplectic normalization,
/// (2π²)^d·V_{g,n}/d! with d = 3g−3+n, as a float carrying `digits`
/// significant decimal digits.
pub fn wp_physical_volume(
    table: &TauTable,
    genus: u32,
    n: u32,
    digits: u32,
) -> Result<BigFloat, KappaError> {
    if 2 * genus as i64 - 2 + n as i64 <= 0 {
        return Err(KappaError::UnstableInput { genus, n });
    }
    let d = (3 * genus as i64 - 3 + n as i64) as u32;
    Ok(physical_scale(&wp_volume(table, genus, n), d, digits))
}

/// Which of the two Schur-polynomial families to produce: the `P` family
/// from 1 − exp(−Σλⁱsᵢ) = Σλʲp_j, or the `Q` family from
/// exp(Σλⁱsᵢ) = 1 + Σλʲq_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurKind {
    P,
    Q,
}

/// p₁..p_{j_max} (or q₁..q_{j_max}) as weighted polynomials in s₁..s_{j_max},
/// where s_i carries weight i; p_j and q_j are the homogeneous weight-j parts.
pub fn schur_polynomials(kind: SchurKind, j_max: u32) -> Vec<MultiPoly> {
    assert!(j_max >= 1);
    let weights: Vec<u32> = (1..=j_max).collect();
    schur_embedded(kind, j_max, &weights, 0, j_max)
}

/// The same polynomials built inside an arbitrary ambient ring: variable
/// `offset + i` must carry weight i+1 for i in 0..j_max.  Homogeneous parts
/// beyond the ambient truncation come out zero.
fn schur_embedded(
    kind: SchurKind,
    j_max: u32,
    weights: &[u32],
    offset: usize,
    truncation: u32,
) -> Vec<MultiPoly> {
    let mut e_sum = MultiPoly::zero(weights.to_vec(), truncation);
    for i in 0..j_max as usize {
        debug_assert_eq!(weights[offset + i], i as u32 + 1);
        let mut exps = vec![0u32; offset + i + 1];
        exps[offset + i] = 1;
        e_sum.add_term(exps, Rational::one());
    }
    let series = match kind {
        SchurKind::P => {
            let one = MultiPoly::one(weights.to_vec(), truncation);
            one.sub(&e_sum.neg().exp().expect("constant term is zero"))
                .expect("same ring")
        }
        SchurKind::Q => {
            let one = MultiPoly::one(weights.to_vec(), truncation);
            e_sum.exp().expect("constant term is zero").sub(&one).expect("same ring")
        }
    };
    (1..=j_max).map(|j| series.homogeneous_part(j)).collect()
}

/// All partitions of `d` into positive parts, each partition listed with
/// non-increasing parts, in deterministic order.  `d = 0` yields the empty
/// partition.
pub fn integer_partitions(d: u32) -> Vec<Vec<u32>> {
    fn recurse(d: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=d.min(max_part)).rev() {
            prefix.push(part);
            recurse(d - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(d, d.max(1), &mut Vec::new(), &mut out);
    out
}

/// The ring of K-series monomials: variable 0 is x with weight 1, variable
/// a ≥ 1 is s_a with weight a.
fn k_ring_weights(max_weight: u32) -> Vec<u32> {
    let mut weights = vec![1u32];
    weights.extend(1..=max_weight.max(1));
    weights
}

/// The generating function of higher Weil–Petersson volumes at one genus:
/// the coefficient of xⁿ Π s_a^{m_a} is ⟨κ₁^{m₁}κ₂^{m₂}⋯⟩_{g,n}/(n!·Πm_a!),
/// admitted when |m| = 3g−3+n, carried up to total weight
/// n + |m| ≤ max_weight.
pub fn k_series(table: &TauTable, genus: u32, max_weight: u32) -> MultiPoly {
    let mut poly = MultiPoly::zero(k_ring_weights(max_weight), max_weight);
    let n_min: u32 = match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    };
    let mut n = n_min;
    while 2 * n as i64 + 3 * genus as i64 - 3 <= max_weight as i64 {
        let d = (3 * genus as i64 - 3 + n as i64) as u32;
        for parts in integer_partitions(d) {
            let m = MultiIndex::from_parts(&parts);
            let value = kappa_bracket(table, genus, n, &m);
            if value.is_zero() {
                continue;
            }
            let mut exps = vec![n];
            exps.extend_from_slice(m.exponents());
            let denom = factorial(n as u64) * m.factorial_product();
            poly.add_term(exps, value / Rational::from(denom));
        }
        n += 1;
    }
    poly
}

/// One differing monomial between two polynomial sides of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub monomial: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of a coefficientwise identity check.
#[derive(Debug, Clone)]
pub struct SubstitutionReport {
    pub genus: u32,
    pub max_weight: u32,
    pub pass: bool,
    /// Number of distinct monomials compared (union of both sides).
    pub checked_monomials: usize,
    /// First differing monomial in canonical order, if any.
    pub discrepancy: Option<Discrepancy>,
    /// Human-readable record of the truncation windows used.
    pub notes: String,
}

fn k_monomial_name(exps: &[u32]) -> String {
    let mut pieces = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let var = if i == 0 { "x".to_string() } else { format!("s{i}") };
        if e == 1 {
            pieces.push(var);
        } else {
            pieces.push(format!("{var}^{e}"));
        }
    }
    if pieces.is_empty() {
        "1".to_string()
    } else {
        pieces.join(" ")
    }
}

/// Compare two polynomials in the same ring coefficient-by-coefficient;
/// returns the number of monomials inspected and the first mismatch.
pub fn first_discrepancy(lhs: &MultiPoly, rhs: &MultiPoly) -> (usize, Option<Discrepancy>) {
    let mut keys: Vec<Vec<u32>> = lhs.terms().map(|(k, _)| k.clone()).collect();
    keys.extend(rhs.terms().map(|(k, _)| k.clone()));
    keys.sort();
    keys.dedup();
    let checked = keys.len();
    for key in keys {
        let l = lhs.coeff(&key);
        let r = rhs.coeff(&key);
        if l != r {
            return (
                checked,
                Some(Discrepancy {
                    monomial: k_monomial_name(&key),
                    lhs: l,
                    rhs: r,
                }),
            );
        }
    }
    (checked, None)
}

/// The descendant free energy with t₀ = x, t₁ = 0, t_{j+1} = p_j
/// substituted, truncated at total weight `max_weight` in the K-ring.
/// This is the right-hand side of the Schur-substitution identity.
pub fn substituted_free_energy(
    table: &TauTable,
    genus: u32,
    max_weight: u32,
) -> Result<MultiPoly, KappaError> {
    let (n_k, max_insertions, max_index) = substitution_window(genus, max_weight)?;
    let _ = n_k;
    let window = free_energy_poly(table, genus, max_insertions, max_index);
    let weights = k_ring_weights(max_weight);
    let p_polys = if max_index >= 2 {
        schur_embedded(SchurKind::P, max_index - 1, &weights, 1, max_weight)
    } else {
        Vec::new()
    };
    let mut images = Vec::with_capacity(max_index as usize + 1);
    images.push(MultiPoly::monomial(weights.clone(), max_weight, vec![1]));
    images.push(MultiPoly::zero(weights.clone(), max_weight));
    for j in 1..max_index {
        images.push(p_polys[j as usize - 1].clone());
    }
    Ok(window
        .poly
        .substitute(&images)
        .expect("images share the K-ring"))
}

/// The truncation window in t-space needed so that every monomial of the
/// substituted free energy with image weight ≤ max_weight is present.
/// With l_i the exponent of t_i, the dimension selection forces
/// Σ_{i≥2}(i−1)l_i = 3g−3+l₀, and the image monomial is homogeneous of
/// weight 2l₀+3g−3; bounding that by max_weight bounds l₀, the total number
/// of insertions, and the largest useful index.
fn substitution_window(genus: u32, max_weight: u32) -> Result<(u32, u32, u32), KappaError> {
    let n_min: i64 = match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    };
    let needed = (2 * n_min + 3 * genus as i64 - 3) as u32;
    if (max_weight as i64) < needed as i64 {
        return Err(KappaError::WindowTooSmall {
            genus,
            max_weight,
            needed,
        });
    }
    let n_k = ((max_weight as i64 - (3 * genus as i64 - 3)) / 2) as u32;
    let max_insertions = (3 * genus as i64 - 3 + 2 * n_k as i64) as u32;
    let max_index = (3 * genus as i64 - 2 + n_k as i64) as u32;
    Ok((n_k, max_insertions, max_index))
}

/// Check that the volume generating function K_g equals the descendant free
/// energy under the Schur substitution t₀ = x, t₁ = 0, t_{j+1} = p_j, for
/// every monomial of weight ≤ max_weight.  Both sides are computed
/// independently (K from the κ-transform, F from the descendant recursion).
pub fn verify_schur_substitution(
    table: &TauTable,
    genus: u32,
    max_weight: u32,
) -> Result<SubstitutionReport, KappaError> {
    let (n_k, max_insertions, max_index) = substitution_window(genus, max_weight)?;
    let substituted = substituted_free_energy(table, genus, max_weight)?;
    let k = k_series(table, genus, max_weight);
    let (checked_monomials, discrepancy) = first_discrepancy(&k, &substituted);
    Ok(SubstitutionReport {
        genus,
        max_weight,
        pass: discrepancy.is_none(),
        checked_monomials,
        discrepancy,
        notes: format!(
            "windows: x-power <= {n_k}, insertions <= {max_insertions}, index <= {max_index}"
        ),
    })
}

/// Where a volume value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// Computed through the κ-bracket transform.
    KappaTransform,
    /// Computed through the genus-expansion series pipeline.
    GenusExpansion,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::KappaTransform => "kappa-transform",
            Provenance::GenusExpansion => "genus-expansion",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VolumeEntry {
    pub value: Rational,
    pub provenances: Vec<Provenance>,
}

/// Volumes indexed by (genus, n), each carrying the set of pipelines that
/// produced it.  Inserting a conflicting value for an existing entry is an
/// error: agreement between pipelines is the central cross-check.
#[derive(Debug, Clone, Default)]
pub struct VolumeTable {
    entries: BTreeMap<(u32, u32), VolumeEntry>,
}

impl VolumeTable {
    pub fn new() -> Self {
        VolumeTable::default()
    }

    pub fn insert(
        &mut self,
        genus: u32,
        n: u32,
        value: Rational,
        provenance: Provenance,
    ) -> Result<(), KappaError> {
        match self.entries.get_mut(&(genus, n)) {
            None => {
                self.entries.insert(
                    (genus, n),
                    VolumeEntry {
                        value,
                        provenances: vec![provenance],
                    },
                );
                Ok(())
            }
            Some(entry) => {
                if entry.value != value {
                    return Err(KappaError::ProvenanceConflict {
                        genus,
                        n,
                        existing: entry.value.to_string(),
                        existing_provenance: entry.provenances[0].as_str(),
                        new: value.to_string(),
                        new_provenance: provenance.as_str(),
                    });
                }
                if !entry.provenances.contains(&provenance) {
                    entry.provenances.push(provenance);
                    entry.provenances.sort();
                }
                Ok(())
            }
        }
    }

    pub fn get(&self, genus: u32, n: u32) -> Option<&VolumeEntry> {
        self.entries.get(&(genus, n))
    }

    pub fn value(&self, genus: u32, n: u32) -> Option<&Rational> {
        self.entries.get(&(genus, n)).map(|e| &e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &VolumeEntry)> {
        self.entries.iter()
    }
}
