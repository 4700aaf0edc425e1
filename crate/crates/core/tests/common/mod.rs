//! Helpers shared by the integration suites: an independent brute-force
//! evaluation of the kappa transform over *ordered* decompositions, and a
//! seeded generator of random stable bracket keys.
//!
//! Each integration binary compiles this module separately and uses a
//! different subset of it.
#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use wpvol_core::fps::rational::{factorial, rat_int, Rational};
use wpvol_core::tau::TauTable;

/// ⟨κ₁^N⟩ on the n-pointed genus-g space, evaluated directly from the
/// ordered-decomposition form of the transform: over all compositions
/// (k₁,…,k_j) of N,
///
///   N! · Σ (−1)^{N−j}/j! · ⟨τ₀ⁿ τ_{k₁+1}⋯τ_{k_j+1}⟩ / (k₁!⋯k_j!).
///
/// The library computes the same value by grouping compositions into
/// multisets with a multinomial count; agreement of the two is the
/// ordered-vs-unordered equivalence.
pub fn ordered_kappa_single(table: &TauTable, genus: u32, n: u32, weight: u32) -> Rational {
    let mut total = Rational::zero();
    let mut parts: Vec<u32> = Vec::new();
    compositions(weight, &mut parts, &mut |parts| {
        let mut descendants = vec![0u32; n as usize];
        descendants.extend(parts.iter().map(|&k| k + 1));
        let mut term = table.bracket(genus, &descendants);
        if term.is_zero() {
            return;
        }
        let j = parts.len() as u64;
        for &k in parts {
            term = term / Rational::from(factorial(k as u64));
        }
        term = term / Rational::from(factorial(j));
        if (weight as u64 - j) % 2 == 1 {
            term = -term;
        }
        total += term;
    });
    total * Rational::from(factorial(weight as u64))
}

/// Enumerate every composition (ordered tuple of positive parts) of `rest`,
/// invoking `visit` on each.
fn compositions(rest: u32, parts: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if rest == 0 {
        visit(parts);
        return;
    }
    for first in 1..=rest {
        parts.push(first);
        compositions(rest - first, parts, visit);
        parts.pop();
    }
}

/// A random stable (genus, descendants) pair whose descendant indices sum
/// to `3g − 3 + n + extra`, or None when the dimension target is not
/// reachable for the drawn shape.
pub fn random_stable_key(rng: &mut impl Rng, extra: u32) -> Option<(u32, Vec<u32>)> {
    let genus = rng.gen_range(0..=3u32);
    let n_min = match genus {
        0 => 3,
        1 => 1,
        _ => 1, // keep at least one slot so `extra` has somewhere to live
    };
    let n = rng.gen_range(n_min..=(n_min + 5));
    let dim = 3 * genus as i64 - 3 + n as i64 + extra as i64;
    if dim < 0 {
        return None;
    }
    // Random composition of `dim` into n nonnegative parts.
    let mut ds = vec![0u32; n as usize];
    for _ in 0..dim {
        let slot = rng.gen_range(0..n as usize);
        ds[slot] += 1;
    }
    Some((genus, ds))
}

/// A small random rational with numerator in ±bound and denominator in
/// 1..=den_bound.
pub fn random_rational(rng: &mut impl Rng, bound: i64, den_bound: i64) -> Rational {
    let numer = rng.gen_range(-bound..=bound);
    let denom = rng.gen_range(1..=den_bound);
    rat_int(numer) / rat_int(denom)
}
