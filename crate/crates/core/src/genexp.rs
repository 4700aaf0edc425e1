//! The series pipeline for volumes, independent of the κ-transform.
//!
//! Genus 0 rests on one classical inversion: the series
//! x(y) = Σ (−1)^m y^{m+1}/(m!(m+1)!) (a Bessel function in disguise) has a
//! compositional inverse y(x) = φ₀″(x) whose coefficients encode the
//! genus-0 volumes.  Higher genera come from the genus expansion of the
//! descendant free energy: with U_k = ∂^{k+2}F₀ and the moment variables
//! I₁ = 1 − U₁⁻¹, I_{k+1} = I_k′/U₁, the genus-g free energy is
//!
//! ```text
//! F_g = Σ_{Σ(k−1)m_k = 3g−3} ⟨τ₂^{m₂}⋯τ_{3g−2}^{m_{3g−2}}⟩
//!         · U₁^{2g−2+‖m‖} Π_k I_k^{m_k}/m_k!        (g ≥ 2)
//! ```
//!
//! and F₁ = (1/24)·log U₁.  Specializing t₀ = x, t₁ = 0,
//! t_k = (−1)^k/(k−1)! (k ≥ 2) turns U_k into y^{(k)}(x) and I_k into the
//! series f_k(x), producing φ_g(x) = Σ_n V_{g,n} xⁿ/(n!(n+3g−3)!) — volumes
//! for hundreds of marked points in one series computation.
//!
//! The same expansion, differentiated n times, yields the coefficients
//! a_m^{g,n} of ∂ⁿF_g over the monomial basis U₁^{1−g−‖m‖}ΠU_{i+1}^{m_i};
//! these reappear as coordinates of the homology class of the moduli space
//! in the multiplicative basis generated by the genus-0 classes, which this
//! module also constructs and verifies.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::fps::diffpoly::DiffPoly;
use crate::fps::multipoly::MultiPoly;
use crate::fps::rational::{factorial, rat, rat_int, Rational};
use crate::fps::uniseries::UniSeries;
use crate::kappa::{
    integer_partitions, kappa_bracket, schur_polynomials, Discrepancy, MultiIndex, Provenance,
    SchurKind, SubstitutionReport, VolumeTable,
};
use crate::tau::TauTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenexpError {
    #[error(
        "genus {genus} is not covered by the expansion: genus 0 is the seed series \
         and genus 1 is (1/24)·log of its derivative"
    )]
    ClosedFormGenus { genus: u32 },
    #[error("({genus},{n}) is unstable: 2g-2+n must be positive")]
    UnstableInput { genus: u32, n: u32 },
    #[error(
        "the genus-1 potential is logarithmic; its expansion over derivative \
         monomials requires at least one derivative (got n = {n})"
    )]
    DerivativeRequired { n: u32 },
    #[error(
        "the genus-0 class products do not span the weight-{weight} homology \
         slice at ({genus},{n}); the linear system is singular"
    )]
    SingularBasis { genus: u32, n: u32, weight: u32 },
}

/// x(y) = Σ_{m≥0} (−1)^m y^{m+1}/(m!(m+1)!) = y − y²/2 + y³/12 − …,
/// truncated at y^order.
pub fn bessel_x_of_y(order: usize) -> UniSeries {
    assert!(order >= 1);
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut term = rat_int(1); // 1/(m!(m+1)!) at m = 0
    for m in 0..order as u64 {
        coeffs[m as usize + 1] = if m % 2 == 0 { term.clone() } else { -term.clone() };
        // advance to 1/((m+1)!(m+2)!)
        term = term / rat_int(((m + 1) * (m + 2)) as i64);
    }
    UniSeries::from_coeffs(coeffs)
}

/// The compositional inverse y(x) of `bessel_x_of_y`, which equals φ₀″(x):
/// its coefficient of xⁿ is V_{0,n+2}/(n!(n−1)!).  All coefficients are
/// positive.
///
/// Rather than generic series reversion (quadratic per coefficient in the
/// dense representation, and cross-checked against it in tests), this uses
/// the differential equation of the pair: x(y) satisfies y·x″ + x = 0, so
/// the inverse satisfies y·y″ = x·(y′)³, giving the recurrence
///
/// ```text
/// m(m+1)·c_{m+1} = q_{m−1} − Σ_{b=2}^{m} b(b−1)·c_b·c_{m+2−b},
/// ```
///
/// where q are the coefficients of (y′)³, maintained incrementally.
pub fn y_of_x(order: usize) -> UniSeries {
    assert!(order >= 1);
    let mut c = vec![Rational::zero(), rat_int(1)]; // c[0] = 0, c[1] = 1
    // yp[k] = (k+1)·c[k+1] are the coefficients of y′; p = y′·y′; updated
    // incrementally so entries below the current degree are always final.
    let mut yp = vec![rat_int(1)];
    let mut p = vec![rat_int(1)];
    p.resize(order, Rational::zero());
    for m in 1..order {
        // q_{m−1} = [x^{m−1}] (p·y′), using only finalized entries.
        let mut q = Rational::zero();
        for i in 0..m {
            if !p[i].is_zero() && m - 1 - i < yp.len() {
                q += &p[i] * &yp[m - 1 - i];
            }
        }
        let mut rhs = q;
        for b in 2..=m {
            let other = m + 2 - b;
            if other < c.len() && !c[b].is_zero() {
                rhs -= rat_int((b * (b - 1)) as i64) * &c[b] * &c[other];
            }
        }
        let c_next = rhs / rat_int((m * (m + 1)) as i64);
        c.push(c_next.clone());
        // Append y′ coefficient of degree m and fold it into p.
        let a = rat_int(m as i64 + 1) * c_next;
        for i in 0..yp.len() {
            let k = i + m;
            if k < p.len() {
                let add = rat_int(2) * &yp[i] * &a;
                p[k] += add;
            }
        }
        if 2 * m < p.len() {
            let sq = &a * &a;
            p[2 * m] += sq;
        }
        yp.push(a);
    }
    UniSeries::from_coeffs(c)
}

/// The specialized moment series f₂ = y″/y′³, f_{k+1} = f_k′/y′, each
/// truncated at x^order, together with y′ itself.
fn specialized_moments(k_max: u32, order: usize) -> (UniSeries, Vec<UniSeries>) {
    assert!(k_max >= 2);
    let margin = k_max as usize + 2;
    let y = y_of_x(order + margin);
    let yp = y.derivative();
    let ypp = yp.derivative();
    let mut fs = vec![ypp
        .div(&yp.pow(3).expect("y' is invertible"))
        .expect("y' has nonzero constant term")];
    for _ in 3..=k_max {
        let next = fs
            .last()
            .unwrap()
            .derivative()
            .div(&yp)
            .expect("y' has nonzero constant term");
        fs.push(next);
    }
    (
        yp.truncate(order),
        fs.into_iter().map(|f| f.truncate(order)).collect(),
    )
}

/// f₂, …, f_{k_max} as series to x^order (index 0 holds f₂).
pub fn f_series(k_max: u32, order: usize) -> Vec<UniSeries> {
    specialized_moments(k_max, order).1
}

/// Multiplicity-grouped view of a non-increasing partition: (part, count).
fn part_multiplicities(parts: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &p in parts {
        match out.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// φ_g(x) = Σ_n V_{g,n} xⁿ/(n!(n+3g−3)!) to x^order.  Genus 0 is the double
/// antiderivative of y(x) (both constants vanish with the unstable volumes);
/// genus 1 is (1/24)·log y′; genus ≥ 2 sums the specialized expansion
/// ⟨τ₂^{l₂}⋯⟩·y′^{2g−2+Σl}·Πf_k^{l_k}/l_k! over profiles with
/// Σ(k−1)l_k = 3g−3.
pub fn phi_series(table: &TauTable, genus: u32, order: usize) -> UniSeries {
    match genus {
        0 => {
            if order < 3 {
                return UniSeries::zero(order);
            }
            y_of_x(order - 2).antiderivative().antiderivative()
        }
        1 => {
            let y = y_of_x(order + 1);
            y.derivative()
                .log()
                .expect("y' has constant term 1")
                .scale(&rat(1, 24))
        }
        g => {
            let k_max = 3 * g - 2;
            let (yp, fs) = specialized_moments(k_max, order);
            let mut sum = UniSeries::zero(order);
            // Profiles l₂..l_{3g−2} with Σ(k−1)l_k = 3g−3: partitions of
            // 3g−3 whose part j stands for an index k = j+1.
            for parts in integer_partitions(3 * g - 3) {
                let descendants: Vec<u32> = parts.iter().map(|&j| j + 1).collect();
                let bracket = table.bracket(g, &descendants);
                if bracket.is_zero() {
                    continue;
                }
                let l_total = parts.len() as i64;
                let mut term = yp
                    .pow(2 * g as i64 - 2 + l_total)
                    .expect("y' is invertible");
                let mut denom = rat_int(1);
                for (part, count) in part_multiplicities(&parts) {
                    let k = part + 1; // the moment index
                    term = term.mul(&fs[k as usize - 2].pow(count as i64).unwrap());
                    denom *= Rational::from(factorial(count as u64));
                }
                sum = sum.add(&term.scale(&(bracket / denom)));
            }
            sum.truncate(order)
        }
    }
}

/// Volumes V_{g,n} = [xⁿ]φ_g·n!(n+3g−3)! for all stable n ≤ n_max, tagged
/// with the series pipeline as provenance.
pub fn volumes_fast(table: &TauTable, genus: u32, n_max: u32) -> VolumeTable {
    let phi = phi_series(table, genus, n_max as usize);
    let mut volumes = VolumeTable::new();
    let n_min: u32 = match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    };
    for n in n_min..=n_max {
        let d = (3 * genus as i64 - 3 + n as i64) as u64;
        let value = phi.coeff(n as usize) * Rational::from(factorial(n as u64) * factorial(d));
        volumes
            .insert(genus, n, value, Provenance::GenusExpansion)
            .expect("fresh table has no conflicts");
    }
    volumes
}

/// The moment variable I_k as an exact polynomial in U₁±, U₂, U₃, …:
/// I₁ = 1 − U₁⁻¹ and I_{k+1} = I_k′·U₁⁻¹ under the derivation D(U_j) = U_{j+1}.
pub fn moment_poly(k: u32) -> DiffPoly {
    assert!(k >= 1);
    let u1_inv = DiffPoly::u1_pow(-1);
    let mut current = DiffPoly::one().sub(&u1_inv);
    for _ in 1..k {
        current = current.derive().mul(&u1_inv);
    }
    current
}

/// The genus-g free energy as an exact polynomial in U₁± and U_{≥2},
/// assembled from the moment expansion.  Every monomial satisfies the
/// grading: the U₁-exponent is 1−g−‖m‖ with m read off the U_{≥2} exponents.
#[derive(Debug, Clone)]
pub struct GenusExpansion {
    pub genus: u32,
    pub poly: DiffPoly,
}

impl GenusExpansion {
    /// Check the U₁-exponent grading on every monomial.
    pub fn grading_ok(&self) -> bool {
        expansion_grading_ok(&self.poly, self.genus)
    }
}

fn expansion_grading_ok(poly: &DiffPoly, genus: u32) -> bool {
    poly.terms().all(|((a, hi), _)| {
        let length: i64 = hi.iter().map(|&e| e as i64).sum();
        *a == 1 - genus as i64 - length
    })
}

/// Assemble F_g (g ≥ 2) from the moment expansion.  Genus 0 and 1 are not
/// polynomial in the derivatives and are rejected.
pub fn free_energy_expansion(table: &TauTable, genus: u32) -> Result<GenusExpansion, GenexpError> {
    if genus < 2 {
        return Err(GenexpError::ClosedFormGenus { genus });
    }
    let k_max = 3 * genus - 2;
    let mut moments: Vec<DiffPoly> = Vec::with_capacity(k_max as usize + 1);
    let u1_inv = DiffPoly::u1_pow(-1);
    moments.push(DiffPoly::one().sub(&u1_inv)); // I₁
    for _ in 1..k_max {
        moments.push(moments.last().unwrap().derive().mul(&u1_inv));
    }
    let mut poly = DiffPoly::zero();
    for parts in integer_partitions(3 * genus - 3) {
        let descendants: Vec<u32> = parts.iter().map(|&j| j + 1).collect();
        let bracket = table.bracket(genus, &descendants);
        if bracket.is_zero() {
            continue;
        }
        let l_total = parts.len() as i64;
        let mut term = DiffPoly::u1_pow(2 * genus as i64 - 2 + l_total);
        let mut denom = rat_int(1);
        for (part, count) in part_multiplicities(&parts) {
            let k = part + 1;
            term = term.mul(&moments[k as usize - 1].pow(count));
            denom *= Rational::from(factorial(count as u64));
        }
        poly = poly.add(&term.scale(&(bracket / denom)));
    }
    let expansion = GenusExpansion { genus, poly };
    debug_assert!(expansion.grading_ok());
    Ok(expansion)
}

/// The coefficients a_m^{g,n} of the n-th derivative of F_g over the
/// monomial basis U₁^{1−g−‖m‖} Π (U_{i+1})^{m_i}: differentiate the
/// expansion n times and read each monomial's U_{≥2} exponents as the
/// multi-index m.
///
/// Genus 0 is the seed: ∂ⁿF₀ = U_{n−2} gives a single tautological
/// coefficient.  Genus 1 starts from ∂F₁ = (1/24)U₂U₁⁻¹ and needs n ≥ 1.
pub fn a_coefficients(
    table: &TauTable,
    genus: u32,
    n: u32,
) -> Result<BTreeMap<MultiIndex, Rational>, GenexpError> {
    match genus {
        0 => {
            if n < 3 {
                return Err(GenexpError::UnstableInput { genus, n });
            }
            let mut map = BTreeMap::new();
            let m = if n == 3 {
                MultiIndex::zero()
            } else {
                let mut exps = vec![0u32; (n - 3) as usize];
                exps[(n - 4) as usize] = 1;
                MultiIndex::new(exps)
            };
            map.insert(m, rat_int(1));
            Ok(map)
        }
        1 => {
            if n == 0 {
                return Err(GenexpError::DerivativeRequired { n });
            }
            let mut poly = DiffPoly::u(2)
                .mul(&DiffPoly::u1_pow(-1))
                .scale(&rat(1, 24));
            for _ in 1..n {
                poly = poly.derive();
            }
            Ok(read_off_coefficients(&poly, genus))
        }
        g => {
            let mut poly = free_energy_expansion(table, g)?.poly;
            for _ in 0..n {
                poly = poly.derive();
            }
            Ok(read_off_coefficients(&poly, g))
        }
    }
}

fn read_off_coefficients(poly: &DiffPoly, genus: u32) -> BTreeMap<MultiIndex, Rational> {
    let mut map = BTreeMap::new();
    for ((a, hi), coeff) in poly.terms() {
        let m = MultiIndex::new(hi.clone());
        debug_assert_eq!(*a, 1 - genus as i64 - m.length() as i64);
        map.insert(m, coeff.clone());
    }
    map
}

/// The homology class of the moduli space in the polynomial basis t₁, t₂, …
/// — the integral of Π_k Q(α_k) with Q(α) = 1 + Σ t_i αⁱ over the Chern
/// roots α_k whose power sums are the κ-classes.
#[derive(Debug, Clone)]
pub struct BuClass {
    pub genus: u32,
    pub n: u32,
    /// Homogeneous of weight 3g−3+n when t_i carries weight i.
    pub poly: MultiPoly,
}

/// Build the class polynomial inside the ring t₁..t_ambient (weights
/// 1..ambient); the natural choice is ambient = 3g−3+n, but the basis solve
/// needs genus-0 classes of lower weight embedded in a common larger ring.
fn bu_poly_in_ring(table: &TauTable, genus: u32, n: u32, ambient: u32) -> MultiPoly {
    let d = (3 * genus as i64 - 3 + n as i64) as u32;
    let weights: Vec<u32> = (1..=ambient).collect();
    if d == 0 {
        let value = kappa_bracket(table, genus, n, &MultiIndex::zero());
        return MultiPoly::constant(weights, ambient, value);
    }
    // G = log Q with the αⁱ-grading carried by the weight of t_i; its
    // weight-w part g_w is the coefficient of α^w, and Π Q(α_k) integrates
    // to Σ_m ⟨κ^m⟩ Π g_w^{m_w}/m_w!.
    let mut q_minus_one = MultiPoly::zero(weights.clone(), ambient);
    for i in 1..=d.min(ambient) as usize {
        let mut exps = vec![0u32; i];
        exps[i - 1] = 1;
        q_minus_one.add_term(exps, rat_int(1));
    }
    let g_series = MultiPoly::one(weights.clone(), ambient)
        .add(&q_minus_one)
        .expect("same ring")
        .log()
        .expect("constant term is 1");
    let g_parts: Vec<MultiPoly> = (1..=d).map(|w| g_series.homogeneous_part(w)).collect();
    let mut sum = MultiPoly::zero(weights.clone(), ambient);
    for parts in integer_partitions(d) {
        let m = MultiIndex::from_parts(&parts);
        let bracket = kappa_bracket(table, genus, n, &m);
        if bracket.is_zero() {
            continue;
        }
        let mut product = MultiPoly::one(weights.clone(), ambient);
        let mut denom = rat_int(1);
        for (w, count) in part_multiplicities(&parts) {
            product = product
                .mul(&g_parts[w as usize - 1].pow(count).expect("same ring"))
                .expect("same ring");
            denom *= Rational::from(factorial(count as u64));
        }
        sum = sum.add(&product.scale(&(bracket / denom))).expect("same ring");
    }
    sum
}

/// The class of the (g,n) moduli space as a weight-(3g−3+n) homogeneous
/// polynomial in t₁, …, t_{3g−3+n}.
pub fn bu_class(table: &TauTable, genus: u32, n: u32) -> Result<BuClass, GenexpError> {
    if 2 * genus as i64 - 2 + (n as i64) <= 0 {
        return Err(GenexpError::UnstableInput { genus, n });
    }
    let d = (3 * genus as i64 - 3 + n as i64) as u32;
    Ok(BuClass {
        genus,
        n,
        poly: bu_poly_in_ring(table, genus, n, d),
    })
}

fn s_monomial_name(n: u32, exps: &[u32]) -> String {
    let mut pieces = vec![format!("x^{n}")];
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            pieces.push(format!("s{}", i + 1));
        } else {
            pieces.push(format!("s{}^{e}", i + 1));
        }
    }
    pieces.join(" ")
}

/// Check, κ-weight slice by slice, that the volume generating function
/// equals the class series B(x, t) with the ordinary Schur polynomials
/// substituted for the t-variables: the xⁿ-coefficient of K must equal
/// bu_class(g,n) with t_i = q_i(s₁,…,s_i).  The common factor 1/n! is
/// dropped from both sides.  `max_kappa_weight` bounds |m| = 3g−3+n.
pub fn verify_class_substitution(
    table: &TauTable,
    genus: u32,
    max_kappa_weight: u32,
) -> Result<SubstitutionReport, GenexpError> {
    let n_min: u32 = match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    };
    let mut checked_monomials = 0usize;
    let mut discrepancy: Option<Discrepancy> = None;
    let mut n_covered = Vec::new();
    let mut n = n_min;
    loop {
        let d = (3 * genus as i64 - 3 + n as i64) as u32;
        if d > max_kappa_weight {
            break;
        }
        n_covered.push(n);
        let bu = bu_class(table, genus, n)?;
        let substituted = if d == 0 {
            bu.poly.clone()
        } else {
            let q_polys = schur_polynomials(SchurKind::Q, d);
            bu.poly
                .substitute(&q_polys)
                .expect("images live in the s-ring of matching weights")
        };
        // The κ-side of the same slice: Σ_{|m|=d} ⟨κ^m⟩ s^m/m!.
        let weights: Vec<u32> = (1..=d.max(1)).collect();
        let mut kappa_side = MultiPoly::zero(weights, d.max(1));
        if d == 0 {
            let value = kappa_bracket(table, genus, n, &MultiIndex::zero());
            kappa_side = kappa_side
                .add(&MultiPoly::constant(vec![1], 1, value))
                .expect("same ring");
        } else {
            for parts in integer_partitions(d) {
                let m = MultiIndex::from_parts(&parts);
                let value = kappa_bracket(table, genus, n, &m);
                if value.is_zero() {
                    continue;
                }
                kappa_side.add_term(
                    m.exponents().to_vec(),
                    value / Rational::from(m.factorial_product()),
                );
            }
        }
        // Compare the two slices monomial by monomial.
        let mut keys: Vec<Vec<u32>> = kappa_side.terms().map(|(k, _)| k.clone()).collect();
        keys.extend(substituted.terms().map(|(k, _)| k.clone()));
        keys.sort();
        keys.dedup();
        checked_monomials += keys.len();
        if discrepancy.is_none() {
            for key in keys {
                let lhs = kappa_side.coeff(&key);
                let rhs = substituted.coeff(&key);
                if lhs != rhs {
                    discrepancy = Some(Discrepancy {
                        monomial: s_monomial_name(n, &key),
                        lhs,
                        rhs,
                    });
                    break;
                }
            }
        }
        n += 1;
    }
    Ok(SubstitutionReport {
        genus,
        max_weight: max_kappa_weight,
        pass: discrepancy.is_none(),
        checked_monomials,
        discrepancy,
        notes: format!(
            "compared per marked-point count n in {:?}, common factor 1/n! dropped",
            n_covered
        ),
    })
}

/// Outcome of expressing a moduli class over products of genus-0 classes.
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub genus: u32,
    pub n: u32,
    pub pass: bool,
    /// The coordinates found by the exact linear solve, keyed by the
    /// exponent multi-index of the basis product.
    pub solved: BTreeMap<MultiIndex, Rational>,
    /// The derivative-expansion coefficients the solve must reproduce.
    pub expected: BTreeMap<MultiIndex, Rational>,
    pub discrepancy: Option<Discrepancy>,
    /// Records how the graded basis is read (the degree-i generator is the
    /// class of the genus-0 space with i+3 marked points).
    pub reading: String,
}

/// Solve A·x = b over the rationals by Gaussian elimination; None when the
/// matrix is singular.
fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..size {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for cc in col..size {
                let sub = &factor * &a[col][cc];
                a[r][cc] -= sub;
            }
            let sub = factor * &b[col];
            b[r] -= sub;
        }
    }
    Some((0..size).map(|r| &b[r] / &a[r][r]).collect())
}

/// Express bu_class(g,n) in the multiplicative basis generated by the
/// genus-0 classes — the weight-i generator being the class of the
/// (i+3)-pointed genus-0 space — by an exact linear solve over the
/// t-monomial basis, and compare the coordinates with a_coefficients(g,n).
pub fn verify_basis_decomposition(
    table: &TauTable,
    genus: u32,
    n: u32,
) -> Result<BasisReport, GenexpError> {
    let target = bu_class(table, genus, n)?;
    let d = (3 * genus as i64 - 3 + n as i64) as u32;
    let basis_index = integer_partitions(d); // exponent profiles m
    let monomials = integer_partitions(d); // weight-d t-monomials
    let size = basis_index.len();

    // Column m: the product Π_i [genus-0 class with i+3 points]^{m_i},
    // expanded in the common weight-d ring.
    let mut columns = Vec::with_capacity(size);
    for parts in &basis_index {
        let mut product = MultiPoly::one((1..=d).collect(), d);
        for (i, count) in part_multiplicities(parts) {
            let generator = bu_poly_in_ring(table, 0, i + 3, d);
            product = product
                .mul(&generator.pow(count).expect("same ring"))
                .expect("same ring");
        }
        columns.push(product);
    }

    let mut matrix = vec![vec![Rational::zero(); size]; size];
    let mut rhs = vec![Rational::zero(); size];
    for (row, mono_parts) in monomials.iter().enumerate() {
        let exps = MultiIndex::from_parts(mono_parts).exponents().to_vec();
        for (col, column) in columns.iter().enumerate() {
            matrix[row][col] = column.coeff(&exps);
        }
        rhs[row] = target.poly.coeff(&exps);
    }
    let solution = solve_exact(matrix, rhs).ok_or(GenexpError::SingularBasis {
        genus,
        n,
        weight: d,
    })?;

    let mut solved = BTreeMap::new();
    for (parts, value) in basis_index.iter().zip(solution) {
        if !value.is_zero() {
            solved.insert(MultiIndex::from_parts(parts), value);
        }
    }
    let expected = a_coefficients(table, genus, n)?;

    let mut keys: Vec<MultiIndex> = solved.keys().cloned().collect();
    keys.extend(expected.keys().cloned());
    keys.sort();
    keys.dedup();
    let mut discrepancy = None;
    for key in keys {
        let lhs = solved.get(&key).cloned().unwrap_or_else(Rational::zero);
        let rhs = expected.get(&key).cloned().unwrap_or_else(Rational::zero);
        if lhs != rhs {
            discrepancy = Some(Discrepancy {
                monomial: key.to_string(),
                lhs,
                rhs,
            });
            break;
        }
    }
    Ok(BasisReport {
        genus,
        n,
        pass: discrepancy.is_none(),
        solved,
        expected,
        discrepancy,
        reading: "weight-i basis generator read as the genus-0 class with i+3 marked points"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kappa::wp_volume;

    #[test]
    fn x_of_y_series_coefficients() {
        let x = bessel_x_of_y(4);
        assert_eq!(x.coeff(0), rat_int(0));
        assert_eq!(x.coeff(1), rat_int(1));
        assert_eq!(x.coeff(2), rat(-1, 2));
        assert_eq!(x.coeff(3), rat(1, 12));
        assert_eq!(x.coeff(4), rat(-1, 144));
    }

    #[test]
    fn y_of_x_low_coefficients_and_volume_encoding() {
        let y = y_of_x(3);
        assert_eq!(y.coeff(1), rat_int(1));
        assert_eq!(y.coeff(2), rat(1, 2)); // V₀,₄/(2!·1!) = 1/2
        assert_eq!(y.coeff(3), rat(5, 12)); // V₀,₅/(3!·2!) = 5/12
    }

    #[test]
    fn inversion_round_trips_and_matches_generic_reversion() {
        let order = 12;
        let x = bessel_x_of_y(order);
        let y = y_of_x(order);
        // Compose back to the identity.
        let composed = x.compose(&y).unwrap();
        assert_eq!(composed.coeff(1), rat_int(1));
        for k in [0usize, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12] {
            assert_eq!(composed.coeff(k), rat_int(0), "x∘y fails at order {k}");
        }
        // Independent oracle: dense Lagrange reversion.
        let reverted = x.revert().unwrap();
        for k in 0..=order {
            assert_eq!(y.coeff(k), reverted.coeff(k), "mismatch at order {k}");
        }
    }

    #[test]
    fn y_coefficients_positive_to_order_fifty() {
        let y = y_of_x(50);
        for k in 1..=50 {
            assert!(y.coeff(k) > Rational::zero(), "coefficient {k} not positive");
        }
    }

    #[test]
    fn phi_zero_series() {
        let t = TauTable::new();
        let phi = phi_series(&t, 0, 5);
        assert_eq!(phi.coeff(0), rat_int(0));
        assert_eq!(phi.coeff(3), rat(1, 6));
        assert_eq!(phi.coeff(4), rat(1, 24));
        assert_eq!(phi.coeff(5), rat(1, 48));
    }

    #[test]
    fn phi_one_series() {
        let t = TauTable::new();
        let phi = phi_series(&t, 1, 2);
        assert_eq!(phi.coeff(1), rat(1, 24));
        assert_eq!(phi.coeff(2), rat(1, 32)); // V₁,₂/(2!·2!) = 1/32
    }

    #[test]
    fn phi_two_constant_term() {
        let t = TauTable::new();
        let phi = phi_series(&t, 2, 2);
        assert_eq!(phi.coeff(0), rat(43, 17280)); // V₂,₀/3!
    }

    #[test]
    fn moment_polys_match_hand_expansion() {
        // I₂ = U₂U₁⁻³.
        let i2 = moment_poly(2);
        assert_eq!(i2.coeff(-3, &[1]), rat_int(1));
        assert_eq!(i2.num_terms(), 1);
        // I₃ = U₃U₁⁻⁴ − 3U₂²U₁⁻⁵.
        let i3 = moment_poly(3);
        assert_eq!(i3.coeff(-4, &[0, 1]), rat_int(1));
        assert_eq!(i3.coeff(-5, &[2]), rat_int(-3));
        assert_eq!(i3.num_terms(), 2);
    }

    #[test]
    fn genus_two_expansion_collapses_to_three_terms() {
        let t = TauTable::new();
        let fe = free_energy_expansion(&t, 2).unwrap();
        assert_eq!(fe.poly.coeff(-4, &[3]), rat(1, 360));
        assert_eq!(fe.poly.coeff(-3, &[1, 1]), rat(-7, 1920));
        assert_eq!(fe.poly.coeff(-2, &[0, 0, 1]), rat(1, 1152));
        assert_eq!(fe.poly.num_terms(), 3);
        assert!(fe.grading_ok());
        assert!(matches!(
            free_energy_expansion(&t, 1),
            Err(GenexpError::ClosedFormGenus { genus: 1 })
        ));
    }

    #[test]
    fn grading_survives_derivatives() {
        let t = TauTable::new();
        let fe = free_energy_expansion(&t, 2).unwrap();
        let mut poly = fe.poly.clone();
        for _ in 0..4 {
            poly = poly.derive();
            assert!(expansion_grading_ok(&poly, 2));
        }
    }

    #[test]
    fn evaluated_expansion_equals_phi_series() {
        // Substituting U_k = y^{(k)} into the exact genus-2 expansion must
        // reproduce the φ₂ series computed through the f_k chain.
        let t = TauTable::new();
        let order = 8;
        let fe = free_energy_expansion(&t, 2).unwrap();
        let y = y_of_x(order + 5);
        let mut derivs = vec![y.derivative()];
        for _ in 1..4 {
            derivs.push(derivs.last().unwrap().derivative());
        }
        let evaluated = fe.poly.evaluate(&derivs).unwrap().truncate(order);
        let phi = phi_series(&t, 2, order);
        for k in 0..=order {
            assert_eq!(evaluated.coeff(k), phi.coeff(k), "mismatch at x^{k}");
        }
    }

    #[test]
    fn f_two_has_the_declared_shape() {
        // f₂ must equal y″/y′³ exactly as series.
        let order = 10;
        let fs = f_series(3, order);
        let y = y_of_x(order + 3);
        let yp = y.derivative();
        let expected_f2 = yp.derivative().div(&yp.pow(3).unwrap()).unwrap();
        for k in 0..=order {
            assert_eq!(fs[0].coeff(k), expected_f2.coeff(k), "f₂ mismatch at {k}");
        }
        // And f₃ must match the evaluated moment polynomial I₃.
        let i3_eval = moment_poly(3)
            .evaluate(&[yp.clone(), yp.derivative(), yp.derivative().derivative()])
            .unwrap()
            .truncate(order);
        for k in 0..=order {
            assert_eq!(fs[1].coeff(k), i3_eval.coeff(k), "f₃ mismatch at {k}");
        }
    }

    #[test]
    fn fast_volumes_agree_with_kappa_transform() {
        let t = TauTable::new();
        let v0 = volumes_fast(&t, 0, 8);
        let v1 = volumes_fast(&t, 1, 5);
        let v2 = volumes_fast(&t, 2, 2);
        for (volumes, pairs) in [
            (&v0, vec![(0u32, 3u32), (0, 4), (0, 5), (0, 8)]),
            (&v1, vec![(1, 1), (1, 2), (1, 5)]),
            (&v2, vec![(2, 0), (2, 1), (2, 2)]),
        ] {
            for (g, n) in pairs {
                let fast = volumes.value(g, n).unwrap();
                let direct = wp_volume(&t, g, n);
                assert_eq!(*fast, direct, "volume mismatch at ({g},{n})");
                let entry = volumes.get(g, n).unwrap();
                assert_eq!(entry.provenances, vec![Provenance::GenusExpansion]);
            }
        }
        assert_eq!(v0.value(0, 5), Some(&rat_int(5)));
        assert_eq!(v1.value(1, 1), Some(&rat(1, 24)));
        assert_eq!(v1.value(1, 2), Some(&rat(1, 8)));
    }

    #[test]
    fn a_coefficient_examples() {
        let t = TauTable::new();
        let a11 = a_coefficients(&t, 1, 1).unwrap();
        assert_eq!(a11.len(), 1);
        assert_eq!(a11[&MultiIndex::new(vec![1])], rat(1, 24));

        let a12 = a_coefficients(&t, 1, 2).unwrap();
        assert_eq!(a12.len(), 2);
        assert_eq!(a12[&MultiIndex::new(vec![0, 1])], rat(1, 24));
        assert_eq!(a12[&MultiIndex::new(vec![2])], rat(-1, 24));

        let a20 = a_coefficients(&t, 2, 0).unwrap();
        assert_eq!(a20[&MultiIndex::new(vec![3])], rat(1, 360));
        assert_eq!(a20[&MultiIndex::new(vec![1, 1])], rat(-7, 1920));
        assert_eq!(a20[&MultiIndex::new(vec![0, 0, 1])], rat(1, 1152));

        let a05 = a_coefficients(&t, 0, 5).unwrap();
        assert_eq!(a05.len(), 1);
        assert_eq!(a05[&MultiIndex::new(vec![0, 1])], rat_int(1));

        assert!(matches!(
            a_coefficients(&t, 1, 0),
            Err(GenexpError::DerivativeRequired { n: 0 })
        ));
    }

    #[test]
    fn class_polynomial_examples() {
        let t = TauTable::new();
        let c04 = bu_class(&t, 0, 4).unwrap();
        assert_eq!(c04.poly.coeff(&[1]), rat_int(1));
        assert_eq!(c04.poly.num_terms(), 1);

        let c05 = bu_class(&t, 0, 5).unwrap();
        assert_eq!(c05.poly.coeff(&[0, 1]), rat_int(1));
        assert_eq!(c05.poly.coeff(&[2]), rat_int(2));
        assert_eq!(c05.poly.num_terms(), 2);

        let c11 = bu_class(&t, 1, 1).unwrap();
        assert_eq!(c11.poly.coeff(&[1]), rat(1, 24));
        assert_eq!(c11.poly.num_terms(), 1);

        assert!(matches!(
            bu_class(&t, 0, 2),
            Err(GenexpError::UnstableInput { genus: 0, n: 2 })
        ));
    }

    #[test]
    fn class_polynomials_are_homogeneous() {
        let t = TauTable::new();
        for (g, n) in [(0u32, 6u32), (1, 2), (2, 0), (2, 1)] {
            let c = bu_class(&t, g, n).unwrap();
            let d = 3 * g + n - 3;
            for (exps, _) in c.poly.terms() {
                assert_eq!(c.poly.term_weight(exps), d, "({g},{n}) not homogeneous");
            }
        }
    }

    #[test]
    fn class_substitution_matches_volume_series() {
        let t = TauTable::new();
        for (g, w) in [(0u32, 3u32), (1, 2)] {
            let report = verify_class_substitution(&t, g, w).unwrap();
            assert!(report.pass, "genus {g}: {:?}", report.discrepancy);
            assert!(report.checked_monomials > 0);
        }
    }

    #[test]
    fn basis_decomposition_examples() {
        let t = TauTable::new();
        // Genus 0: tautologically the single generator with coefficient 1.
        let r05 = verify_basis_decomposition(&t, 0, 5).unwrap();
        assert!(r05.pass);
        assert_eq!(r05.solved.len(), 1);
        assert_eq!(r05.solved[&MultiIndex::new(vec![0, 1])], rat_int(1));

        let r11 = verify_basis_decomposition(&t, 1, 1).unwrap();
        assert!(r11.pass);
        assert_eq!(r11.solved[&MultiIndex::new(vec![1])], rat(1, 24));

        let r12 = verify_basis_decomposition(&t, 1, 2).unwrap();
        assert!(r12.pass, "{:?}", r12.discrepancy);

        let r20 = verify_basis_decomposition(&t, 2, 0).unwrap();
        assert!(r20.pass, "{:?}", r20.discrepancy);
        assert_eq!(r20.solved[&MultiIndex::new(vec![3])], rat(1, 360));
        assert_eq!(r20.solved[&MultiIndex::new(vec![1, 1])], rat(-7, 1920));
        assert_eq!(r20.solved[&MultiIndex::new(vec![0, 0, 1])], rat(1, 1152));
        assert!(!r20.reading.is_empty());
    }
}
