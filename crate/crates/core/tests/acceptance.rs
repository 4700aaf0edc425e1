//! Acceptance gate for the whole crate: one test per shipped criterion.
//!
//! Each test exercises a user-visible guarantee end to end and prints a
//! single `PASS criterion N: ...` line when it holds, so a plain
//! `cargo test --test acceptance -- --nocapture` doubles as a release
//! checklist.  The heavyweight order-300 inverse series is computed once
//! and shared between the growth-fit and positivity tests.

mod common;

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wpvol_core::asympt::{asymptotic_diagnostics, constants, AsymptoticRow};
use wpvol_core::fps::rational::{rat, Rational};
use wpvol_core::fps::uniseries::UniSeries;
use wpvol_core::genexp::{
    phi_series, verify_basis_decomposition, verify_class_substitution, volumes_fast, y_of_x,
};
use wpvol_core::kappa::{kappa_bracket, verify_schur_substitution, wp_volume, MultiIndex};
use wpvol_core::tau::{tau2_power_from_b, TauTable};

/// Shared order-300 branch of the inverse of the Bessel-type series; the
/// genus-0 growth fit and the positivity sweep both read from it.
fn y300() -> &'static UniSeries {
    static Y: OnceLock<UniSeries> = OnceLock::new();
    Y.get_or_init(|| y_of_x(300))
}

fn rel_close(value: &Rational, target: &Rational, tol: &Rational) -> bool {
    (value - target).abs() <= target.abs() * tol
}

/// |ratio(n)/target − 1| read off a diagnostics row.
fn deviation(rows: &[AsymptoticRow], n_min: u32, n: u32, target: &Rational) -> Rational {
    let row = &rows[(n - n_min) as usize];
    assert_eq!(row.n, n, "diagnostics rows are not contiguous");
    (row.ratio.to_rational() / target - Rational::one()).abs()
}

/// Criterion 1: the direct transform of descendant brackets and the
/// derivative-expansion pipeline produce identical exact volumes over the
/// full advertised window.
#[test]
fn a1_pipeline_equivalence() {
    let table = TauTable::new();
    let mut compared = 0u32;
    for (genus, lo, hi) in [(0u32, 3u32, 12u32), (1, 1, 8), (2, 0, 4)] {
        let fast = volumes_fast(&table, genus, hi);
        for n in lo..=hi {
            let direct = wp_volume(&table, genus, n);
            let via_expansion = fast
                .value(genus, n)
                .unwrap_or_else(|| panic!("no expansion volume for ({genus},{n})"));
            assert_eq!(
                &direct, via_expansion,
                "criterion 1 failed: pipelines disagree at genus {genus}, n = {n}"
            );
            compared += 1;
        }
    }
    println!(
        "PASS criterion 1: both volume pipelines agree exactly on {compared} cases \
         (genus 0 n<=12, genus 1 n<=8, genus 2 n<=4)"
    );
}

/// Criterion 2: the golden values, each produced by two independent routes.
#[test]
fn a2_golden_values_by_two_routes() {
    let table = TauTable::new();
    let goldens = [
        (0u32, 3u32, rat(1, 1)),
        (0, 4, rat(1, 1)),
        (0, 5, rat(5, 1)),
        (1, 1, rat(1, 24)),
        (1, 2, rat(1, 8)),
        (2, 0, rat(43, 2880)),
    ];
    for (genus, n, expected) in &goldens {
        let direct = wp_volume(&table, *genus, *n);
        let fast = volumes_fast(&table, *genus, *n);
        let via_expansion = fast.value(*genus, *n).expect("expansion route missing");
        assert_eq!(
            &direct, expected,
            "criterion 2 failed: V[{genus},{n}] direct route"
        );
        assert_eq!(
            via_expansion, expected,
            "criterion 2 failed: V[{genus},{n}] expansion route"
        );
    }
    // The genus-2 triple descendant bracket, by the recursion and by the
    // Painleve-I coefficient tower.
    let golden = rat(7, 240);
    assert_eq!(
        table.bracket(2, &[2, 2, 2]),
        golden,
        "criterion 2 failed: genus-2 bracket by recursion"
    );
    assert_eq!(
        tau2_power_from_b(2),
        golden,
        "criterion 2 failed: genus-2 bracket from the coefficient tower"
    );
    println!(
        "PASS criterion 2: all seven golden values reproduced by two independent routes \
         (V[0,3]=1, V[0,4]=1, V[0,5]=5, V[1,1]=1/24, V[1,2]=1/8, V[2,0]=43/2880, \
         <tau_2^3>_2=7/240)"
    );
}

/// Criterion 3: the polynomial substitution identity between the volume
/// generating series and the descendant free energy holds through
/// kappa-weight 6 for genus 0, 1, and 2.
#[test]
fn a3_schur_substitution_identity() {
    let table = TauTable::new();
    let mut monomials = 0usize;
    for genus in 0..=2 {
        let report = verify_schur_substitution(&table, genus, 6)
            .unwrap_or_else(|e| panic!("criterion 3 setup failed at genus {genus}: {e}"));
        assert!(
            report.pass,
            "criterion 3 failed at genus {genus}: {:?}",
            report.discrepancy
        );
        monomials += report.checked_monomials;
    }
    println!(
        "PASS criterion 3: substitution identity verified for genus 0..2 through \
         kappa-weight 6 ({monomials} monomials compared)"
    );
}

/// Criterion 4: the quadratic coefficient recursion reproduces the pure
/// index-2 descendant brackets computed independently by the main recursion.
#[test]
fn a4_painleve_tower_matches_brackets() {
    let table = TauTable::new();
    let expected = [(2u32, rat(7, 240)), (3, rat(1225, 144))];
    for (g, value) in &expected {
        let from_tower = tau2_power_from_b(*g);
        let from_recursion = table.bracket(*g, &vec![2; (3 * g - 3) as usize]);
        assert_eq!(
            &from_tower, value,
            "criterion 4 failed: tower value at genus {g}"
        );
        assert_eq!(
            from_recursion, from_tower,
            "criterion 4 failed: recursion disagrees with tower at genus {g}"
        );
    }
    println!(
        "PASS criterion 4: Painleve-I coefficient tower matches the bracket recursion \
         at genus 2 (7/240) and genus 3 (1225/144)"
    );
}

/// Criterion 5: the kappa generating function equals the substituted
/// log-derivative classes weight by weight, and the graded basis of
/// boundary-free products decomposes the derivative-expansion coefficients
/// with an exact linear solve.
#[test]
fn a5_class_substitution_and_basis_decomposition() {
    let table = TauTable::new();
    for (genus, max_weight) in [(0u32, 4u32), (1, 3)] {
        let report = verify_class_substitution(&table, genus, max_weight)
            .unwrap_or_else(|e| panic!("criterion 5 setup failed at genus {genus}: {e}"));
        assert!(
            report.pass,
            "criterion 5 failed: substitution at genus {genus}: {:?}",
            report.discrepancy
        );
    }
    let mut reading = String::new();
    for (genus, n) in [(1u32, 1u32), (1, 2), (2, 0)] {
        let report = verify_basis_decomposition(&table, genus, n)
            .unwrap_or_else(|e| panic!("criterion 5 setup failed at ({genus},{n}): {e}"));
        assert!(
            report.pass,
            "criterion 5 failed: basis decomposition at ({genus},{n}): {:?}",
            report.discrepancy
        );
        reading = report.reading;
    }
    println!(
        "PASS criterion 5: class substitution (genus 0 weight<=4, genus 1 weight<=3) and \
         basis decomposition at (1,1), (1,2), (2,0); {reading}"
    );
}

/// Criterion 6, genus 0: the tail fit of the normalized coefficient ratio
/// lands within 0.1% of the derived limit constant, and the pointwise
/// deviation from that constant shrinks along the window.
#[test]
fn a6_growth_fit_genus_zero() {
    let consts = constants(25, 2).expect("constants");
    let phi = y300().truncate(298).antiderivative().antiderivative();
    let (rows, fit) =
        asymptotic_diagnostics(0, 3, 300, &phi, &consts).expect("diagnostics");
    let target = consts.b0_derived.to_rational();
    let fitted = fit.b.to_rational();
    assert!(
        rel_close(&fitted, &target, &rat(1, 1000)),
        "criterion 6 failed: genus-0 fit {} vs target {}",
        fit.b.to_decimal(12),
        consts.b0_derived.to_decimal(12)
    );
    let devs = [
        deviation(&rows, 3, 75, &target),
        deviation(&rows, 3, 150, &target),
        deviation(&rows, 3, 300, &target),
    ];
    assert!(
        devs[0] > devs[1] && devs[1] > devs[2],
        "criterion 6 failed: genus-0 deviation not decreasing: {devs:?}"
    );
    println!(
        "PASS criterion 6 (genus 0): fitted limit {} within 1e-3 of {}, deviation \
         decreasing over n = 75, 150, 300",
        fit.b.to_decimal(12),
        consts.b0_derived.to_decimal(12)
    );
}

/// Criterion 6, genus 1: same fit against the exact limit 1/48.
#[test]
fn a6_growth_fit_genus_one() {
    let table = TauTable::new();
    let consts = constants(25, 2).expect("constants");
    assert_eq!(consts.b1, rat(1, 48), "exact genus-1 limit constant");
    let phi = phi_series(&table, 1, 200);
    let (rows, fit) =
        asymptotic_diagnostics(1, 1, 200, &phi, &consts).expect("diagnostics");
    let target = rat(1, 48);
    let fitted = fit.b.to_rational();
    assert!(
        rel_close(&fitted, &target, &rat(1, 1000)),
        "criterion 6 failed: genus-1 fit {} vs target 1/48",
        fit.b.to_decimal(12)
    );
    let devs = [
        deviation(&rows, 1, 50, &target),
        deviation(&rows, 1, 100, &target),
        deviation(&rows, 1, 200, &target),
    ];
    assert!(
        devs[0] > devs[1] && devs[1] > devs[2],
        "criterion 6 failed: genus-1 deviation not decreasing: {devs:?}"
    );
    println!(
        "PASS criterion 6 (genus 1): fitted limit {} within 1e-3 of 1/48, deviation \
         decreasing over n = 50, 100, 200",
        fit.b.to_decimal(12)
    );
}

/// Criterion 6, genus 2: fit against the computed limit constant, with the
/// looser 1% tolerance appropriate to the shorter window.
#[test]
fn a6_growth_fit_genus_two() {
    let table = TauTable::new();
    let consts = constants(25, 2).expect("constants");
    let phi = phi_series(&table, 2, 150);
    let (rows, fit) =
        asymptotic_diagnostics(2, 0, 150, &phi, &consts).expect("diagnostics");
    let target = consts.b_g[&2].to_rational();
    let fitted = fit.b.to_rational();
    assert!(
        rel_close(&fitted, &target, &rat(1, 100)),
        "criterion 6 failed: genus-2 fit {} vs target {}",
        fit.b.to_decimal(12),
        consts.b_g[&2].to_decimal(12)
    );
    let devs = [
        deviation(&rows, 0, 37, &target),
        deviation(&rows, 0, 75, &target),
        deviation(&rows, 0, 150, &target),
    ];
    assert!(
        devs[0] > devs[1] && devs[1] > devs[2],
        "criterion 6 failed: genus-2 deviation not decreasing: {devs:?}"
    );
    println!(
        "PASS criterion 6 (genus 2): fitted limit {} within 1e-2 of {}, deviation \
         decreasing over n = 37, 75, 150",
        fit.b.to_decimal(12),
        consts.b_g[&2].to_decimal(12)
    );
}

/// Criterion 7: the Bessel root is certified by an exact rational bracket of
/// width at most 1e-12, and recomputing every derived constant with ten more
/// digits moves none of them by more than 1e-10 relative.
#[test]
fn a7_certified_constant_stability() {
    let base = constants(25, 3).expect("constants at 25 digits");
    let width_cap = rat(1, 1_000_000_000_000);
    assert!(
        base.j0_bracket_width <= width_cap,
        "criterion 7 failed: bracket width {} exceeds 1e-12",
        base.j0_bracket_width
    );
    assert!(
        base.j0_bracket.0 < base.j0_bracket.1,
        "criterion 7 failed: bracket endpoints out of order"
    );

    let refined = constants(35, 3).expect("constants at 35 digits");
    let cap = rat(1, 10_000_000_000);
    let pairs = [
        ("j0", &base.j0, &refined.j0),
        ("x0", &base.x0, &refined.x0),
        ("a", &base.a, &refined.a),
        ("b_2", &base.b_g[&2], &refined.b_g[&2]),
        ("b_3", &base.b_g[&3], &refined.b_g[&3]),
    ];
    for (name, coarse, fine) in pairs {
        let rel = ((coarse.to_rational() / fine.to_rational()) - Rational::one()).abs();
        assert!(
            rel < cap,
            "criterion 7 failed: {name} moved by relative {} on refinement",
            wpvol_core::asympt::bigfloat::decimal_string(&rel, 3)
        );
    }
    println!(
        "PASS criterion 7: root bracket width {} <= 1e-12 and all derived constants \
         stable to 1e-10 under a 10-digit refinement",
        wpvol_core::asympt::bigfloat::decimal_string(&base.j0_bracket_width, 3)
    );
}

/// Criterion 8: randomized structural battery — series-ring identities on
/// 1000 random cases, the two insertion relations on 240 random stable keys,
/// ordered-versus-multiset agreement of the single-column transform, and
/// positivity of the inverse-series coefficients through order 300.
#[test]
fn a8_randomized_property_battery() {
    // Series-ring identities at order 6.
    let order = 6usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ace5);
    let rand_series = |rng: &mut ChaCha8Rng| {
        UniSeries::from_coeffs(
            (0..=order)
                .map(|_| common::random_rational(rng, 20, 6))
                .collect(),
        )
    };
    let identity = {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[1] = Rational::one();
        UniSeries::from_coeffs(coeffs)
    };
    let mut series_cases = 0u32;
    for i in 0..1000u32 {
        let a = rand_series(&mut rng);
        let b = rand_series(&mut rng);
        let c = rand_series(&mut rng);
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)), "addition associativity");
        assert_eq!(a.mul(&b), b.mul(&a), "multiplication commutativity");
        assert_eq!(
            a.mul(&b.add(&c)),
            a.mul(&b).add(&a.mul(&c)),
            "distributivity"
        );
        if i % 4 == 0 {
            let mut coeffs = a.coeffs().to_vec();
            coeffs[0] = Rational::zero();
            let f = UniSeries::from_coeffs(coeffs);
            let back = f.exp().expect("exp").log().expect("log");
            assert_eq!(back, f, "log undoes exp");
        }
        if i % 10 == 0 {
            let mut coeffs = b.coeffs().to_vec();
            coeffs[0] = Rational::zero();
            coeffs[1] = Rational::one();
            let f = UniSeries::from_coeffs(coeffs);
            let inverse = f.revert().expect("revert");
            assert_eq!(f.compose(&inverse).expect("compose"), identity, "reversion");
        }
        series_cases += 1;
    }

    // Insertion relations on random stable keys (the relation that removes a
    // zero index and the one that removes a unit index).
    let table = TauTable::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xdeca_f00d);
    let mut zero_keys = 0u32;
    while zero_keys < 120 {
        let Some((genus, key)) = common::random_stable_key(&mut rng, 1) else {
            continue;
        };
        let mut with_zero = key.clone();
        with_zero.push(0);
        let lhs = table.bracket(genus, &with_zero);
        let mut rhs = Rational::zero();
        for i in 0..key.len() {
            if key[i] > 0 {
                let mut lowered = key.clone();
                lowered[i] -= 1;
                rhs += table.bracket(genus, &lowered);
            }
        }
        assert_eq!(lhs, rhs, "zero-insertion relation at genus {genus}, {key:?}");
        zero_keys += 1;
    }
    let mut unit_keys = 0u32;
    while unit_keys < 120 {
        let Some((genus, key)) = common::random_stable_key(&mut rng, 0) else {
            continue;
        };
        let mut with_one = key.clone();
        with_one.push(1);
        let lhs = table.bracket(genus, &with_one);
        let factor = rat(2 * genus as i64 - 2 + key.len() as i64, 1);
        let rhs = factor * table.bracket(genus, &key);
        assert_eq!(lhs, rhs, "unit-insertion relation at genus {genus}, {key:?}");
        unit_keys += 1;
    }

    // Ordered-composition enumeration of the single-column transform against
    // the multiset implementation.
    let mut ordered_cases = 0u32;
    for (genus, weights) in [(0u32, 1u32..=8), (1, 1..=8), (2, 3..=6)] {
        for weight in weights {
            let n = weight + 3 - 3 * genus;
            let multiset = kappa_bracket(&table, genus, n, &MultiIndex::new(vec![weight]));
            let ordered = common::ordered_kappa_single(&table, genus, n, weight);
            assert_eq!(
                multiset, ordered,
                "ordered decomposition at genus {genus}, weight {weight}"
            );
            ordered_cases += 1;
        }
    }

    // Positivity of the inverse-series coefficients.
    let y = y300();
    for m in 1..=300usize {
        assert!(
            y.coeff(m) > Rational::zero(),
            "inverse-series coefficient at order {m} is not positive"
        );
    }

    println!(
        "PASS criterion 8: {series_cases} series-ring cases, {} insertion-relation keys, \
         {ordered_cases} ordered-decomposition checks, inverse-series coefficients \
         positive through order 300",
        zero_keys + unit_keys
    );
}
