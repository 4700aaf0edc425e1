//! Numerical check of the coefficient growth law.  For a genus-g potential
//! series φ_g(x) = Σ v_n xⁿ the coefficients obey
//!
//! ```text
//! v_n ~ B_g · n^{(5g−7)/2} · x₀^{−n} · (1 + O(n^{−1/2})),
//! ```
//!
//! so the normalized ratio  r(n) = v_n · x₀ⁿ · (n+1)^{−(5g−7)/2}  tends to
//! B_g.  Near its dominant singularity the potential expands in powers of
//! (x₀−x)^{1/2}, so the corrections to r(n) form a series in the half-power
//! variable s = (n+1)^{−1/2} — not in 1/(n+1); a fit in the wrong variable
//! stalls at ~1% accuracy.  This module tabulates r(n) over a window, fits a
//! low-degree polynomial in s by least squares on the top of the window, and
//! returns the extrapolated constant, the subleading coefficient and the
//! root-mean-square residual of the fit.

use super::bigfloat::BigFloat;
use super::constants::Constants;
use super::AsymptError;
use crate::fps::rational::Rational;
use crate::fps::uniseries::UniSeries;

#[derive(Debug, Clone)]
pub struct AsymptoticRow {
    pub n: u32,
    /// Exact series coefficient v_n (a volume divided by n!(n+3g−3)!).
    pub lhs: Rational,
    /// v_n · x₀ⁿ · (n+1)^{−(5g−7)/2}, the quantity converging to B_g.
    pub ratio: BigFloat,
}

#[derive(Debug, Clone)]
pub struct AsymptoticFit {
    /// Extrapolated limit of the ratio (estimate of B_g).
    pub b: BigFloat,
    /// Subleading half-power coefficient in r(n) ≈ b(1 + c/√(n+1) + …).
    pub c: BigFloat,
    /// Root-mean-square residual of the fit over the fit window.
    pub residual: BigFloat,
    pub fit_n_min: u32,
    pub fit_n_max: u32,
}

/// (n+1)^(k/2) for k ≥ 0.
fn half_pow_u(n: u32, k: u32, prec: u32) -> BigFloat {
    let base = BigFloat::from_u64(n as u64 + 1, prec);
    let whole = base.powi((k / 2) as i64);
    if k % 2 == 1 {
        whole.mul(&base.sqrt())
    } else {
        whole
    }
}

/// Tabulate normalized ratios of the coefficients of `phi` over
/// `n_min..=n_max` and fit the limit.  The fit uses the top of the window
/// (at most the last 51 points).  The series must extend to `n_max`.
pub fn asymptotic_diagnostics(
    genus: u32,
    n_min: u32,
    n_max: u32,
    phi: &UniSeries,
    constants: &Constants,
) -> Result<(Vec<AsymptoticRow>, AsymptoticFit), AsymptError> {
    if n_max < n_min + 10 {
        return Err(AsymptError::FitWindowTooSmall {
            n_min,
            n_max,
            needed: 10,
        });
    }
    assert!(
        phi.order() >= n_max as usize,
        "series order {} is below the requested window end {}",
        phi.order(),
        n_max
    );

    let prec = constants.prec_bits;
    let x0 = &constants.x0;
    // 5g−7 may be negative; split the sign so only nonnegative half-powers
    // are ever formed.
    let exponent: i64 = 5 * genus as i64 - 7;

    let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
    let mut x0_pow = x0.powi(n_min as i64);
    for n in n_min..=n_max {
        let v = phi.coeff(n as usize);
        let base = BigFloat::from_rational(&v, prec).mul(&x0_pow);
        let ratio = if exponent >= 0 {
            base.div(&half_pow_u(n, exponent as u32, prec))
        } else {
            base.mul(&half_pow_u(n, (-exponent) as u32, prec))
        };
        rows.push(AsymptoticRow { n, lhs: v, ratio });
        x0_pow = x0_pow.mul(x0);
    }

    // Least squares for a degree-4 polynomial in s = 1/√(n+1), rescaled to
    // z = s/s_max so the normal equations stay well conditioned; the limit is
    // the constant term and c is the s-linear coefficient relative to it.
    let fit_n_min = n_max.saturating_sub(50).max(n_min);
    let fit_rows: Vec<&AsymptoticRow> =
        rows.iter().filter(|r| r.n >= fit_n_min).collect();
    let m = fit_rows.len();
    let degree = 4usize.min(m - 1);
    let ss: Vec<BigFloat> = fit_rows
        .iter()
        .map(|r| BigFloat::from_u64(r.n as u64 + 1, prec).sqrt().recip())
        .collect();
    // Rows ascend in n, so the first s is the largest.
    let s_max = ss[0].clone();
    let zs: Vec<BigFloat> = ss.iter().map(|s| s.div(&s_max)).collect();

    let zero = BigFloat::zero(prec);
    let mut moments = vec![zero.clone(); 2 * degree + 1];
    let mut loads = vec![zero.clone(); degree + 1];
    for (r, z) in fit_rows.iter().zip(&zs) {
        let mut zk = BigFloat::from_u64(1, prec);
        for (k, moment) in moments.iter_mut().enumerate() {
            *moment = moment.add(&zk);
            if k <= degree {
                loads[k] = loads[k].add(&r.ratio.mul(&zk));
            }
            zk = zk.mul(z);
        }
    }
    let mut matrix: Vec<Vec<BigFloat>> = (0..=degree)
        .map(|i| (0..=degree).map(|j| moments[i + j].clone()).collect())
        .collect();
    let mut rhs = loads;
    // Gaussian elimination; the normal matrix is symmetric positive definite,
    // so no pivoting is needed.
    for col in 0..=degree {
        let inv = matrix[col][col].recip();
        for row in col + 1..=degree {
            let factor = matrix[row][col].mul(&inv);
            for k in col..=degree {
                let delta = factor.mul(&matrix[col][k]);
                matrix[row][k] = matrix[row][k].sub(&delta);
            }
            let delta = factor.mul(&rhs[col]);
            rhs[row] = rhs[row].sub(&delta);
        }
    }
    let mut coeffs = vec![zero.clone(); degree + 1];
    for row in (0..=degree).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..=degree {
            acc = acc.sub(&matrix[row][k].mul(&coeffs[k]));
        }
        coeffs[row] = acc.div(&matrix[row][row]);
    }
    let b = coeffs[0].clone();
    let c = coeffs[1].div(&s_max).div(&b);

    let mut sq = zero;
    for (r, z) in fit_rows.iter().zip(&zs) {
        let mut fitval = coeffs[degree].clone();
        for k in (0..degree).rev() {
            fitval = fitval.mul(z).add(&coeffs[k]);
        }
        let resid = r.ratio.sub(&fitval);
        sq = sq.add(&resid.mul(&resid));
    }
    let residual = sq.div(&BigFloat::from_u64(m as u64, prec)).sqrt();

    Ok((
        rows,
        AsymptoticFit {
            b,
            c,
            residual,
            fit_n_min,
            fit_n_max: n_max,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asympt::constants::constants;
    use crate::fps::rational::rat;
    use num_traits::Signed;

    /// Feed the fitter a series whose normalized ratios lie exactly in the
    /// fitted polynomial space (5/(n+1) is the square of the half-power
    /// variable); the fit must recover the limit exactly and report no
    /// s-linear component.
    #[test]
    fn fit_recovers_polynomial_decay_model() {
        let c = constants(20, 2).unwrap();
        let x0r = c.x0.to_rational();
        let mut coeffs = Vec::new();
        let mut x0_pow_neg = rat(1, 1);
        for n in 0..=80u32 {
            // ratio target r(n) = 3 + 5/(n+1); for genus 1 the ratio is
            // v_n·x₀ⁿ·(n+1), so set v_n = r(n)/(x₀ⁿ(n+1)).
            let r = rat(3, 1) + rat(5, 1) / rat(n as i64 + 1, 1);
            coeffs.push(r * &x0_pow_neg / rat(n as i64 + 1, 1));
            x0_pow_neg = x0_pow_neg / &x0r;
        }
        let phi = UniSeries::from_coeffs(coeffs);
        let (rows, fit) = asymptotic_diagnostics(1, 0, 80, &phi, &c).unwrap();
        assert_eq!(rows.len(), 81);
        // r(n) should match the model exactly up to float rounding.
        let r10 = rows[10].ratio.to_rational();
        let target = rat(3, 1) + rat(5, 11);
        assert!((r10 - target).abs() < rat(1, 1_000_000_000));
        // The fit must recover b = 3 with a vanishing half-power term.
        assert!((fit.b.to_rational() - rat(3, 1)).abs() < rat(1, 1_000_000));
        assert!(fit.c.to_rational().abs() < rat(1, 1_000_000));
        assert!(fit.residual.to_rational() < rat(1, 1_000_000));
    }

    #[test]
    fn window_must_span_ten_points() {
        let c = constants(15, 2).unwrap();
        let phi = UniSeries::from_coeffs(vec![rat(1, 1); 30]);
        let err = asymptotic_diagnostics(1, 5, 12, &phi, &c).unwrap_err();
        assert!(matches!(err, AsymptError::FitWindowTooSmall { .. }));
    }
}
