//! Certified numerics: the Bessel-zero constants governing the growth of
//! the volume coefficients, and diagnostic tables comparing exact volumes
//! with their predicted asymptotic law.
//!
//! Division of labor: all combinatorics stays exact (rational) in the other
//! modules; this module alone converts to high-precision floats, and it does
//! so only at the last step of each computation.

pub mod bessel;
pub mod bigfloat;
pub mod constants;
pub mod diagnostics;

pub use bessel::{bessel_eval, bessel_rational, certified_sign, solve_j0, x_series_at, BesselKind, J0Zero};
pub use bigfloat::{bits_for_digits, BigFloat};
pub use constants::{constants, gamma_half, Constants};
pub use diagnostics::{asymptotic_diagnostics, AsymptoticFit, AsymptoticRow};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptError {
    /// The requested error bound is finer than the working precision can
    /// certify; raise the working precision instead.
    #[error("requested tolerance {requested} is below the resolution of {bits}-bit arithmetic")]
    PrecisionUnattainable { requested: String, bits: u32 },
    /// The argument is outside the range for which the series truncation
    /// bound is proved.
    #[error("series evaluation only certified for |z| <= {max_abs}, got {got}")]
    ArgumentOutOfRange { max_abs: i64, got: String },
    /// A sign-change bracket could not be certified.
    #[error("failed to certify a sign-change bracket of width {width}")]
    BracketFailure { width: String },
    /// Too few sample points for the requested fit.
    #[error("fit window [{n_min}, {n_max}] has fewer than {needed} points")]
    FitWindowTooSmall { n_min: u32, n_max: u32, needed: u32 },
}
