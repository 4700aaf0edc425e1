//! Exact formal-power-series, multivariate-polynomial, and
//! differential-polynomial algebra.
//!
//! Everything here computes over arbitrary-precision rationals; no floating
//! point appears anywhere in this module. Truncated objects carry their own
//! truncation order and binary operations propagate the minimum of the
//! operand orders, so precision loss is always visible in the result type.

pub mod diffpoly;
pub mod multipoly;
pub mod rational;
pub mod uniseries;

pub use diffpoly::DiffPoly;
pub use multipoly::MultiPoly;
pub use rational::Rational;
pub use uniseries::UniSeries;

use thiserror::Error;

/// Errors raised by series and polynomial operations whose preconditions can
/// fail. Each variant names the offending operand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpsError {
    #[error("division requires a divisor with nonzero constant term")]
    DivisorConstantTermZero,
    #[error("log requires an argument with constant term 1")]
    LogConstantTermNotOne,
    #[error("exp requires an argument with constant term 0")]
    ExpConstantTermNonzero,
    #[error("compose requires an inner series with constant term 0")]
    ComposeInnerConstantNonzero,
    #[error("not invertible: series reversion requires f(0) = 0 and f'(0) != 0")]
    NotInvertible,
    #[error("operands use different variable weight assignments")]
    WeightMismatch,
    #[error("substitution image for variable {var} lives in a different ring than the other images")]
    SubstitutionRingMismatch { var: usize },
}
