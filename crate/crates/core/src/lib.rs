//! Exact intersection numbers on moduli spaces of stable curves, higher
//! Weil-Petersson volumes, and the numerical asymptotics of the classical
//! volumes.
//!
//! The library keeps two fully independent computational pipelines:
//!
//! - [`kappa`] evaluates kappa-class intersection numbers by expanding them
//!   over vector partitions into pure descendant (psi-class) brackets, which
//!   [`tau`] computes with a memoized Virasoro-type recursion.
//! - [`genexp`] inverts a Bessel-type series to obtain the genus-zero volume
//!   generating function and climbs to higher genus through the genus
//!   expansion in derivatives of the genus-zero free energy.
//!
//! The two pipelines must agree exactly (as arbitrary-precision rationals) on
//! every volume both can reach; that cross-check is the backbone of the test
//! suite. [`asympt`] converts exact volumes to certified high-precision
//! numerics and fits the leading asymptotic constants.

pub mod asympt;
pub mod fps;
pub mod genexp;
pub mod kappa;
pub mod tau;

pub use fps::rational::Rational;
