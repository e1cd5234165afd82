//! Zeros of scaled Maclaurin partial sums.
//!
//! For an entire function `f` of order `λ` with a direction of maximal
//! exponential growth, the zeros of `p_{n-1}(r_n z)` with `r_n = (n/λ)^{1/λ}`
//! accumulate on the curve `|z^λ exp(1 - z^λ)| = 1, |z| <= 1`. This crate
//! computes those zeros, predicts their positions from the arc and corner
//! scaling limits, and checks prediction against computation.
//!
//! Modules, bottom up:
//! - [`numeric`]: scaled complex arithmetic, `Γ`, `erfc`, quadrature.
//! - [`series`]: function families, coefficients and scaled partial sums.
//! - [`rootfind`]: Aberth–Ehrlich iteration.
//! - [`curve`]: the limit curve and the functions `φ`, `τ`.
//! - [`predict`]: predicted zeros from the scaling limits.
//! - [`laplace`]: asymptotic series for Laplace-type integrals.
//! - [`harness`]: matching, rate fits, named checks, reports.

pub mod curve;
pub mod error;
pub mod harness;
pub mod laplace;
pub mod numeric;
pub mod predict;
pub mod rootfind;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numeric::{QuadratureResult, ScaledComplex};
pub use rootfind::{all_roots, RootSet};
