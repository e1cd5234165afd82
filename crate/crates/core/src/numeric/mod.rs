//! Overflow-safe arithmetic and special functions.

pub mod erfc;
pub mod gamma;
pub mod quadrature;
pub mod scaled;

pub use erfc::{erf, erfc, erfc_derivative, erfc_zeros};
pub use gamma::{gamma, gamma_derivative, log_gamma, reciprocal_gamma, scaled_reciprocal_gamma};
pub use quadrature::{
    gauss_jacobi_nodes, integrate_adaptive, integrate_adaptive_complex, integrate_tanh_sinh, integrate_with,
    QuadratureResult,
};
pub use scaled::ScaledComplex;
