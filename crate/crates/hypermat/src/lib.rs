//! Matrix-argument special functions and Euler-type integral identities.
//!
//! The library computes with dense square complex matrices throughout:
//! gamma, reciprocal gamma, beta and Pochhammer matrix functions, the
//! generalized hypergeometric matrix series pFq, Gauss-Jacobi quadrature
//! of Euler-type integrals with matrix-power kernels, and a verification
//! suite that evaluates both sides of each supported identity through
//! independent numerical routes and reports residuals.

pub mod error;
pub mod euler;
pub mod hyper;
pub mod matrix;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{rel_diff, CMatrix};
pub use num_complex::Complex64;
