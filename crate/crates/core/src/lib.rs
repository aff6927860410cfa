//! Exact-arithmetic toolkit for p-ranks and supersingularity of cyclic
//! covers y^m = f(x) of curves over finite fields.
//!
//! Three independent routes are provided and cross-validated:
//! character/Jacobi-sum criteria, Cartier-Manin matrices (m = 2), and a
//! brute-force point-counting zeta oracle. Everything is exact integer or
//! finite-field arithmetic; there is no floating point and no randomness.

pub mod cartier;
pub mod charsum;
pub mod criteria;
pub mod cyclo;
pub mod error;
pub mod exec;
pub mod ff;
pub mod zeta;

pub use error::{Error, Result};
