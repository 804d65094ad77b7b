//! Weighted solid Cauchy transform on weighted poly-Bergman spaces of the unit disc.
//!
//! Closed forms are evaluated alongside Gauss–Jacobi quadrature so every
//! identity can be checked numerically. Runnable examples:
//!
//! ```bash
//! cargo run --release --example <name>
//! ```
//!
//! `eval_disc_poly`, `transform_compare`, `chu_vandermonde_exact`,
//! `range_dimensions`, `boundedness_report`, `exterior_norms`, `quadrature_rules`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy;
pub mod cli;
pub mod discpoly;
pub mod error;
pub mod quad;
pub mod range;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};
