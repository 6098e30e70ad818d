//! Exact computation with inner isotopes `(K^n, •_σ)` of the split
//! commutative associative algebra `K^n` over admissible prime fields.
//!
//! The product of the isotope attached to a permutation `σ` is
//! `x •_σ y = ψ_σ(x • y)`, where `•` is the coordinate-wise product and
//! `ψ_σ(x)_i = x_{σ(i)}`.

// index loops mirror the matrix formulas
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod autgroup;
pub mod category;
pub mod error;
pub mod field;
pub mod fpoly;
pub mod idem;
pub mod intpoly;
pub mod linalg;
pub mod perm;
pub mod report;
pub mod spectral;

pub use algebra::{Algebra, Provenance};
pub use error::{Error, Result};
pub use field::{FieldElem, PrimeField};
pub use fpoly::FpPoly;
pub use linalg::{LinearMap, Vector};
pub use perm::Permutation;
