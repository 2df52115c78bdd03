//! Principally specialized characters of standard modules for `C_l^(1)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`qseries`] truncated integer power series and products of `(1-q^j)` factors,
//!   with a small text grammar for congruence products;
//! * [`affine`] root data of the four affine types used here and the graded
//!   dimensions of their negative parts under a specialization;
//! * [`array`] the two-dimensional arrays of root vectors and their labels;
//! * [`formulas`] congruence sets, character ratios, explicit products and the
//!   Weyl–Kac oracle;
//! * [`partitions`] colored partitions with the downward-path admissibility rule.

pub mod affine;
pub mod array;
pub mod formulas;
pub mod partitions;
pub mod qseries;

pub use affine::{AffineType, RootCoord, Spec};
pub use array::SpecArray;
pub use formulas::{CharFamily, HighestWeight};
pub use qseries::{ProductExpr, Series};
