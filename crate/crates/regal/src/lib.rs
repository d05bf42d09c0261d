//! Exact-arithmetic workbench for N-homogeneous algebras.

pub mod error;
pub mod exactlin;
pub mod tensor;

pub use error::{Error, Result};
