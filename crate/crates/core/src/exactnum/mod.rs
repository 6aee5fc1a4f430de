//! Exact arithmetic: rationals, cyclotomic fields and dense matrices over them.
//!
//! Every character value, representation matrix entry and series coefficient in
//! this crate is a [`Cyclotomic`]. Elements are stored as residues modulo the
//! cyclotomic polynomial of their order, so equality is a coefficient check.

mod cyclotomic;
mod matrix;
mod poly;
mod root;

pub(crate) use cyclotomic::power_table;
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use matrix::Matrix;
pub use root::RootOfUnity;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid cyclotomic order {0}")]
    InvalidOrder(u64),
    #[error("raw coefficient vector has length {got}, expected {expected}")]
    RawLength { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
