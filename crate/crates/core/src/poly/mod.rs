//! Exact sparse multivariate polynomials over ℚ and prime fields.

mod field;
mod monomial;
mod parse;
mod polynomial;
mod ring;

use thiserror::Error;

pub use field::{Field, FieldElem};
pub use monomial::{monomials_of_degree, monomials_up_to_degree, Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use polynomial::Poly;
pub use ring::Ring;

pub(crate) use ring::same_ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("'{0}' is not a valid variable name")]
    BadVariable(String),
    #[error("variable '{0}' declared twice")]
    DuplicateVariable(String),
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
