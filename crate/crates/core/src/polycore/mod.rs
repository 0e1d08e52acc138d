//! Exact rational numbers and sparse multivariate polynomials.

mod monomial;
mod order;
mod parse;
mod poly;
mod rational;
mod ring;

pub use monomial::{Exponent, Monomial};
pub use order::{BaseOrder, MonomialOrder};
pub use poly::{leading_term, poly_add, poly_eval, poly_mul, Polynomial};
pub use rational::{
    denominator_lcm, format_rational, from_f64_coarse, int, numerator_gcd, rat, round,
    sqrt_exact, to_f64, Rational,
};
pub use ring::{Ring, VarKind, VariableTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}
