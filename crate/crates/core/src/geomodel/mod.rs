//! Constructions, their algebraization into polynomial hypotheses and theses,
//! and exact rational instantiation.

mod algebraize;
mod construction;
mod numeric;
mod predicate;

pub use algebraize::{
    algebraize, algebraize_construction, collinear_poly, concyclic_poly, predicate_value,
    AlgebraicSystem, Pinning,
};
pub(crate) use algebraize::{x_var, y_var};
pub use construction::{Construction, ObjectKind, Step};
pub use numeric::{
    eval_numeric, eval_with_choices, random_choices, random_instance, random_rational, Choice,
    Instance,
};
pub use predicate::Predicate;

use thiserror::Error;

use crate::polycore::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("unknown identifier {0}")]
    DanglingReference(String),
    #[error("{0} is already defined")]
    DuplicateName(String),
    #[error("{name} is not a {expected}")]
    WrongKind { name: String, expected: String },
    #[error("{0} is not a free point and cannot be pinned")]
    PinNonFree(String),
    #[error("pinned point {0} does not satisfy its defining constraint")]
    PinNotOnObject(String),
    #[error("step {0} yields an inconsistent hypothesis")]
    Inconsistent(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("no placement given for {0}")]
    MissingChoice(String),
    #[error("invalid placement: {0}")]
    BadChoice(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[cfg(test)]
mod tests;
