//! Proving, grading and discovery of statements about constructions.

mod discover;
mod grade;
mod prove;

pub use discover::{candidates, discover, DiscoverOptions, Discovery, Finding, Stage};
pub use grade::{grade, GradeReport, GradeSource, LedgerEntry, ReasonerError};
pub use prove::{construction_conditions, prove, prove_details, ProofResult, Verdict};

#[cfg(test)]
mod tests;
