use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::prove::{prove, rabinowitsch, Verdict};
use crate::geomodel::AlgebraicSystem;
use crate::groebner::{buchberger_extended, reduce_tracked, Budget, GroebnerError, ResourceLimits, TrackedBasis};
use crate::polycore::{MonomialOrder, Polynomial, Ring, VarKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("statement is not proved; refusing to grade it")]
    NotProved,
    #[error("thesis is not a member of the hypothesis ideal")]
    NotMember,
    #[error("resource limit exceeded")]
    Timeout,
}

impl From<GroebnerError> for ReasonerError {
    fn from(_: GroebnerError) -> Self {
        ReasonerError::Timeout
    }
}

/// Which generator set produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradeSource {
    /// `T` reduced to zero against a basis of the hypotheses.
    Hypotheses,
    /// Hypotheses plus `N·w − 1` for the product `N` of the degeneracy conditions.
    Saturated,
    /// Hypotheses plus `T·z − 1`; the witnessed target is `1`.
    Rabinowitsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    /// Index of the basis element.
    pub element: usize,
    pub q_degree: u32,
    pub cofactor_degree: u32,
}

#[derive(Clone, Debug)]
pub struct GradeReport {
    pub grade: u32,
    pub basis_size: usize,
    /// Over all basis elements.
    pub max_cofactor_degree: u32,
    /// Over the quotients of the thesis.
    pub max_multiplier_degree: u32,
    /// Basis elements with a nonzero quotient.
    pub ledger: Vec<LedgerEntry>,
    pub order: MonomialOrder,
    pub source: GradeSource,
    /// The polynomial expressed by the witness (`T`, or `1` on the Rabinowitsch path).
    pub target: Polynomial,
    pub basis: TrackedBasis,
    pub quotients: Vec<Polynomial>,
}

impl GradeReport {
    /// True when an auxiliary variable entered the witness.
    pub fn uses_auxiliary(&self) -> bool {
        self.source != GradeSource::Hypotheses
    }

    /// Expands `Σᵢ qᵢ·(Σⱼ cᵢⱼ·hⱼ)` and compares it with the target.
    pub fn verify_witness(&self) -> bool {
        let ring = &self.basis.ring;
        let mut acc = Polynomial::zero(ring);
        for (i, q) in self.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            acc = &acc + &(q * &self.basis.expand_cofactors(i));
        }
        acc == self.target
    }
}

fn report(
    basis: TrackedBasis,
    target: Polynomial,
    quotients: Vec<Polynomial>,
    source: GradeSource,
) -> GradeReport {
    let ledger: Vec<LedgerEntry> = quotients
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| LedgerEntry {
            element: i,
            q_degree: q.total_degree(),
            cofactor_degree: basis.cofactor_degree(i),
        })
        .collect();
    GradeReport {
        grade: ledger.iter().map(|e| e.q_degree + e.cofactor_degree).max().unwrap_or(0),
        basis_size: basis.len(),
        max_cofactor_degree: (0..basis.len()).map(|i| basis.cofactor_degree(i)).max().unwrap_or(0),
        max_multiplier_degree: ledger.iter().map(|e| e.q_degree).max().unwrap_or(0),
        ledger,
        order: basis.order.clone(),
        source,
        target,
        basis,
        quotients,
    }
}

/// Tracked basis of `gens` and the reduction of `target`; `None` if the remainder is nonzero.
fn try_member(
    gens: &[Polynomial],
    target: &Polynomial,
    ord: &MonomialOrder,
    budget: &Budget,
    source: GradeSource,
) -> Result<Option<GradeReport>, ReasonerError> {
    let basis = buchberger_extended(gens, ord, &budget.as_limits())?;
    let red = reduce_tracked(target, &basis)?;
    if !red.remainder.is_zero() {
        return Ok(None);
    }
    Ok(Some(report(basis, target.clone(), red.quotients, source)))
}

fn fresh_name(ring: &Ring, base: &str) -> String {
    let mut name = base.to_string();
    while ring.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Grade of a proved statement: `maxᵢ (deg qᵢ + maxⱼ deg cᵢⱼ)` over the basis
/// elements used to express the thesis.
pub fn grade(sys: &AlgebraicSystem, ord: &MonomialOrder, limits: &ResourceLimits) -> Result<GradeReport, ReasonerError> {
    let budget = Budget::start(limits);
    let proof = prove(sys, limits);
    match proof.verdict {
        Verdict::Timeout => return Err(ReasonerError::Timeout),
        Verdict::Unproved => return Err(ReasonerError::NotProved),
        _ => {}
    }
    if sys.thesis.is_zero() {
        return Err(ReasonerError::NotMember);
    }
    if !sys.hypotheses.is_empty() {
        if let Some(r) = try_member(&sys.hypotheses, &sys.thesis, ord, &budget, GradeSource::Hypotheses)? {
            return Ok(r);
        }
    }

    if !proof.conditions.is_empty() {
        let name = fresh_name(&sys.ring, "w");
        let ring: Ring = Arc::new(sys.ring.extended([(name.clone(), VarKind::Auxiliary)]).expect("fresh"));
        let lift = |p: &Polynomial| p.embed(&ring).expect("subring");
        let w = Polynomial::var_named(&ring, &name).expect("declared");
        let n = proof
            .conditions
            .iter()
            .fold(Polynomial::one(&ring), |acc, c| &acc * &lift(c));
        let mut gens: Vec<Polynomial> = sys.hypotheses.iter().map(lift).collect();
        gens.push(&(&n * &w) - &Polynomial::one(&ring));
        if let Some(r) = try_member(&gens, &lift(&sys.thesis), ord, &budget, GradeSource::Saturated)? {
            return Ok(r);
        }
    }

    let (ring, gens) = rabinowitsch(sys);
    let one = Polynomial::one(&ring);
    try_member(&gens, &one, ord, &budget, GradeSource::Rabinowitsch)?.ok_or(ReasonerError::NotMember)
}
