use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::geomodel::AlgebraicSystem;
use crate::groebner::{groebner_basis, GroebnerError, ResourceLimits};
use crate::polycore::{MonomialOrder, Polynomial, Ring, VarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    True,
    TrueUnderConditions,
    Unproved,
    Timeout,
}

impl Verdict {
    pub fn is_proved(self) -> bool {
        matches!(self, Verdict::True | Verdict::TrueUnderConditions)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "TRUE",
            Verdict::TrueUnderConditions => "TRUE_UNDER_CONDITIONS",
            Verdict::Unproved => "UNPROVED",
            Verdict::Timeout => "TIMEOUT",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct ProofResult {
    pub verdict: Verdict,
    /// Polynomials in free variables; the thesis holds wherever one of them is nonzero.
    pub conditions: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub elapsed: Duration,
    /// False when the condition list was cut short by the budget.
    pub conditions_complete: bool,
}

/// The system's ring extended by the Rabinowitsch variable `z`, with `T·z − 1`.
pub(crate) fn rabinowitsch(sys: &AlgebraicSystem) -> (Ring, Vec<Polynomial>) {
    let mut name = "z".to_string();
    while sys.ring.index_of(&name).is_some() {
        name.push('_');
    }
    let ring: Ring = Arc::new(sys.ring.extended([(name.clone(), VarKind::Auxiliary)]).expect("fresh name"));
    let lift = |p: &Polynomial| p.embed(&ring).expect("subring");
    let z = Polynomial::var_named(&ring, &name).expect("declared");
    let mut gens: Vec<Polynomial> = sys.hypotheses.iter().map(lift).collect();
    gens.push(&(&lift(&sys.thesis) * &z) - &Polynomial::one(&ring));
    (ring, gens)
}

/// Block order with every non-free variable of `ring` in the front block.
pub(crate) fn free_elimination_order(ring: &Ring) -> MonomialOrder {
    let front: Vec<usize> = (0..ring.len()).filter(|&i| ring.kind(i) != VarKind::Free).collect();
    MonomialOrder::elimination(ring.len(), &front)
}

fn free_only(p: &Polynomial, ring: &Ring) -> bool {
    p.variables().iter().all(|&v| ring.kind(v) == VarKind::Free)
}

fn normalize_conditions(conds: Vec<Polynomial>, target: &Ring) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::new();
    for c in conds {
        let c = c.embed(target).expect("free variables").primitive().0;
        if !c.is_constant() && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

enum Decision {
    Unit,
    Conditions(Vec<Polynomial>),
    Unproved,
}

fn decide(sys: &AlgebraicSystem, limits: &ResourceLimits) -> Result<(Decision, MonomialOrder), GroebnerError> {
    let (ring, gens) = rabinowitsch(sys);
    let ord = free_elimination_order(&ring);
    if sys.thesis.is_zero() {
        return Ok((Decision::Unit, ord));
    }
    let basis = groebner_basis(&gens, &ord, limits)?;
    if basis.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Ok((Decision::Unit, ord));
    }
    let conds: Vec<Polynomial> = basis.into_iter().filter(|g| free_only(g, &ring)).collect();
    if conds.is_empty() {
        Ok((Decision::Unproved, ord))
    } else {
        Ok((Decision::Conditions(normalize_conditions(conds, &sys.ring)), ord))
    }
}

/// Decides generic truth of the thesis via the Rabinowitsch trick and elimination
/// of all non-free variables.
pub fn prove(sys: &AlgebraicSystem, limits: &ResourceLimits) -> ProofResult {
    let start = Instant::now();
    let fallback_order = free_elimination_order(&sys.ring);
    let (verdict, conditions, order) = match decide(sys, limits) {
        Ok((Decision::Unit, ord)) => (Verdict::True, vec![], ord),
        Ok((Decision::Conditions(c), ord)) => (Verdict::TrueUnderConditions, c, ord),
        Ok((Decision::Unproved, ord)) => (Verdict::Unproved, vec![], ord),
        Err(_) => (Verdict::Timeout, vec![], fallback_order),
    };
    ProofResult {
        verdict,
        conditions,
        order,
        elapsed: start.elapsed(),
        conditions_complete: verdict != Verdict::Timeout,
    }
}

/// Nonconstant leading coefficients, in the free variables, of the hypothesis
/// basis under an order eliminating the bound variables. Where none of them
/// vanishes the construction is well defined.
pub fn construction_conditions(
    sys: &AlgebraicSystem,
    limits: &ResourceLimits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    if sys.hypotheses.is_empty() {
        return Ok(vec![]);
    }
    let ring = &sys.ring;
    let ord = free_elimination_order(ring);
    let basis = groebner_basis(&sys.hypotheses, &ord, limits)?;
    let mut conds = Vec::new();
    for g in &basis {
        if free_only(g, ring) {
            continue;
        }
        // coefficient of the leading bound-variable monomial, as a polynomial in free variables
        let (lead, _) = g.leading_term(&ord).expect("nonzero");
        let bound_part = |m: &crate::polycore::Monomial| -> Vec<u16> {
            (0..ring.len())
                .map(|i| if ring.kind(i) == VarKind::Free { 0 } else { m.exp(i) })
                .collect()
        };
        let key = bound_part(&lead);
        let coeff = Polynomial::from_terms(
            ring,
            g.terms().iter().filter(|(m, _)| bound_part(m) == key).map(|(m, c)| {
                let exps: Vec<u16> = (0..ring.len())
                    .map(|i| if ring.kind(i) == VarKind::Free { m.exp(i) } else { 0 })
                    .collect();
                (crate::polycore::Monomial::from_exponents(&exps), c.clone())
            }),
        );
        conds.push(coeff);
    }
    Ok(normalize_conditions(conds, ring))
}

/// As [`prove`], and always tries to list degeneracy conditions. When the thesis
/// vanishes on the whole hypothesis variety the conditions describe where the
/// construction itself is well defined.
pub fn prove_details(sys: &AlgebraicSystem, limits: &ResourceLimits) -> ProofResult {
    let start = Instant::now();
    let mut res = prove(sys, limits);
    if res.verdict == Verdict::True {
        let remaining = limits.time.saturating_sub(start.elapsed());
        let sub = ResourceLimits {
            time: remaining,
            ..*limits
        };
        match construction_conditions(sys, &sub) {
            Ok(c) if !c.is_empty() => {
                res.verdict = Verdict::TrueUnderConditions;
                res.conditions = c;
            }
            Ok(_) => {}
            Err(_) => res.conditions_complete = false,
        }
    }
    res.elapsed = start.elapsed();
    res
}
