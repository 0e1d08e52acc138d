//! Gröbner bases with cofactor tracking, tracked normal forms and elimination.
//!
//! Every element `gᵢ` of a [`TrackedBasis`] carries polynomials `cᵢⱼ` with
//! `gᵢ = Σⱼ cᵢⱼ·hⱼ` over the input generators `hⱼ`. Pairs are pruned with the
//! Gebauer–Möller criteria and selected by sugar degree (tracked bases) or by
//! racing the sugar and normal strategies (plain bases).

mod engine;
mod terms;

use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::polycore::{MonomialOrder, Polynomial, Ring};
use engine::{Engine, Strategy};
use terms::Terms;

static TRACE: AtomicBool = AtomicBool::new(false);

/// Enables one stderr line per processed S-pair.
pub fn set_trace(on: bool) {
    TRACE.store(on, AtomicOrdering::Relaxed);
}

pub(crate) fn trace_enabled() -> bool {
    TRACE.load(AtomicOrdering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("resource limit exceeded: {0}")]
    Timeout(String),
    #[error("generators belong to different rings")]
    RingMismatch,
    #[error("empty generator list")]
    EmptyInput,
}

/// Wall-clock and size budget for a kernel computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceLimits {
    pub time: Duration,
    /// Ceiling on the number of terms of any intermediate polynomial.
    pub max_terms: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            time: Duration::from_secs(60),
            max_terms: 500_000,
        }
    }
}

impl ResourceLimits {
    pub fn with_time(secs: f64) -> Self {
        ResourceLimits {
            time: Duration::from_secs_f64(secs),
            ..Default::default()
        }
    }
}

/// A running budget: limits anchored at a start instant.
#[derive(Debug, Clone)]
pub struct Budget {
    deadline: Instant,
    max_terms: usize,
    cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn start(limits: &ResourceLimits) -> Self {
        Budget {
            deadline: Instant::now() + limits.time,
            max_terms: limits.max_terms,
            cancel: None,
        }
    }

    /// Same budget, additionally aborted once `flag` is set.
    pub fn cancellable(limits: &ResourceLimits, flag: Arc<AtomicBool>) -> Self {
        Budget {
            cancel: Some(flag),
            ..Budget::start(limits)
        }
    }

    pub fn check(&self) -> Result<(), GroebnerError> {
        if self.cancel.as_ref().is_some_and(|f| f.load(AtomicOrdering::Relaxed)) {
            Err(GroebnerError::Timeout("cancelled".into()))
        } else if Instant::now() > self.deadline {
            Err(GroebnerError::Timeout("time budget exhausted".into()))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_terms(&self, n: usize) -> Result<(), GroebnerError> {
        if n > self.max_terms {
            Err(GroebnerError::Timeout(format!(
                "intermediate polynomial exceeds {} terms",
                self.max_terms
            )))
        } else {
            Ok(())
        }
    }

    pub fn remaining(&self) -> Duration {
        self.deadline.saturating_duration_since(Instant::now())
    }

    /// The unspent part of this budget as fresh limits.
    pub fn as_limits(&self) -> ResourceLimits {
        ResourceLimits {
            time: self.remaining(),
            max_terms: self.max_terms,
        }
    }
}

/// Gröbner basis whose elements are expressed in the input generators.
#[derive(Debug, Clone)]
pub struct TrackedBasis {
    pub ring: Ring,
    pub order: MonomialOrder,
    pub generators: Vec<Polynomial>,
    /// Reduced, monic, sorted ascending by leading monomial.
    pub elements: Vec<Polynomial>,
    /// `elements[i] = Σⱼ cofactors[i][j]·generators[j]`
    pub cofactors: Vec<Vec<Polynomial>>,
    pub spairs_processed: usize,
}

impl TrackedBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| !g.is_zero() && g.is_constant())
    }

    /// Expands `Σⱼ cᵢⱼ·hⱼ` for element `i`.
    pub fn expand_cofactors(&self, i: usize) -> Polynomial {
        self.cofactors[i]
            .iter()
            .zip(&self.generators)
            .fold(Polynomial::zero(&self.ring), |acc, (c, h)| &acc + &(c * h))
    }

    /// Checks the cofactor identity for every element.
    pub fn verify_cofactors(&self) -> bool {
        (0..self.len()).all(|i| self.expand_cofactors(i) == self.elements[i])
    }

    /// Largest total degree among the cofactors of element `i`.
    pub fn cofactor_degree(&self, i: usize) -> u32 {
        self.cofactors[i]
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn leading_monomials(&self) -> Vec<crate::polycore::Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_term(&self.order).unwrap().0)
            .collect()
    }
}

/// `input = Σᵢ quotients[i]·gᵢ + remainder`.
#[derive(Debug, Clone)]
pub struct TrackedReduction {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

fn check_ring(polys: &[Polynomial], ring: &Ring) -> Result<(), GroebnerError> {
    if polys
        .iter()
        .all(|p| p.ring().names() == ring.names())
    {
        Ok(())
    } else {
        Err(GroebnerError::RingMismatch)
    }
}

/// Normal form of `p` modulo `elements` under `ord`, with the quotient for each element.
pub fn reduce_by(
    p: &Polynomial,
    elements: &[Polynomial],
    ord: &MonomialOrder,
    limits: &ResourceLimits,
) -> Result<TrackedReduction, GroebnerError> {
    let ring = p.ring().clone();
    check_ring(elements, &ring)?;
    let budget = Budget::start(limits);
    let polys = elements.iter().map(|g| terms::from_poly(g, ord)).collect();
    let engine = Engine::with_elements(ord, ring.len(), polys, &budget);
    let red = engine.reduce(terms::from_poly(p, ord), true, true)?;
    let mut quotients = vec![Polynomial::zero(&ring); elements.len()];
    for (k, q) in red.quotients {
        quotients[k] = terms::to_poly(&q, &ring);
    }
    Ok(TrackedReduction {
        quotients,
        remainder: terms::to_poly(&red.remainder, &ring),
    })
}

/// Tracked normal form of `p` modulo a basis.
pub fn reduce_tracked(p: &Polynomial, basis: &TrackedBasis) -> Result<TrackedReduction, GroebnerError> {
    if p.ring().names() != basis.ring.names() {
        return Err(GroebnerError::RingMismatch);
    }
    reduce_by(
        &p.embed(&basis.ring).map_err(|_| GroebnerError::RingMismatch)?,
        &basis.elements,
        &basis.order,
        &ResourceLimits::default(),
    )
}

fn ring_of(generators: &[Polynomial]) -> Result<Ring, GroebnerError> {
    let ring = generators
        .first()
        .ok_or(GroebnerError::EmptyInput)?
        .ring()
        .clone();
    check_ring(generators, &ring)?;
    Ok(ring)
}

/// Reduced Gröbner basis of `⟨generators⟩` with every element's cofactors.
pub fn buchberger_extended(
    generators: &[Polynomial],
    ord: &MonomialOrder,
    limits: &ResourceLimits,
) -> Result<TrackedBasis, GroebnerError> {
    let ring = ring_of(generators)?;
    let budget = Budget::start(limits);
    let engine = Engine::new(ord, ring.len(), generators.len(), true, &budget);
    let gens = generators.iter().map(|g| terms::from_poly(g, ord)).collect();
    let mut spairs = 0;
    let out = engine.run_counting(gens, &mut spairs)?;
    let cofactors = out
        .cofactors
        .expect("tracking enabled")
        .into_iter()
        .map(|row| row.iter().map(|c| terms::to_poly(c, &ring)).collect())
        .collect();
    Ok(TrackedBasis {
        ring: ring.clone(),
        order: ord.clone(),
        generators: generators.to_vec(),
        elements: out.elements.iter().map(|g| terms::to_poly(g, &ring)).collect(),
        cofactors,
        spairs_processed: spairs,
    })
}

/// Reduced Gröbner basis without cofactors.
///
/// Two pair-selection strategies run side by side and the first to finish wins.
/// The reduced basis is unique, so the result does not depend on which one that is.
pub fn groebner_basis(
    generators: &[Polynomial],
    ord: &MonomialOrder,
    limits: &ResourceLimits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let ring = ring_of(generators)?;
    let done = Arc::new(AtomicBool::new(false));
    let run = |strategy: Strategy| -> Result<Vec<Terms>, GroebnerError> {
        let budget = Budget::cancellable(limits, done.clone());
        let engine = Engine::new(ord, ring.len(), generators.len(), false, &budget).with_strategy(strategy);
        let gens = generators.iter().map(|g| terms::from_poly(g, ord)).collect();
        let mut n = 0;
        let out = engine.run_counting(gens, &mut n)?;
        done.store(true, AtomicOrdering::Relaxed);
        Ok(out.elements)
    };
    let (a, b) = std::thread::scope(|s| {
        let other = s.spawn(|| run(Strategy::Normal));
        let mine = run(Strategy::Sugar);
        (mine, other.join().expect("worker panicked"))
    });
    let elements = a.or(b)?;
    Ok(elements.iter().map(|g| terms::to_poly(g, &ring)).collect())
}

/// Generators of `⟨generators⟩ ∩ Q[remaining variables]`, via a block order
/// with `drop` in the front block.
pub fn eliminate(
    generators: &[Polynomial],
    drop: &[usize],
    limits: &ResourceLimits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let ring = ring_of(generators)?;
    let ord = MonomialOrder::elimination(ring.len(), drop);
    let basis = groebner_basis(generators, &ord, limits)?;
    Ok(basis
        .into_iter()
        .filter(|g| !g.is_zero() && drop.iter().all(|&v| g.degree_in(v) == 0))
        .collect())
}

/// S-polynomial of `f` and `g` under `ord`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &MonomialOrder) -> Polynomial {
    let (mf, cf) = f.leading_term(ord).expect("nonzero");
    let (mg, cg) = g.leading_term(ord).expect("nonzero");
    let l = mf.lcm(&mg);
    let tf = mf.quotient_of(&l).unwrap();
    let tg = mg.quotient_of(&l).unwrap();
    &f.mul_term(&tf, &cf.recip()) - &g.mul_term(&tg, &cg.recip())
}
