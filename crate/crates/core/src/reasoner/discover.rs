use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::prove::{prove, ProofResult, Verdict};
use crate::geomodel::{algebraize, predicate_value, random_instance, Construction, GeoError, Instance, Pinning, Predicate};
use crate::groebner::ResourceLimits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stage {
    NumericCandidate,
    Proved,
}

#[derive(Clone, Debug)]
pub struct Finding {
    pub predicate: Predicate,
    pub stage: Stage,
    pub proof: Option<ProofResult>,
    /// Index of the step after which the predicate becomes statable.
    pub step: usize,
}

#[derive(Clone, Debug)]
pub struct Discovery {
    pub findings: Vec<Finding>,
    /// Candidates generated (after the cap).
    pub candidates: usize,
    /// Set when the cap or the time budget cut the search short.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct DiscoverOptions {
    pub seed: u64,
    pub samples: usize,
    pub max_candidates: usize,
}

impl Default for DiscoverOptions {
    fn default() -> Self {
        DiscoverOptions {
            seed: 1,
            samples: 3,
            max_candidates: 2000,
        }
    }
}

fn choose<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All nontrivial candidate predicates over the points of `c`, canonical and sorted.
pub fn candidates(c: &Construction) -> Vec<(usize, Predicate)> {
    let points: Vec<String> = c.points().into_iter().map(String::from).collect();
    let mut out: Vec<Predicate> = Vec::new();
    let pairs: Vec<[String; 2]> = choose(&points, 2)
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone()])
        .collect();
    for p in choose(&pairs, 2) {
        let (a, b) = (p[0].clone(), p[1].clone());
        out.push(Predicate::EqualLength(a.clone(), b.clone()));
        out.push(Predicate::Perpendicular(a.clone(), b.clone()));
        out.push(Predicate::Parallel(a, b));
    }
    for t in choose(&points, 3) {
        out.push(Predicate::Collinear(t.try_into().unwrap()));
    }
    for q in choose(&points, 4) {
        out.push(Predicate::Concyclic(q.try_into().unwrap()));
    }
    let mut keyed: Vec<(usize, String, Predicate)> = out
        .into_iter()
        .filter(|p| !p.is_trivial())
        .map(|p| {
            let p = p.canonical(c);
            let step = p.points().iter().filter_map(|n| c.position(n)).max().unwrap_or(0);
            (step, p.to_string(), p)
        })
        .collect();
    keyed.sort();
    keyed.dedup_by(|a, b| a.2 == b.2);
    keyed.into_iter().map(|(s, _, p)| (s, p)).collect()
}

fn holds_everywhere(pred: &Predicate, instances: &[Instance]) -> Result<bool, GeoError> {
    for inst in instances {
        if !predicate_value(pred, inst)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerates candidate relations, keeps those holding exactly at seeded random
/// instances, and confirms the survivors symbolically. Proofs treat every second
/// line-circle intersection as distinct from its known point.
pub fn discover(
    c: &Construction,
    pinning: &Pinning,
    limits: &ResourceLimits,
    opts: &DiscoverOptions,
) -> Result<Discovery, GeoError> {
    let start = Instant::now();
    let mut all = candidates(c);
    let mut truncated = all.len() > opts.max_candidates;
    all.truncate(opts.max_candidates);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let instances: Vec<Instance> = (0..opts.samples)
        .map(|_| random_instance(c, pinning, &mut rng, 50))
        .collect::<Result<_, _>>()?;

    let mut survivors = Vec::new();
    for (step, pred) in &all {
        if holds_everywhere(pred, &instances)? {
            survivors.push((*step, pred.clone()));
        }
    }

    let results: Mutex<Vec<Option<ProofResult>>> = Mutex::new(vec![None; survivors.len()]);
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
    let deadline = start + limits.time;
    // random instances never sit on a known-point branch, so neither do the proofs
    let strict = c.with_distinct_intersections();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= survivors.len() {
                    break;
                }
                let remaining = deadline.saturating_duration_since(Instant::now());
                if remaining == Duration::ZERO {
                    break;
                }
                let sub = ResourceLimits {
                    time: remaining,
                    ..*limits
                };
                let proof = algebraize(&strict, &survivors[k].1, pinning).map(|sys| prove(&sys, &sub)).ok();
                results.lock().unwrap()[k] = proof;
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut findings = Vec::with_capacity(survivors.len());
    for ((step, pred), proof) in survivors.into_iter().zip(results) {
        if proof.as_ref().is_none_or(|p| p.verdict == Verdict::Timeout) {
            truncated = true;
        }
        let stage = match &proof {
            Some(p) if p.verdict.is_proved() => Stage::Proved,
            _ => Stage::NumericCandidate,
        };
        findings.push(Finding {
            predicate: pred,
            stage,
            proof,
            step,
        });
    }
    Ok(Discovery {
        candidates: all.len(),
        findings,
        truncated,
    })
}
