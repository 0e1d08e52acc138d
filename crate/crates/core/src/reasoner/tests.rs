use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cli::{parse_script, Command};
use crate::geomodel::{algebraize, random_instance, AlgebraicSystem, Pinning, Predicate};
use crate::groebner::ResourceLimits;
use crate::polycore::{MonomialOrder, Polynomial, Ring, VarKind, VariableTable};

fn limits() -> ResourceLimits {
    ResourceLimits::with_time(60.0)
}

fn xy_system(hyps: &[&str], thesis: &str) -> AlgebraicSystem {
    let ring: Ring = Arc::new(VariableTable::new([("x", VarKind::Free), ("y", VarKind::Dependent)]).unwrap());
    let p = |s: &str| Polynomial::parse(s, &ring).unwrap();
    AlgebraicSystem {
        hypotheses: hyps.iter().map(|h| p(h)).collect(),
        origins: hyps.iter().map(|_| "h".to_string()).collect(),
        thesis: p(thesis),
        coords: vec![],
        ring,
    }
}

fn fixture(name: &str) -> (crate::cli::Script, Predicate) {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let script = parse_script(&std::fs::read_to_string(path).unwrap()).unwrap();
    let pred = script
        .commands
        .iter()
        .find_map(|c| match c {
            Command::Prove(p) | Command::Grade(p) | Command::ProveDetails(p) => Some(p.clone()),
            Command::Locus { pred, .. } => Some(pred.clone()),
            Command::Discover => None,
        })
        .unwrap();
    (script, pred)
}

fn fixture_system(name: &str) -> AlgebraicSystem {
    let (s, pred) = fixture(name);
    algebraize(&s.construction, &pred, &s.pins).unwrap()
}

#[test]
fn thesis_equal_to_hypothesis_is_true() {
    let sys = xy_system(&["y - x^2"], "y - x^2");
    assert_eq!(prove(&sys, &limits()).verdict, Verdict::True);
    let d = prove_details(&sys, &limits());
    assert_eq!(d.verdict, Verdict::True);
    assert!(d.conditions.is_empty());
    let g = grade(&sys, &MonomialOrder::Grevlex, &limits()).unwrap();
    assert_eq!(g.grade, 0);
    assert_eq!(g.source, GradeSource::Hypotheses);
    assert!(g.verify_witness());
}

#[test]
fn details_report_construction_conditions() {
    let sys = xy_system(&["x*y - 1"], "x*(x*y) - x");
    assert_eq!(prove(&sys, &limits()).verdict, Verdict::True);
    let d = prove_details(&sys, &limits());
    assert_eq!(d.verdict, Verdict::TrueUnderConditions);
    assert_eq!(d.conditions.len(), 1);
    let c = &d.conditions[0];
    assert!(!c.is_constant());
    assert!(c.variables().iter().all(|&v| sys.ring.kind(v) == VarKind::Free));
    assert_eq!(c.to_string(), "x");
}

#[test]
fn false_statement_is_unproved_and_not_graded() {
    let sys = xy_system(&["y - x^2"], "y - x");
    assert_eq!(prove(&sys, &limits()).verdict, Verdict::Unproved);
    assert_eq!(
        grade(&sys, &MonomialOrder::Grevlex, &limits()).unwrap_err(),
        ReasonerError::NotProved
    );
}

#[test]
fn conditional_statement_lists_free_conditions() {
    // y·x = x² forces y = x only where x ≠ 0
    let sys = xy_system(&["x*y - x^2"], "y - x");
    let r = prove(&sys, &limits());
    assert_eq!(r.verdict, Verdict::TrueUnderConditions);
    assert_eq!(r.conditions.len(), 1);
    assert_eq!(r.conditions[0].to_string(), "x");
    let g = grade(&sys, &MonomialOrder::Grevlex, &limits()).unwrap();
    assert_eq!(g.source, GradeSource::Saturated);
    assert!(g.verify_witness());
}

#[test]
fn timeout_is_reported() {
    let sys = fixture_system("rhombus.geo");
    let zero = ResourceLimits {
        time: std::time::Duration::ZERO,
        ..Default::default()
    };
    assert_eq!(prove(&sys, &zero).verdict, Verdict::Timeout);
}

#[test]
fn rhombus_theorem() {
    let sys = fixture_system("rhombus.geo");
    let r = prove(&sys, &limits());
    assert!(r.verdict.is_proved(), "{:?}", r.verdict);
    let again = prove(&sys, &limits());
    assert_eq!(r.verdict, again.verdict);
    assert_eq!(r.conditions, again.conditions);
}

#[test]
fn rhombus_vertices_are_not_concyclic() {
    let (s, _) = fixture("rhombus.geo");
    let pred = Predicate::Concyclic(["A", "B", "C", "D"].map(String::from));
    let sys = algebraize(&s.construction, &pred, &s.pins).unwrap();
    assert_eq!(prove(&sys, &limits()).verdict, Verdict::Unproved);
}

#[test]
fn kite_theorem() {
    let sys = fixture_system("kite.geo");
    assert!(prove(&sys, &limits()).verdict.is_proved());
}

#[test]
fn classical_grades() {
    let py = grade(&fixture_system("pythagoras.geo"), &MonomialOrder::Grevlex, &limits()).unwrap();
    assert!(py.verify_witness());
    assert!((1..=2).contains(&py.grade), "{}", py.grade);
    let np = grade(&fixture_system("ninepoint_partial.geo"), &MonomialOrder::Grevlex, &limits()).unwrap();
    assert!(np.verify_witness());
    assert!(py.grade <= np.grade);
    for e in &np.ledger {
        assert!(e.q_degree + e.cofactor_degree <= np.grade);
    }
}

#[test]
fn rhombus_discovery() {
    let (s, _) = fixture("rhombus.geo");
    let d = discover(&s.construction, &s.pins, &limits(), &DiscoverOptions::default()).unwrap();
    let proved: Vec<String> = d
        .findings
        .iter()
        .filter(|f| f.stage == Stage::Proved)
        .map(|f| f.predicate.to_string())
        .collect();
    for want in ["AreConcyclic(A,B,C,E)", "EqualLength(AS,BS)", "EqualLength(AS,DS)", "EqualLength(AB,AD)"] {
        assert!(proved.iter().any(|p| p == want), "missing {want}");
    }
    for f in &d.findings {
        if f.stage == Stage::Proved {
            assert!(f.proof.as_ref().unwrap().verdict.is_proved());
        }
    }
    let keys: Vec<(usize, String)> = d.findings.iter().map(|f| (f.step, f.predicate.to_string())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn candidates_are_nontrivial_and_unique() {
    let (s, _) = fixture("rhombus.geo");
    let c = candidates(&s.construction);
    assert!(c.iter().all(|(_, p)| !p.is_trivial()));
    let mut names: Vec<String> = c.iter().map(|(_, p)| p.to_string()).collect();
    let n = names.len();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), n);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conditional_truth_is_sound(seed in any::<u64>()) {
        let (s, pred) = fixture("rhombus.geo");
        let sys = algebraize(&s.construction, &pred, &Pinning::new()).unwrap();
        let pinned = algebraize(&s.construction, &pred, &s.pins).unwrap();
        let r = prove(&pinned, &limits());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok(inst) = random_instance(&s.construction, &s.pins, &mut rng, 20) {
            let vals = pinned.values_at(&inst).unwrap();
            if r.conditions.iter().all(|c| !c.eval_at(&vals).is_zero()) {
                prop_assert!(pinned.thesis.eval_at(&vals).is_zero());
                prop_assert!(sys.thesis.eval_at(&sys.values_at(&inst).unwrap()).is_zero());
            }
        }
    }
}
