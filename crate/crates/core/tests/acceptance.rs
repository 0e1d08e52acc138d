//! Acceptance criteria. Every check prints one `PASS`/`FAIL` line; a criterion
//! fails its test when any of its checks fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads=1` to
//! see the lines in order.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use geoprove::cli::{parse_script, Command, Script};
use geoprove::geomodel::{
    algebraize, collinear_poly, concyclic_poly, eval_numeric, random_instance, AlgebraicSystem, Pinning, Predicate,
};
use geoprove::groebner::{
    buchberger_extended, eliminate, groebner_basis, reduce_by, reduce_tracked, s_polynomial, ResourceLimits,
};
use geoprove::locus::{extract_components, locus_equation, sample_points, Classification, ComponentKind, LocusResult};
use geoprove::polycore::{int, rat, Monomial, MonomialOrder, Polynomial, Rational, VariableTable};
use geoprove::reasoner::{discover, grade, prove, DiscoverOptions, GradeSource, Verdict};

const PROVE_BUDGET: Duration = Duration::from_secs(60);
const SYMBOLIC_BUDGET: f64 = 300.0;
const DISCOVER_BUDGET: Duration = Duration::from_secs(120);
const PROPERTY_BUDGET: Duration = Duration::from_secs(600);
const PROPERTY_CASES: u32 = 200;

struct Criterion {
    id: &'static str,
    failed: Vec<String>,
}

impl Criterion {
    fn new(id: &'static str) -> Self {
        Criterion { id, failed: Vec::new() }
    }

    fn check(&mut self, what: &str, ok: bool, detail: impl std::fmt::Display) {
        println!("{} {} {what}: {detail}", if ok { "PASS" } else { "FAIL" }, self.id);
        if !ok {
            self.failed.push(what.to_string());
        }
    }

    fn note(&self, what: &str, detail: impl std::fmt::Display) {
        println!("INFO {} {what}: {detail}", self.id);
    }

    fn finish(self) {
        assert!(self.failed.is_empty(), "{} failed: {:?}", self.id, self.failed);
    }
}

fn fixture(name: &str) -> Script {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_script(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn pt(x: i64, y: i64) -> (Rational, Rational) {
    (int(x), int(y))
}

fn standard_pins() -> Pinning {
    [("A".to_string(), pt(0, 0)), ("B".to_string(), pt(5, 0))].into()
}

fn first_predicate(s: &Script) -> Predicate {
    s.commands
        .iter()
        .find_map(|c| match c {
            Command::Prove(p) | Command::ProveDetails(p) | Command::Grade(p) => Some(p.clone()),
            Command::Locus { pred, .. } => Some(pred.clone()),
            Command::Discover => None,
        })
        .unwrap()
}

fn concyclic(names: [&str; 4]) -> Predicate {
    Predicate::Concyclic(names.map(String::from))
}

fn proved(v: Verdict) -> bool {
    matches!(v, Verdict::True | Verdict::TrueUnderConditions)
}

#[test]
fn c1_rhombus_theorem() {
    let mut c = Criterion::new("C1");
    let s = fixture("rhombus.geo");
    let pred = first_predicate(&s);

    let sys = algebraize(&s.construction, &pred, &standard_pins()).unwrap();
    let start = Instant::now();
    let r = prove(&sys, &ResourceLimits::with_time(PROVE_BUDGET.as_secs_f64()));
    let t = start.elapsed();
    c.check("pinned A=(0,0), B=(5,0) proves", proved(r.verdict), r.verdict);
    c.check("pinned within 60 s", t <= PROVE_BUDGET, format!("{t:.2?}"));

    let sys = algebraize(&s.construction, &pred, &Pinning::new()).unwrap();
    let start = Instant::now();
    let r = prove(&sys, &ResourceLimits::with_time(SYMBOLIC_BUDGET));
    let t = start.elapsed();
    c.check(
        "unpinned proves or reports TIMEOUT within the 300 s budget",
        proved(r.verdict) || r.verdict == Verdict::Timeout,
        format!("{} in {t:.2?}", r.verdict),
    );
    c.check("unpinned respects the budget", t <= Duration::from_secs_f64(SYMBOLIC_BUDGET + 5.0), format!("{t:.2?}"));
    c.finish();
}

#[test]
fn c2_kite() {
    let mut c = Criterion::new("C2");
    let s = fixture("kite.geo");
    let sys = algebraize(&s.construction, &first_predicate(&s), &s.pins).unwrap();
    let start = Instant::now();
    let r = prove(&sys, &ResourceLimits::with_time(PROVE_BUDGET.as_secs_f64()));
    let t = start.elapsed();
    c.check("kite proves", proved(r.verdict), r.verdict);
    c.check("kite within 60 s", t <= PROVE_BUDGET, format!("{t:.2?}"));
    c.finish();
}

#[test]
fn c3_discovery() {
    let mut c = Criterion::new("C3");
    let s = fixture("rhombus.geo");
    let start = Instant::now();
    let d = discover(
        &s.construction,
        &s.pins,
        &ResourceLimits::with_time(DISCOVER_BUDGET.as_secs_f64()),
        &DiscoverOptions::default(),
    )
    .unwrap();
    let t = start.elapsed();
    let proved_names: Vec<String> = d
        .findings
        .iter()
        .filter(|f| f.proof.as_ref().is_some_and(|p| proved(p.verdict)))
        .map(|f| f.predicate.to_string())
        .collect();
    c.note("proved findings", proved_names.join(" "));
    for want in ["AreConcyclic(A,B,C,E)", "EqualLength(AS,BS)", "EqualLength(AS,DS)"] {
        c.check(&format!("{want} proved"), proved_names.iter().any(|n| n == want), want);
    }
    c.check("discovery within 120 s", t <= DISCOVER_BUDGET, format!("{t:.2?}"));
    c.finish();
}

/// Exact division `p / d` when it exists.
fn quotient(p: &Polynomial, d: &Polynomial) -> Option<Polynomial> {
    let (q, r) = p.divide(std::slice::from_ref(d), &MonomialOrder::Grevlex);
    r.is_zero().then(|| q.into_iter().next().unwrap())
}

fn locus_component<'a>(l: &'a LocusResult, poly: &Polynomial) -> Option<&'a geoprove::locus::Component> {
    l.components.iter().find(|c| c.poly.primitive().0 == poly.primitive().0)
}

#[test]
fn c4_locus() {
    let mut c = Criterion::new("C4");
    let s = fixture("rhombus_free.geo");
    let (pred, mover) = s
        .commands
        .iter()
        .find_map(|c| match c {
            Command::Locus { pred, mover } => Some((pred.clone(), mover.clone())),
            _ => None,
        })
        .unwrap();
    let start = Instant::now();
    let l = locus_equation(&s.construction, &pred, &mover, &s.pins, &ResourceLimits::with_time(300.0)).unwrap();
    c.note("elapsed", format!("{:.2?}", start.elapsed()));
    c.note("locus", &l.locus_poly);
    for comp in &l.components {
        c.note("component", format!("{} {:?} {:?}", comp.poly, comp.kind, comp.classification));
    }
    c.note("residual", &l.residual);

    let f = &l.locus_poly;
    let plane = f.ring().clone();
    let parse = |t: &str| Polynomial::parse(t, &plane).unwrap();
    let circle = parse("C_x^2 + C_y^2 - 25");
    let bisector = parse("C_x - 2*C_y");

    c.check("total degree exactly 10", f.total_degree() == 10, f.total_degree());
    c.check("components x residual rebuild the locus", l.reconstructs(), "");
    // All extracted factors are irreducible over Q, so with a constant residual
    // the polynomial is square-free iff no factor divides it twice.
    let irreducible = l.residual.is_constant()
        && l.components.iter().all(|k| k.kind == ComponentKind::Line || k.kind == ComponentKind::Circle);
    let square_free = l.components.iter().all(|k| quotient(f, &(&k.poly * &k.poly)).is_none())
        && (0..l.components.len())
            .all(|i| (i + 1..l.components.len()).all(|j| l.components[i].poly != l.components[j].poly));
    c.check("square-free", irreducible && square_free, format!("fully split: {irreducible}"));
    c.check("divisible by C_x^2 + C_y^2 - 25", quotient(f, &circle).is_some(), "");
    c.check("divisible by C_x - 2*C_y", quotient(f, &bisector).is_some(), "");
    let cc = locus_component(&l, &circle).map(|k| k.classification);
    c.check("circle DEGENERATE", cc == Some(Classification::Degenerate), format!("{cc:?}"));
    let bc = locus_component(&l, &bisector);
    c.check(
        "bisector VALID",
        bc.map(|k| k.classification) == Some(Classification::Valid),
        format!("{:?}", bc.map(|k| k.classification)),
    );
    if let Some(w) = bc.and_then(|k| k.witness.as_ref()) {
        let sys = algebraize(&s.construction, &pred, &s.pins).unwrap();
        let vals = sys.values_at(w).unwrap();
        c.check("bisector witness satisfies the thesis", sys.thesis.eval_at(&vals).is_zero(), "");
    }
    let lines = l.components.iter().filter(|k| k.kind == ComponentKind::Line).count() as u32;
    let remaining = lines + l.residual.total_degree();
    c.check(
        "lines + residual degree account for degree 7",
        remaining == 7,
        format!("{lines} lines, residual degree {}", l.residual.total_degree()),
    );
    c.finish();
}

/// Σᵢ qᵢ·(Σⱼ cᵢⱼ·hⱼ), expanded from the raw report fields.
fn witness_sum(g: &geoprove::reasoner::GradeReport) -> Polynomial {
    let b = &g.basis;
    let mut acc = Polynomial::zero(&b.ring);
    for (q, row) in g.quotients.iter().zip(&b.cofactors) {
        for (cij, h) in row.iter().zip(&b.generators) {
            acc = &acc + &(&(q * cij) * h);
        }
    }
    acc
}

fn graded(c: &mut Criterion, name: &str, sys: &AlgebraicSystem) -> Option<u32> {
    let g = match grade(sys, &MonomialOrder::Grevlex, &ResourceLimits::with_time(120.0)) {
        Ok(g) => g,
        Err(e) => {
            c.check(&format!("{name} grades"), false, e);
            return None;
        }
    };
    let sum = witness_sum(&g);
    let target_ok = match g.source {
        GradeSource::Hypotheses => sum == sys.thesis,
        GradeSource::Rabinowitsch => sum.is_one(),
        GradeSource::Saturated => sum == g.target,
    };
    c.check(
        &format!("{name} witness expands to its target"),
        sum == g.target && target_ok,
        format!("source {:?}, {} basis elements", g.source, g.basis.len()),
    );
    c.note(&format!("{name} grade"), format!("{} under {:?}", g.grade, g.order));
    Some(g.grade)
}

#[test]
fn c5_grading() {
    let mut c = Criterion::new("C5");
    let py = fixture("pythagoras.geo");
    let sys = algebraize(&py.construction, &first_predicate(&py), &py.pins).unwrap();
    if let Some(g) = graded(&mut c, "pythagoras", &sys) {
        c.check("pythagoras grade in {1, 2}", (1..=2).contains(&g), g);
    }
    let np = fixture("ninepoint_partial.geo");
    let sys = algebraize(&np.construction, &first_predicate(&np), &np.pins).unwrap();
    if let Some(g) = graded(&mut c, "nine-point", &sys) {
        c.check("nine-point grade in {3, 4, 5}", (3..=5).contains(&g), g);
    }
    let rh = fixture("rhombus.geo");
    let sys = algebraize(&rh.construction, &first_predicate(&rh), &rh.pins).unwrap();
    if let Some(g) = graded(&mut c, "rhombus", &sys) {
        c.check("rhombus grade in [7, 13]", (7..=13).contains(&g), g);
    }
    let kite = fixture("kite.geo");
    let sys = algebraize(&kite.construction, &first_predicate(&kite), &kite.pins).unwrap();
    graded(&mut c, "kite", &sys);
    c.finish();
}

fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn xyz() -> geoprove::polycore::Ring {
    VariableTable::free(&["x", "y", "z"])
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    let mut monomials = Vec::new();
    for a in 0u16..=2 {
        for b in 0..=2 - a {
            for d in 0..=2 - a - b {
                monomials.push([a, b, d]);
            }
        }
    }
    prop::collection::vec((-5i64..=5, prop::sample::select(monomials)), 1..5).prop_map(|terms| {
        Polynomial::from_terms(&xyz(), terms.into_iter().map(|(c, e)| (Monomial::from_exponents(&e), int(c))))
    })
}

fn generators() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(small_poly(), 1..4).prop_filter("nonzero", |g| g.iter().all(|p| !p.is_zero()))
}

fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::Grevlex),
        Just(MonomialOrder::Lex),
        Just(MonomialOrder::elimination(3, &[0])),
    ]
}

fn budget() -> ResourceLimits {
    ResourceLimits::with_time(20.0)
}

fn suite<S: Strategy>(
    c: &mut Criterion,
    name: &str,
    seed: u8,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let start = Instant::now();
    let result = runner(seed).run(&strategy, test);
    let detail = match &result {
        Ok(()) => format!("{PROPERTY_CASES} cases in {:.2?}", start.elapsed()),
        Err(e) => e.to_string(),
    };
    c.check(name, result.is_ok(), detail);
}

#[test]
fn c6_property_suites() {
    let mut c = Criterion::new("C6");
    let start = Instant::now();

    suite(&mut c, "cofactor identities", 1, (generators(), orders()), |(gens, ord)| {
        let Ok(tb) = buchberger_extended(&gens, &ord, &budget()) else { return Ok(()) };
        for (i, g) in tb.elements.iter().enumerate() {
            let sum = tb.cofactors[i]
                .iter()
                .zip(&tb.generators)
                .fold(Polynomial::zero(g.ring()), |acc, (c, h)| &acc + &(c * h));
            prop_assert_eq!(&sum, g);
        }
        for g in &gens {
            prop_assert!(reduce_tracked(g, &tb).unwrap().remainder.is_zero());
        }
        Ok(())
    });

    suite(&mut c, "S-polynomials reduce to zero", 2, (generators(), orders()), |(gens, ord)| {
        let Ok(basis) = groebner_basis(&gens, &ord, &budget()) else { return Ok(()) };
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], &ord);
                prop_assert!(reduce_by(&s, &basis, &ord, &budget()).unwrap().remainder.is_zero());
            }
        }
        Ok(())
    });

    suite(&mut c, "reduction confluence", 3, (generators(), small_poly(), orders()), |(gens, f, ord)| {
        let Ok(basis) = groebner_basis(&gens, &ord, &budget()) else { return Ok(()) };
        let a = reduce_by(&f, &basis, &ord, &budget()).unwrap().remainder;
        let mut rev = basis.clone();
        rev.reverse();
        let b = reduce_by(&f, &rev, &ord, &budget()).unwrap().remainder;
        let (_, d) = f.divide(&rev, &ord);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &d);
        Ok(())
    });

    let point = prop::collection::vec((-4i64..=4, 1i64..=3), 3);
    suite(&mut c, "elimination soundness", 4, (generators(), point), |(gens, pt)| {
        let vals: Vec<Rational> = pt.iter().map(|&(n, d)| rat(n, d)).collect();
        let gens: Vec<Polynomial> = gens
            .iter()
            .map(|g| g - &Polynomial::constant(g.ring(), g.eval_at(&vals)))
            .filter(|g| !g.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let Ok(elim) = eliminate(&gens, &[0], &budget()) else { return Ok(()) };
        for e in &elim {
            prop_assert_eq!(e.degree_in(0), 0);
            prop_assert!(e.eval_at(&vals).is_zero());
        }
        Ok(())
    });

    let rhombus = fixture("rhombus.geo");
    let sys = algebraize(&rhombus.construction, &first_predicate(&rhombus), &Pinning::new()).unwrap();
    suite(&mut c, "hypotheses vanish at generated instances", 5, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(inst) = random_instance(&rhombus.construction, &Pinning::new(), &mut rng, 20) else {
            return Ok(());
        };
        let vals = sys.values_at(&inst).unwrap();
        for h in &sys.hypotheses {
            prop_assert!(h.eval_at(&vals).is_zero());
        }
        prop_assert!(sys.thesis.eval_at(&vals).is_zero());
        Ok(())
    });

    let plane = VariableTable::free(&["x", "y"]);
    let line = (-4i64..=4, -4i64..=4, -6i64..=6).prop_filter("nonconstant", |(a, b, _)| *a != 0 || *b != 0);
    let circle = (-4i64..=4, -4i64..=4, 1i64..=5);
    suite(
        &mut c,
        "locus reconstruction",
        6,
        (prop::collection::vec(line, 1..4), prop::option::of(circle)),
        |(lines, circle)| {
            let parse = |s: String| Polynomial::parse(&s, &plane).unwrap().primitive().0;
            let mut factors: Vec<Polynomial> = Vec::new();
            let polys = lines
                .into_iter()
                .map(|(a, b, c)| parse(format!("({a})*x + ({b})*y + ({c})")))
                .chain(circle.map(|(a, b, r)| parse(format!("(x - ({a}))^2 + (y - ({b}))^2 - {}", r * r))));
            for f in polys {
                if !factors.contains(&f) {
                    factors.push(f);
                }
            }
            let prod = factors.iter().fold(Polynomial::one(&plane), |acc, f| &acc * f);
            let (comps, residual) = extract_components(&prod, &[], &ResourceLimits::with_time(60.0));
            let rebuilt = comps.iter().fold(residual.clone(), |acc, k| &acc * &k.poly);
            prop_assert_eq!(rebuilt.primitive().0, prod.primitive().0);
            prop_assert_eq!(comps.len(), factors.len());
            for k in &comps {
                for (x, y) in sample_points(&k.poly, 5, 7) {
                    prop_assert!(k.poly.eval_at(&[x, y]).is_zero());
                }
            }
            Ok(())
        },
    );

    let coords = prop::collection::vec((-20i64..20, -20i64..20), 4);
    suite(&mut c, "determinant antisymmetry", 7, (coords, 0usize..4, 0usize..4), |(coords, i, j)| {
        let ring = VariableTable::free(&["u"]);
        let p: Vec<[Polynomial; 2]> = coords
            .iter()
            .map(|&(x, y)| [Polynomial::constant(&ring, int(x)), Polynomial::constant(&ring, int(y))])
            .collect();
        let base = concyclic_poly([&p[0], &p[1], &p[2], &p[3]]);
        let mut perm = [0, 1, 2, 3];
        perm.swap(i, j);
        let swapped = concyclic_poly(perm.map(|k| &p[k]));
        prop_assert_eq!(swapped, if i == j { base.clone() } else { -&base });
        if i < 3 && j < 3 {
            let tri = collinear_poly(&p[perm[0]], &p[perm[1]], &p[perm[2]]);
            let orig = collinear_poly(&p[0], &p[1], &p[2]);
            prop_assert_eq!(tri, if i == j { orig.clone() } else { -&orig });
        }
        Ok(())
    });

    let t = start.elapsed();
    c.check("suite within 10 min", t <= PROPERTY_BUDGET, format!("{t:.2?}"));
    c.finish();
}

#[test]
fn c7_negative_control() {
    let mut c = Criterion::new("C7");
    let s = fixture("rhombus.geo");
    let abcd = concyclic(["A", "B", "C", "D"]);
    let sys = algebraize(&s.construction, &abcd, &standard_pins()).unwrap();
    let r = prove(&sys, &ResourceLimits::with_time(PROVE_BUDGET.as_secs_f64()));
    c.check("AreConcyclic(A,B,C,D) UNPROVED", r.verdict == Verdict::Unproved, r.verdict);

    let free: HashMap<String, (Rational, Rational)> =
        [("A".to_string(), pt(0, 0)), ("B".to_string(), pt(5, 0)), ("D".to_string(), pt(3, 4))].into();
    let inst = eval_numeric(&s.construction, &free).unwrap();
    // circumcenter of A, B, D, solved by hand: (5/2, 5/4)
    let (ox, oy) = (rat(5, 2), rat(5, 4));
    let d2 = |name: &str| {
        let (x, y) = inst.get(name).unwrap();
        (x - &ox) * (x - &ox) + (y - &oy) * (y - &oy)
    };
    c.check("A, B, D on the circle of radius^2 125/16", [d2("A"), d2("B"), d2("D")].iter().all(|v| *v == rat(125, 16)), "");
    c.check("C at distance^2 605/16", d2("C") == rat(605, 16), d2("C"));
    let vals = sys.values_at(&inst).unwrap();
    c.check("thesis nonzero at the counterexample", !sys.thesis.eval_at(&vals).is_zero(), "");
    c.check(
        "hypotheses vanish at the counterexample",
        sys.hypotheses.iter().all(|h| h.eval_at(&vals).is_zero()),
        "",
    );
    c.finish();
}
