use std::collections::HashMap;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cli::parse_script;
use crate::polycore::{rat, Polynomial, Rational, VarKind};

const RHOMBUS: &str = include_str!("../../fixtures/rhombus.geo");

fn rhombus() -> Construction {
    parse_script(RHOMBUS).unwrap().construction
}

fn pt(x: i64, y: i64) -> (Rational, Rational) {
    (Rational::from_integer(x.into()), Rational::from_integer(y.into()))
}

fn standard_pins() -> Pinning {
    [("A".to_string(), pt(0, 0)), ("B".to_string(), pt(5, 0))].into()
}

fn concyclic(names: [&str; 4]) -> Predicate {
    Predicate::Concyclic(names.map(String::from))
}

fn fixture_instance() -> Instance {
    let c = rhombus();
    let free: HashMap<_, _> = [
        ("A".to_string(), pt(0, 0)),
        ("B".to_string(), pt(5, 0)),
        ("D".to_string(), pt(3, 4)),
    ]
    .into();
    eval_numeric(&c, &free).unwrap()
}

#[test]
fn rhombus_instance_coordinates() {
    let inst = fixture_instance();
    assert_eq!(inst.get("C").unwrap(), &pt(8, 4));
    assert_eq!(inst.get("E").unwrap(), &pt(-3, 4));
    assert_eq!(inst.get("S").unwrap(), &(rat(5, 2), rat(5, 4)));
}

#[test]
fn rhombus_instance_is_concyclic() {
    let inst = fixture_instance();
    let c = rhombus();
    let sys = algebraize(&c, &concyclic(["A", "S", "D", "E"]), &Pinning::new()).unwrap();
    let vals = sys.values_at(&inst).unwrap();
    assert!(sys.thesis.eval_at(&vals).is_zero());
    // circle through A, D, E: center (0, 25/8), radius 25/8
    let s = inst.get("S").unwrap();
    let d2 = &s.0 * &s.0 + (&s.1 - rat(25, 8)) * (&s.1 - rat(25, 8));
    assert_eq!(d2, rat(625, 64));
    assert_eq!(rat(25, 8) * rat(25, 8), rat(625, 64));
}

#[test]
fn rhombus_vertices_not_concyclic_at_instance() {
    let inst = fixture_instance();
    let sys = algebraize(&rhombus(), &concyclic(["A", "B", "C", "D"]), &Pinning::new()).unwrap();
    let vals = sys.values_at(&inst).unwrap();
    assert!(!sys.thesis.eval_at(&vals).is_zero());
    // circle through A, B, D has center (5/2, 5/4)
    let c = inst.get("C").unwrap();
    let d2 = (&c.0 - rat(5, 2)) * (&c.0 - rat(5, 2)) + (&c.1 - rat(5, 4)) * (&c.1 - rat(5, 4));
    assert_eq!(d2, rat(605, 16));
    assert_eq!(rat(5, 2) * rat(5, 2) + rat(5, 4) * rat(5, 4), rat(125, 16));
}

#[test]
fn rhombus_counts_with_pinning() {
    let sys = algebraize(&rhombus(), &concyclic(["A", "S", "D", "E"]), &standard_pins()).unwrap();
    assert_eq!(sys.hypotheses.len(), 7);
    assert_eq!(sys.vars_of_kind(VarKind::Dependent).len(), 7);
    assert_eq!(sys.vars_of_kind(VarKind::Free).len(), 1);
    assert_eq!(sys.ring.kind(sys.ring.index_of("D_x").unwrap()), VarKind::Free);
    let origins: Vec<&str> = sys.origins.iter().map(String::as_str).collect();
    assert_eq!(origins, ["D", "C", "C", "E", "E", "S", "S"]);
}

#[test]
fn rhombus_unpinned_has_five_free_variables() {
    let sys = algebraize(&rhombus(), &concyclic(["A", "S", "D", "E"]), &Pinning::new()).unwrap();
    assert_eq!(sys.hypotheses.len(), 7);
    assert_eq!(sys.vars_of_kind(VarKind::Free).len(), 5);
    assert_eq!(sys.vars_of_kind(VarKind::Dependent).len(), 7);
}

#[test]
fn algebraize_is_deterministic() {
    let a = algebraize(&rhombus(), &concyclic(["A", "S", "D", "E"]), &standard_pins()).unwrap();
    let b = algebraize(&rhombus(), &concyclic(["A", "S", "D", "E"]), &standard_pins()).unwrap();
    assert_eq!(a.ring.names(), b.ring.names());
    assert_eq!(a.hypotheses, b.hypotheses);
    assert_eq!(a.thesis, b.thesis);
}

#[test]
fn coincident_line_points_degenerate() {
    let free: HashMap<_, _> = [
        ("A".to_string(), pt(0, 0)),
        ("B".to_string(), pt(5, 0)),
        ("D".to_string(), pt(5, 0)),
    ]
    .into();
    assert!(matches!(eval_numeric(&rhombus(), &free), Err(GeoError::Degenerate(_))));
}

#[test]
fn trivial_predicates_give_zero_thesis() {
    let c = rhombus();
    let t = algebraize(&c, &concyclic(["A", "A", "B", "C"]), &Pinning::new()).unwrap().thesis;
    assert!(t.is_zero());
    let eq = Predicate::EqualLength(["A".into(), "B".into()], ["A".into(), "B".into()]);
    assert!(algebraize(&c, &eq, &Pinning::new()).unwrap().thesis.is_zero());
}

#[test]
fn pinning_errors() {
    let c = rhombus();
    let pins: Pinning = [("C".to_string(), pt(1, 1))].into();
    assert!(matches!(algebraize_construction(&c, &pins), Err(GeoError::PinNonFree(_))));
    let mut pins = standard_pins();
    pins.insert("D".into(), pt(1, 1));
    assert!(matches!(algebraize_construction(&c, &pins), Err(GeoError::PinNotOnObject(_))));
    pins.insert("D".into(), pt(3, 4));
    let sys = algebraize_construction(&c, &pins).unwrap();
    assert_eq!(sys.hypotheses.len(), 6);
}

#[test]
fn dangling_and_duplicate_references() {
    let mut c = Construction::new();
    let err = c
        .push(Step::CircleCenterThrough {
            name: "c".into(),
            center: "A".into(),
            through: "B".into(),
        })
        .unwrap_err();
    assert_eq!(err.to_string(), "unknown identifier A");
    c.push(Step::FreePoint { name: "A".into() }).unwrap();
    assert!(matches!(
        c.push(Step::FreePoint { name: "A".into() }),
        Err(GeoError::DuplicateName(_))
    ));
}

#[test]
fn distinct_intersection_excludes_known_point() {
    let text = RHOMBUS.replace("other D", "other D distinct");
    let c = parse_script(&text).unwrap().construction;
    let sys = algebraize_construction(&c, &standard_pins()).unwrap();
    assert_eq!(sys.hypotheses.len(), 7);
    assert!(sys.vars_of_kind(VarKind::Auxiliary).is_empty());
    let free: HashMap<_, _> = [
        ("A".to_string(), pt(0, 0)),
        ("B".to_string(), pt(5, 0)),
        ("D".to_string(), pt(3, 4)),
    ]
    .into();
    let inst = eval_numeric(&c, &free).unwrap();
    let vals = sys.values_at(&inst).unwrap();
    for h in &sys.hypotheses {
        assert!(h.eval_at(&vals).is_zero(), "{h}");
    }
    // E moved onto D violates the chord hypothesis
    let mut moved = vals.clone();
    let (dx, dy) = inst.get("D").unwrap().clone();
    moved[sys.ring.index_of("E_x").unwrap()] = dx;
    moved[sys.ring.index_of("E_y").unwrap()] = dy;
    assert!(sys.hypotheses.iter().any(|h| !h.eval_at(&moved).is_zero()));
}

#[test]
fn kinds_are_checked() {
    let mut c = Construction::new();
    c.push(Step::FreePoint { name: "A".into() }).unwrap();
    c.push(Step::FreePoint { name: "B".into() }).unwrap();
    let err = c.push(Step::PointOnLine {
        name: "P".into(),
        line: "A".into(),
    });
    assert!(matches!(err, Err(GeoError::WrongKind { .. })));
}

fn hypotheses_vanish(c: &Construction, pins: &Pinning, seed: u64) {
    let sys = algebraize_construction(c, pins).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Ok(inst) = random_instance(c, pins, &mut rng, 20) else {
        return;
    };
    let vals = sys.values_at(&inst).unwrap();
    for h in &sys.hypotheses {
        assert!(h.eval_at(&vals).is_zero(), "{h} at {inst:?}");
    }
}

const MIXED: &str = "\
point A free
point B free
point P free
line l A B
point Q on l
midpoint M A P
foot F P l
circle k center M through A
point R on k
segment s P Q
point T reflect R over s
line m A P
point X intersect m l
";

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_consistency_rhombus(seed in any::<u64>()) {
        hypotheses_vanish(&rhombus(), &Pinning::new(), seed);
    }

    #[test]
    fn oracle_consistency_mixed(seed in any::<u64>()) {
        let c = parse_script(MIXED).unwrap().construction;
        hypotheses_vanish(&c, &Pinning::new(), seed);
    }

    #[test]
    fn thesis_holds_on_rhombus(seed in any::<u64>()) {
        let c = rhombus();
        let sys = algebraize(&c, &concyclic(["A", "S", "D", "E"]), &Pinning::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok(inst) = random_instance(&c, &Pinning::new(), &mut rng, 20) {
            let vals = sys.values_at(&inst).unwrap();
            prop_assert!(sys.thesis.eval_at(&vals).is_zero());
        }
    }

    #[test]
    fn determinants_antisymmetric(
        coords in proptest::collection::vec((-20i64..20, -20i64..20), 4),
        i in 0usize..4, j in 0usize..4,
    ) {
        let ring = crate::polycore::VariableTable::free(&["u"]);
        let p: Vec<[Polynomial; 2]> = coords
            .iter()
            .map(|&(x, y)| [Polynomial::constant(&ring, Rational::from_integer(x.into())),
                             Polynomial::constant(&ring, Rational::from_integer(y.into()))])
            .collect();
        let base = concyclic_poly([&p[0], &p[1], &p[2], &p[3]]);
        let mut perm = [0, 1, 2, 3];
        perm.swap(i, j);
        let swapped = concyclic_poly(perm.map(|k| &p[k]));
        if i == j {
            prop_assert_eq!(&swapped, &base);
        } else {
            prop_assert_eq!(&swapped, &-&base);
        }
        let repeated = concyclic_poly([&p[0], &p[0], &p[2], &p[3]]);
        prop_assert!(repeated.is_zero());

        let tri = collinear_poly(&p[0], &p[1], &p[2]);
        prop_assert_eq!(collinear_poly(&p[1], &p[0], &p[2]), -&tri);
        prop_assert!(collinear_poly(&p[0], &p[0], &p[2]).is_zero());
    }
}
