use std::path::PathBuf;

use super::*;
use crate::geomodel::{algebraize, Pinning, Predicate};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

const FIXTURES: [&str; 5] = [
    "rhombus.geo",
    "rhombus_free.geo",
    "kite.geo",
    "pythagoras.geo",
    "ninepoint_partial.geo",
];

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["geoprove"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let (code, out, err) = invoke(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad JSON ({e}): {out}\n{err}"));
    (code, v)
}

fn strip_times(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.remove("time_ms");
            m.values_mut().for_each(strip_times);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_times),
        _ => {}
    }
}

fn temp_script(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".geo").tempfile().unwrap();
    std::io::Write::write_all(&mut f, text.as_bytes()).unwrap();
    f
}

#[test]
fn fixtures_round_trip() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let s = parse_script(&text).unwrap();
        let printed = pretty_print(&s);
        assert_eq!(parse_script(&printed).unwrap(), s, "{name}");
        assert_eq!(pretty_print(&parse_script(&printed).unwrap()), printed, "{name}");
    }
}

#[test]
fn rhombus_shape() {
    let s = parse_script(&std::fs::read_to_string(fixture("rhombus.geo")).unwrap()).unwrap();
    assert_eq!(s.construction.len(), 11);
    assert_eq!(s.commands.len(), 1);
    assert!(matches!(s.commands[0], Command::Prove(Predicate::Concyclic(_))));
    assert_eq!(s.pins.len(), 2);
}

#[test]
fn repeated_point_predicate_is_trivial() {
    let s = parse_script("point A free\nprove concyclic A A A A").unwrap();
    let Command::Prove(p) = &s.commands[0] else { panic!() };
    let sys = algebraize(&s.construction, p, &Pinning::new()).unwrap();
    assert!(sys.thesis.is_zero());
}

#[test]
fn forward_reference_is_reported() {
    let e = parse_script("circle c center A through B").unwrap_err();
    assert_eq!(e.to_string(), "unknown identifier A at line 1");
}

#[test]
fn diagnostics_carry_positions() {
    let e = parse_script("point A free\npoint B wobble").unwrap_err();
    assert!(matches!(e, ScriptError::Syntax { line: 2, col: 9, .. }), "{e:?}");
    let e = parse_script("point A free\npoint B free\nline l A").unwrap_err();
    assert!(matches!(e, ScriptError::Arity { line: 3, .. }), "{e:?}");
    let e = parse_script("point A free\nprove concyclic A A A").unwrap_err();
    assert!(matches!(e, ScriptError::Arity { line: 2, .. }), "{e:?}");
}

#[test]
fn pin_pairs() {
    assert!(parse_pair("1,2").is_some());
    assert!(parse_pair("-3/4, 5").is_some());
    assert!(parse_pair("1").is_none());
    assert!(parse_pair("a,b").is_none());
}

#[test]
fn prove_rhombus_exits_zero() {
    let (code, v) = json(&["prove", &fixture("rhombus.geo"), "--pin", "A=0,0", "--pin", "B=5,0", "--json"]);
    assert_eq!(code, EXIT_OK);
    let r = &v["results"][0];
    assert_eq!(r["kind"], "prove");
    assert!(matches!(r["verdict"].as_str(), Some("TRUE" | "TRUE_UNDER_CONDITIONS")), "{r}");
    assert!(r["conditions"].is_array());
}

#[test]
fn unproved_exits_one() {
    let f = temp_script(
        "point A free\npoint B free\ncircle c center A through B\npoint D on c\nline f B D\n\
         point C reflect A over f\npin A 0 0\npin B 5 0\nprove concyclic A B C D\n",
    );
    let (code, v) = json(&["prove", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_UNPROVED);
    assert_eq!(v["results"][0]["verdict"], "UNPROVED");
}

#[test]
fn timeout_exits_two() {
    let (code, v) = json(&["prove", &fixture("rhombus.geo"), "--pin", "A=0,0", "--pin", "B=5,0", "--timeout", "0.000001", "--json"]);
    assert_eq!(code, EXIT_TIMEOUT);
    assert_eq!(v["results"][0]["verdict"], "TIMEOUT");
}

#[test]
fn usage_errors_exit_three() {
    let missing = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/missing.geo");
    assert_eq!(invoke(&["prove", missing.to_str().unwrap()]).0, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate", &fixture("rhombus.geo")]).0, EXIT_USAGE);
    assert_eq!(invoke(&["prove", &fixture("rhombus.geo"), "--pin", "A=oops"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["prove", &fixture("rhombus.geo"), "--timeout", "-1"]).0, EXIT_USAGE);
    let bad = temp_script("point A free\npoint B wobble\n");
    let (code, _, err) = invoke(&["prove", bad.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
    // a locus run needs a locus command
    assert_eq!(invoke(&["locus", &fixture("rhombus.geo")]).0, EXIT_USAGE);
}

#[test]
fn grade_schema() {
    let (code, v) = json(&["grade", &fixture("ninepoint_partial.geo"), "--json"]);
    assert_eq!(code, EXIT_OK);
    for key in ["version", "command", "file", "order", "timeout_s", "results"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["order"], "grevlex");
    let r = &v["results"][0];
    assert_eq!(r["kind"], "grade");
    assert!((3..=5).contains(&r["grade"].as_u64().unwrap()));
    for e in r["ledger"].as_array().unwrap() {
        assert!(e["q_degree"].is_u64() && e["cofactor_degree"].is_u64(), "{e}");
    }
    assert!(r.get("locus").is_none() && r.get("findings").is_none());
    let text = serde_json::to_string(&v).unwrap();
    assert!(!text.contains("null"));
}

#[test]
fn json_is_deterministic_apart_from_timings() {
    let args = ["locus", &fixture("rhombus_free.geo"), "--json", "--seed", "7"];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    strip_times(&mut a);
    strip_times(&mut b);
    assert_eq!(a, b);
    let l = &a["results"][0]["locus"];
    assert_eq!(l["mover"], "C");
    assert!(l["total_degree"].as_u64().unwrap() >= 2);
    for c in l["components"].as_array().unwrap() {
        assert!(c["poly"].is_string() && c["kind"].is_string() && c["classification"].is_string());
    }
}

#[test]
fn text_report_names_the_verdict() {
    let (code, out, _) = invoke(&["prove", &fixture("pythagoras.geo")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("TRUE"), "{out}");
}

fn svg_of(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.svg");
    let mut argv = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    argv.extend_from_slice(&["--svg", &p]);
    let (code, _, err) = invoke(&argv);
    assert!(code == EXIT_OK || code == EXIT_UNPROVED, "{code}: {err}");
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn rhombus_free_picture_classes() {
    let svg = svg_of(&["locus", &fixture("rhombus_free.geo")]);
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"<path class="valid""#), "no valid path");
    assert!(svg.contains(r#"<path class="degenerate""#), "no degenerate path");
    assert!(svg.contains("stroke-dasharray"));
}

#[test]
fn whole_plane_picture_is_annotated() {
    let f = temp_script(
        "point A free\npoint B free\npoint C free\nmidpoint M A B\npin A 0 0\npin B 4 0\nlocus collinear A M B mover C\n",
    );
    let svg = svg_of(&["locus", f.path().to_str().unwrap()]);
    assert!(svg.contains("locus: entire plane"));
    assert!(!svg.contains(r#"class="valid""#));
    let (code, v) = json(&["locus", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["results"][0]["error"].as_str().unwrap().starts_with("EMPTY_LOCUS"));
}

#[test]
fn single_line_picture() {
    let f = temp_script("point A free\npoint B free\npoint C free\npin A 0 0\npin B 4 0\nlocus equal C A C B mover C\n");
    let (_, v) = json(&["locus", f.path().to_str().unwrap(), "--json"]);
    let l = &v["results"][0]["locus"];
    assert_eq!(l["total_degree"], 1);
    assert_eq!(l["components"][0]["kind"], "LINE");
    let svg = svg_of(&["locus", f.path().to_str().unwrap()]);
    let locus_paths = svg
        .lines()
        .filter(|l| l.starts_with("<path") && !l.contains(r#"class="construction""#))
        .collect::<Vec<_>>();
    assert_eq!(locus_paths.len(), 1, "{locus_paths:?}");
    assert!(!svg.contains(r#"class="residual""#));
}
