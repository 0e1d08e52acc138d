//! The `.geo` construction language.
//!
//! One statement per line, whitespace-separated tokens, `#` starts a comment:
//!
//! ```text
//! point A free
//! circle c center A through B
//! point D on c
//! line f B D
//! point C reflect A over f
//! point E intersect g c other D
//! point S intersect h i
//! midpoint M A B
//! foot F A g
//! pin A 0 0
//! prove concyclic A S D E
//! locus concyclic D E A S mover C
//! ```

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::geomodel::{Construction, GeoError, ObjectKind, Pinning, Predicate, Step};
use crate::polycore::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Prove(Predicate),
    ProveDetails(Predicate),
    Locus { pred: Predicate, mover: String },
    Grade(Predicate),
    Discover,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub construction: Construction,
    pub commands: Vec<Command>,
    /// In-file `pin` statements.
    pub pins: Pinning,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier {name} at line {line}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("arity mismatch at line {line}: {msg}")]
    Arity { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Geometry { line: usize, source: GeoError },
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    fn syntax(&self, idx: usize, msg: impl Into<String>) -> ScriptError {
        let col = self
            .toks
            .get(idx)
            .map(|t| t.col)
            .unwrap_or_else(|| self.toks.last().map(|t| t.col + t.text.len()).unwrap_or(1));
        ScriptError::Syntax {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }

    fn tok(&self, idx: usize) -> Result<&'a str, ScriptError> {
        self.toks
            .get(idx)
            .map(|t| t.text)
            .ok_or_else(|| self.syntax(idx, "unexpected end of statement"))
    }

    fn expect(&self, idx: usize, word: &str) -> Result<(), ScriptError> {
        if self.tok(idx)? == word {
            Ok(())
        } else {
            Err(self.syntax(idx, format!("expected '{word}'")))
        }
    }

    fn ident(&self, idx: usize) -> Result<String, ScriptError> {
        let t = self.tok(idx)?;
        let mut chars = t.chars();
        let ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if ok {
            Ok(t.to_string())
        } else {
            Err(self.syntax(idx, format!("'{t}' is not an identifier")))
        }
    }

    fn arity(&self, expected: usize) -> Result<(), ScriptError> {
        if self.toks.len() != expected {
            Err(ScriptError::Arity {
                line: self.no,
                msg: format!(
                    "'{}' takes {} tokens, got {}",
                    self.toks[0].text,
                    expected,
                    self.toks.len()
                ),
            })
        } else {
            Ok(())
        }
    }

    /// Identifier that must already be defined.
    fn known(&self, c: &Construction, idx: usize) -> Result<String, ScriptError> {
        let name = self.ident(idx)?;
        if c.position(&name).is_none() {
            return Err(ScriptError::UnknownIdentifier {
                name,
                line: self.no,
                col: self.toks[idx].col,
            });
        }
        Ok(name)
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push(Tok {
                        text: &content[s..j],
                        col: s + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            toks.push(Tok {
                text: &content[s..],
                col: s + 1,
            });
        }
        if !toks.is_empty() {
            out.push(Line { no: i + 1, toks });
        }
    }
    out
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Parses `x,y` (as in `--pin A=0,0`).
pub fn parse_pair(s: &str) -> Option<(Rational, Rational)> {
    let (x, y) = s.split_once(',')?;
    Some((parse_rational(x.trim())?, parse_rational(y.trim())?))
}

/// Two point names of a segment argument: either two points or one line/segment name.
fn pair_args(
    line: &Line<'_>,
    c: &Construction,
    idx: usize,
) -> Result<([String; 2], usize), ScriptError> {
    let first = line.known(c, idx)?;
    match c.kind_of(&first) {
        Ok(ObjectKind::Point) => {
            let second = line.known(c, idx + 1)?;
            if !c.is_point(&second) {
                return Err(line.syntax(idx + 1, format!("{second} is not a point")));
            }
            Ok(([first, second], 2))
        }
        Ok(ObjectKind::Line | ObjectKind::Segment) => {
            let (p, q) = c.line_points(&first).expect("line");
            Ok(([p.to_string(), q.to_string()], 1))
        }
        _ => Err(line.syntax(idx, format!("{first} is not a point, line or segment"))),
    }
}

/// Parses a predicate starting at token `idx`; returns it and the index after it.
fn parse_predicate(line: &Line<'_>, c: &Construction, idx: usize) -> Result<(Predicate, usize), ScriptError> {
    let kw = line.tok(idx)?;
    let points = |n: usize| -> Result<Vec<String>, ScriptError> {
        (0..n)
            .map(|k| {
                let name = line.known(c, idx + 1 + k)?;
                if c.is_point(&name) {
                    Ok(name)
                } else {
                    Err(line.syntax(idx + 1 + k, format!("{name} is not a point")))
                }
            })
            .collect()
    };
    let arity_err = |need: &str| ScriptError::Arity {
        line: line.no,
        msg: format!("'{kw}' needs {need}"),
    };
    match kw {
        "concyclic" => {
            if line.toks.len() < idx + 5 {
                return Err(arity_err("4 points"));
            }
            let p = points(4)?;
            Ok((Predicate::Concyclic(p.try_into().unwrap()), idx + 5))
        }
        "collinear" => {
            if line.toks.len() < idx + 4 {
                return Err(arity_err("3 points"));
            }
            let p = points(3)?;
            Ok((Predicate::Collinear(p.try_into().unwrap()), idx + 4))
        }
        "equal" | "perpendicular" | "parallel" => {
            if line.toks.len() < idx + 3 {
                return Err(arity_err("two segments"));
            }
            let (a, used_a) = pair_args(line, c, idx + 1)?;
            if line.toks.len() < idx + 1 + used_a + 1 {
                return Err(arity_err("two segments"));
            }
            let (b, used_b) = pair_args(line, c, idx + 1 + used_a)?;
            let next = idx + 1 + used_a + used_b;
            let pred = match kw {
                "equal" => Predicate::EqualLength(a, b),
                "perpendicular" => Predicate::Perpendicular(a, b),
                _ => Predicate::Parallel(a, b),
            };
            Ok((pred, next))
        }
        other => Err(line.syntax(idx, format!("unknown predicate '{other}'"))),
    }
}

fn geo(line: &Line<'_>, e: GeoError) -> ScriptError {
    match e {
        GeoError::DanglingReference(name) => ScriptError::UnknownIdentifier {
            name,
            line: line.no,
            col: line.toks[0].col,
        },
        other => ScriptError::Geometry {
            line: line.no,
            source: other,
        },
    }
}

fn parse_point(line: &Line<'_>, c: &Construction) -> Result<Step, ScriptError> {
    let name = line.ident(1)?;
    let how = line.tok(2)?;
    let step = match how {
        "free" => {
            line.arity(3)?;
            Step::FreePoint { name }
        }
        "on" => {
            line.arity(4)?;
            let carrier = line.known(c, 3)?;
            match c.kind_of(&carrier) {
                Ok(ObjectKind::Circle) => Step::PointOnCircle { name, circle: carrier },
                Ok(ObjectKind::Line | ObjectKind::Segment) => Step::PointOnLine { name, line: carrier },
                _ => return Err(line.syntax(3, format!("{carrier} is not a line or circle"))),
            }
        }
        "reflect" => {
            line.arity(6)?;
            let source = line.known(c, 3)?;
            line.expect(4, "over")?;
            let mirror = line.known(c, 5)?;
            Step::ReflectPointOverLine { name, source, mirror }
        }
        "midpoint" => {
            line.arity(5)?;
            Step::Midpoint {
                name,
                p: line.known(c, 3)?,
                q: line.known(c, 4)?,
            }
        }
        "foot" => {
            line.arity(5)?;
            Step::FootOfPerpendicular {
                name,
                apex: line.known(c, 3)?,
                base: line.known(c, 4)?,
            }
        }
        "intersect" => {
            if line.toks.len() == 5 {
                Step::IntersectLines {
                    name,
                    l1: line.known(c, 3)?,
                    l2: line.known(c, 4)?,
                }
            } else if line.toks.len() == 7 || line.toks.len() == 8 {
                let a = line.known(c, 3)?;
                let b = line.known(c, 4)?;
                line.expect(5, "other")?;
                let known = line.known(c, 6)?;
                let avoid_known = match line.toks.get(7).map(|t| t.text) {
                    None => false,
                    Some("distinct") => true,
                    Some(_) => return Err(line.syntax(7, "expected 'distinct' or end of line")),
                };
                let (ln, circle) = if c.kind_of(&a) == Ok(ObjectKind::Circle) { (b, a) } else { (a, b) };
                Step::IntersectLineCircleOther {
                    name,
                    line: ln,
                    circle,
                    known,
                    avoid_known,
                }
            } else {
                return Err(ScriptError::Arity {
                    line: line.no,
                    msg: "'intersect' takes two lines, or a line, a circle and 'other P'".into(),
                });
            }
        }
        other => return Err(line.syntax(2, format!("unknown point construction '{other}'"))),
    };
    Ok(step)
}

pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut script = Script::default();
    for line in tokenize(text) {
        let head = line.tok(0)?;
        let step = match head {
            "point" => Some(parse_point(&line, &script.construction)?),
            "circle" => {
                line.arity(6)?;
                let name = line.ident(1)?;
                line.expect(2, "center")?;
                let center = line.known(&script.construction, 3)?;
                line.expect(4, "through")?;
                let through = line.known(&script.construction, 5)?;
                Some(Step::CircleCenterThrough { name, center, through })
            }
            "line" | "segment" => {
                line.arity(4)?;
                let name = line.ident(1)?;
                let p = line.known(&script.construction, 2)?;
                let q = line.known(&script.construction, 3)?;
                Some(if head == "line" {
                    Step::LineThrough { name, p, q }
                } else {
                    Step::SegmentOf { name, p, q }
                })
            }
            "midpoint" => {
                line.arity(4)?;
                Some(Step::Midpoint {
                    name: line.ident(1)?,
                    p: line.known(&script.construction, 2)?,
                    q: line.known(&script.construction, 3)?,
                })
            }
            "foot" => {
                line.arity(4)?;
                Some(Step::FootOfPerpendicular {
                    name: line.ident(1)?,
                    apex: line.known(&script.construction, 2)?,
                    base: line.known(&script.construction, 3)?,
                })
            }
            "pin" => {
                line.arity(4)?;
                let name = line.known(&script.construction, 1)?;
                let x = parse_rational(line.tok(2)?).ok_or_else(|| line.syntax(2, "expected a rational"))?;
                let y = parse_rational(line.tok(3)?).ok_or_else(|| line.syntax(3, "expected a rational"))?;
                script.pins.insert(name, (x, y));
                None
            }
            "prove" | "details" | "grade" => {
                let (pred, next) = parse_predicate(&line, &script.construction, 1)?;
                line.arity(next)?;
                script.commands.push(match head {
                    "prove" => Command::Prove(pred),
                    "details" => Command::ProveDetails(pred),
                    _ => Command::Grade(pred),
                });
                None
            }
            "locus" => {
                let (pred, next) = parse_predicate(&line, &script.construction, 1)?;
                line.expect(next, "mover")?;
                let mover = line.known(&script.construction, next + 1)?;
                line.arity(next + 2)?;
                script.commands.push(Command::Locus { pred, mover });
                None
            }
            "discover" => {
                line.arity(1)?;
                script.commands.push(Command::Discover);
                None
            }
            other => return Err(line.syntax(0, format!("unknown statement '{other}'"))),
        };
        if let Some(step) = step {
            script.construction.push(step).map_err(|e| geo(&line, e))?;
        }
    }
    Ok(script)
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Prove(p) => write!(f, "prove {}", p.to_dsl()),
            Command::ProveDetails(p) => write!(f, "details {}", p.to_dsl()),
            Command::Grade(p) => write!(f, "grade {}", p.to_dsl()),
            Command::Locus { pred, mover } => write!(f, "locus {} mover {mover}", pred.to_dsl()),
            Command::Discover => write!(f, "discover"),
        }
    }
}

/// Canonical text of a script; parses back to an equal script.
pub fn pretty_print(script: &Script) -> String {
    let mut out = String::new();
    for step in script.construction.steps() {
        out.push_str(&step.to_string());
        out.push('\n');
    }
    for (name, (x, y)) in &script.pins {
        out.push_str(&format!("pin {name} {} {}\n", format_rational(x), format_rational(y)));
    }
    for cmd in &script.commands {
        out.push_str(&cmd.to_string());
        out.push('\n');
    }
    out
}
