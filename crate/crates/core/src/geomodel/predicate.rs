use std::fmt;

use super::{Construction, GeoError};

/// A statement about points of a construction. Segments and lines are given by
/// their two defining points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Concyclic([String; 4]),
    Collinear([String; 3]),
    EqualLength([String; 2], [String; 2]),
    Perpendicular([String; 2], [String; 2]),
    Parallel([String; 2], [String; 2]),
}

impl Predicate {
    pub fn points(&self) -> Vec<&str> {
        match self {
            Predicate::Concyclic(p) => p.iter().map(String::as_str).collect(),
            Predicate::Collinear(p) => p.iter().map(String::as_str).collect(),
            Predicate::EqualLength(a, b)
            | Predicate::Perpendicular(a, b)
            | Predicate::Parallel(a, b) => a.iter().chain(b.iter()).map(String::as_str).collect(),
        }
    }

    pub fn validate(&self, c: &Construction) -> Result<(), GeoError> {
        for p in self.points() {
            if !c.is_point(p) {
                c.step(p)?;
                return Err(GeoError::WrongKind {
                    name: p.to_string(),
                    expected: "point".into(),
                });
            }
        }
        Ok(())
    }

    /// DSL keyword.
    pub fn keyword(&self) -> &'static str {
        match self {
            Predicate::Concyclic(_) => "concyclic",
            Predicate::Collinear(_) => "collinear",
            Predicate::EqualLength(..) => "equal",
            Predicate::Perpendicular(..) => "perpendicular",
            Predicate::Parallel(..) => "parallel",
        }
    }

    /// Normal form: points ordered by construction position, pairs ordered likewise.
    pub fn canonical(&self, c: &Construction) -> Predicate {
        let pos = |s: &String| (c.position(s).unwrap_or(usize::MAX), s.clone());
        let sort_pair = |p: &[String; 2]| {
            let mut p = p.clone();
            p.sort_by_key(pos);
            p
        };
        let sort_pairs = |a: &[String; 2], b: &[String; 2]| {
            let (a, b) = (sort_pair(a), sort_pair(b));
            let ka = (pos(&a[0]), pos(&a[1]));
            let kb = (pos(&b[0]), pos(&b[1]));
            if ka <= kb {
                (a, b)
            } else {
                (b, a)
            }
        };
        match self {
            Predicate::Concyclic(p) => {
                let mut p = p.clone();
                p.sort_by_key(pos);
                Predicate::Concyclic(p)
            }
            Predicate::Collinear(p) => {
                let mut p = p.clone();
                p.sort_by_key(pos);
                Predicate::Collinear(p)
            }
            Predicate::EqualLength(a, b) => {
                let (a, b) = sort_pairs(a, b);
                Predicate::EqualLength(a, b)
            }
            Predicate::Perpendicular(a, b) => {
                let (a, b) = sort_pairs(a, b);
                Predicate::Perpendicular(a, b)
            }
            Predicate::Parallel(a, b) => {
                let (a, b) = sort_pairs(a, b);
                Predicate::Parallel(a, b)
            }
        }
    }

    /// Syntactically vacuous: repeated points, zero-length segments, identical segments.
    pub fn is_trivial(&self) -> bool {
        fn has_repeat(p: &[String]) -> bool {
            (0..p.len()).any(|i| (i + 1..p.len()).any(|j| p[i] == p[j]))
        }
        let same_pair = |a: &[String; 2], b: &[String; 2]| {
            (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
        };
        match self {
            Predicate::Concyclic(p) => has_repeat(p),
            Predicate::Collinear(p) => has_repeat(p),
            Predicate::EqualLength(a, b)
            | Predicate::Perpendicular(a, b)
            | Predicate::Parallel(a, b) => a[0] == a[1] || b[0] == b[1] || same_pair(a, b),
        }
    }

    /// `keyword arg arg ...` as written in a script.
    pub fn to_dsl(&self) -> String {
        let mut s = self.keyword().to_string();
        for p in self.points() {
            s.push(' ');
            s.push_str(p);
        }
        s
    }
}

fn seg(p: &[String; 2]) -> String {
    if p.iter().all(|s| s.chars().count() == 1) {
        format!("{}{}", p[0], p[1])
    } else {
        format!("{}-{}", p[0], p[1])
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Concyclic(p) => write!(f, "AreConcyclic({})", p.join(",")),
            Predicate::Collinear(p) => write!(f, "AreCollinear({})", p.join(",")),
            Predicate::EqualLength(a, b) => write!(f, "EqualLength({},{})", seg(a), seg(b)),
            Predicate::Perpendicular(a, b) => write!(f, "ArePerpendicular({},{})", seg(a), seg(b)),
            Predicate::Parallel(a, b) => write!(f, "AreParallel({},{})", seg(a), seg(b)),
        }
    }
}
