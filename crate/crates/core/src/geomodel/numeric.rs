use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::{Construction, GeoError, Pinning, Step};
use crate::polycore::Rational;

type Pt = (Rational, Rational);

/// Exact coordinates of every point of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Construction order.
    pub coords: Vec<(String, Pt)>,
}

impl Instance {
    pub fn get(&self, name: &str) -> Result<&Pt, GeoError> {
        self.coords
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| GeoError::DanglingReference(name.to_string()))
    }

    /// Pairs of distinct point names at the same position.
    pub fn coincidences(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                if self.coords[i].1 == self.coords[j].1 {
                    out.push((self.coords[i].0.clone(), self.coords[j].0.clone()));
                }
            }
        }
        out
    }
}

/// How a free or semi-free point is placed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Choice {
    /// Exact position (must lie on the carrier of a semi-free point).
    Point(Rational, Rational),
    /// Parameter on the carrier: `U + t(V − U)` on a line through `U, V`;
    /// rotation of the through-point by the angle with `tan(θ/2) = t` on a circle.
    Param(Rational),
}

fn sub(a: &Pt, b: &Pt) -> Pt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn dot(a: &Pt, b: &Pt) -> Rational {
    &a.0 * &b.0 + &a.1 * &b.1
}

fn cross(a: &Pt, b: &Pt) -> Rational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn degenerate(msg: String) -> GeoError {
    GeoError::Degenerate(msg)
}

/// Solves each step in order with exact rational arithmetic.
pub fn eval_numeric(c: &Construction, free_choice: &HashMap<String, Pt>) -> Result<Instance, GeoError> {
    let choices: HashMap<String, Choice> = free_choice
        .iter()
        .map(|(k, (x, y))| (k.clone(), Choice::Point(x.clone(), y.clone())))
        .collect();
    eval_with_choices(c, &choices)
}

pub fn eval_with_choices(c: &Construction, choices: &HashMap<String, Choice>) -> Result<Instance, GeoError> {
    let mut pts: HashMap<&str, Pt> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    let get = |pts: &HashMap<&str, Pt>, n: &str| -> Pt { pts[n].clone() };

    for step in c.steps() {
        let name = step.name();
        let value: Option<Pt> = match step {
            Step::FreePoint { .. } => match choices.get(name) {
                Some(Choice::Point(x, y)) => Some((x.clone(), y.clone())),
                Some(Choice::Param(_)) => {
                    return Err(GeoError::BadChoice(format!("{name} is free and needs coordinates")))
                }
                None => return Err(GeoError::MissingChoice(name.to_string())),
            },
            Step::LineThrough { p, q, .. } | Step::SegmentOf { p, q, .. } => {
                if get(&pts, p) == get(&pts, q) {
                    return Err(degenerate(format!("{name} is defined by coincident points {p}, {q}")));
                }
                None
            }
            Step::CircleCenterThrough { center, through, .. } => {
                if get(&pts, center) == get(&pts, through) {
                    return Err(degenerate(format!("circle {name} has zero radius")));
                }
                None
            }
            Step::PointOnCircle { circle, .. } => {
                let (o, q) = c.circle_def(circle)?;
                let (o, q) = (get(&pts, o), get(&pts, q));
                let r = sub(&q, &o);
                match choices.get(name) {
                    Some(Choice::Point(x, y)) => {
                        let p = (x.clone(), y.clone());
                        if dot(&sub(&p, &o), &sub(&p, &o)) != dot(&r, &r) {
                            return Err(GeoError::BadChoice(format!("{name} is not on {circle}")));
                        }
                        Some(p)
                    }
                    Some(Choice::Param(t)) => {
                        let den = Rational::one() + t * t;
                        let cos = (Rational::one() - t * t) / &den;
                        let sin = (t + t) / &den;
                        Some((
                            &o.0 + &cos * &r.0 - &sin * &r.1,
                            &o.1 + &sin * &r.0 + &cos * &r.1,
                        ))
                    }
                    None => return Err(GeoError::MissingChoice(name.to_string())),
                }
            }
            Step::PointOnLine { line, .. } => {
                let (u, v) = c.line_points(line)?;
                let (u, v) = (get(&pts, u), get(&pts, v));
                match choices.get(name) {
                    Some(Choice::Point(x, y)) => {
                        let p = (x.clone(), y.clone());
                        if !cross(&sub(&v, &u), &sub(&p, &u)).is_zero() {
                            return Err(GeoError::BadChoice(format!("{name} is not on {line}")));
                        }
                        Some(p)
                    }
                    Some(Choice::Param(t)) => {
                        let d = sub(&v, &u);
                        Some((&u.0 + t * &d.0, &u.1 + t * &d.1))
                    }
                    None => return Err(GeoError::MissingChoice(name.to_string())),
                }
            }
            Step::ReflectPointOverLine { source, mirror, .. } => {
                let (b, d) = c.line_points(mirror)?;
                let (b, d, a) = (get(&pts, b), get(&pts, d), get(&pts, source));
                let dir = sub(&d, &b);
                let t = dot(&sub(&a, &b), &dir) / dot(&dir, &dir);
                let foot = (&b.0 + &t * &dir.0, &b.1 + &t * &dir.1);
                Some((&foot.0 + &foot.0 - &a.0, &foot.1 + &foot.1 - &a.1))
            }
            Step::IntersectLines { l1, l2, .. } => {
                let (p1, q1) = c.line_points(l1)?;
                let (p2, q2) = c.line_points(l2)?;
                let (p1, q1, p2, q2) = (get(&pts, p1), get(&pts, q1), get(&pts, p2), get(&pts, q2));
                let d1 = sub(&q1, &p1);
                let d2 = sub(&q2, &p2);
                let den = cross(&d1, &d2);
                if den.is_zero() {
                    return Err(degenerate(format!("{l1} and {l2} are parallel")));
                }
                let t = cross(&sub(&p2, &p1), &d2) / den;
                Some((&p1.0 + &t * &d1.0, &p1.1 + &t * &d1.1))
            }
            Step::IntersectLineCircleOther {
                line,
                circle,
                known,
                ..
            } => {
                let (u, v) = c.line_points(line)?;
                let (o, q) = c.circle_def(circle)?;
                let (u, v, o, q, k) = (
                    get(&pts, u),
                    get(&pts, v),
                    get(&pts, o),
                    get(&pts, q),
                    get(&pts, known),
                );
                let r2 = dot(&sub(&q, &o), &sub(&q, &o));
                if dot(&sub(&k, &o), &sub(&k, &o)) != r2 {
                    return Err(degenerate(format!("{known} is not on {circle}")));
                }
                let dir = sub(&v, &u);
                if !cross(&dir, &sub(&k, &u)).is_zero() {
                    return Err(degenerate(format!("{known} is not on {line}")));
                }
                let t = -Rational::from_integer(BigInt::from(2)) * dot(&sub(&k, &o), &dir) / dot(&dir, &dir);
                Some((&k.0 + &t * &dir.0, &k.1 + &t * &dir.1))
            }
            Step::Midpoint { p, q, .. } => {
                let (p, q) = (get(&pts, p), get(&pts, q));
                let half = Rational::new(1.into(), 2.into());
                Some(((&p.0 + &q.0) * &half, (&p.1 + &q.1) * &half))
            }
            Step::FootOfPerpendicular { apex, base, .. } => {
                let (b, d) = c.line_points(base)?;
                let (b, d, a) = (get(&pts, b), get(&pts, d), get(&pts, apex));
                let dir = sub(&d, &b);
                let t = dot(&sub(&a, &b), &dir) / dot(&dir, &dir);
                Some((&b.0 + &t * &dir.0, &b.1 + &t * &dir.1))
            }
        };
        if let Some(p) = value {
            pts.insert(name, p);
            order.push(name.to_string());
        }
    }
    Ok(Instance {
        coords: order
            .into_iter()
            .map(|n| {
                let p = pts.remove(n.as_str()).unwrap();
                (n, p)
            })
            .collect(),
    })
}

/// Small random rational with denominator in 1..=4.
pub fn random_rational(rng: &mut impl Rng, span: i64) -> Rational {
    let d: i64 = rng.gen_range(1..=4);
    let n: i64 = rng.gen_range(-span * d..=span * d);
    Rational::new(n.into(), d.into())
}

/// Random placement for every free and semi-free point; pinned points keep their pins.
pub fn random_choices(c: &Construction, pinning: &Pinning, rng: &mut impl Rng) -> HashMap<String, Choice> {
    let mut out = HashMap::new();
    for step in c.steps() {
        let name = step.name();
        if let Some((x, y)) = pinning.get(name) {
            out.insert(name.to_string(), Choice::Point(x.clone(), y.clone()));
        } else if step.is_free_point() {
            out.insert(
                name.to_string(),
                Choice::Point(random_rational(rng, 10), random_rational(rng, 10)),
            );
        } else if step.is_semi_free_point() {
            out.insert(name.to_string(), Choice::Param(random_rational(rng, 3)));
        }
    }
    out
}

/// First non-degenerate random instance within `attempts` tries.
pub fn random_instance(
    c: &Construction,
    pinning: &Pinning,
    rng: &mut impl Rng,
    attempts: usize,
) -> Result<Instance, GeoError> {
    let mut last = GeoError::Degenerate("no attempts".into());
    for _ in 0..attempts {
        let choices = random_choices(c, pinning, rng);
        match eval_with_choices(c, &choices) {
            Ok(inst) if inst.coincidences().is_empty() => return Ok(inst),
            Ok(_) => last = GeoError::Degenerate("coincident points".into()),
            Err(e @ GeoError::Degenerate(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
