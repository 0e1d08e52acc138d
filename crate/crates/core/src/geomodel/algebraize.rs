use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{Construction, GeoError, Instance, Predicate, Step};
use crate::polycore::{int, Polynomial, Rational, Ring, VarKind, VariableTable};

/// Rational coordinates for some free (or semi-free) points.
pub type Pinning = BTreeMap<String, (Rational, Rational)>;

/// Hypotheses, thesis and the coordinate binding of every point.
#[derive(Clone, Debug)]
pub struct AlgebraicSystem {
    pub ring: Ring,
    pub hypotheses: Vec<Polynomial>,
    /// Step that emitted each hypothesis.
    pub origins: Vec<String>,
    pub thesis: Polynomial,
    /// Coordinates of each point, in construction order: variables or pinned constants.
    pub coords: Vec<(String, [Polynomial; 2])>,
}

enum Coord {
    Var(String),
    Const(Rational),
}

pub(crate) fn x_var(p: &str) -> String {
    format!("{p}_x")
}

pub(crate) fn y_var(p: &str) -> String {
    format!("{p}_y")
}

fn det(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Polynomial::zero(&ring);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * &det(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

type P2 = [Polynomial; 2];

fn sub2(a: &P2, b: &P2) -> P2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn dot(a: &P2, b: &P2) -> Polynomial {
    &(&a[0] * &b[0]) + &(&a[1] * &b[1])
}

fn cross(a: &P2, b: &P2) -> Polynomial {
    &(&a[0] * &b[1]) - &(&a[1] * &b[0])
}

fn norm2(a: &P2) -> Polynomial {
    dot(a, a)
}

/// Vanishes iff `a`, `b`, `c` are collinear (3×3 determinant with rows `(x, y, 1)`).
pub fn collinear_poly(a: &P2, b: &P2, c: &P2) -> Polynomial {
    let one = Polynomial::one(a[0].ring());
    det(&[
        vec![a[0].clone(), a[1].clone(), one.clone()],
        vec![b[0].clone(), b[1].clone(), one.clone()],
        vec![c[0].clone(), c[1].clone(), one],
    ])
}

/// Vanishes iff the four points lie on a common circle or line
/// (4×4 determinant with rows `(x²+y², x, y, 1)`).
pub fn concyclic_poly(pts: [&P2; 4]) -> Polynomial {
    let one = Polynomial::one(pts[0][0].ring());
    let rows: Vec<Vec<Polynomial>> = pts
        .iter()
        .map(|p| vec![norm2(p), p[0].clone(), p[1].clone(), one.clone()])
        .collect();
    det(&rows)
}

impl AlgebraicSystem {
    pub fn point(&self, name: &str) -> Result<&P2, GeoError> {
        self.coords
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| GeoError::DanglingReference(name.to_string()))
    }

    pub fn vars_of_kind(&self, kind: VarKind) -> Vec<usize> {
        self.ring.indices_of_kind(kind)
    }

    pub fn free_vars(&self) -> Vec<usize> {
        self.vars_of_kind(VarKind::Free)
    }

    /// Dependent and auxiliary variables.
    pub fn bound_vars(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.ring.kind(i) != VarKind::Free)
            .collect()
    }

    /// Polynomial whose vanishing expresses `pred`.
    pub fn predicate_poly(&self, pred: &Predicate) -> Result<Polynomial, GeoError> {
        let pt = |n: &String| self.point(n);
        let pair = |p: &[String; 2]| -> Result<P2, GeoError> { Ok(sub2(pt(&p[1])?, pt(&p[0])?)) };
        Ok(match pred {
            Predicate::Concyclic(p) => {
                concyclic_poly([pt(&p[0])?, pt(&p[1])?, pt(&p[2])?, pt(&p[3])?])
            }
            Predicate::Collinear(p) => collinear_poly(pt(&p[0])?, pt(&p[1])?, pt(&p[2])?),
            Predicate::EqualLength(a, b) => &norm2(&pair(a)?) - &norm2(&pair(b)?),
            Predicate::Perpendicular(a, b) => dot(&pair(a)?, &pair(b)?),
            Predicate::Parallel(a, b) => cross(&pair(a)?, &pair(b)?),
        })
    }

    /// Values of all ring variables at an instance.
    pub fn values_at(&self, inst: &Instance) -> Result<Vec<Rational>, GeoError> {
        let mut values = vec![Rational::zero(); self.ring.len()];
        for (name, _) in &self.coords {
            let (x, y) = inst.get(name)?;
            if let Some(i) = self.ring.index_of(&x_var(name)) {
                values[i] = x.clone();
            }
            if let Some(i) = self.ring.index_of(&y_var(name)) {
                values[i] = y.clone();
            }
        }
        Ok(values)
    }

    /// Adds the constraint `poly = 0` on a point whose coordinates were both free.
    /// The ordinate becomes dependent (the abscissa if `poly` does not involve the ordinate).
    pub fn constrain_point(&self, point: &str, poly: &Polynomial) -> Result<AlgebraicSystem, GeoError> {
        let xi = self.ring.index_of(&x_var(point));
        let yi = self.ring.index_of(&y_var(point));
        let (Some(xi), Some(yi)) = (xi, yi) else {
            return Err(GeoError::PinNonFree(point.to_string()));
        };
        let h = poly.embed(&self.ring)?;
        let dep = if h.degree_in(yi) > 0 { yi } else { xi };
        let table = self
            .ring
            .reclassified(self.ring.name(dep), VarKind::Dependent)?;
        let ring: Ring = Arc::new(table);
        let move_poly = |p: &Polynomial| p.embed(&ring).expect("same names");
        let mut out = AlgebraicSystem {
            ring: ring.clone(),
            hypotheses: self.hypotheses.iter().map(move_poly).collect(),
            origins: self.origins.clone(),
            thesis: move_poly(&self.thesis),
            coords: self
                .coords
                .iter()
                .map(|(n, [x, y])| (n.clone(), [move_poly(x), move_poly(y)]))
                .collect(),
        };
        out.hypotheses.push(move_poly(&h).primitive().0);
        out.origins.push(format!("{point} on component"));
        Ok(out)
    }
}

/// Polynomial hypotheses of a construction (thesis zero).
pub fn algebraize_construction(c: &Construction, pinning: &Pinning) -> Result<AlgebraicSystem, GeoError> {
    for name in pinning.keys() {
        let step = c.step(name)?;
        if !(step.is_free_point() || step.is_semi_free_point()) {
            return Err(GeoError::PinNonFree(name.clone()));
        }
    }

    // pass 1: variables
    let mut vars: Vec<(String, VarKind)> = Vec::new();
    let mut coord_spec: Vec<(String, [Coord; 2])> = Vec::new();
    for step in c.steps() {
        let name = step.name();
        if !c.is_point(name) {
            continue;
        }
        if let Some((x, y)) = pinning.get(name) {
            coord_spec.push((name.to_string(), [Coord::Const(x.clone()), Coord::Const(y.clone())]));
            continue;
        }
        let (kx, ky) = match step {
            Step::FreePoint { .. } => (VarKind::Free, VarKind::Free),
            Step::PointOnCircle { .. } | Step::PointOnLine { .. } => (VarKind::Free, VarKind::Dependent),
            _ => (VarKind::Dependent, VarKind::Dependent),
        };
        vars.push((x_var(name), kx));
        vars.push((y_var(name), ky));
        coord_spec.push((name.to_string(), [Coord::Var(x_var(name)), Coord::Var(y_var(name))]));
    }
    // later constructions rank higher, as in triangular elimination
    vars.reverse();
    let ring: Ring = Arc::new(VariableTable::new(vars)?);
    let to_poly = |c: &Coord| -> Polynomial {
        match c {
            Coord::Var(v) => Polynomial::var_named(&ring, v).expect("declared"),
            Coord::Const(q) => Polynomial::constant(&ring, q.clone()),
        }
    };
    let coords: Vec<(String, P2)> = coord_spec
        .iter()
        .map(|(n, [x, y])| (n.clone(), [to_poly(x), to_poly(y)]))
        .collect();
    let pt = |n: &str| -> &P2 {
        &coords.iter().find(|(m, _)| m == n).expect("point defined").1
    };
    let line = |l: &str| -> Result<(&P2, &P2), GeoError> {
        let (p, q) = c.line_points(l)?;
        Ok((pt(p), pt(q)))
    };
    let circle = |k: &str| -> Result<(&P2, &P2), GeoError> {
        let (o, q) = c.circle_def(k)?;
        Ok((pt(o), pt(q)))
    };
    let on_circle = |p: &P2, o: &P2, q: &P2| &norm2(&sub2(p, o)) - &norm2(&sub2(q, o));

    // pass 2: hypotheses
    let mut hyps: Vec<(String, Polynomial)> = Vec::new();
    for step in c.steps() {
        let name = step.name().to_string();
        let pinned = pinning.contains_key(&name);
        let mut emit: Vec<Polynomial> = Vec::new();
        match step {
            Step::FreePoint { .. }
            | Step::CircleCenterThrough { .. }
            | Step::LineThrough { .. }
            | Step::SegmentOf { .. } => {}
            Step::PointOnCircle { circle: k, .. } => {
                let (o, q) = circle(k)?;
                emit.push(on_circle(pt(&name), o, q));
            }
            Step::PointOnLine { line: l, .. } => {
                let (a, b) = line(l)?;
                emit.push(collinear_poly(a, b, pt(&name)));
            }
            Step::ReflectPointOverLine { source, mirror, .. } => {
                let (b, d) = line(mirror)?;
                let a = pt(source);
                let img = pt(&name);
                let half = Rational::new(1.into(), 2.into());
                let mid = [
                    (&a[0] + &img[0]).scale(&half),
                    (&a[1] + &img[1]).scale(&half),
                ];
                emit.push(collinear_poly(b, d, &mid));
                emit.push(dot(&sub2(img, a), &sub2(d, b)));
            }
            Step::IntersectLines { l1, l2, .. } => {
                let (a, b) = line(l1)?;
                emit.push(collinear_poly(a, b, pt(&name)));
                let (a, b) = line(l2)?;
                emit.push(collinear_poly(a, b, pt(&name)));
            }
            Step::IntersectLineCircleOther {
                line: l,
                circle: k,
                known,
                avoid_known,
                ..
            } => {
                let (a, b) = line(l)?;
                let e = pt(&name);
                emit.push(collinear_poly(a, b, e));
                let (o, q) = circle(k)?;
                if *avoid_known {
                    // the chord's midpoint is the foot of the center: linear, and free of e = known
                    let k = pt(known);
                    let chord = [&(&e[0] + &k[0]) - &o[0].scale(&int(2)), &(&e[1] + &k[1]) - &o[1].scale(&int(2))];
                    emit.push(dot(&chord, &sub2(b, a)));
                } else {
                    emit.push(on_circle(e, o, q));
                }
            }
            Step::Midpoint { p, q, .. } => {
                let m = pt(&name);
                let two = Rational::from_integer(2.into());
                emit.push(&m[0].scale(&two) - &(&pt(p)[0] + &pt(q)[0]));
                emit.push(&m[1].scale(&two) - &(&pt(p)[1] + &pt(q)[1]));
            }
            Step::FootOfPerpendicular { apex, base, .. } => {
                let (b, d) = line(base)?;
                let f = pt(&name);
                emit.push(collinear_poly(b, d, f));
                emit.push(dot(&sub2(f, pt(apex)), &sub2(d, b)));
            }
        }
        for h in emit {
            match h.constant_value() {
                Some(v) if v.is_zero() => {}
                Some(_) if pinned => return Err(GeoError::PinNotOnObject(name.clone())),
                Some(_) => return Err(GeoError::Inconsistent(name.clone())),
                None if pinned => return Err(GeoError::PinNotOnObject(name.clone())),
                None => hyps.push((name.clone(), h.primitive().0)),
            }
        }
    }

    let (origins, hypotheses) = hyps.into_iter().unzip();
    Ok(AlgebraicSystem {
        thesis: Polynomial::zero(&ring),
        ring,
        hypotheses,
        origins,
        coords,
    })
}

/// Hypotheses of `c` and the thesis polynomial of `pred`.
pub fn algebraize(c: &Construction, pred: &Predicate, pinning: &Pinning) -> Result<AlgebraicSystem, GeoError> {
    pred.validate(c)?;
    let mut sys = algebraize_construction(c, pinning)?;
    sys.thesis = sys.predicate_poly(pred)?.primitive().0;
    Ok(sys)
}

/// Exact value of the predicate polynomial at an instance; zero iff the predicate holds there.
pub fn predicate_value(pred: &Predicate, inst: &Instance) -> Result<Rational, GeoError> {
    let ring: Ring = Arc::new(VariableTable::new(Vec::<(String, VarKind)>::new())?);
    let coords = inst
        .coords
        .iter()
        .map(|(n, (x, y))| {
            (
                n.clone(),
                [Polynomial::constant(&ring, x.clone()), Polynomial::constant(&ring, y.clone())],
            )
        })
        .collect();
    let sys = AlgebraicSystem {
        thesis: Polynomial::zero(&ring),
        ring,
        hypotheses: vec![],
        origins: vec![],
        coords,
    };
    let p = sys.predicate_poly(pred)?;
    Ok(p.constant_value().unwrap_or_else(Rational::zero))
}
