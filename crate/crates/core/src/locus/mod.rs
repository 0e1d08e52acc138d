//! Locus equations of a mover point, split into line and circle components that
//! are classified by exact sampling.

mod factor;
mod plot;
mod univariate;

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geomodel::{
    algebraize, eval_with_choices, predicate_value, random_choices, random_rational, x_var, y_var, Choice,
    Construction, GeoError, Instance, Pinning, Predicate, Step,
};
use crate::groebner::{eliminate, GroebnerError, ResourceLimits};
use crate::polycore::{int, Polynomial, Rational, Ring, VariableTable};
use crate::reasoner::{prove, ProofResult};

pub use plot::{implicit_plot_data, BBox, Polyline};
use univariate::{rational_roots, square_free_part};
#[cfg(test)]
use univariate::gcd2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocusError {
    #[error("the locus is the entire plane")]
    EmptyLocus,
    #[error("no position of {0} satisfies the predicate")]
    NoSolutions(String),
    #[error("resource limit exceeded: {0}")]
    Timeout(String),
    #[error("{0} is not a free point")]
    NotFree(String),
    #[error("free point {0} must be pinned for a locus run")]
    NotPinned(String),
    #[error("degenerate plot box")]
    DegenerateBox,
    #[error(transparent)]
    Geo(#[from] GeoError),
}

impl From<GroebnerError> for LocusError {
    fn from(e: GroebnerError) -> Self {
        LocusError::Timeout(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComponentKind {
    Line,
    Circle,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Degenerate,
    Valid,
    Unknown,
}

impl ComponentKind {
    pub fn of(p: &Polynomial) -> ComponentKind {
        match p.total_degree() {
            1 => ComponentKind::Line,
            2 if circle_coefficients(p).is_some() => ComponentKind::Circle,
            _ => ComponentKind::Other,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Component {
    /// In the mover's coordinates.
    pub poly: Polynomial,
    pub kind: ComponentKind,
    pub classification: Classification,
    /// Non-degenerate instance with the mover on the component where the predicate holds.
    pub witness: Option<Instance>,
    /// Symbolic check with the component added as a hypothesis on the mover.
    pub proof: Option<ProofResult>,
}

impl Component {
    pub fn new(poly: Polynomial) -> Self {
        Component {
            kind: ComponentKind::of(&poly),
            poly,
            classification: Classification::Unknown,
            witness: None,
            proof: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocusResult {
    pub mover: String,
    /// Square-free, over the ring `[mover_x, mover_y]`.
    pub locus_poly: Polynomial,
    pub components: Vec<Component>,
    /// What is left after removing all components (possibly a constant).
    pub residual: Polynomial,
    /// Further generators of the elimination ideal.
    pub other_generators: Vec<Polynomial>,
    /// True if square factors were removed from the eliminant.
    pub squarefree_reduced: bool,
}

impl LocusResult {
    /// Π components × residual equals the locus polynomial up to a scalar.
    pub fn reconstructs(&self) -> bool {
        let prod = self
            .components
            .iter()
            .fold(self.residual.clone(), |acc, c| &acc * &c.poly);
        prod.primitive().0 == self.locus_poly.primitive().0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocusOptions {
    /// Sample points per component.
    pub samples: usize,
    pub seed: u64,
    /// Prove VALID components symbolically.
    pub escalate: bool,
}

impl Default for LocusOptions {
    fn default() -> Self {
        LocusOptions {
            samples: 5,
            seed: 1,
            escalate: true,
        }
    }
}

fn check_pre(c: &Construction, mover: &str, pinning: &Pinning) -> Result<(), LocusError> {
    if !matches!(c.step(mover)?, Step::FreePoint { .. }) {
        return Err(LocusError::NotFree(mover.to_string()));
    }
    if pinning.contains_key(mover) {
        return Err(LocusError::NotFree(mover.to_string()));
    }
    for s in c.steps() {
        if s.is_free_point() && s.name() != mover && !pinning.contains_key(s.name()) {
            return Err(LocusError::NotPinned(s.name().to_string()));
        }
    }
    Ok(())
}

/// Locus of `mover` such that `pred` holds, with components classified.
pub fn locus_equation(
    c: &Construction,
    pred: &Predicate,
    mover: &str,
    pinning: &Pinning,
    limits: &ResourceLimits,
) -> Result<LocusResult, LocusError> {
    locus_equation_with(c, pred, mover, pinning, limits, &LocusOptions::default())
}

pub fn locus_equation_with(
    c: &Construction,
    pred: &Predicate,
    mover: &str,
    pinning: &Pinning,
    limits: &ResourceLimits,
    opts: &LocusOptions,
) -> Result<LocusResult, LocusError> {
    check_pre(c, mover, pinning)?;
    let sys = algebraize(c, pred, pinning)?;
    if sys.thesis.is_zero() {
        return Err(LocusError::EmptyLocus);
    }
    let (mx, my) = (x_var(mover), y_var(mover));
    let keep = [
        sys.ring.index_of(&mx).expect("free mover"),
        sys.ring.index_of(&my).expect("free mover"),
    ];
    let drop: Vec<usize> = (0..sys.ring.len()).filter(|i| !keep.contains(i)).collect();
    let mut gens = sys.hypotheses.clone();
    gens.push(sys.thesis.clone());
    let elim = eliminate(&gens, &drop, limits)?;
    if elim.is_empty() {
        return Err(LocusError::EmptyLocus);
    }
    if elim.iter().any(Polynomial::is_constant) {
        return Err(LocusError::NoSolutions(mover.to_string()));
    }
    let plane = VariableTable::free(&[mx.as_str(), my.as_str()]);
    let mut gens2: Vec<Polynomial> = elim
        .iter()
        .map(|g| g.embed(&plane).expect("eliminant").primitive().0)
        .collect();
    gens2.sort_by_cached_key(|g| (g.total_degree(), g.to_string()));
    let eliminant = gens2.remove(0);
    let locus_poly = square_free_part(&eliminant, 0, 1);
    let squarefree_reduced = locus_poly.total_degree() < eliminant.total_degree();

    let candidates = geometric_candidates(c, pinning, mover, &plane)?;
    let (components, residual) = extract_components(&locus_poly, &candidates, limits);
    let components = classify_all(c, pred, mover, pinning, components, opts, limits);
    let out = LocusResult {
        mover: mover.to_string(),
        locus_poly,
        components,
        residual,
        other_generators: gens2,
        squarefree_reduced,
    };
    debug_assert!(out.reconstructs());
    Ok(out)
}

fn sort_components(comps: &mut [Component]) {
    comps.sort_by_cached_key(|c| (c.poly.total_degree(), c.poly.to_string()));
}

/// Splits `p` into line and circle components: trial division by `candidates`, then
/// searches for rational lines and circles. Whatever cannot be split is the residual.
pub fn extract_components(
    p: &Polynomial,
    candidates: &[Polynomial],
    limits: &ResourceLimits,
) -> (Vec<Component>, Polynomial) {
    let mut residual = p.primitive().0;
    let mut comps: Vec<Polynomial> = Vec::new();
    let take = |residual: &mut Polynomial, f: &Polynomial, comps: &mut Vec<Polynomial>| {
        if f.total_degree() == 0 || comps.contains(f) {
            return;
        }
        if let Some(q) = residual.div_exact(f) {
            comps.push(f.clone());
            *residual = q.primitive().0;
        }
    };
    for cand in candidates {
        take(&mut residual, &cand.primitive().0, &mut comps);
    }
    if let Ok(lines) = factor::linear_factors(&residual, limits) {
        for l in lines {
            take(&mut residual, &l, &mut comps);
        }
    }
    if let Ok(circles) = factor::circle_factors(&residual, limits) {
        for c in circles {
            take(&mut residual, &c, &mut comps);
        }
    }
    let mut comps: Vec<Component> = comps.into_iter().map(Component::new).collect();
    sort_components(&mut comps);
    (comps, residual)
}

/// Points whose position does not depend on the mover or on any unpinned parameter.
fn fixed_objects<'a>(c: &'a Construction, pinning: &Pinning, mover: &str) -> HashSet<&'a str> {
    let mut fixed: HashSet<&str> = HashSet::new();
    for s in c.steps() {
        let name = s.name();
        let ok = if s.is_free_point() || s.is_semi_free_point() {
            name != mover && pinning.contains_key(name)
        } else {
            s.references().iter().all(|(r, _)| fixed.contains(r))
        };
        if ok {
            fixed.insert(name);
        }
    }
    fixed
}

/// Curves suggested by the construction at the pinning: the construction's circles,
/// lines through pairs of fixed points and their perpendicular bisectors.
pub fn geometric_candidates(
    c: &Construction,
    pinning: &Pinning,
    mover: &str,
    plane: &Ring,
) -> Result<Vec<Polynomial>, LocusError> {
    let fixed = fixed_objects(c, pinning, mover);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut inst = None;
    for _ in 0..32 {
        if let Ok(i) = eval_with_choices(c, &random_choices(c, pinning, &mut rng)) {
            inst = Some(i);
            break;
        }
    }
    let Some(inst) = inst else { return Ok(vec![]) };
    let pos = |n: &str| inst.get(n).cloned();
    let (x, y) = (Polynomial::var(plane, 0), Polynomial::var(plane, 1));
    let k = |q: &Rational| Polynomial::constant(plane, q.clone());
    let mut out: Vec<Polynomial> = Vec::new();
    for s in c.steps() {
        if let Step::CircleCenterThrough { name, center, through } = s {
            if fixed.contains(name.as_str()) {
                let (o, t) = (pos(center)?, pos(through)?);
                let r2 = (&t.0 - &o.0) * (&t.0 - &o.0) + (&t.1 - &o.1) * (&t.1 - &o.1);
                let dx = &x - &k(&o.0);
                let dy = &y - &k(&o.1);
                out.push(&(&(&dx * &dx) + &(&dy * &dy)) - &k(&r2));
            }
        }
    }
    let pts: Vec<(Rational, Rational)> = {
        let mut v: Vec<(Rational, Rational)> = Vec::new();
        for s in c.steps() {
            if c.is_point(s.name()) && fixed.contains(s.name()) {
                let p = pos(s.name())?;
                if !v.contains(&p) {
                    v.push(p);
                }
            }
        }
        v
    };
    let two = int(2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p, q) = (&pts[i], &pts[j]);
            // (q - p) × (X - p) = 0
            let line = &(&(&x - &k(&p.0)) * &k(&(&q.1 - &p.1))) - &(&(&y - &k(&p.1)) * &k(&(&q.0 - &p.0)));
            out.push(line);
            // (q - p) · (X - m) = 0
            let (m0, m1) = ((&p.0 + &q.0) / &two, (&p.1 + &q.1) / &two);
            let bis = &(&(&x - &k(&m0)) * &k(&(&q.0 - &p.0))) + &(&(&y - &k(&m1)) * &k(&(&q.1 - &p.1)));
            out.push(bis);
        }
    }
    let mut uniq: Vec<Polynomial> = Vec::new();
    for p in out.into_iter().map(|p| p.primitive().0) {
        if !p.is_constant() && !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    Ok(uniq)
}

/// `(d, e, f)` with `p ∝ x² + y² + d·x + e·y + f`.
fn circle_coefficients(p: &Polynomial) -> Option<(Rational, Rational, Rational)> {
    if p.total_degree() != 2 {
        return None;
    }
    let mut c: HashMap<(u16, u16), Rational> = HashMap::new();
    for (m, v) in p.terms() {
        c.insert((m.exp(0), m.exp(1)), v.clone());
    }
    let a = c.get(&(2, 0))?.clone();
    if c.get(&(0, 2)) != Some(&a) || c.contains_key(&(1, 1)) {
        return None;
    }
    let g = |k| c.get(&k).cloned().unwrap_or_else(Rational::zero) / &a;
    Some((g((1, 0)), g((0, 1)), g((0, 0))))
}

fn scan_points(p: &Polynomial, n: usize, rng: &mut ChaCha8Rng) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    let mut xs: Vec<Rational> = (-12..=12).map(int).collect();
    xs.extend((0..40).map(|_| random_rational(rng, 12)));
    for xv in xs {
        let py = p.substitute_values(&[(0, xv.clone())]);
        let Some(d) = univariate::to_dense(&py, 1) else { continue };
        if univariate::degree(&d).is_none() {
            continue;
        }
        for yv in rational_roots(&d) {
            if !out.contains(&(xv.clone(), yv.clone())) {
                out.push((xv.clone(), yv));
            }
        }
        if out.len() >= n {
            break;
        }
    }
    out.truncate(n);
    out
}

/// Up to `n` distinct rational points on `p = 0`.
pub fn sample_points(p: &Polynomial, n: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params: Vec<Rational> = Vec::new();
    while params.len() < n {
        let t = random_rational(&mut rng, 6);
        if !params.contains(&t) {
            params.push(t);
        }
    }
    match ComponentKind::of(p) {
        ComponentKind::Line => {
            let coef = |i: u16, j: u16| {
                p.terms()
                    .iter()
                    .find(|(m, _)| m.exp(0) == i && m.exp(1) == j)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rational::zero)
            };
            let (a, b, c) = (coef(1, 0), coef(0, 1), coef(0, 0));
            params
                .into_iter()
                .map(|t| {
                    if !b.is_zero() {
                        let y = -(&a * &t + &c) / &b;
                        (t, y)
                    } else {
                        (-&c / &a, t)
                    }
                })
                .collect()
        }
        ComponentKind::Circle => {
            let (d, e, _) = circle_coefficients(p).expect("circle");
            let two = int(2);
            let o = (-&d / &two, -&e / &two);
            let Some(p0) = scan_points(p, 1, &mut rng).pop() else {
                return vec![];
            };
            let v = (&p0.0 - &o.0, &p0.1 - &o.1);
            let mut out = vec![p0.clone()];
            for t in params {
                let den = Rational::one() + &t * &t;
                let cos = (Rational::one() - &t * &t) / &den;
                let sin = (&t + &t) / &den;
                let q = (&o.0 + &cos * &v.0 - &sin * &v.1, &o.1 + &sin * &v.0 + &cos * &v.1);
                if !out.contains(&q) {
                    out.push(q);
                }
            }
            out.truncate(n);
            out
        }
        ComponentKind::Other => scan_points(p, n, &mut rng),
    }
}

enum Sample {
    Degenerate,
    Holds(Instance),
    Fails,
}

fn sample_at(c: &Construction, pred: &Predicate, mover: &str, pinning: &Pinning, pt: &(Rational, Rational), rng: &mut ChaCha8Rng) -> Sample {
    let mut choices = random_choices(c, pinning, rng);
    choices.insert(mover.to_string(), Choice::Point(pt.0.clone(), pt.1.clone()));
    match eval_with_choices(c, &choices) {
        Ok(inst) if inst.coincidences().is_empty() => match predicate_value(pred, &inst) {
            Ok(v) if v.is_zero() => Sample::Holds(inst),
            Ok(_) => Sample::Fails,
            Err(_) => Sample::Degenerate,
        },
        _ => Sample::Degenerate,
    }
}

/// Classifies a component by placing the mover at rational points on it.
///
/// DEGENERATE if the construction degenerates at every sample; VALID if the predicate
/// holds at every non-degenerate sample (with the first as witness); UNKNOWN otherwise.
/// VALID components are then proved with the component as a hypothesis on the mover.
pub fn classify_component(
    c: &Construction,
    pred: &Predicate,
    mover: &str,
    pinning: &Pinning,
    comp: Component,
    opts: &LocusOptions,
    limits: &ResourceLimits,
) -> Component {
    let mut comp = comp;
    let pts = sample_points(&comp.poly, opts.samples, opts.seed);
    comp.classification = Classification::Unknown;
    comp.witness = None;
    if pts.is_empty() {
        return comp;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut degenerate, mut fails) = (0, 0);
    let mut witness = None;
    for pt in &pts {
        match sample_at(c, pred, mover, pinning, pt, &mut rng) {
            Sample::Degenerate => degenerate += 1,
            Sample::Fails => fails += 1,
            Sample::Holds(inst) => {
                witness.get_or_insert(inst);
            }
        }
    }
    if degenerate == pts.len() {
        comp.classification = Classification::Degenerate;
    } else if fails == 0 && witness.is_some() {
        comp.classification = Classification::Valid;
        comp.witness = witness;
        if opts.escalate {
            comp.proof = algebraize(c, pred, pinning)
                .and_then(|sys| sys.constrain_point(mover, &comp.poly))
                .ok()
                .map(|sys| prove(&sys, limits));
        }
    }
    comp
}

fn classify_all(
    c: &Construction,
    pred: &Predicate,
    mover: &str,
    pinning: &Pinning,
    comps: Vec<Component>,
    opts: &LocusOptions,
    limits: &ResourceLimits,
) -> Vec<Component> {
    std::thread::scope(|s| {
        let handles: Vec<_> = comps
            .into_iter()
            .map(|comp| s.spawn(move || classify_component(c, pred, mover, pinning, comp, opts, limits)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("classifier panicked")).collect()
    })
}
