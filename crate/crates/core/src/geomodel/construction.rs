use std::collections::HashMap;
use std::fmt;

use super::GeoError;

/// One ruler-and-compass step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    FreePoint { name: String },
    PointOnCircle { name: String, circle: String },
    PointOnLine { name: String, line: String },
    CircleCenterThrough { name: String, center: String, through: String },
    LineThrough { name: String, p: String, q: String },
    SegmentOf { name: String, p: String, q: String },
    ReflectPointOverLine { name: String, source: String, mirror: String },
    IntersectLines { name: String, l1: String, l2: String },
    /// Second intersection of `line` and `circle`, `known` being the first.
    /// With `avoid_known` the algebraic form excludes the spurious solution `known`
    /// (it only coincides with `known` when the line is tangent).
    IntersectLineCircleOther {
        name: String,
        line: String,
        circle: String,
        known: String,
        avoid_known: bool,
    },
    Midpoint { name: String, p: String, q: String },
    FootOfPerpendicular { name: String, apex: String, base: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectKind {
    Point,
    Line,
    Segment,
    Circle,
}

impl ObjectKind {
    fn is_linear(self) -> bool {
        matches!(self, ObjectKind::Line | ObjectKind::Segment)
    }
}

impl Step {
    pub fn name(&self) -> &str {
        match self {
            Step::FreePoint { name }
            | Step::PointOnCircle { name, .. }
            | Step::PointOnLine { name, .. }
            | Step::CircleCenterThrough { name, .. }
            | Step::LineThrough { name, .. }
            | Step::SegmentOf { name, .. }
            | Step::ReflectPointOverLine { name, .. }
            | Step::IntersectLines { name, .. }
            | Step::IntersectLineCircleOther { name, .. }
            | Step::Midpoint { name, .. }
            | Step::FootOfPerpendicular { name, .. } => name,
        }
    }

    pub fn kind(&self) -> ObjectKind {
        match self {
            Step::CircleCenterThrough { .. } => ObjectKind::Circle,
            Step::LineThrough { .. } => ObjectKind::Line,
            Step::SegmentOf { .. } => ObjectKind::Segment,
            _ => ObjectKind::Point,
        }
    }

    /// Referenced objects with the kind each must have.
    pub(crate) fn references(&self) -> Vec<(&str, &'static [ObjectKind])> {
        const P: &[ObjectKind] = &[ObjectKind::Point];
        const L: &[ObjectKind] = &[ObjectKind::Line, ObjectKind::Segment];
        const C: &[ObjectKind] = &[ObjectKind::Circle];
        match self {
            Step::FreePoint { .. } => vec![],
            Step::PointOnCircle { circle, .. } => vec![(circle, C)],
            Step::PointOnLine { line, .. } => vec![(line, L)],
            Step::CircleCenterThrough { center, through, .. } => vec![(center, P), (through, P)],
            Step::LineThrough { p, q, .. } | Step::SegmentOf { p, q, .. } | Step::Midpoint { p, q, .. } => {
                vec![(p, P), (q, P)]
            }
            Step::ReflectPointOverLine { source, mirror, .. } => vec![(source, P), (mirror, L)],
            Step::IntersectLines { l1, l2, .. } => vec![(l1, L), (l2, L)],
            Step::IntersectLineCircleOther {
                line, circle, known, ..
            } => vec![(line, L), (circle, C), (known, P)],
            Step::FootOfPerpendicular { apex, base, .. } => vec![(apex, P), (base, L)],
        }
    }

    /// True for points carrying at least one independent parameter.
    pub fn is_free_point(&self) -> bool {
        matches!(self, Step::FreePoint { .. })
    }

    pub fn is_semi_free_point(&self) -> bool {
        matches!(self, Step::PointOnCircle { .. } | Step::PointOnLine { .. })
    }
}

/// Ordered construction; every reference points to an earlier step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Construction {
    steps: Vec<Step>,
    index: HashMap<String, usize>,
}

impl Construction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: impl IntoIterator<Item = Step>) -> Result<Self, GeoError> {
        let mut c = Self::new();
        for s in steps {
            c.push(s)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, step: Step) -> Result<(), GeoError> {
        if self.index.contains_key(step.name()) {
            return Err(GeoError::DuplicateName(step.name().to_string()));
        }
        for (name, kinds) in step.references() {
            let k = self.kind_of(name)?;
            if !kinds.contains(&k) {
                return Err(GeoError::WrongKind {
                    name: name.to_string(),
                    expected: format!("{:?}", kinds[0]).to_lowercase(),
                });
            }
        }
        self.index.insert(step.name().to_string(), self.steps.len());
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step(&self, name: &str) -> Result<&Step, GeoError> {
        self.index
            .get(name)
            .map(|&i| &self.steps[i])
            .ok_or_else(|| GeoError::DanglingReference(name.to_string()))
    }

    /// Position of the step defining `name`.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn kind_of(&self, name: &str) -> Result<ObjectKind, GeoError> {
        self.step(name).map(Step::kind)
    }

    pub fn is_point(&self, name: &str) -> bool {
        matches!(self.kind_of(name), Ok(ObjectKind::Point))
    }

    pub fn points(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| s.kind() == ObjectKind::Point)
            .map(Step::name)
            .collect()
    }

    /// Names of lines and segments.
    pub fn lines(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| s.kind().is_linear())
            .map(Step::name)
            .collect()
    }

    /// Defining points of a line or segment.
    pub fn line_points(&self, name: &str) -> Result<(&str, &str), GeoError> {
        match self.step(name)? {
            Step::LineThrough { p, q, .. } | Step::SegmentOf { p, q, .. } => Ok((p, q)),
            _ => Err(GeoError::WrongKind {
                name: name.to_string(),
                expected: "line".into(),
            }),
        }
    }

    /// Center and through-point of a circle.
    pub fn circle_def(&self, name: &str) -> Result<(&str, &str), GeoError> {
        match self.step(name)? {
            Step::CircleCenterThrough { center, through, .. } => Ok((center, through)),
            _ => Err(GeoError::WrongKind {
                name: name.to_string(),
                expected: "circle".into(),
            }),
        }
    }

    /// Replaces the step defining `name`, keeping later steps. The new step must
    /// reference only objects defined before it.
    pub fn with_replaced(&self, name: &str, step: Step) -> Result<Construction, GeoError> {
        let pos = self
            .position(name)
            .ok_or_else(|| GeoError::DanglingReference(name.to_string()))?;
        let mut steps = self.steps.clone();
        steps[pos] = step;
        Construction::from_steps(steps)
    }

    /// Copy in which every second intersection must differ from its known point.
    pub fn with_distinct_intersections(&self) -> Construction {
        let mut out = self.clone();
        for step in &mut out.steps {
            if let Step::IntersectLineCircleOther { avoid_known, .. } = step {
                *avoid_known = true;
            }
        }
        out
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::FreePoint { name } => write!(f, "point {name} free"),
            Step::PointOnCircle { name, circle } => write!(f, "point {name} on {circle}"),
            Step::PointOnLine { name, line } => write!(f, "point {name} on {line}"),
            Step::CircleCenterThrough { name, center, through } => {
                write!(f, "circle {name} center {center} through {through}")
            }
            Step::LineThrough { name, p, q } => write!(f, "line {name} {p} {q}"),
            Step::SegmentOf { name, p, q } => write!(f, "segment {name} {p} {q}"),
            Step::ReflectPointOverLine { name, source, mirror } => {
                write!(f, "point {name} reflect {source} over {mirror}")
            }
            Step::IntersectLines { name, l1, l2 } => write!(f, "point {name} intersect {l1} {l2}"),
            Step::IntersectLineCircleOther {
                name,
                line,
                circle,
                known,
                avoid_known,
            } => {
                write!(f, "point {name} intersect {line} {circle} other {known}")?;
                if *avoid_known {
                    write!(f, " distinct")?;
                }
                Ok(())
            }
            Step::Midpoint { name, p, q } => write!(f, "midpoint {name} {p} {q}"),
            Step::FootOfPerpendicular { name, apex, base } => write!(f, "foot {name} {apex} {base}"),
        }
    }
}
