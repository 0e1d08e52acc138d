//! SVG picture of a construction instance and its locus.

use std::fmt::Write as _;

use crate::geomodel::{Construction, Instance, Step};
use crate::locus::{implicit_plot_data, BBox, Classification, LocusError, LocusResult, Polyline};
use crate::polycore::{to_f64, Polynomial, Rational, VariableTable};

const STYLE: &str = "\
.construction{fill:none;stroke:#888;stroke-width:1}
.valid{fill:none;stroke:#c00;stroke-width:2}
.degenerate{fill:none;stroke:#36c;stroke-width:1.5;stroke-dasharray:6 4}
.unknown{fill:none;stroke:#a6a;stroke-width:1.5;stroke-dasharray:2 3}
.residual{fill:none;stroke:#e80;stroke-width:1.5}
.point{fill:#000}
text{font:12px sans-serif}";

/// Square box around the instance's points with a margin.
pub fn auto_bbox(inst: &Instance) -> BBox {
    let xs: Vec<f64> = inst.coords.iter().map(|(_, (x, _))| to_f64(x)).collect();
    let ys: Vec<f64> = inst.coords.iter().map(|(_, (_, y))| to_f64(y)).collect();
    let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
    let (x0, x1) = (fold(&xs, f64::min, 0.0), fold(&xs, f64::max, 0.0));
    let (y0, y1) = (fold(&ys, f64::min, 0.0), fold(&ys, f64::max, 0.0));
    let half = ((x1 - x0).max(y1 - y0) / 2.0).max(1.0) * 1.6;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    BBox::new(cx - half, cy - half, cx + half, cy + half)
}

struct Canvas<'a> {
    bbox: &'a BBox,
    size: f64,
    out: String,
}

impl Canvas<'_> {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let b = self.bbox;
        (
            (x - b.xmin) / (b.xmax - b.xmin) * self.size,
            self.size - (y - b.ymin) / (b.ymax - b.ymin) * self.size,
        )
    }

    fn path(&mut self, class: &str, line: &Polyline) {
        if line.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, &p) in line.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.2} {y:.2}", if i == 0 { "M" } else { " L" });
        }
        let _ = writeln!(self.out, r#"<path class="{class}" d="{d}"/>"#);
    }
}

fn xy(p: &(Rational, Rational)) -> (f64, f64) {
    (to_f64(&p.0), to_f64(&p.1))
}

enum Layer<'a> {
    Nothing,
    EntirePlane,
    Curve(&'a LocusResult),
}

/// Standalone SVG: the construction at `inst`, VALID components solid, DEGENERATE
/// dashed, the residual curve in its own class. `None` marks a locus covering the
/// whole plane.
pub fn emit_svg(
    locus: Option<&LocusResult>,
    c: &Construction,
    inst: &Instance,
    bbox: &BBox,
    size: u32,
) -> Result<String, LocusError> {
    render(locus.map_or(Layer::EntirePlane, Layer::Curve), c, inst, bbox, size)
}

/// The construction alone.
pub fn emit_construction_svg(c: &Construction, inst: &Instance, bbox: &BBox, size: u32) -> Result<String, LocusError> {
    render(Layer::Nothing, c, inst, bbox, size)
}

fn render(layer: Layer<'_>, c: &Construction, inst: &Instance, bbox: &BBox, size: u32) -> Result<String, LocusError> {
    let plane = VariableTable::free(&["x", "y"]);
    // validates the box
    implicit_plot_data(&Polynomial::var(&plane, 0), bbox, 2)?;
    let mut cv = Canvas {
        bbox,
        size: size as f64,
        out: String::new(),
    };
    let _ = writeln!(
        cv.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(cv.out, "<style>\n{STYLE}\n</style>");
    let scale = cv.size / (bbox.xmax - bbox.xmin);
    for step in c.steps() {
        match step {
            Step::CircleCenterThrough { center, through, .. } => {
                let (Ok(o), Ok(t)) = (inst.get(center), inst.get(through)) else { continue };
                let (o, t) = (xy(o), xy(t));
                let r = ((t.0 - o.0).powi(2) + (t.1 - o.1).powi(2)).sqrt() * scale;
                let (x, y) = cv.map(o);
                let _ = writeln!(cv.out, r#"<circle class="construction" cx="{x:.2}" cy="{y:.2}" r="{r:.2}"/>"#);
            }
            Step::SegmentOf { p, q, .. } => {
                let (Ok(a), Ok(b)) = (inst.get(p), inst.get(q)) else { continue };
                cv.path("construction", &vec![xy(a), xy(b)]);
            }
            Step::LineThrough { p, q, .. } => {
                let (Ok(a), Ok(b)) = (inst.get(p), inst.get(q)) else { continue };
                if a == b {
                    continue;
                }
                let x = Polynomial::var(&plane, 0);
                let y = Polynomial::var(&plane, 1);
                let k = |v: &Rational| Polynomial::constant(&plane, v.clone());
                let line = &(&(&x - &k(&a.0)) * &k(&(&b.1 - &a.1))) - &(&(&y - &k(&a.1)) * &k(&(&b.0 - &a.0)));
                for pl in implicit_plot_data(&line, bbox, 2)? {
                    cv.path("construction", &pl);
                }
            }
            _ => {}
        }
    }
    match layer {
        Layer::Curve(l) => {
            for comp in &l.components {
                let class = match comp.classification {
                    Classification::Valid => "valid",
                    Classification::Degenerate => "degenerate",
                    Classification::Unknown => "unknown",
                };
                for pl in implicit_plot_data(&comp.poly, bbox, 200)? {
                    cv.path(class, &pl);
                }
            }
            if !l.residual.is_constant() {
                for pl in implicit_plot_data(&l.residual, bbox, 200)? {
                    cv.path("residual", &pl);
                }
            }
        }
        Layer::EntirePlane => {
            let _ = writeln!(cv.out, r#"<text x="10" y="20">locus: entire plane</text>"#);
        }
        Layer::Nothing => {}
    }
    for (name, p) in &inst.coords {
        let (x, y) = cv.map(xy(p));
        let _ = writeln!(cv.out, r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
        let _ = writeln!(cv.out, r#"<text x="{:.2}" y="{:.2}">{name}</text>"#, x + 5.0, y - 5.0);
    }
    cv.out.push_str("</svg>\n");
    Ok(cv.out)
}
