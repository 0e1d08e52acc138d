//! Polylines tracing `p = 0` inside a box, for display.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::{circle_coefficients, ComponentKind, LocusError};
use crate::polycore::{from_f64_coarse, to_f64, Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        BBox { xmin, ymin, xmax, ymax }
    }

    fn is_degenerate(&self) -> bool {
        !(self.xmin.is_finite() && self.xmax.is_finite() && self.ymin.is_finite() && self.ymax.is_finite())
            || self.xmax <= self.xmin
            || self.ymax <= self.ymin
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        let eps = 1e-9 * (self.xmax - self.xmin).max(self.ymax - self.ymin);
        x >= self.xmin - eps && x <= self.xmax + eps && y >= self.ymin - eps && y <= self.ymax + eps
    }
}

pub type Polyline = Vec<(f64, f64)>;

/// Contour of `p = 0` over the plane ring `[x, y]`. Lines and circles are drawn
/// analytically; anything else by marching squares on a `resolution × resolution`
/// grid with exact sign tests at the nodes.
pub fn implicit_plot_data(p: &Polynomial, bbox: &BBox, resolution: usize) -> Result<Vec<Polyline>, LocusError> {
    if bbox.is_degenerate() || resolution < 2 {
        return Err(LocusError::DegenerateBox);
    }
    Ok(match ComponentKind::of(p) {
        ComponentKind::Line => line_segment(p, bbox).into_iter().collect(),
        ComponentKind::Circle => circle_polyline(p, bbox).into_iter().collect(),
        ComponentKind::Other if p.total_degree() == 0 => vec![],
        ComponentKind::Other => marching_squares(p, bbox, resolution),
    })
}

fn term(p: &Polynomial, i: u16, j: u16) -> f64 {
    p.terms()
        .iter()
        .find(|(m, _)| m.exp(0) == i && m.exp(1) == j)
        .map(|(_, c)| to_f64(c))
        .unwrap_or(0.0)
}

fn line_segment(p: &Polynomial, b: &BBox) -> Option<Polyline> {
    let (a, bb, c) = (term(p, 1, 0), term(p, 0, 1), term(p, 0, 0));
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if bb != 0.0 {
        for x in [b.xmin, b.xmax] {
            hits.push((x, -(a * x + c) / bb));
        }
    }
    if a != 0.0 {
        for y in [b.ymin, b.ymax] {
            hits.push((-(bb * y + c) / a, y));
        }
    }
    hits.retain(|&q| b.contains(q));
    // order along the direction (-b, a)
    hits.sort_by(|u, v| (-bb * u.0 + a * u.1).total_cmp(&(-bb * v.0 + a * v.1)));
    let (first, last) = (*hits.first()?, *hits.last()?);
    Some(vec![first, last])
}

fn circle_polyline(p: &Polynomial, b: &BBox) -> Option<Polyline> {
    let (d, e, f) = circle_coefficients(p)?;
    let (cx, cy) = (-to_f64(&d) / 2.0, -to_f64(&e) / 2.0);
    let r2 = cx * cx + cy * cy - to_f64(&f);
    if r2 <= 0.0 {
        return None;
    }
    let r = r2.sqrt();
    let n = 180;
    let mut pts: Polyline = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            (cx + r * t.cos(), cy + r * t.sin())
        })
        .collect();
    pts.push(pts[0]);
    pts.iter().any(|&q| b.contains(q)).then_some(pts)
}

fn marching_squares(p: &Polynomial, b: &BBox, n: usize) -> Vec<Polyline> {
    let xs: Vec<Rational> = (0..=n)
        .map(|i| from_f64_coarse(b.xmin + (b.xmax - b.xmin) * i as f64 / n as f64))
        .collect();
    let ys: Vec<Rational> = (0..=n)
        .map(|j| from_f64_coarse(b.ymin + (b.ymax - b.ymin) * j as f64 / n as f64))
        .collect();
    let mut val = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (i, x) in xs.iter().enumerate() {
        let col = p.substitute_values(&[(0, x.clone())]);
        for (j, y) in ys.iter().enumerate() {
            val[i][j] = col.substitute_values(&[(1, y.clone())]).constant_value().unwrap_or_else(Rational::zero);
        }
    }
    let pos = |i: usize, j: usize| !val[i][j].is_negative();
    let fx = |i: usize| to_f64(&xs[i]);
    let fy = |j: usize| to_f64(&ys[j]);
    // crossing on the edge between two nodes; edges are keyed so neighbours share points
    let cross = |a: (usize, usize), c: (usize, usize)| -> (f64, f64) {
        let va = to_f64(&val[a.0][a.1]);
        let vc = to_f64(&val[c.0][c.1]);
        let t = if (va - vc).abs() > 0.0 && va.is_finite() && vc.is_finite() {
            (va / (va - vc)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        (fx(a.0) + t * (fx(c.0) - fx(a.0)), fy(a.1) + t * (fy(c.1) - fy(a.1)))
    };
    type Edge = ((usize, usize), (usize, usize));
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let edges: Vec<Edge> = (0..4)
                .filter(|&k| pos(corners[k].0, corners[k].1) != pos(corners[(k + 1) % 4].0, corners[(k + 1) % 4].1))
                .map(|k| {
                    let (u, v) = (corners[k], corners[(k + 1) % 4]);
                    if u < v { (u, v) } else { (v, u) }
                })
                .collect();
            match edges.len() {
                2 => segments.push((edges[0], edges[1])),
                4 => {
                    // saddle: pair edges so that the center's side stays connected
                    let mid = (&xs[i] + &xs[i + 1]) / Rational::from_integer(2.into());
                    let midy = (&ys[j] + &ys[j + 1]) / Rational::from_integer(2.into());
                    let center = !p.substitute_values(&[(0, mid), (1, midy)]).constant_value().unwrap_or_else(Rational::zero).is_negative();
                    if center == pos(i, j) {
                        segments.push((edges[0], edges[3]));
                        segments.push((edges[1], edges[2]));
                    } else {
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    }
                }
                _ => {}
            }
        }
    }
    stitch(segments, |e| cross(e.0, e.1))
}

/// Joins segments sharing endpoints into polylines.
fn stitch<E: Copy + Eq + std::hash::Hash + Ord>(segments: Vec<(E, E)>, point: impl Fn(E) -> (f64, f64)) -> Vec<Polyline> {
    let mut at: HashMap<E, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(k);
        at.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = std::collections::VecDeque::from([a, b]);
        for forward in [true, false] {
            loop {
                let end = if forward { *chain.back().unwrap() } else { *chain.front().unwrap() };
                let next = at[&end].iter().copied().find(|&k| !used[k]);
                let Some(k) = next else { break };
                used[k] = true;
                let (u, v) = segments[k];
                let other = if u == end { v } else { u };
                if forward {
                    chain.push_back(other);
                } else {
                    chain.push_front(other);
                }
            }
        }
        out.push(chain.into_iter().map(&point).collect());
    }
    out
}
