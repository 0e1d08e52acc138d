//! Term vectors sorted ascending under a fixed order (leading term last).

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;

use crate::polycore::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

pub(crate) type Terms = Vec<(Monomial, Rational)>;

pub(crate) fn from_poly(p: &Polynomial, ord: &MonomialOrder) -> Terms {
    let mut t = p.terms().to_vec();
    t.sort_by(|a, b| ord.cmp(&a.0, &b.0));
    t
}

pub(crate) fn to_poly(t: &Terms, ring: &Ring) -> Polynomial {
    Polynomial::from_terms(ring, t.iter().cloned())
}

/// `p - c * t * g`, all ascending under `ord`.
pub(crate) fn sub_mul(
    p: &[(Monomial, Rational)],
    c: &Rational,
    t: &Monomial,
    g: &[(Monomial, Rational)],
    ord: &MonomialOrder,
) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm: Option<Monomial> = g.first().map(|(m, _)| m.mul(t));
    while i < p.len() || j < g.len() {
        // Less: p's term comes first; Greater: the g term comes first
        let cmp = match (&gm, i < p.len()) {
            (None, _) => Ordering::Less,
            (Some(_), false) => Ordering::Greater,
            (Some(m), true) => ord.cmp(&p[i].0, m),
        };
        match cmp {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((gm.take().unwrap(), -(c * &g[j].1)));
                j += 1;
                gm = g.get(j).map(|(m, _)| m.mul(t));
            }
            Ordering::Equal => {
                let v = &p[i].1 - c * &g[j].1;
                if !v.is_zero() {
                    out.push((gm.take().unwrap(), v));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|(m, _)| m.mul(t));
            }
        }
    }
    out
}

pub(crate) fn mul_term(g: &[(Monomial, Rational)], c: &Rational, t: &Monomial) -> Terms {
    g.iter().map(|(m, a)| (m.mul(t), a * c)).collect()
}

pub(crate) fn scale(g: &mut Terms, c: &Rational) {
    for (_, a) in g.iter_mut() {
        *a *= c;
    }
}

/// Accumulates `Σ mult·poly` into a hash map.
pub(crate) fn accumulate(acc: &mut HashMap<Monomial, Rational>, mult: &[(Monomial, Rational)], poly: &[(Monomial, Rational)]) {
    for (mm, mc) in mult {
        for (pm, pc) in poly {
            let v = mc * pc;
            match acc.entry(mm.mul(pm)) {
                std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += v,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
            }
        }
    }
}

pub(crate) fn finish(acc: HashMap<Monomial, Rational>, ord: &MonomialOrder) -> Terms {
    let mut t: Terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    t.sort_by(|a, b| ord.cmp(&a.0, &b.0));
    t
}
