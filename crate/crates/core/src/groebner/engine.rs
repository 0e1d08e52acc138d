//! Buchberger's algorithm with optional cofactor tracking.

use std::collections::HashMap;

use num_traits::One;

use super::terms::{self, Terms};
use super::{trace_enabled, Budget, GroebnerError};
use crate::polycore::{Monomial, MonomialOrder, Rational};

struct Elem {
    poly: Terms,
    lm: Monomial,
    mask: u64,
    /// `poly = Σ_l cof[l]·h_l`
    cof: Option<Vec<Terms>>,
    active: bool,
    /// Sugar degree: the degree the element would have in a homogenized run.
    sugar: u32,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u32,
    sugar: u32,
}

/// Outcome of a reduction: remainder plus the multiplier used for each element.
pub(crate) struct Reduced {
    pub remainder: Terms,
    pub quotients: Vec<(usize, Terms)>,
    pub sugar: u32,
}

/// Pair selection rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Strategy {
    /// Smallest sugar degree first.
    Sugar,
    /// Smallest lcm degree first.
    Normal,
}

pub(crate) struct Engine<'a> {
    ord: &'a MonomialOrder,
    strategy: Strategy,
    nvars: usize,
    ngens: usize,
    track: bool,
    elems: Vec<Elem>,
    pairs: Vec<Pair>,
    budget: &'a Budget,
    spairs_processed: usize,
}

pub(crate) struct EngineOutput {
    pub elements: Vec<Terms>,
    pub cofactors: Option<Vec<Vec<Terms>>>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        ord: &'a MonomialOrder,
        nvars: usize,
        ngens: usize,
        track: bool,
        budget: &'a Budget,
    ) -> Self {
        Engine {
            ord,
            strategy: Strategy::Sugar,
            nvars,
            ngens,
            track,
            elems: Vec::new(),
            pairs: Vec::new(),
            budget,
            spairs_processed: 0,
        }
    }

    pub(crate) fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Reducer over a fixed list of (monic or not) polynomials.
    pub(crate) fn with_elements(
        ord: &'a MonomialOrder,
        nvars: usize,
        polys: Vec<Terms>,
        budget: &'a Budget,
    ) -> Self {
        let mut e = Self::new(ord, nvars, 0, false, budget);
        for p in polys {
            let lm = p.last().map(|(m, _)| m.clone());
            if let Some(lm) = lm {
                e.elems.push(Elem {
                    mask: lm.support_mask(),
                    lm,
                    poly: p,
                    cof: None,
                    active: true,
                    sugar: 0,
                });
            } else {
                // keep indices aligned with the caller's list
                e.elems.push(Elem {
                    poly: Vec::new(),
                    lm: Monomial::one(nvars),
                    mask: 0,
                    cof: None,
                    active: false,
                    sugar: 0,
                });
            }
        }
        e
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        self.elems.iter().position(|e| {
            e.active && e.mask & !mask == 0 && e.lm.divides(m)
        })
    }

    /// Reduces `p` (ascending) by the active elements. With `full`, tails are reduced too.
    pub(crate) fn reduce(&self, p: Terms, full: bool, want_quotients: bool) -> Result<Reduced, GroebnerError> {
        let sugar = p.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        self.reduce_sugar(p, sugar, full, want_quotients)
    }

    fn reduce_sugar(
        &self,
        mut p: Terms,
        mut sugar: u32,
        full: bool,
        want_quotients: bool,
    ) -> Result<Reduced, GroebnerError> {
        let mut rem_desc: Terms = Vec::new();
        let mut quots: HashMap<usize, Terms> = HashMap::new();
        let mut steps = 0usize;
        while let Some((m, c)) = p.last() {
            steps += 1;
            if steps.is_multiple_of(64) {
                self.budget.check()?;
            }
            self.budget.check_terms(p.len())?;
            match self.find_reducer(m) {
                Some(k) => {
                    let e = &self.elems[k];
                    let t = e.lm.quotient_of(m).expect("divisible");
                    let lc = &e.poly.last().unwrap().1;
                    let q = if lc.is_one() { c.clone() } else { c / lc };
                    sugar = sugar.max(e.sugar + t.degree());
                    p = terms::sub_mul(&p, &q, &t, &e.poly, self.ord);
                    if want_quotients {
                        quots.entry(k).or_default().push((t, q));
                    }
                }
                None => {
                    if !full {
                        break;
                    }
                    rem_desc.push(p.pop().unwrap());
                }
            }
        }
        let remainder = if full {
            rem_desc.reverse();
            rem_desc
        } else {
            p
        };
        let mut quotients: Vec<(usize, Terms)> = quots
            .into_iter()
            .map(|(k, mut q)| {
                q.reverse();
                (k, q)
            })
            .collect();
        quotients.sort_by_key(|(k, _)| *k);
        Ok(Reduced {
            remainder,
            quotients,
            sugar,
        })
    }

    /// `Σ mult_k · cof_k (+ base)`, scaled by `factor`.
    fn combine_cofactors(&self, parts: &[(usize, Terms, bool)], base: Option<usize>, factor: &Rational) -> Vec<Terms> {
        let one = Monomial::one(self.nvars);
        (0..self.ngens)
            .map(|l| {
                let mut acc: HashMap<Monomial, Rational> = HashMap::new();
                if base == Some(l) {
                    acc.insert(one.clone(), Rational::one());
                }
                for (k, mult, negate) in parts {
                    let c = &self.elems[*k].cof.as_ref().expect("tracked")[l];
                    if *negate {
                        let neg: Terms = mult.iter().map(|(m, a)| (m.clone(), -a)).collect();
                        terms::accumulate(&mut acc, &neg, c);
                    } else {
                        terms::accumulate(&mut acc, mult, c);
                    }
                }
                let mut t = terms::finish(acc, self.ord);
                terms::scale(&mut t, factor);
                t
            })
            .collect()
    }

    fn insert(&mut self, poly: Terms, cof: Option<Vec<Terms>>, sugar: u32) {
        let lm = poly.last().unwrap().0.clone();
        let h = self.elems.len();
        self.elems.push(Elem {
            mask: lm.support_mask(),
            lm: lm.clone(),
            poly,
            cof,
            active: true,
            sugar,
        });
        self.update(h);
    }

    /// Gebauer–Möller pair update for the new element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.elems[h].lm.clone();
        let active: Vec<usize> = (0..h).filter(|&g| self.elems[g].active).collect();
        let cand: Vec<(usize, Monomial)> = active
            .iter()
            .map(|&g| (g, self.elems[g].lm.lcm(&lm_h)))
            .collect();
        // chain criterion among new pairs
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g, l)) in cand.iter().enumerate() {
            let coprime = self.elems[*g].lm.coprime(&lm_h);
            let dominated = cand[idx + 1..]
                .iter()
                .chain(kept.iter())
                .any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        // product criterion
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !self.elems[*g].lm.coprime(&lm_h))
            .map(|(g, l)| {
                let (eg, eh) = (&self.elems[g], &self.elems[h]);
                let sugar = (eg.sugar + l.degree() - eg.lm.degree()).max(eh.sugar + l.degree() - eh.lm.degree());
                Pair {
                    i: g,
                    j: h,
                    degree: l.degree(),
                    lcm: l,
                    sugar,
                }
            })
            .collect();
        // drop old pairs made redundant by h
        let elems = &self.elems;
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || elems[p.i].lm.lcm(&lm_h) == p.lcm
                || elems[p.j].lm.lcm(&lm_h) == p.lcm
        });
        // new pairs with equal lcm: keep one
        let mut seen: Vec<Monomial> = Vec::new();
        for p in new_pairs {
            if !seen.contains(&p.lcm) {
                seen.push(p.lcm.clone());
                self.pairs.push(p);
            }
        }
        for g in active {
            if lm_h.divides(&self.elems[g].lm) {
                self.elems[g].active = false;
            }
        }
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ord;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                let key = |p: &Pair| match self.strategy {
                    Strategy::Sugar => p.sugar,
                    Strategy::Normal => p.degree,
                };
                key(pa)
                    .cmp(&key(pb))
                    .then_with(|| ord.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    fn normalize(&self, mut r: Terms, cof: Option<Vec<Terms>>) -> (Terms, Option<Vec<Terms>>) {
        let lc = r.last().unwrap().1.clone();
        if lc.is_one() {
            return (r, cof);
        }
        let inv = lc.recip();
        terms::scale(&mut r, &inv);
        let cof = cof.map(|mut cs| {
            for c in cs.iter_mut() {
                terms::scale(c, &inv);
            }
            cs
        });
        (r, cof)
    }

    fn is_unit_found(&self) -> bool {
        self.elems
            .iter()
            .any(|e| e.active && e.lm.is_one())
    }

    /// Runs the completion on `gens` (ascending under the order).
    pub(crate) fn run_counting(self, gens: Vec<Terms>, spairs: &mut usize) -> Result<EngineOutput, GroebnerError> {
        self.run_inner(gens).map(|(out, n)| {
            *spairs = n;
            out
        })
    }

    fn run_inner(mut self, gens: Vec<Terms>) -> Result<(EngineOutput, usize), GroebnerError> {
        for (j, g) in gens.into_iter().enumerate() {
            if g.is_empty() {
                continue;
            }
            let red = self.reduce(g, true, self.track)?;
            if red.remainder.is_empty() {
                continue;
            }
            let cof = if self.track {
                let parts: Vec<(usize, Terms, bool)> =
                    red.quotients.into_iter().map(|(k, q)| (k, q, true)).collect();
                Some(self.combine_cofactors(&parts, Some(j), &Rational::one()))
            } else {
                None
            };
            let sugar = red.sugar;
            let (r, cof) = self.normalize(red.remainder, cof);
            self.insert(r, cof, sugar);
            if self.is_unit_found() {
                break;
            }
        }

        while !self.is_unit_found() {
            let Some(pair) = self.select_pair() else { break };
            self.budget.check()?;
            self.spairs_processed += 1;
            let (ei, ej) = (&self.elems[pair.i], &self.elems[pair.j]);
            let ti = ei.lm.quotient_of(&pair.lcm).unwrap();
            let tj = ej.lm.quotient_of(&pair.lcm).unwrap();
            let si = terms::mul_term(&ei.poly, &Rational::one(), &ti);
            let s = terms::sub_mul(&si, &Rational::one(), &tj, &ej.poly, self.ord);
            let red = self.reduce_sugar(s, pair.sugar, true, self.track)?;
            if trace_enabled() {
                eprintln!(
                    "[groebner] spair ({}, {}) deg {} -> {}",
                    pair.i,
                    pair.j,
                    pair.degree,
                    if red.remainder.is_empty() {
                        "0".to_string()
                    } else {
                        format!("new element, {} terms, {} bits", red.remainder.len(), red.remainder.iter().map(|(_, c)| c.numer().bits() + c.denom().bits()).max().unwrap_or(0))
                    }
                );
            }
            if red.remainder.is_empty() {
                continue;
            }
            let cof = if self.track {
                let mut parts: Vec<(usize, Terms, bool)> = vec![
                    (pair.i, vec![(ti, Rational::one())], false),
                    (pair.j, vec![(tj, Rational::one())], true),
                ];
                parts.extend(red.quotients.into_iter().map(|(k, q)| (k, q, true)));
                let c = self.combine_cofactors(&parts, None, &Rational::one());
                for t in &c {
                    self.budget.check_terms(t.len())?;
                }
                Some(c)
            } else {
                None
            };
            let sugar = red.sugar;
            let (r, cof) = self.normalize(red.remainder, cof);
            self.insert(r, cof, sugar);
        }

        let n = self.spairs_processed;
        self.interreduce().map(|o| (o, n))
    }

    fn interreduce(mut self) -> Result<EngineOutput, GroebnerError> {
        if let Some(u) = self.elems.iter().position(|e| e.active && e.lm.is_one()) {
            let e = &self.elems[u];
            let (poly, cof) = self.normalize(e.poly.clone(), e.cof.clone());
            return Ok(EngineOutput {
                elements: vec![poly],
                cofactors: cof.map(|c| vec![c]),
            });
        }
        let mut order: Vec<usize> = (0..self.elems.len())
            .filter(|&k| self.elems[k].active)
            .collect();
        order.sort_by(|&a, &b| self.ord.cmp(&self.elems[a].lm, &self.elems[b].lm));
        let mut elements = Vec::with_capacity(order.len());
        let mut cofactors = Vec::with_capacity(order.len());
        for &k in &order {
            // reduce the tail of k by the other elements
            let mut poly = self.elems[k].poly.clone();
            let head = poly.pop().unwrap();
            self.elems[k].active = false;
            let red = self.reduce(poly, true, self.track)?;
            self.elems[k].active = true;
            let mut reduced = red.remainder;
            reduced.push(head);
            let cof = if self.track {
                let mut parts: Vec<(usize, Terms, bool)> =
                    vec![(k, vec![(Monomial::one(self.nvars), Rational::one())], false)];
                parts.extend(red.quotients.into_iter().map(|(q, t)| (q, t, true)));
                Some(self.combine_cofactors(&parts, None, &Rational::one()))
            } else {
                None
            };
            elements.push(reduced);
            cofactors.push(cof);
        }
        // apply all at once so later reductions used the pre-reduction elements consistently
        for (slot, &k) in order.iter().enumerate() {
            self.elems[k].poly = elements[slot].clone();
            self.elems[k].cof = cofactors[slot].clone();
        }
        let cofactors = if self.track {
            Some(cofactors.into_iter().map(|c| c.unwrap()).collect())
        } else {
            None
        };
        Ok(EngineOutput {
            elements,
            cofactors,
        })
    }
}
