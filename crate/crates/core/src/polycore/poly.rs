use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::same_ring;
use super::{
    denominator_lcm, format_rational, numerator_gcd, Monomial, MonomialOrder, PolyError, Rational,
    Ring,
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are stored without zero coefficients, sorted descending under grevlex
/// over the ring's variable order; that makes equality structural.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Rational)>,
}

fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::Grevlex.cmp(a, b)
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.len()), c));
        }
        p
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Ring, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.len(), index, 1), Rational::one())],
        }
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.len());
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    /// Number of terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(var) as u32)
            .max()
            .unwrap_or(0)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Monomial, Rational), PolyError> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        // multiplication by a monomial preserves grevlex order
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomial ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                canonical_cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if other.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_map(&self.ring, acc)
    }

    /// Exact evaluation with values indexed by ring position.
    pub fn eval_at(&self, values: &[Rational]) -> Rational {
        let mut sum = Rational::zero();
        let mut pow_cache: HashMap<(usize, u16), Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let p = pow_cache
                        .entry((i, e))
                        .or_insert_with(|| num_traits::pow::pow(values[i].clone(), e as usize));
                    t *= &*p;
                }
            }
            sum += t;
        }
        sum
    }

    /// Exact evaluation with values by variable name. Every variable that occurs must be assigned.
    pub fn eval(&self, point: &HashMap<String, Rational>) -> Result<Rational, PolyError> {
        let mut values = vec![Rational::zero(); self.ring.len()];
        for i in self.variables() {
            let name = self.ring.name(i);
            values[i] = point
                .get(name)
                .cloned()
                .ok_or_else(|| PolyError::MissingAssignment(name.to_string()))?;
        }
        Ok(self.eval_at(&values))
    }

    /// Substitutes rational constants for some variables; the ring is unchanged.
    pub fn substitute_values(&self, values: &[(usize, Rational)]) -> Self {
        if values.is_empty() {
            return self.clone();
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut c = c.clone();
            for (i, v) in values {
                let e = m.exp(*i);
                if e > 0 {
                    c *= num_traits::pow::pow(v.clone(), e as usize);
                    m.exps_mut()[*i] = 0;
                }
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(&self.ring, acc)
    }

    /// Replaces variable `var` by the polynomial `value` (same ring).
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Self {
        self.assert_same_ring(value);
        let mut powers: Vec<Polynomial> = vec![Self::one(&self.ring)];
        let mut result = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.exps_mut()[var] = 0;
            result = &result + &powers[e].mul_term(&rest, c);
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(var) > 0).map(|(m, c)| {
            let e = m.exp(var);
            let mut m = m.clone();
            m.exps_mut()[var] = e - 1;
            (m, c * Rational::from_integer(BigInt::from(e)))
        });
        Self::from_terms(&self.ring, terms)
    }

    /// Re-expresses the polynomial over `target`, matching variables by name.
    pub fn embed(&self, target: &Ring) -> Result<Self, PolyError> {
        if same_ring(&self.ring, target) {
            return Ok(Polynomial {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = vec![usize::MAX; self.ring.len()];
        for i in self.variables() {
            let name = self.ring.name(i);
            map[i] = target
                .index_of(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        }
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = 0;
            }
        }
        Ok(Self::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| (m.remap(&map, target.len()), c.clone())),
        ))
    }

    /// Integer-primitive associate: denominators cleared, content removed, leading
    /// (canonical) coefficient positive. Returns the polynomial and the applied factor.
    pub fn primitive(&self) -> (Self, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let l = denominator_lcm(self.terms.iter().map(|(_, c)| c));
        let scaled: Vec<Rational> = self
            .terms
            .iter()
            .map(|(_, c)| c * Rational::from_integer(l.clone()))
            .collect();
        let g = numerator_gcd(scaled.iter());
        let mut factor = Rational::new(l, g);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        (self.scale(&factor), factor)
    }

    /// Monic under `ord`.
    pub fn monic(&self, ord: &MonomialOrder) -> Self {
        match self.leading_term(ord) {
            Ok((_, c)) => self.scale(&c.recip()),
            Err(_) => self.clone(),
        }
    }

    /// Multivariate division (descending under `ord`): `self = Σ qᵢ·divisorsᵢ + r`.
    pub fn divide(&self, divisors: &[Polynomial], ord: &MonomialOrder) -> (Vec<Polynomial>, Polynomial) {
        let leads: Vec<Option<(Monomial, Rational)>> =
            divisors.iter().map(|d| d.leading_term(ord).ok()).collect();
        let mut quotients = vec![Vec::new(); divisors.len()];
        let mut remainder = Vec::new();
        let mut p = self.clone();
        while let Ok((m, c)) = p.leading_term(ord) {
            let hit = leads.iter().enumerate().find_map(|(i, l)| {
                l.as_ref()
                    .and_then(|(lm, lc)| lm.quotient_of(&m).map(|t| (i, t, &c / lc)))
            });
            match hit {
                Some((i, t, q)) => {
                    p = &p - &divisors[i].mul_term(&t, &q);
                    quotients[i].push((t, q));
                }
                None => {
                    p = &p - &Polynomial::monomial(&self.ring, m.clone(), c.clone());
                    remainder.push((m, c));
                }
            }
        }
        (
            quotients
                .into_iter()
                .map(|q| Polynomial::from_terms(&self.ring, q))
                .collect(),
            Polynomial::from_terms(&self.ring, remainder),
        )
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let (mut q, r) = self.divide(std::slice::from_ref(d), &MonomialOrder::Lex);
        if r.is_zero() {
            q.pop()
        } else {
            None
        }
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        self.product(rhs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Sum of two polynomials over the same ring.
pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    if !same_ring(p.ring(), q.ring()) {
        return Err(PolyError::RingMismatch);
    }
    Ok(p.merge(q, false))
}

/// Product of two polynomials over the same ring.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    if !same_ring(p.ring(), q.ring()) {
        return Err(PolyError::RingMismatch);
    }
    Ok(p.product(q))
}

/// Exact value of `p` at `point`.
pub fn poly_eval(p: &Polynomial, point: &HashMap<String, Rational>) -> Result<Rational, PolyError> {
    p.eval(point)
}

pub fn leading_term(p: &Polynomial, ord: &MonomialOrder) -> Result<(Monomial, Rational), PolyError> {
    p.leading_term(ord)
}

pub(crate) fn write_monomial(f: &mut impl fmt::Write, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(ring.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                write_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
