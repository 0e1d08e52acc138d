//! Dense univariate polynomials over Q (coefficient `i` multiplies `x^i`), and
//! gcds in two variables built on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::polycore::{denominator_lcm, Monomial, Polynomial, Rational};

pub(crate) type Dense = Vec<Rational>;

pub(crate) fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, with `None` for the zero polynomial.
pub(crate) fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rational]) -> Dense {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

/// Remainder of `a` divided by nonzero `b`.
fn rem(a: &[Rational], b: &[Rational]) -> Dense {
    let db = degree(b).expect("nonzero divisor");
    let mut r = trim(a.to_vec());
    let lb = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let q = &r[dr] / &lb;
        for i in 0..=db {
            let v = &q * &b[i];
            r[dr - db + i] -= v;
        }
        r = trim(r);
    }
    r
}

/// Exact quotient of `a` by nonzero `b` (assumes divisibility).
fn quo(a: &[Rational], b: &[Rational]) -> Dense {
    let db = degree(b).expect("nonzero divisor");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else { return vec![] };
    if da < db {
        return vec![];
    }
    let mut q = vec![Rational::zero(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &b[db];
        for i in 0..=db {
            let v = &c * &b[i];
            r[dr - db + i] -= v;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    q
}

fn monic(p: Dense) -> Dense {
    match degree(&p) {
        Some(d) => {
            let lc = p[d].clone();
            p.into_iter().take(d + 1).map(|c| c / &lc).collect()
        }
        None => vec![],
    }
}

/// Monic gcd.
pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Dense {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while degree(&b).is_some() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn square_free(p: &[Rational]) -> Dense {
    let g = gcd(p, &derivative(p));
    if degree(&g).unwrap_or(0) == 0 {
        monic(p.to_vec())
    } else {
        monic(quo(p, &g))
    }
}

fn sign_changes(seq: &[Dense], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

fn sturm(p: &[Rational]) -> Vec<Dense> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]).is_none() {
            seq.pop();
            break;
        }
        let r: Dense = rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if degree(&r).is_none() {
            break;
        }
        seq.push(r);
    }
    seq
}

/// All rational roots, ascending. Real roots are isolated with a Sturm sequence and
/// each isolating interval is narrowed until it holds at most two candidates `k/lc`.
pub(crate) fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let p = square_free(p);
    let Some(d) = degree(&p) else { return vec![] };
    if d == 0 {
        return vec![];
    }
    // integer coefficients
    let l = Rational::from_integer(denominator_lcm(p.iter()));
    let p: Dense = p.iter().map(|c| c * &l).collect();
    let lc = p[d].abs();
    let bound = Rational::one()
        + p[..d]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |m, v| if v > m { v } else { m });
    let seq = sturm(&p);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if n == 0 {
            continue;
        }
        if (&hi - &lo) * &lc < Rational::one() {
            // candidates k/lc in (lo, hi]
            let mut k = (&lo * &lc).floor().to_integer() + BigInt::one();
            let top = (&hi * &lc).floor().to_integer();
            while k <= top {
                let r = Rational::new(k.clone(), lc.to_integer());
                if eval(&p, &r).is_zero() {
                    roots.push(r);
                }
                k += 1;
            }
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Dense coefficients of a polynomial involving only variable `var`.
pub(crate) fn to_dense(p: &Polynomial, var: usize) -> Option<Dense> {
    if p.variables().iter().any(|&v| v != var) {
        return None;
    }
    let d = p.degree_in(var) as usize;
    let mut out = vec![Rational::zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.exp(var) as usize] = c.clone();
    }
    Some(trim(out))
}

pub(crate) fn from_dense(p: &[Rational], like: &Polynomial, var: usize) -> Polynomial {
    let ring = like.ring();
    Polynomial::from_terms(
        ring,
        p.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(ring.len(), var, i as u16), c.clone())),
    )
}

/// Coefficient of `var^k`, as a polynomial in the other variables.
pub(crate) fn coeff(p: &Polynomial, var: usize, k: u32) -> Polynomial {
    Polynomial::from_terms(
        p.ring(),
        p.terms().iter().filter(|(m, _)| u32::from(m.exp(var)) == k).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e[var] = 0;
            (Monomial::from_exponents(&e), c.clone())
        }),
    )
}

/// Gcd in `Q[x, y]` where `x = main`, `y = other` are the only variables.
pub(crate) fn gcd2(a: &Polynomial, b: &Polynomial, main: usize, other: usize) -> Polynomial {
    if a.is_zero() {
        return b.primitive().0;
    }
    if b.is_zero() {
        return a.primitive().0;
    }
    let (ca, pa) = split_content(a, main, other);
    let (cb, pb) = split_content(b, main, other);
    let c = gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(main) >= pb.degree_in(main) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while g.degree_in(main) > 0 {
        let r = prem(&f, &g, main);
        if r.is_zero() {
            break;
        }
        f = g;
        g = split_content(&r, main, other).1;
    }
    let last = if g.degree_in(main) == 0 {
        // g is a nonzero element of Q[y]; it is primitive, hence constant
        Polynomial::one(a.ring())
    } else {
        g
    };
    (&last * &from_dense(&c, a, other)).primitive().0
}

/// Content (in `other`) and primitive part with respect to `main`.
fn split_content(p: &Polynomial, main: usize, other: usize) -> (Dense, Polynomial) {
    let mut cont: Dense = vec![];
    for k in 0..=p.degree_in(main) {
        let ck = coeff(p, main, k);
        if ck.is_zero() {
            continue;
        }
        let d = to_dense(&ck, other).expect("bivariate");
        cont = if cont.is_empty() { monic(d) } else { gcd(&cont, &d) };
    }
    let cpoly = from_dense(&cont, p, other);
    let pp = p.div_exact(&cpoly).expect("content divides");
    (cont, pp)
}

/// Pseudo-remainder of `a` by `b` in `main`.
fn prem(a: &Polynomial, b: &Polynomial, main: usize) -> Polynomial {
    let db = b.degree_in(main);
    let lb = coeff(b, main, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(main) >= db {
        let dr = r.degree_in(main);
        let lr = coeff(&r, main, dr);
        let shift = Monomial::var(r.ring().len(), main, (dr - db) as u16);
        r = &(&lb * &r) - &(&lr * &b.mul_term(&shift, &Rational::one()));
    }
    r
}

/// Square-free part in `Q[x, y]`: `p / gcd(p, ∂p/∂x, ∂p/∂y)`.
pub(crate) fn square_free_part(p: &Polynomial, x: usize, y: usize) -> Polynomial {
    let g = gcd2(&p.derivative(x), &p.derivative(y), x, y);
    let g = gcd2(p, &g, x, y);
    if g.is_constant() {
        p.primitive().0
    } else {
        p.div_exact(&g).expect("gcd divides").primitive().0
    }
}
