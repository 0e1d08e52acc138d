//! Recognition of line and circle factors of a bivariate polynomial.

use super::univariate::{gcd, rational_roots, to_dense, Dense};
use crate::groebner::{groebner_basis, GroebnerError, ResourceLimits};
use crate::polycore::{Monomial, MonomialOrder, Polynomial, Rational, Ring, VariableTable};

/// Rational solutions of a polynomial system with finitely many solutions over the
/// unknowns `vars` (indices into the ring), found by lex elimination and
/// back-substitution. Positive-dimensional parts contribute nothing.
pub(crate) fn solve_rational(
    system: &[Polynomial],
    vars: &[usize],
    limits: &ResourceLimits,
) -> Result<Vec<Vec<Rational>>, GroebnerError> {
    let polys: Vec<Polynomial> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.iter().any(|p| p.is_constant()) {
        return Ok(vec![]);
    }
    let Some((&last, rest)) = vars.split_last() else {
        return Ok(vec![vec![]]);
    };
    if polys.is_empty() {
        return Ok(vec![]);
    }
    let univariate = |ps: &[Polynomial]| -> Option<Dense> {
        ps.iter().filter_map(|p| to_dense(p, last)).reduce(|a, b| gcd(&a, &b))
    };
    let basis;
    let work: &[Polynomial] = if rest.is_empty() {
        &polys
    } else {
        basis = groebner_basis(&polys, &MonomialOrder::Lex, limits)?;
        &basis
    };
    if work.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Ok(vec![]);
    }
    let Some(u) = univariate(work) else {
        return Ok(vec![]);
    };
    let mut out = Vec::new();
    for r in rational_roots(&u) {
        let sub: Vec<Polynomial> = work.iter().map(|p| p.substitute_values(&[(last, r.clone())])).collect();
        for mut sol in solve_rational(&sub, rest, limits)? {
            sol.push(r.clone());
            out.push(sol);
        }
    }
    Ok(out)
}

fn ring_with(base: &Ring, extra: &[&str]) -> Ring {
    let names: Vec<&str> = base.names().iter().map(String::as_str).chain(extra.iter().copied()).collect();
    VariableTable::free(&names)
}

/// Coefficients of `p` as a polynomial in `x, y`, each a polynomial in the remaining variables.
fn coefficients_in(p: &Polynomial, x: usize, y: usize) -> Vec<Polynomial> {
    let mut keys: Vec<(u16, u16)> = p.terms().iter().map(|(m, _)| (m.exp(x), m.exp(y))).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(i, j)| {
            Polynomial::from_terms(
                p.ring(),
                p.terms().iter().filter(|(m, _)| m.exp(x) == i && m.exp(y) == j).map(|(m, c)| {
                    let mut e = m.exponents().to_vec();
                    e[x] = 0;
                    e[y] = 0;
                    (Monomial::from_exponents(&e), c.clone())
                }),
            )
        })
        .collect()
}

/// Linear factors `x + b·y + c` and `y + c` of `p` (a polynomial over the ring `[x, y]`)
/// with rational coefficients.
pub(crate) fn linear_factors(p: &Polynomial, limits: &ResourceLimits) -> Result<Vec<Polynomial>, GroebnerError> {
    let ring = p.ring().clone();
    if p.total_degree() == 0 {
        return Ok(vec![]);
    }
    let mut found = Vec::new();

    // x = -b·y - c
    let big = ring_with(&ring, &["#b", "#c"]);
    let q = p.embed(&big).expect("subring");
    let (b, c) = (Polynomial::var(&big, 2), Polynomial::var(&big, 3));
    let x_val = -(&(&b * &Polynomial::var(&big, 1)) + &c);
    let eqs = coefficients_in(&q.substitute(0, &x_val), 0, 1);
    for sol in solve_rational(&eqs, &[2, 3], limits)? {
        let line = &(&Polynomial::var(&ring, 0) + &Polynomial::var(&ring, 1).scale(&sol[0]))
            + &Polynomial::constant(&ring, sol[1].clone());
        found.push(line);
    }

    // y = -c
    let one = ring_with(&ring, &["#c"]);
    let q = p.embed(&one).expect("subring");
    let c = Polynomial::var(&one, 2);
    let eqs = coefficients_in(&q.substitute(1, &-c), 0, 1);
    for sol in solve_rational(&eqs, &[2], limits)? {
        let line = &Polynomial::var(&ring, 1) + &Polynomial::constant(&ring, sol[0].clone());
        found.push(line);
    }
    Ok(found.into_iter().map(|l| l.primitive().0).collect())
}

/// Circle factors `x² + y² + d·x + e·y + f` of `p` with rational `d, e, f`.
pub(crate) fn circle_factors(p: &Polynomial, limits: &ResourceLimits) -> Result<Vec<Polynomial>, GroebnerError> {
    let ring = p.ring().clone();
    if p.total_degree() < 2 {
        return Ok(vec![]);
    }
    let big = ring_with(&ring, &["#d", "#e", "#f"]);
    let q = p.embed(&big).expect("subring");
    let v = |i| Polynomial::var(&big, i);
    let circle = &(&(&(&(&v(0) * &v(0)) + &(&v(1) * &v(1))) + &(&v(2) * &v(0))) + &(&v(3) * &v(1))) + &v(4);
    // y first: the circle's leading monomial is y², so remainders are linear in y
    let ord = MonomialOrder::elimination(big.len(), &[1]);
    let (_, rem) = q.divide(std::slice::from_ref(&circle), &ord);
    let eqs = coefficients_in(&rem, 0, 1);
    let mut found = Vec::new();
    for sol in solve_rational(&eqs, &[2, 3, 4], limits)? {
        let vals = [(2, sol[0].clone()), (3, sol[1].clone()), (4, sol[2].clone())];
        let cpoly = circle.substitute_values(&vals).embed(&ring).expect("only x, y remain");
        // x² + y² = r² with r² ≤ 0 has no real points but is still a factor
        found.push(cpoly.primitive().0);
    }
    Ok(found)
}
