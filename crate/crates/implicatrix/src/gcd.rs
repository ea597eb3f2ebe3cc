//! Multivariate polynomial gcd by primitive-part recursion on the last
//! occurring variable, with a pseudo-remainder sequence on primitive parts.
//! Exact over the rationals; output is integer-primitive with positive
//! leading coefficient under graded lex.

use crate::arith::{Monomial, Q, SparsePoly};
use num_traits::One;
use std::collections::BTreeMap;

/// Coefficients of `p` seen as univariate in variable `v`; keys are the
/// `v`-degrees, values have their `v`-exponent zeroed out.
fn coeffs_in_var(p: &SparsePoly, v: usize) -> BTreeMap<i64, SparsePoly> {
    let mut out: BTreeMap<i64, SparsePoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let d = m.0[v];
        let mut e = m.0.clone();
        e[v] = 0;
        out.entry(d)
            .or_insert_with(|| SparsePoly::zero(p.arity()))
            .add_term(&Monomial::new(e), c);
    }
    out
}

fn leading_in_var(p: &SparsePoly, v: usize) -> (i64, SparsePoly) {
    let coeffs = coeffs_in_var(p, v);
    let (d, c) = coeffs.into_iter().next_back().expect("nonzero");
    (d, c)
}

/// Content of `p` with respect to variable `v`: the gcd of its `v`-coefficients.
fn content_in_var(p: &SparsePoly, v: usize) -> SparsePoly {
    let mut acc = SparsePoly::zero(p.arity());
    for (_, c) in coeffs_in_var(p, v) {
        acc = poly_gcd(&acc, &c);
        if acc.total_degree() == 0 {
            break; // content already trivial
        }
    }
    acc
}

/// One full pseudo-division: returns the pseudo-remainder of `a` by `b` with
/// respect to variable `v` (premultiplying by powers of the leading
/// coefficient of `b` as needed).
fn pseudo_rem(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let (db, lb) = leading_in_var(b, v);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_in_var(&r, v);
        if dr < db {
            break;
        }
        // r = lb * r - lr * x_v^(dr-db) * b
        let mut shift = vec![0i64; a.arity()];
        shift[v] = dr - db;
        let shifted = b.mul_monomial(&Monomial::new(shift), &Q::one());
        r = lb.mul(&r).sub(&lr.mul(&shifted));
    }
    r
}

fn last_occurring_var(p: &SparsePoly, q: &SparsePoly) -> Option<usize> {
    for v in (0..p.arity()).rev() {
        if p.degree_in(v) > 0 || q.degree_in(v) > 0 {
            return Some(v);
        }
    }
    None
}

/// Greatest common divisor, primitive over the integers with positive
/// leading coefficient under graded lex. `gcd(0, q)` is the normalization
/// of `q`.
pub fn poly_gcd(p: &SparsePoly, q: &SparsePoly) -> SparsePoly {
    assert_eq!(p.arity(), q.arity(), "gcd requires equal arity");
    if p.is_zero() {
        return q.normalized();
    }
    if q.is_zero() {
        return p.normalized();
    }
    let v = match last_occurring_var(p, q) {
        None => return SparsePoly::one(p.arity()), // both constants
        Some(v) => v,
    };
    // recurse: contents in the earlier variables
    let cp = content_in_var(p, v);
    let cq = content_in_var(q, v);
    let content_gcd = poly_gcd(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides");
    let qq = q.div_exact(&cq).expect("content divides");

    // primitive PRS in x_v
    let (mut r0, mut r1) = if p.degree_in(v) >= q.degree_in(v) {
        (pp, qq)
    } else {
        (qq, pp)
    };
    loop {
        let rem = pseudo_rem(&r0, &r1, v);
        if rem.is_zero() {
            break;
        }
        let c = content_in_var(&rem, v);
        r0 = r1;
        r1 = rem.div_exact(&c).expect("content divides").normalized();
        if r1.degree_in(v) == 0 {
            // coprime in x_v: gcd is carried entirely by the contents
            return content_gcd.normalized();
        }
    }
    let c1 = content_in_var(&r1, v);
    let prim = r1.div_exact(&c1).expect("content divides");
    content_gcd.mul(&prim).normalized()
}

/// Largest `e` with `f^e` dividing `p`, together with `p / f^e`.
pub fn peel_factor(p: &SparsePoly, f: &SparsePoly) -> (u32, SparsePoly) {
    assert!(!f.is_zero() && f.total_degree() > 0);
    let mut e = 0u32;
    let mut rest = p.clone();
    while let Some(q) = rest.div_exact(f) {
        e += 1;
        rest = q;
        if rest.total_degree() == 0 {
            break;
        }
    }
    (e, rest)
}
