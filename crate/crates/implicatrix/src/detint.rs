//! Packed-monomial integer kernel for fraction-free determinants.
//!
//! Monomials in up to six variables pack into one u64 (total degree in the
//! top 16 bits, one byte per exponent below), so graded-lex comparisons are
//! integer comparisons and term maps are cheap. Coefficients are BigInt;
//! rows are scaled to integers on entry and the scale divided back out of
//! the determinant, which keeps the Bareiss divisions inside the integers.

use crate::arith::{Monomial, Q, SparsePoly, Z};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub const MAX_PACK_VARS: usize = 6;

/// Packed exponent vector: `(total degree << 48) | e0 << 40 | e1 << 32 ...`
/// Numeric order on keys equals the graded-lex term order.
fn pack(exps: &[i64]) -> Option<u64> {
    let total: i64 = exps.iter().sum();
    if !(0..=0xffff).contains(&total) {
        return None;
    }
    let mut key = (total as u64) << 48;
    for (i, &e) in exps.iter().enumerate() {
        if !(0..=0xff).contains(&e) {
            return None;
        }
        key |= (e as u64) << (40 - 8 * i);
    }
    Some(key)
}

fn unpack(key: u64, nvars: usize) -> Vec<i64> {
    (0..nvars)
        .map(|i| ((key >> (40 - 8 * i)) & 0xff) as i64)
        .collect()
}

/// Does `b` divide `a` fieldwise? With disjoint byte fields this is exactly
/// the statement that `a - b` produces no borrows.
fn divisible(a: u64, b: u64) -> bool {
    let mut mask = 0xffffu64 << 48;
    if (a & mask) < (b & mask) {
        return false;
    }
    for i in 0..MAX_PACK_VARS {
        mask = 0xffu64 << (40 - 8 * i);
        if (a & mask) < (b & mask) {
            return false;
        }
    }
    true
}

type IPoly = BTreeMap<u64, Z>;

fn ipoly_is_zero(p: &IPoly) -> bool {
    p.is_empty()
}

/// accumulate sign * a * b into acc
fn mul_acc(acc: &mut IPoly, a: &IPoly, b: &IPoly, negate: bool) {
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for (ka, ca) in outer {
        for (kb, cb) in inner {
            let key = ka + kb; // disjoint fields: packed addition is exact
            let prod = ca * cb;
            let entry = acc.entry(key).or_insert_with(Z::zero);
            if negate {
                *entry -= prod;
            } else {
                *entry += prod;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
}

/// Exact division; Bareiss guarantees exactness, so a failed step is an
/// internal invariant violation.
fn div_exact(mut rem: IPoly, div: &IPoly) -> IPoly {
    let (&dk, dc) = div.iter().next_back().expect("nonzero divisor");
    let dc = dc.clone();
    let mut quot: IPoly = BTreeMap::new();
    while let Some((&rk, _)) = rem.iter().next_back() {
        assert!(divisible(rk, dk), "non-exact division in Bareiss step");
        let qk = rk - dk;
        let rc = rem.get(&rk).unwrap().clone();
        let (qc, r) = rc.div_rem(&dc);
        debug_assert!(r.is_zero(), "non-exact coefficient division");
        // rem -= qc * x^qk * div
        for (k, c) in div {
            let key = k + qk;
            let entry = rem.entry(key).or_insert_with(Z::zero);
            *entry -= &qc * c;
            if entry.is_zero() {
                rem.remove(&key);
            }
        }
        quot.insert(qk, qc);
    }
    quot
}

/// Peel rows and columns with a single nonzero entry by Laplace expansion;
/// each peel multiplies the determinant by that entry (with the sign of its
/// position) and shrinks the matrix. Syzygy matrices are sparse enough that
/// this removes a large part of the elimination work.
fn peel_singletons(a: &mut Vec<Vec<IPoly>>, sign: &mut bool) -> Option<IPoly> {
    let mut prefactor: IPoly = {
        let mut one = BTreeMap::new();
        one.insert(0u64, Z::one());
        one
    };
    loop {
        let n = a.len();
        if n == 0 {
            break;
        }
        let mut found: Option<(usize, usize)> = None;
        'scan: for i in 0..n {
            let mut nnz = None;
            let mut count = 0;
            for j in 0..n {
                if !ipoly_is_zero(&a[i][j]) {
                    count += 1;
                    nnz = Some(j);
                    if count > 1 {
                        break;
                    }
                }
            }
            match count {
                0 => return None, // zero row: determinant vanishes
                1 => {
                    found = Some((i, nnz.unwrap()));
                    break 'scan;
                }
                _ => {}
            }
        }
        if found.is_none() {
            'scan_cols: for j in 0..n {
                let mut nnz = None;
                let mut count = 0;
                for (i, row) in a.iter().enumerate() {
                    if !ipoly_is_zero(&row[j]) {
                        count += 1;
                        nnz = Some(i);
                        if count > 1 {
                            break;
                        }
                    }
                }
                match count {
                    0 => return None,
                    1 => {
                        found = Some((nnz.unwrap(), j));
                        break 'scan_cols;
                    }
                    _ => {}
                }
            }
        }
        match found {
            Some((i, j)) => {
                if (i + j) % 2 == 1 {
                    *sign = !*sign;
                }
                let entry = a[i][j].clone();
                let mut next = BTreeMap::new();
                mul_acc(&mut next, &prefactor, &entry, false);
                prefactor = next;
                a.remove(i);
                for row in a.iter_mut() {
                    row.remove(j);
                }
            }
            None => break,
        }
    }
    Some(prefactor)
}

/// Markowitz-style full pivot for step `k`: the nonzero entry in the
/// trailing submatrix minimizing (row fill - 1) * (column fill - 1), ties
/// broken by term count. Row and column swaps only permute the matrix, so
/// the fraction-free divisions stay exact.
fn select_pivot(a: &[Vec<IPoly>], k: usize) -> Option<(usize, usize)> {
    let n = a.len();
    let row_nnz: Vec<usize> = (k..n)
        .map(|i| (k..n).filter(|&j| !ipoly_is_zero(&a[i][j])).count())
        .collect();
    let col_nnz: Vec<usize> = (k..n)
        .map(|j| (k..n).filter(|&i| !ipoly_is_zero(&a[i][j])).count())
        .collect();
    let mut best: Option<(usize, usize, usize, usize)> = None; // cost, terms, i, j
    for i in k..n {
        for j in k..n {
            if ipoly_is_zero(&a[i][j]) {
                continue;
            }
            let cost = (row_nnz[i - k] - 1) * (col_nnz[j - k] - 1);
            let terms = a[i][j].len();
            let cand = (cost, terms, i, j);
            if best.map_or(true, |b| (cand.0, cand.1, cand.2, cand.3) < b) {
                best = Some(cand);
            }
        }
    }
    best.map(|(_, _, i, j)| (i, j))
}

/// Fraction-free determinant of a square grid of packed-monomial integer
/// polynomials: singleton peeling first, then Bareiss with full pivoting.
fn bareiss_packed(mut a: Vec<Vec<IPoly>>) -> IPoly {
    let mut sign = false;
    let prefactor = match peel_singletons(&mut a, &mut sign) {
        Some(f) => f,
        None => return BTreeMap::new(),
    };
    let n = a.len();
    let mut prev: IPoly = {
        let mut one = BTreeMap::new();
        one.insert(0u64, Z::one());
        one
    };
    for k in 0..n.saturating_sub(1) {
        match select_pivot(&a, k) {
            None => return BTreeMap::new(),
            Some((pi, pj)) => {
                if pi != k {
                    a.swap(k, pi);
                    sign = !sign;
                }
                if pj != k {
                    for row in a.iter_mut() {
                        row.swap(k, pj);
                    }
                    sign = !sign;
                }
            }
        }
        let pivot = a[k][k].clone();
        let col: Vec<IPoly> = (k + 1..n).map(|i| std::mem::take(&mut a[i][k])).collect();
        for i in k + 1..n {
            let aik = &col[i - k - 1];
            for j in k + 1..n {
                let mut acc: IPoly = BTreeMap::new();
                mul_acc(&mut acc, &pivot, &a[i][j], false);
                if !ipoly_is_zero(aik) && !ipoly_is_zero(&a[k][j]) {
                    mul_acc(&mut acc, aik, &a[k][j], true);
                }
                a[i][j] = if prev.len() == 1 && prev.contains_key(&0) {
                    let c = prev.get(&0).unwrap();
                    if c.is_one() {
                        acc
                    } else {
                        let mut out = BTreeMap::new();
                        for (key, v) in acc {
                            let (q, r) = v.div_rem(c);
                            debug_assert!(r.is_zero());
                            if !q.is_zero() {
                                out.insert(key, q);
                            }
                        }
                        out
                    }
                } else {
                    div_exact(acc, &prev)
                };
            }
        }
        prev = pivot;
    }
    let mut det = prefactor;
    if n > 0 {
        let core = a[n - 1][n - 1].clone();
        let mut acc = BTreeMap::new();
        mul_acc(&mut acc, &det, &core, false);
        det = acc;
    }
    if sign {
        for v in det.values_mut() {
            *v = -v.clone();
        }
    }
    det
}

/// Attempt the packed-kernel determinant: supported when the arity fits the
/// packing and every exponent is in range. Rows are scaled to integers and
/// the scaling divided back out at the end, so the result equals the exact
/// rational determinant.
pub fn packed_det(
    rows: usize,
    arity: usize,
    entries: &[SparsePoly],
) -> Option<SparsePoly> {
    if arity > MAX_PACK_VARS {
        return None;
    }
    // degree bound check and row denominator clearing
    let mut scale = Q::one();
    let mut grid: Vec<Vec<IPoly>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut lcm = Z::one();
        for c in 0..rows {
            for (_, q) in entries[r * rows + c].terms() {
                lcm = lcm.lcm(q.denom());
            }
        }
        scale = scale / Q::from_integer(lcm.clone());
        let mut row = Vec::with_capacity(rows);
        for c in 0..rows {
            let mut p: IPoly = BTreeMap::new();
            for (m, q) in entries[r * rows + c].terms() {
                let key = pack(&m.0)?;
                let v = q.numer() * (&lcm / q.denom());
                if !v.is_zero() {
                    p.insert(key, v);
                }
            }
            row.push(p);
        }
        grid.push(row);
    }
    let det = bareiss_packed(grid);
    let mut out = SparsePoly::zero(arity);
    for (key, c) in det {
        out.add_term(
            &Monomial::new(unpack(key, arity)),
            &(Q::from_integer(c) * &scale),
        );
    }
    Some(out)
}
