//! Exact linear algebra over the rationals: reduced echelon forms, null
//! space bases, ranks, and fraction-free determinants of polynomial
//! matrices.

use crate::arith::{Monomial, Q, SparsePoly, Z};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMatrix { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix * vector.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc += self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Row echelon data computed over the integers (fraction free), kept around
/// so both the rank and the null space can be read off.
struct IntEchelon {
    /// echelonized integer rows, each divided by its content
    rows: Vec<Vec<Z>>,
    /// pivot column of each echelon row, strictly increasing
    pivots: Vec<usize>,
    cols: usize,
}

/// Fraction-free row echelon of a rational matrix: rows are scaled to
/// integers, eliminated pairwise, and divided by their integer content after
/// every step to keep entries small.
fn int_echelon(m: &QMatrix) -> IntEchelon {
    let mut rows: Vec<Vec<Z>> = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut lcm = Z::one();
        for j in 0..m.cols {
            lcm = lcm.lcm(m.at(i, j).denom());
        }
        let row: Vec<Z> = (0..m.cols)
            .map(|j| {
                let q = m.at(i, j);
                q.numer() * (&lcm / q.denom())
            })
            .collect();
        rows.push(row);
    }

    let mut echelon: Vec<Vec<Z>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut work = rows;
    let mut col = 0;
    while col < m.cols && !work.is_empty() {
        // deterministic pivot: first row with a nonzero entry in this column
        let pos = work.iter().position(|r| !r[col].is_zero());
        let Some(pos) = pos else {
            col += 1;
            continue;
        };
        let pivot_row = work.swap_remove(pos);
        for r in work.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let g = pivot_row[col].gcd(&r[col]);
            let a = &r[col] / &g;
            let b = &pivot_row[col] / &g;
            let mut content = Z::zero();
            for j in 0..m.cols {
                let v = &r[j] * &b - &pivot_row[j] * &a;
                content = content.gcd(&v);
                r[j] = v;
            }
            if !content.is_zero() && !content.is_one() {
                for j in 0..m.cols {
                    r[j] = &r[j] / &content;
                }
            }
        }
        work.retain(|r| r.iter().any(|v| !v.is_zero()));
        echelon.push(pivot_row);
        pivots.push(col);
        col += 1;
    }
    IntEchelon {
        rows: echelon,
        pivots,
        cols: m.cols,
    }
}

pub fn rank(m: &QMatrix) -> usize {
    int_echelon(m).pivots.len()
}

/// Basis of the right null space of `m`.
///
/// The basis is the canonical one read off the reduced row echelon form: one
/// vector per free column, carrying 1 in its free coordinate and zeros in the
/// other free coordinates. Viewed as the columns of a matrix the basis is in
/// reduced column-echelon form with unit pivots, so the output is unique for
/// a given input. An empty matrix (zero rows) yields the standard basis; a
/// zero-column matrix yields an empty list.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Q>> {
    if m.cols == 0 {
        return Vec::new();
    }
    if m.rows == 0 {
        return (0..m.cols)
            .map(|j| {
                let mut v = vec![Q::zero(); m.cols];
                v[j] = Q::one();
                v
            })
            .collect();
    }
    let ech = int_echelon(m);
    let rank = ech.pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ech.cols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };

    let mut basis = Vec::new();
    for free in 0..ech.cols {
        if is_pivot[free] {
            continue;
        }
        // Solve the triangular system for the pivot coordinates with the
        // free coordinate set to 1 and all other free coordinates 0.
        let mut v = vec![Q::zero(); ech.cols];
        v[free] = Q::one();
        for r in (0..rank).rev() {
            let p = ech.pivots[r];
            if p > free {
                continue;
            }
            let mut acc = Q::from_integer(ech.rows[r][free].clone());
            for rr in r + 1..rank {
                let pp = ech.pivots[rr];
                if pp <= free && !ech.rows[r][pp].is_zero() && !v[pp].is_zero() {
                    acc += Q::from_integer(ech.rows[r][pp].clone()) * &v[pp];
                }
            }
            v[p] = -acc / Q::from_integer(ech.rows[r][p].clone());
        }
        basis.push(v);
    }
    basis
}

/// Rank of the scalar matrix obtained by evaluating a grid of linear forms
/// (given as coefficient vectors over the target variables) at `point`.
pub fn rank_of_linear_grid(
    entries: &[Vec<Vec<Q>>],
    point: &[Q],
) -> Result<usize, LinalgError> {
    let rows = entries.len();
    let cols = entries.first().map(|r| r.len()).unwrap_or(0);
    let mut m = QMatrix::zero(rows, cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, lin) in row.iter().enumerate() {
            if lin.len() != point.len() {
                return Err(LinalgError::DimensionMismatch {
                    expected: lin.len(),
                    got: point.len(),
                });
            }
            let mut acc = Q::zero();
            for (c, x) in lin.iter().zip(point) {
                if !c.is_zero() && !x.is_zero() {
                    acc += c * x;
                }
            }
            m.set(i, j, acc);
        }
    }
    Ok(rank(&m))
}

/// Matrix of sparse polynomials, the carrier for fraction-free determinants.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub arity: usize,
    pub entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn from_entries(rows: usize, cols: usize, arity: usize, entries: Vec<SparsePoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        debug_assert!(entries.iter().all(|p| p.arity() == arity));
        PolyMatrix {
            rows,
            cols,
            arity,
            entries,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.cols + j]
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination in the
/// polynomial ring. Every division in the elimination is exact; the final
/// pivot is the determinant.
pub fn bareiss_det(m: &PolyMatrix) -> Result<SparsePoly, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(SparsePoly::one(m.arity));
    }
    // packed-monomial integer kernel when the arity and degrees fit
    if let Some(det) = crate::detint::packed_det(n, m.arity, &m.entries) {
        return Ok(det);
    }
    let mut a: Vec<Vec<SparsePoly>> = (0..n)
        .map(|i| (0..n).map(|j| m.at(i, j).clone()).collect())
        .collect();
    let mut sign = false;
    let mut prev = SparsePoly::one(m.arity);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot search: prefer the row whose pivot has fewest terms
            let swap = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].num_terms());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(SparsePoly::zero(m.arity)),
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division must be exact");
            }
            a[i][k] = SparsePoly::zero(m.arity);
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

/// Naive cofactor-expansion determinant; the independent oracle used by the
/// test suite to pin down `bareiss_det`.
pub fn cofactor_det(m: &PolyMatrix) -> Result<SparsePoly, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    fn go(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> SparsePoly {
        let arity = m.arity;
        if rows.is_empty() {
            return SparsePoly::one(arity);
        }
        let mut acc = SparsePoly::zero(arity);
        let r = rows[0];
        for (idx, &c) in cols.iter().enumerate() {
            let e = m.at(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_rows = &rows[1..];
            let sub_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&cc| cc != c)
                .collect();
            let minor = go(m, sub_rows, &sub_cols);
            let term = e.mul(&minor);
            if idx % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..m.rows).collect();
    Ok(go(m, &idx, &idx))
}

/// Determinant of a square grid of linear forms in `nvars` target variables,
/// with coefficient vectors as entries. Small matrices go straight to
/// Bareiss; larger ones are evaluated at `deg+1` values of the last variable
/// and reassembled by Lagrange interpolation, which keeps the intermediate
/// polynomial arithmetic in one fewer variable. Entries are linear forms, so
/// the determinant is homogeneous of degree `n` and the interpolation is
/// exact.
pub fn linear_grid_det(entries: &[Vec<Vec<Q>>], nvars: usize) -> SparsePoly {
    let n = entries.len();
    let to_poly = |lin: &Vec<Q>| -> SparsePoly {
        let mut p = SparsePoly::zero(nvars);
        for (v, c) in lin.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0i64; nvars];
                exps[v] = 1;
                p.add_term(&Monomial::new(exps), c);
            }
        }
        p
    };
    if n < 24 || nvars < 2 {
        let polys: Vec<SparsePoly> = entries.iter().flat_map(|r| r.iter().map(to_poly)).collect();
        return bareiss_det(&PolyMatrix::from_entries(n, n, nvars, polys))
            .expect("square by construction");
    }
    interpolated_linear_det(entries, nvars)
}

/// Interpolation half of `linear_grid_det`, split out so tests can compare
/// it against plain Bareiss on small inputs.
fn interpolated_linear_det(entries: &[Vec<Vec<Q>>], nvars: usize) -> SparsePoly {
    let n = entries.len();
    use rayon::prelude::*;
    let last = nvars - 1;
    // n+1 sample values for the last variable
    let samples: Vec<i64> = (0..=n as i64).collect();
    let dets: Vec<SparsePoly> = samples
        .par_iter()
        .map(|&t| {
            let polys: Vec<SparsePoly> = entries
                .iter()
                .flat_map(|row| {
                    row.iter().map(|lin| {
                        // substitute x_last = t, keep the remaining variables
                        let mut p = SparsePoly::zero(nvars - 1);
                        for (v, c) in lin.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            if v == last {
                                let c2 = c * Q::from_integer(Z::from(t));
                                p.add_term(&Monomial::zero(nvars - 1), &c2);
                            } else {
                                let mut exps = vec![0i64; nvars - 1];
                                exps[v] = 1;
                                p.add_term(&Monomial::new(exps), c);
                            }
                        }
                        p
                    })
                })
                .collect();
            bareiss_det(&PolyMatrix::from_entries(n, n, nvars - 1, polys))
                .expect("square by construction")
        })
        .collect();

    // Lagrange interpolation in the last variable.
    let mut acc = SparsePoly::zero(nvars);
    for (j, dj) in dets.iter().enumerate() {
        if dj.is_zero() {
            continue;
        }
        // l_j(x) = prod_{i != j} (x - t_i) / (t_j - t_i) as univariate coeffs
        let mut num = vec![Q::one()]; // coefficients, low to high
        let mut denom = Q::one();
        for (i, &ti) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            let ti_q = Q::from_integer(Z::from(ti));
            let mut next = vec![Q::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &ti_q;
            }
            num = next;
            denom *= Q::from_integer(Z::from(samples[j] - ti));
        }
        let inv = denom.recip();
        // accumulate d_j(x0..x_{last-1}) * l_j(x_last)
        for (m, c) in dj.terms() {
            for (k, lc) in num.iter().enumerate() {
                if lc.is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps.push(k as i64);
                acc.add_term(&Monomial::new(exps), &(c * lc * &inv));
            }
        }
    }
    acc
}
