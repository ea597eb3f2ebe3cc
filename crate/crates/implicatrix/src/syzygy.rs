//! Graded strands of linear syzygies and Koszul cycles.
//!
//! Syzygies are computed per degree by solving one linear system, never as a
//! module presentation; higher cycle strands exist only for the Euler
//! characteristic and determinant-degree bookkeeping of the complex.

use crate::arith::{Monomial, Q};
use crate::linalg::{kernel_basis, rank, QMatrix};
use crate::ring::{Deg, RingElement, RingError, ToricRing};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SyzygyError {
    #[error("map components must share a degree, found {0:?} and {1:?}")]
    DegreeMismatch(Vec<i64>, Vec<i64>),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Basis of the degree-`nu` strand of linear syzygies of `h`: tuples
/// `(a_0, ..., a_n)` of degree-`nu` elements with `sum a_i h_i = 0`.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    pub nu: Deg,
    pub generators: Vec<Vec<RingElement>>,
}

impl SyzygyBasis {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }
}

pub(crate) fn deg_add(a: &[i64], b: &[i64]) -> Deg {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn deg_sub(a: &[i64], b: &[i64]) -> Deg {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn deg_scale(a: &[i64], k: i64) -> Deg {
    a.iter().map(|x| x * k).collect()
}

/// Coefficient matrix of `(a_i) in (A_nu)^{n+1} -> sum a_i h_i in A_{nu+d}`,
/// with columns ordered (component index, basis monomial) lexicographically.
fn syzygy_system(
    ring: &ToricRing,
    h: &[RingElement],
    nu: &[i64],
    d: &[i64],
) -> (Vec<Monomial>, QMatrix) {
    let basis_nu = ring.basis(nu);
    let target = ring.basis(&deg_add(nu, d));
    let index: BTreeMap<&Monomial, usize> =
        target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = target.len();
    let cols = h.len() * basis_nu.len();
    let mut m = QMatrix::zero(rows, cols);
    for (i, hi) in h.iter().enumerate() {
        for (j, mono) in basis_nu.iter().enumerate() {
            let col = i * basis_nu.len() + j;
            for (key, c) in &hi.coeffs {
                let row = index[&mono.add(key)];
                m.set(row, col, m.at(row, col) + c);
            }
        }
    }
    (basis_nu, m)
}

/// Basis of `Syz(h)_nu`, echelon-normalized by the kernel routine so the
/// output is deterministic. All `h_i` must share one degree.
pub fn syzygies_in_degree(
    ring: &ToricRing,
    h: &[RingElement],
    nu: &[i64],
) -> Result<SyzygyBasis, SyzygyError> {
    assert!(!h.is_empty());
    let d = h[0].degree.clone();
    for hi in h {
        if hi.degree != d {
            return Err(SyzygyError::DegreeMismatch(d.clone(), hi.degree.clone()));
        }
    }
    let (basis_nu, m) = syzygy_system(ring, h, nu, &d);
    let kernel = kernel_basis(&m);
    let mut generators = Vec::with_capacity(kernel.len());
    for v in kernel {
        let mut tuple = Vec::with_capacity(h.len());
        for i in 0..h.len() {
            let mut coeffs = BTreeMap::new();
            for (j, mono) in basis_nu.iter().enumerate() {
                let c = &v[i * basis_nu.len() + j];
                if !c.is_zero() {
                    coeffs.insert(mono.clone(), c.clone());
                }
            }
            let mut e = ring.monomial_element(&Monomial::zero(ring.point_arity()), nu);
            e.coeffs = coeffs;
            tuple.push(e);
        }
        // exactness: re-multiply through the semigroup ring
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (a, hi) in tuple.iter().zip(h) {
            let prod = ring.multiply(a, hi)?;
            for (mkey, c) in prod.coeffs {
                let entry = acc.entry(mkey.clone()).or_insert_with(Q::zero);
                *entry += c;
                if entry.is_zero() {
                    acc.remove(&mkey);
                }
            }
        }
        assert!(acc.is_empty(), "syzygy does not annihilate h");
        generators.push(tuple);
    }
    Ok(SyzygyBasis {
        nu: nu.to_vec(),
        generators,
    })
}

/// One Koszul column of the multiprojective-codomain matrix: the basis
/// monomial `m` of `A_{nu - d_i}` paired with `m*f_i` (coefficient of `Y_i`)
/// and `m*g_i` (negated, coefficient of `X_i`).
#[derive(Clone, Debug)]
pub struct KoszulColumn {
    pub pair_index: usize,
    pub monomial: Monomial,
    pub f_part: RingElement,
    pub g_part: RingElement,
}

/// Columns of the degree-`nu` strand of the Koszul complex of the linear
/// forms `L_i = Y_i f_i - X_i g_i`: one per pair `i` and basis monomial of
/// `A_{nu - d_i}`. Pairs with `nu < d_i` contribute nothing.
pub fn koszul_columns(
    ring: &ToricRing,
    pairs: &[(RingElement, RingElement)],
    nu: &[i64],
) -> Result<Vec<KoszulColumn>, SyzygyError> {
    let mut out = Vec::new();
    for (i, (f, g)) in pairs.iter().enumerate() {
        if f.degree != g.degree {
            return Err(SyzygyError::DegreeMismatch(
                f.degree.clone(),
                g.degree.clone(),
            ));
        }
        let lower = deg_sub(nu, &f.degree);
        for mono in ring.basis(&lower) {
            let m_elem = ring.monomial_element(&mono, &lower);
            let f_part = ring.multiply(&m_elem, f)?;
            let g_part = ring.multiply(&m_elem, g)?;
            out.push(KoszulColumn {
                pair_index: i,
                monomial: mono,
                f_part,
                g_part,
            });
        }
    }
    Ok(out)
}

/// Dimensions of the strands `(Z_i)_{nu + i*d}` of the approximation
/// complex, the Euler characteristic, and the expected determinant degree
/// `sum_{i>=1} (-1)^{i+1} i dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandDiagnostics {
    pub nu: Deg,
    pub dims: Vec<(usize, usize)>,
    pub euler: i64,
    pub det_degree: i64,
}

/// Size-`k` subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut advanced = false;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    out
}

/// Dimension of the degree-`mu` piece of the `q`-th Koszul cycle module
/// `Z_q = ker(K_q -> K_{q-1})` for the sequence `h`.
fn koszul_cycle_dim(ring: &ToricRing, h: &[RingElement], q: usize, mu: &[i64]) -> usize {
    let n1 = h.len();
    let d = &h[0].degree;
    if q == 0 {
        return ring.hilbert(mu);
    }
    if q > n1 {
        return 0;
    }
    let src_deg = deg_sub(mu, &deg_scale(d, q as i64));
    let dst_deg = deg_sub(mu, &deg_scale(d, q as i64 - 1));
    let src_basis = ring.basis(&src_deg);
    if src_basis.is_empty() {
        return 0;
    }
    let dst_basis = ring.basis(&dst_deg);
    let src_sets = subsets(n1, q);
    let dst_sets = subsets(n1, q - 1);
    let dst_set_index: BTreeMap<&[usize], usize> = dst_sets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let dst_mono_index: BTreeMap<&Monomial, usize> =
        dst_basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = dst_sets.len() * dst_basis.len();
    let cols = src_sets.len() * src_basis.len();
    let mut m = QMatrix::zero(rows, cols);
    for (si, set) in src_sets.iter().enumerate() {
        for (mi, mono) in src_basis.iter().enumerate() {
            let col = si * src_basis.len() + mi;
            for (pos, &j) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&x| x != j).collect();
                let block = dst_set_index[rest.as_slice()];
                let sign = if pos % 2 == 0 {
                    Q::from_integer(1.into())
                } else {
                    Q::from_integer((-1).into())
                };
                for (key, c) in &h[j].coeffs {
                    let row = block * dst_basis.len() + dst_mono_index[&mono.add(key)];
                    m.set(row, col, m.at(row, col) + &(c * &sign));
                }
            }
        }
    }
    cols - rank(&m)
}

/// Diagnostics of the degree-`nu` strand of the approximation complex of the
/// equal-degree sequence `h`. A zero Euler characteristic is the expected
/// signal that `nu` sits in the acyclic range.
pub fn strand_diagnostics(
    ring: &ToricRing,
    h: &[RingElement],
    nu: &[i64],
) -> Result<StrandDiagnostics, SyzygyError> {
    assert!(!h.is_empty());
    let d = h[0].degree.clone();
    for hi in h {
        if hi.degree != d {
            return Err(SyzygyError::DegreeMismatch(d.clone(), hi.degree.clone()));
        }
    }
    let n = h.len() - 1;
    let mut dims = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mu = deg_add(nu, &deg_scale(&d, i as i64));
        dims.push((i, koszul_cycle_dim(ring, h, i, &mu)));
    }
    let euler: i64 = dims
        .iter()
        .map(|(i, dim)| {
            let sign = if i % 2 == 0 { 1i64 } else { -1 };
            sign * *dim as i64
        })
        .sum();
    let det_degree: i64 = dims
        .iter()
        .skip(1)
        .map(|(i, dim)| {
            let sign = if i % 2 == 1 { 1i64 } else { -1 };
            sign * *i as i64 * *dim as i64
        })
        .sum();
    Ok(StrandDiagnostics {
        nu: nu.to_vec(),
        dims,
        euler,
        det_degree,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::{q_int, SparsePoly};
    use crate::ring::ToricRing;

    fn sparse(arity: usize, terms: &[(&[i64], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            arity,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.to_vec()), q_int(*c))),
        )
    }

    pub(crate) fn sparse_example() -> (ToricRing, Vec<RingElement>) {
        ToricRing::build(
            &[
                sparse(2, &[(&[1, 6], 1), (&[0, 0], 2)]),
                sparse(2, &[(&[1, 5], 1), (&[1, 3], -3)]),
                sparse(2, &[(&[1, 4], 1), (&[2, 6], 5)]),
                sparse(2, &[(&[0, 0], 2), (&[2, 6], 1)]),
            ],
            None,
        )
        .unwrap()
    }

    /// Chapter-9 reference surface, bidegree (2,3) on (s,u) x (t,v).
    pub(crate) fn reference_bidegree_23_map(cox: &ToricRing) -> Vec<RingElement> {
        let f1 = sparse(
            4,
            &[
                (&[2, 0, 3, 0], 1),
                (&[1, 1, 3, 0], 2),
                (&[0, 2, 3, 0], 3),
                (&[2, 0, 2, 1], 4),
                (&[1, 1, 2, 1], 5),
                (&[0, 2, 2, 1], 6),
                (&[2, 0, 1, 2], 7),
                (&[1, 1, 1, 2], 8),
                (&[0, 2, 1, 2], 9),
                (&[2, 0, 0, 3], 10),
                (&[1, 1, 0, 3], 1),
                (&[0, 2, 0, 3], 2),
            ],
        );
        let f2 = sparse(
            4,
            &[
                (&[2, 0, 3, 0], 2),
                (&[2, 0, 2, 1], -3),
                (&[2, 0, 1, 2], -1),
                (&[1, 1, 2, 1], 1),
                (&[1, 1, 1, 2], 3),
                (&[0, 2, 2, 1], -3),
                (&[0, 2, 1, 2], 2),
                (&[0, 2, 0, 3], -1),
            ],
        );
        let f3 = sparse(
            4,
            &[
                (&[2, 0, 3, 0], 2),
                (&[2, 0, 2, 1], -3),
                (&[1, 1, 3, 0], -2),
                (&[2, 0, 1, 2], 1),
                (&[1, 1, 2, 1], 5),
                (&[1, 1, 1, 2], -3),
                (&[0, 2, 2, 1], -3),
                (&[0, 2, 1, 2], 4),
                (&[0, 2, 0, 3], -1),
            ],
        );
        let f4 = sparse(
            4,
            &[
                (&[2, 0, 2, 1], 3),
                (&[1, 1, 3, 0], -2),
                (&[2, 0, 1, 2], -1),
                (&[1, 1, 2, 1], 1),
                (&[1, 1, 1, 2], -3),
                (&[0, 2, 2, 1], -1),
                (&[0, 2, 1, 2], 4),
                (&[0, 2, 0, 3], -1),
            ],
        );
        vec![
            cox.element(&f1).unwrap(),
            cox.element(&f2).unwrap(),
            cox.element(&f3).unwrap(),
            cox.element(&f4).unwrap(),
        ]
    }

    #[test]
    fn curve_moving_lines_dimension() {
        // (2st, s^2 - t^2, s^2 + t^2), k = 2: dim Syz_{k-1} = 2
        let ring = ToricRing::multiproj(vec![1]);
        let a = ring.element(&sparse(2, &[(&[1, 1], 2)])).unwrap();
        let b = ring
            .element(&sparse(2, &[(&[2, 0], 1), (&[0, 2], -1)]))
            .unwrap();
        let c = ring
            .element(&sparse(2, &[(&[2, 0], 1), (&[0, 2], 1)]))
            .unwrap();
        let syz = syzygies_in_degree(&ring, &[a, b, c], &[1]).unwrap();
        assert_eq!(syz.dim(), 2);
    }

    #[test]
    fn trivial_pair_syzygy() {
        // h = (T0, T0), nu = 0 -> basis {(-1, 1)} after normalization
        let (ring, _) = sparse_example();
        let t0 = ring.monomial_element(&ring.coords()[0].clone(), &[1]);
        let syz = syzygies_in_degree(&ring, &[t0.clone(), t0], &[0]).unwrap();
        assert_eq!(syz.dim(), 1);
        let unit_key = Monomial::zero(2);
        assert_eq!(syz.generators[0][0].coeffs[&unit_key], q_int(-1));
        assert_eq!(syz.generators[0][1].coeffs[&unit_key], q_int(1));
    }

    #[test]
    fn sparse_example_strand_dims_match_reference_run() {
        let (ring, h) = sparse_example();
        let diag = strand_diagnostics(&ring, &h, &[2]).unwrap();
        assert_eq!(diag.dims, vec![(0, 17), (1, 34), (2, 23), (3, 6)]);
        assert_eq!(diag.euler, 0);
        assert_eq!(diag.det_degree, 6);
        let syz = syzygies_in_degree(&ring, &h, &[2]).unwrap();
        assert_eq!(syz.dim(), 34);
    }

    #[test]
    fn degree_zero_strand_is_trivial() {
        let (ring, h) = sparse_example();
        let diag = strand_diagnostics(&ring, &h, &[0]).unwrap();
        assert_eq!(diag.dims[0], (0, 1));
        assert_eq!(diag.dims[1], (1, 0));
        assert_eq!(diag.euler, 1);
    }

    #[test]
    fn bigraded_reference_strand() {
        let cox = ToricRing::multiproj(vec![1, 1]);
        let f = reference_bidegree_23_map(&cox);
        let diag = strand_diagnostics(&cox, &f, &[3, 2]).unwrap();
        assert_eq!(diag.dims, vec![(0, 12), (1, 12), (2, 0), (3, 0)]);
        assert_eq!(diag.euler, 0);
        assert_eq!(diag.det_degree, 12);
    }

    #[test]
    fn koszul_column_counts() {
        // trapezoid ring, three degree-1 pairs, nu = 2: 15 columns, 12 rows
        let polys = vec![
            sparse(2, &[(&[0, 0], 1), (&[2, 0], 3), (&[1, 1], -2)]),
            sparse(2, &[(&[1, 0], 1), (&[0, 1], 5)]),
            sparse(2, &[(&[0, 0], 2), (&[0, 1], 1), (&[1, 1], 1)]),
            sparse(2, &[(&[1, 0], 7), (&[2, 0], -1)]),
            sparse(2, &[(&[0, 0], 1), (&[1, 1], 4)]),
            sparse(2, &[(&[0, 1], 3), (&[2, 0], 2)]),
        ];
        let (ring, elems) = ToricRing::build(&polys, None).unwrap();
        assert_eq!(ring.hilbert(&[1]), 5);
        assert_eq!(ring.hilbert(&[2]), 12);
        let pairs: Vec<(RingElement, RingElement)> = elems
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        let cols = koszul_columns(&ring, &pairs, &[2]).unwrap();
        assert_eq!(cols.len(), 15);
        assert!(koszul_columns(&ring, &pairs, &[0]).unwrap().is_empty());
    }

    #[test]
    fn projective_plane_koszul_columns() {
        // P^2 source, three degree-3 pairs, nu = 7: columns = 3 * hilbert(4)
        let tri = vec![
            sparse(2, &[(&[0, 0], 1), (&[3, 0], 1), (&[0, 3], 1)]),
            sparse(2, &[(&[2, 1], 1)]),
            sparse(2, &[(&[1, 2], 1), (&[3, 0], -1)]),
            sparse(2, &[(&[0, 0], 1), (&[1, 1], 2)]),
            sparse(2, &[(&[2, 0], 1), (&[0, 2], 1)]),
            sparse(2, &[(&[0, 3], 2), (&[1, 0], 1)]),
        ];
        let (ring, elems) = ToricRing::build(&tri, None).unwrap();
        assert_eq!(ring.toric_factor(), 3);
        // pair degrees are all 3 in s,t terms, i.e. ring degree 3
        let pairs: Vec<(RingElement, RingElement)> = elems
            .chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        let base = ring.base_polytope().unwrap().clone();
        assert_eq!(base.lattice_points(1).len(), 3); // unit triangle = P^2
        // rebuild pairs at their intrinsic degree 3
        let cols = koszul_columns(&ring, &pairs, &[7]).unwrap();
        assert_eq!(ring.hilbert(&[4]), 15);
        assert_eq!(cols.len(), 45);
    }

    #[test]
    fn syzygies_contain_trivial_koszul_relations() {
        let (ring, h) = sparse_example();
        let d = 1i64;
        let nu = 2i64;
        let syz = syzygies_in_degree(&ring, &h, &[nu]).unwrap();
        let basis_nu = ring.basis(&[nu]);
        let dim = h.len() * basis_nu.len();
        let flat = |tuple: &[RingElement]| -> Vec<Q> {
            let mut v = vec![Q::zero(); dim];
            for (i, e) in tuple.iter().enumerate() {
                for (m, c) in &e.coeffs {
                    let j = basis_nu.iter().position(|b| b == m).unwrap();
                    v[i * basis_nu.len() + j] = c.clone();
                }
            }
            v
        };
        let mut reducer = crate::ring::RowReducer::new(dim);
        for g in &syz.generators {
            reducer.insert(flat(g));
        }
        for m in ring.basis(&[nu - d]) {
            let me = ring.monomial_element(&m, &[nu - d]);
            let a0 = ring.multiply(&me, &h[1]).unwrap();
            let a1 = ring.scale_element(&ring.multiply(&me, &h[0]).unwrap(), &q_int(-1));
            let mut tuple = vec![a0, a1];
            for _ in 2..h.len() {
                let mut z = ring.unit();
                z.coeffs.clear();
                z.degree = vec![nu];
                tuple.push(z);
            }
            assert!(
                reducer.contains(flat(&tuple)),
                "trivial Koszul syzygy not in span"
            );
        }
    }
}
