//! Combinatorial model of the toric coordinate ring.
//!
//! The ring is never presented by generators and relations; graded pieces
//! have lattice points as basis and multiplication is lattice-point
//! addition. Two gradings are supported: the Z-graded semigroup ring of a
//! polytope (projective paths) and the Z^s-graded Cox ring of a product of
//! projective spaces (multigraded path). `toric_ideal` emits binomial
//! generators for display and interop only.

use crate::arith::{Monomial, Q, SparsePoly};
use crate::polytope::{newton_polytope, LatticePolytope, PolytopeError};
use num_traits::Zero;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("polytope is not normal (witness level {level}, point {point:?})")]
    NotNormal { level: i64, point: Vec<i64> },
    #[error("exponent {exponent:?} of input lies outside every admissible dilation of the polytope")]
    NotHomogeneousOnPolytope { exponent: Vec<i64> },
    #[error("input is not multihomogeneous for block ranks {ranks:?}")]
    NotMultihomogeneous { ranks: Vec<usize> },
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("expected element of degree {expected:?}, got {got:?}")]
    DegreeMismatch { expected: Vec<i64>, got: Vec<i64> },
}

/// Multidegree: one entry for the Z-graded path, `s` entries for Z^s.
pub type Deg = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Semigroup ring of a (contracted) polytope; the original Newton
    /// polytope is `factor * base + translation`.
    Toric {
        base: LatticePolytope,
        factor: i64,
        translation: Vec<i64>,
    },
    /// Cox ring of P^{r_1} x ... x P^{r_s}; block `i` has `ranks[i] + 1`
    /// variables.
    MultiProj { ranks: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct ToricRing {
    grading: Grading,
    id: u64,
    /// Basis of the degree-one piece (Toric) or the ambient variables
    /// (MultiProj), labelling the T-variables.
    coords: Vec<Monomial>,
}

/// Element of a graded piece: rational coefficients on the lattice-point
/// basis of its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    ring_id: u64,
    pub degree: Deg,
    pub coeffs: BTreeMap<Monomial, Q>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Untranslated polynomial representative (monomial exponents are the
    /// basis lattice points themselves).
    pub fn to_poly(&self, arity: usize) -> SparsePoly {
        SparsePoly::from_terms(arity, self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl ToricRing {
    /// Semigroup ring on the smallest lattice contraction of the Newton
    /// polytope of `polys` (or of an explicitly supplied polytope).
    /// Returns the ring together with the inputs rewritten as equal-degree
    /// ring elements.
    pub fn build(
        polys: &[SparsePoly],
        override_polytope: Option<&LatticePolytope>,
    ) -> Result<(ToricRing, Vec<RingElement>), RingError> {
        let newton = newton_polytope(polys)?;
        let (base, factor, translation) = match override_polytope {
            None => {
                let c = newton.contraction();
                (c.base, c.factor, c.translation)
            }
            Some(q) => {
                // smallest dilation of the given polytope containing the
                // full support; no translation for an explicit polytope
                let pts: Vec<Monomial> = polys
                    .iter()
                    .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
                    .collect();
                let mut k = 1;
                loop {
                    if pts.iter().all(|p| q.contains_scaled(p, k)) {
                        break;
                    }
                    k += 1;
                    if k > 512 {
                        let bad = pts.iter().find(|p| !q.contains_scaled(p, 512)).unwrap();
                        return Err(RingError::NotHomogeneousOnPolytope {
                            exponent: bad.0.clone(),
                        });
                    }
                }
                (q.clone(), k, vec![0; q.dim()])
            }
        };
        let cert = base.is_normal();
        if !cert.normal {
            let (level, point) = cert.witness.unwrap();
            return Err(RingError::NotNormal {
                level,
                point: point.0,
            });
        }
        let ring = ToricRing::from_grading(Grading::Toric {
            base,
            factor,
            translation,
        });
        let d = ring.toric_factor();
        let elems = polys
            .iter()
            .map(|p| ring.element_of_degree(p, d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((ring, elems))
    }

    /// Cox ring of a product of projective spaces.
    pub fn multiproj(ranks: Vec<usize>) -> ToricRing {
        let nvars: usize = ranks.iter().map(|r| r + 1).sum();
        let coords = (0..nvars)
            .map(|i| {
                let mut e = vec![0i64; nvars];
                e[i] = 1;
                Monomial::new(e)
            })
            .collect();
        ToricRing::from_grading_with_coords(Grading::MultiProj { ranks }, coords)
    }

    fn from_grading(grading: Grading) -> ToricRing {
        let coords = match &grading {
            Grading::Toric { base, .. } => base.lattice_points(1),
            Grading::MultiProj { .. } => unreachable!(),
        };
        ToricRing::from_grading_with_coords(grading, coords)
    }

    fn from_grading_with_coords(grading: Grading, coords: Vec<Monomial>) -> ToricRing {
        let mut hasher = DefaultHasher::new();
        match &grading {
            Grading::Toric {
                base,
                factor,
                translation,
            } => {
                0u8.hash(&mut hasher);
                for v in base.vertices() {
                    v.0.hash(&mut hasher);
                }
                factor.hash(&mut hasher);
                translation.hash(&mut hasher);
            }
            Grading::MultiProj { ranks } => {
                1u8.hash(&mut hasher);
                ranks.hash(&mut hasher);
            }
        }
        ToricRing {
            id: hasher.finish(),
            coords,
            grading,
        }
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// Number of T-variables (N + 1 in the embedded path).
    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Monomial] {
        &self.coords
    }

    pub fn is_multigraded(&self) -> bool {
        matches!(self.grading, Grading::MultiProj { .. })
    }

    pub fn grading_rank(&self) -> usize {
        match &self.grading {
            Grading::Toric { .. } => 1,
            Grading::MultiProj { ranks } => ranks.len(),
        }
    }

    /// Ambient exponent arity of basis monomials.
    pub fn point_arity(&self) -> usize {
        match &self.grading {
            Grading::Toric { base, .. } => base.dim(),
            Grading::MultiProj { ranks } => ranks.iter().map(|r| r + 1).sum(),
        }
    }

    /// Contraction factor `d` of the Z-graded path.
    pub fn toric_factor(&self) -> i64 {
        match &self.grading {
            Grading::Toric { factor, .. } => *factor,
            Grading::MultiProj { .. } => panic!("toric_factor on a multigraded ring"),
        }
    }

    pub fn base_polytope(&self) -> Option<&LatticePolytope> {
        match &self.grading {
            Grading::Toric { base, .. } => Some(base),
            Grading::MultiProj { .. } => None,
        }
    }

    pub fn translation(&self) -> Vec<i64> {
        match &self.grading {
            Grading::Toric { translation, .. } => translation.clone(),
            Grading::MultiProj { ranks } => {
                vec![0; ranks.iter().map(|r| r + 1).sum()]
            }
        }
    }

    fn scalar_deg(deg: &[i64]) -> i64 {
        debug_assert_eq!(deg.len(), 1);
        deg[0]
    }

    /// Ordered basis (lattice points / exponent vectors) of the graded piece.
    pub fn basis(&self, deg: &[i64]) -> Vec<Monomial> {
        match &self.grading {
            Grading::Toric { base, .. } => {
                let k = Self::scalar_deg(deg);
                if k < 0 {
                    Vec::new()
                } else {
                    base.lattice_points(k)
                }
            }
            Grading::MultiProj { ranks } => {
                assert_eq!(deg.len(), ranks.len());
                if deg.iter().any(|&d| d < 0) {
                    return Vec::new();
                }
                let mut out: Vec<Monomial> = vec![Monomial::new(Vec::new())];
                for (i, &r) in ranks.iter().enumerate() {
                    let piece = compositions(deg[i], r + 1);
                    let mut next = Vec::with_capacity(out.len() * piece.len());
                    for m in &out {
                        for block in &piece {
                            let mut e = m.0.clone();
                            e.extend_from_slice(block);
                            next.push(Monomial::new(e));
                        }
                    }
                    out = next;
                }
                out.sort();
                out
            }
        }
    }

    /// Dimension of the graded piece.
    pub fn hilbert(&self, deg: &[i64]) -> usize {
        self.basis(deg).len()
    }

    /// Multidegree of a monomial in this ring's exponent encoding
    /// (multigraded path only).
    pub fn degree_of_monomial(&self, m: &Monomial) -> Deg {
        match &self.grading {
            Grading::Toric { .. } => panic!("pointwise degree undefined on the Z-graded path"),
            Grading::MultiProj { ranks } => {
                let mut deg = Vec::with_capacity(ranks.len());
                let mut off = 0;
                for &r in ranks {
                    deg.push(m.0[off..off + r + 1].iter().sum());
                    off += r + 1;
                }
                deg
            }
        }
    }

    /// Rewrite a polynomial as a ring element of the given Z-degree
    /// (Toric grading): the coefficient of `s^alpha` lands on the lattice
    /// point `alpha - translation`, which must lie in `k * base`.
    pub fn element_of_degree(&self, poly: &SparsePoly, k: i64) -> Result<RingElement, RingError> {
        match &self.grading {
            Grading::Toric {
                base, translation, ..
            } => {
                let mut coeffs = BTreeMap::new();
                for (m, c) in poly.terms() {
                    let shifted =
                        Monomial::new(m.0.iter().zip(translation).map(|(a, t)| a - t).collect());
                    if !base.contains_scaled(&shifted, k) {
                        return Err(RingError::NotHomogeneousOnPolytope {
                            exponent: m.0.clone(),
                        });
                    }
                    coeffs.insert(shifted, c.clone());
                }
                Ok(RingElement {
                    ring_id: self.id,
                    degree: vec![k],
                    coeffs,
                })
            }
            Grading::MultiProj { .. } => self.element(poly),
        }
    }

    /// Element with its intrinsic degree: smallest containment degree on the
    /// Z-graded path, block degrees on the multigraded path.
    pub fn element(&self, poly: &SparsePoly) -> Result<RingElement, RingError> {
        match &self.grading {
            Grading::Toric { .. } => {
                let k = self.min_containment_degree(poly).ok_or_else(|| {
                    RingError::NotHomogeneousOnPolytope {
                        exponent: poly
                            .leading()
                            .map(|(m, _)| m.0.clone())
                            .unwrap_or_default(),
                    }
                })?;
                self.element_of_degree(poly, k)
            }
            Grading::MultiProj { ranks } => {
                let mut degree: Option<Deg> = None;
                let mut coeffs = BTreeMap::new();
                for (m, c) in poly.terms() {
                    let d = self.degree_of_monomial(m);
                    match &degree {
                        None => degree = Some(d),
                        Some(e) if *e != d => {
                            return Err(RingError::NotMultihomogeneous {
                                ranks: ranks.clone(),
                            })
                        }
                        _ => {}
                    }
                    coeffs.insert(m.clone(), c.clone());
                }
                let degree = degree.unwrap_or_else(|| vec![0; ranks.len()]);
                Ok(RingElement {
                    ring_id: self.id,
                    degree,
                    coeffs,
                })
            }
        }
    }

    /// Smallest `k` with the whole (translated) support inside `k * base`.
    pub fn min_containment_degree(&self, poly: &SparsePoly) -> Option<i64> {
        match &self.grading {
            Grading::Toric {
                base, translation, ..
            } => {
                if poly.is_zero() {
                    return Some(0);
                }
                (0..=512).find(|&k| {
                    poly.terms().all(|(m, _)| {
                        let shifted = Monomial::new(
                            m.0.iter().zip(translation).map(|(a, t)| a - t).collect(),
                        );
                        base.contains_scaled(&shifted, k)
                    })
                })
            }
            Grading::MultiProj { .. } => None,
        }
    }

    pub fn unit(&self) -> RingElement {
        let degree = vec![0; self.grading_rank()];
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Monomial::zero(self.point_arity()), Q::from_integer(1.into()));
        RingElement {
            ring_id: self.id,
            degree,
            coeffs,
        }
    }

    /// Basis monomial of the given degree, as an element.
    pub fn monomial_element(&self, m: &Monomial, deg: &[i64]) -> RingElement {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m.clone(), Q::from_integer(1.into()));
        RingElement {
            ring_id: self.id,
            degree: deg.to_vec(),
            coeffs,
        }
    }

    /// Semigroup multiplication: degrees add, coefficients convolve through
    /// lattice-point addition.
    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        if a.ring_id != self.id || b.ring_id != self.id {
            return Err(RingError::RingMismatch);
        }
        let degree: Deg = a.degree.iter().zip(&b.degree).map(|(x, y)| x + y).collect();
        let mut coeffs: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &a.coeffs {
            for (mb, cb) in &b.coeffs {
                let key = ma.add(mb);
                let entry = coeffs.entry(key.clone()).or_insert_with(Q::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    coeffs.remove(&key);
                }
            }
        }
        Ok(RingElement {
            ring_id: self.id,
            degree,
            coeffs,
        })
    }

    pub fn scale_element(&self, a: &RingElement, c: &Q) -> RingElement {
        let mut out = a.clone();
        if c.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn add_elements(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        if a.ring_id != self.id || b.ring_id != self.id {
            return Err(RingError::RingMismatch);
        }
        if a.degree != b.degree && !a.is_zero() && !b.is_zero() {
            return Err(RingError::DegreeMismatch {
                expected: a.degree.clone(),
                got: b.degree.clone(),
            });
        }
        let mut out = a.clone();
        out.degree = if a.is_zero() {
            b.degree.clone()
        } else {
            a.degree.clone()
        };
        for (m, c) in &b.coeffs {
            let entry = out.coeffs.entry(m.clone()).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(m);
            }
        }
        Ok(out)
    }
}

/// All ways to write `total` as an ordered sum of `parts` non-negative
/// integers (exponent blocks of one projective factor).
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Degree-bounded binomial generators of the toric ideal, interreduced to a
/// minimal generating set. Relations of degree beyond the bound are not
/// searched; `degree_bound` records how far the search went.
#[derive(Clone, Debug)]
pub struct ToricIdeal {
    /// binomials in the T-variables (arity = number of coords)
    pub generators: Vec<SparsePoly>,
    pub degree_bound: i64,
}

pub fn toric_ideal(ring: &ToricRing, degree_bound: i64) -> ToricIdeal {
    assert!(degree_bound >= 2);
    if ring.is_multigraded() {
        // free polynomial ring: no relations
        return ToricIdeal {
            generators: Vec::new(),
            degree_bound,
        };
    }
    let coords = ring.coords();
    let nvars = coords.len();
    let mut generators: Vec<SparsePoly> = Vec::new();

    for degree in 2..=degree_bound {
        // T-monomials of that degree, grouped by lattice-point sum
        let monos = compositions(degree, nvars);
        let mut groups: BTreeMap<Monomial, Vec<Monomial>> = BTreeMap::new();
        for e in monos {
            let mut sum = Monomial::zero(coords[0].arity());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    sum = sum.add(&coords[i]);
                }
            }
            groups.entry(sum).or_default().push(Monomial::new(e));
        }

        // index the degree-D monomial space (only monomials in some group
        // can appear in a binomial of this degree)
        let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
        for group in groups.values() {
            for m in group {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
        }
        let dim = index.len();

        // subspace spanned by monomial multiples of lower-degree generators
        let mut reducer = RowReducer::new(dim);
        for g in &generators {
            let gd = g.total_degree();
            for mult in compositions(degree - gd, nvars) {
                let mm = Monomial::new(mult);
                let mut row = vec![Q::zero(); dim];
                for (m, c) in g.terms() {
                    let i = index[&m.add(&mm)];
                    row[i] += c;
                }
                reducer.insert(row);
            }
        }

        for group in groups.values() {
            if group.len() < 2 {
                continue;
            }
            let mut sorted = group.clone();
            sorted.sort();
            let base = &sorted[0];
            for m in &sorted[1..] {
                let mut row = vec![Q::zero(); dim];
                row[index[m]] += Q::from_integer(1.into());
                row[index[base]] -= Q::from_integer(1.into());
                if reducer.insert(row) {
                    let binom = SparsePoly::from_terms(
                        nvars,
                        [
                            (m.clone(), Q::from_integer(1.into())),
                            (base.clone(), Q::from_integer((-1).into())),
                        ],
                    )
                    .normalized();
                    generators.push(binom);
                }
            }
        }
    }
    ToricIdeal {
        generators,
        degree_bound,
    }
}

/// Incremental row-space membership: rows are reduced against the stored
/// echelon basis; an insert reports whether the row was independent.
pub struct RowReducer {
    dim: usize,
    rows: Vec<(usize, Vec<Q>)>, // (pivot index, pivot-normalized row)
}

impl RowReducer {
    pub fn new(dim: usize) -> Self {
        RowReducer {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &mut [Q]) {
        for (p, r) in &self.rows {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for j in *p..self.dim {
                    if !r[j].is_zero() {
                        let delta = &f * &r[j];
                        row[j] -= delta;
                    }
                }
            }
        }
    }

    /// Reduce and insert; true iff the row enlarged the space.
    pub fn insert(&mut self, mut row: Vec<Q>) -> bool {
        debug_assert_eq!(row.len(), self.dim);
        self.reduce(&mut row);
        match row.iter().position(|v| !v.is_zero()) {
            None => false,
            Some(p) => {
                let inv = row[p].clone().recip();
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v *= &inv;
                    }
                }
                self.rows.push((p, row));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
        }
    }

    /// Membership test without inserting.
    pub fn contains(&self, mut row: Vec<Q>) -> bool {
        self.reduce(&mut row);
        row.iter().all(|v| v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_int;

    fn sparse(arity: usize, terms: &[(&[i64], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            arity,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.to_vec()), q_int(*c))),
        )
    }

    fn sparse_example_inputs() -> Vec<SparsePoly> {
        vec![
            sparse(2, &[(&[1, 6], 1), (&[0, 0], 2)]),
            sparse(2, &[(&[1, 5], 1), (&[1, 3], -3)]),
            sparse(2, &[(&[1, 4], 1), (&[2, 6], 5)]),
            sparse(2, &[(&[0, 0], 2), (&[2, 6], 1)]),
        ]
    }

    #[test]
    fn build_ring_reproduces_thesis_linear_forms() {
        let (ring, h) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        assert_eq!(ring.num_coords(), 6);
        assert_eq!(ring.toric_factor(), 1);
        // labels T0..T5 in graded-lex order
        let pts: Vec<Vec<i64>> = ring.coords().iter().map(|m| m.0.clone()).collect();
        assert_eq!(
            pts,
            vec![
                vec![0, 0],
                vec![1, 3],
                vec![1, 4],
                vec![1, 5],
                vec![1, 6],
                vec![2, 6]
            ]
        );
        // h = (2T0 + T4, -3T1 + T3, T2 + 5T5, 2T0 + T5)
        let tvar = |i: usize| ring.coords()[i].clone();
        let expect: Vec<Vec<(Monomial, i64)>> = vec![
            vec![(tvar(0), 2), (tvar(4), 1)],
            vec![(tvar(1), -3), (tvar(3), 1)],
            vec![(tvar(2), 1), (tvar(5), 5)],
            vec![(tvar(0), 2), (tvar(5), 1)],
        ];
        for (elem, terms) in h.iter().zip(expect) {
            assert_eq!(elem.degree, vec![1]);
            assert_eq!(elem.coeffs.len(), terms.len());
            for (m, c) in terms {
                assert_eq!(elem.coeffs[&m], q_int(c));
            }
        }
    }

    #[test]
    fn build_ring_over_subpolytope_q() {
        let q = LatticePolytope::hull(&[
            Monomial::new(vec![0, 0]),
            Monomial::new(vec![0, 3]),
            Monomial::new(vec![1, 3]),
        ])
        .unwrap();
        let (ring, h) = ToricRing::build(&sparse_example_inputs(), Some(&q)).unwrap();
        assert_eq!(ring.num_coords(), 5);
        assert_eq!(ring.toric_factor(), 2);
        assert_eq!(ring.hilbert(&[2]), 12);
        // h1 = 2*T0^2 + T3*T4 keyed on lattice points (0,0) and (1,6)
        assert_eq!(h[0].degree, vec![2]);
        assert_eq!(h[0].coeffs[&Monomial::new(vec![0, 0])], q_int(2));
        assert_eq!(h[0].coeffs[&Monomial::new(vec![1, 6])], q_int(1));
        // h2 = -3*T0*T4 + T2*T4 on (1,3) and (1,5)
        assert_eq!(h[1].coeffs[&Monomial::new(vec![1, 3])], q_int(-3));
        assert_eq!(h[1].coeffs[&Monomial::new(vec![1, 5])], q_int(1));
    }

    #[test]
    fn constants_only_is_degenerate() {
        let c = sparse(2, &[(&[0, 0], 3)]);
        match ToricRing::build(&[c], None) {
            Err(RingError::Polytope(PolytopeError::DegeneratePolytope { .. })) => {}
            other => panic!("expected degenerate, got {:?}", other),
        }
    }

    #[test]
    fn hilbert_golden_values() {
        let (ring, _) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        assert_eq!(ring.hilbert(&[0]), 1);
        assert_eq!(ring.hilbert(&[2]), 17);
        let cox = ToricRing::multiproj(vec![1, 1]);
        assert_eq!(cox.hilbert(&[3, 2]), 12);
        assert_eq!(cox.hilbert(&[0, 0]), 1);
    }

    #[test]
    fn multiply_unit_and_commutes() {
        let (ring, h) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        let unit = ring.unit();
        let ab = ring.multiply(&h[0], &unit).unwrap();
        assert_eq!(ab.coeffs, h[0].coeffs);
        let xy = ring.multiply(&h[1], &h[2]).unwrap();
        let yx = ring.multiply(&h[2], &h[1]).unwrap();
        assert_eq!(xy, yx);
        assert_eq!(xy.degree, vec![2]);
    }

    #[test]
    fn multiply_witnesses_toric_relation() {
        let (ring, _) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        let t = |i: usize| ring.monomial_element(&ring.coords()[i].clone(), &[1]);
        let t0t5 = ring.multiply(&t(0), &t(5)).unwrap();
        let t1t1 = ring.multiply(&t(1), &t(1)).unwrap();
        assert_eq!(t0t5, t1t1); // T1^2 - T0*T5 in J
    }

    #[test]
    fn multiply_matches_laurent_oracle_on_square_ring() {
        // unit-square ring: multiplication must agree with multiplying the
        // exponent-vector representatives as honest polynomials
        let polys = vec![sparse(
            2,
            &[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 3), (&[1, 1], 4)],
        )];
        let (ring, h) = ToricRing::build(&polys, None).unwrap();
        let prod = ring.multiply(&h[0], &h[0]).unwrap();
        let oracle = h[0].to_poly(2).mul(&h[0].to_poly(2));
        assert_eq!(prod.to_poly(2), oracle);
    }

    #[test]
    fn ring_mismatch_detected() {
        let (_ring_a, h) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        let cox = ToricRing::multiproj(vec![1, 1]);
        assert!(matches!(
            cox.multiply(&h[0], &h[1]),
            Err(RingError::RingMismatch)
        ));
    }

    #[test]
    fn toric_ideal_unit_square_is_segre_quadric() {
        let polys = vec![sparse(
            2,
            &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)],
        )];
        let (ring, _) = ToricRing::build(&polys, None).unwrap();
        let ideal = toric_ideal(&ring, 3);
        assert_eq!(ideal.generators.len(), 1);
        // T0*T3 - T1*T2 with T-labels in graded-lex point order
        let g = &ideal.generators[0];
        assert_eq!(g.coeff(&Monomial::new(vec![1, 0, 0, 1])), q_int(1));
        assert_eq!(g.coeff(&Monomial::new(vec![0, 1, 1, 0])), q_int(-1));
    }

    #[test]
    fn toric_ideal_sparse_example() {
        let (ring, _) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        let ideal = toric_ideal(&ring, 3);
        // J = (T3^2 - T2T4, T2T3 - T1T4, T2^2 - T1T3, T1^2 - T0T5) up to sign
        assert_eq!(ideal.generators.len(), 4);
        let expected: Vec<SparsePoly> = vec![
            sparse(6, &[(&[0, 0, 0, 2, 0, 0], 1), (&[0, 0, 1, 0, 1, 0], -1)]),
            sparse(6, &[(&[0, 0, 1, 1, 0, 0], 1), (&[0, 1, 0, 0, 1, 0], -1)]),
            sparse(6, &[(&[0, 0, 2, 0, 0, 0], 1), (&[0, 1, 0, 1, 0, 0], -1)]),
            sparse(6, &[(&[0, 2, 0, 0, 0, 0], 1), (&[1, 0, 0, 0, 0, 1], -1)]),
        ];
        for e in &expected {
            let en = e.normalized();
            let eneg = e.neg().normalized();
            assert!(
                ideal.generators.iter().any(|g| *g == en || *g == eneg),
                "missing generator {:?}",
                e
            );
        }
    }

    #[test]
    fn toric_ideal_subpolytope_q() {
        let q = LatticePolytope::hull(&[
            Monomial::new(vec![0, 0]),
            Monomial::new(vec![0, 3]),
            Monomial::new(vec![1, 3]),
        ])
        .unwrap();
        let (ring, _) = ToricRing::build(&sparse_example_inputs(), Some(&q)).unwrap();
        let ideal = toric_ideal(&ring, 3);
        // J = (T2^2 - T1T3, T1T2 - T0T3, T1^2 - T0T2)
        assert_eq!(ideal.generators.len(), 3);
        for g in &ideal.generators {
            assert_eq!(g.total_degree(), 2);
        }
    }

    #[test]
    fn toric_ideal_binomials_vanish_on_monomial_substitution() {
        let (ring, _) = ToricRing::build(&sparse_example_inputs(), None).unwrap();
        let ideal = toric_ideal(&ring, 3);
        let images: Vec<SparsePoly> = ring
            .coords()
            .iter()
            .map(|p| SparsePoly::term(p.clone(), q_int(1)))
            .collect();
        for g in &ideal.generators {
            assert!(g.substitute(&images).is_zero());
        }
    }

    #[test]
    fn roundtrip_elements_reproduce_inputs() {
        let polys = sparse_example_inputs();
        let (ring, h) = ToricRing::build(&polys, None).unwrap();
        let t = ring.translation();
        for (p, e) in polys.iter().zip(&h) {
            let rep = e.to_poly(2);
            let shifted = SparsePoly::from_terms(
                2,
                rep.terms().map(|(m, c)| {
                    (
                        Monomial::new(m.0.iter().zip(&t).map(|(a, b)| a + b).collect()),
                        c.clone(),
                    )
                }),
            );
            assert_eq!(&shifted, p);
        }
    }

    #[test]
    fn multiproj_basis_and_degrees() {
        let cox = ToricRing::multiproj(vec![1, 1]);
        let b = cox.basis(&[1, 1]);
        assert_eq!(b.len(), 4);
        // bihomogeneous element s^2t^3 + s*u*t^2*v of bidegree (2,3)
        let p = sparse(4, &[(&[2, 0, 3, 0], 1), (&[1, 1, 2, 1], 1)]);
        let e = cox.element(&p).unwrap();
        assert_eq!(e.degree, vec![2, 3]);
        // mixed degrees rejected
        let bad = sparse(4, &[(&[2, 0, 3, 0], 1), (&[1, 0, 2, 1], 1)]);
        assert!(matches!(
            cox.element(&bad),
            Err(RingError::NotMultihomogeneous { .. })
        ));
    }
}
