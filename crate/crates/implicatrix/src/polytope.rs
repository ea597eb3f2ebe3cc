//! Newton polytopes and their lattice geometry: point enumeration, Ehrhart
//! counts, interior points, the invariant gamma, lattice contractions,
//! normality checks and normalized area.

use crate::arith::{Monomial, Q, SparsePoly};
use crate::linalg::{kernel_basis, rank, QMatrix};
use num_traits::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("support is not full-dimensional (affine dimension {found} in ambient {ambient})")]
    DegeneratePolytope { found: usize, ambient: usize },
    #[error("operation requires a 2-dimensional polytope, got dimension {0}")]
    NotSurfaceCase(usize),
    #[error("empty or all-zero input")]
    EmptyInput,
}

/// Convex lattice polytope given both by vertices and by facet inequalities
/// `{ x : <normal, x> >= offset }`. Always full-dimensional in its ambient
/// space; two-dimensional vertices are stored in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Monomial>,
    facets: Vec<(Vec<i64>, i64)>,
}

/// The smallest lattice contraction: `original = factor * base + translation`
/// with `factor` maximal.
#[derive(Clone, Debug)]
pub struct ContractionData {
    pub base: LatticePolytope,
    pub factor: i64,
    pub translation: Vec<i64>,
}

/// Result of a normality check; `witness` carries the first failing level
/// and lattice point when the polytope is not normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityCertificate {
    pub normal: bool,
    pub witness: Option<(i64, Monomial)>,
}

fn dot(n: &[i64], p: &[i64]) -> i64 {
    n.iter().zip(p).map(|(a, b)| a * b).sum()
}

fn gcd_all(vals: impl Iterator<Item = i64>) -> i64 {
    let mut g = 0i64;
    for v in vals {
        g = num_integer::gcd(g, v.abs());
    }
    g
}

impl LatticePolytope {
    /// Convex hull of a set of lattice points. Errors when the hull is not
    /// full-dimensional in its ambient space.
    pub fn hull(points: &[Monomial]) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::EmptyInput);
        }
        let ambient = points[0].arity();
        let mut uniq: Vec<Vec<i64>> = points.iter().map(|m| m.0.clone()).collect();
        uniq.sort();
        uniq.dedup();

        let affine_dim = {
            let base = &uniq[0];
            let rows: Vec<Vec<Q>> = uniq[1..]
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(base)
                        .map(|(a, b)| Q::from_integer((a - b).into()))
                        .collect()
                })
                .collect();
            if rows.is_empty() {
                0
            } else {
                rank(&QMatrix::from_rows(rows))
            }
        };
        if affine_dim != ambient {
            return Err(PolytopeError::DegeneratePolytope {
                found: affine_dim,
                ambient,
            });
        }

        let poly = match ambient {
            1 => {
                let lo = uniq.iter().map(|p| p[0]).min().unwrap();
                let hi = uniq.iter().map(|p| p[0]).max().unwrap();
                LatticePolytope {
                    dim: 1,
                    vertices: vec![Monomial::new(vec![lo]), Monomial::new(vec![hi])],
                    facets: vec![(vec![1], lo), (vec![-1], -hi)],
                }
            }
            2 => Self::hull_2d(&uniq),
            _ => Self::hull_nd(&uniq, ambient),
        };
        poly.check_consistency();
        Ok(poly)
    }

    /// Monotone chain, counter-clockwise output.
    fn hull_2d(sorted_points: &[Vec<i64>]) -> Self {
        let pts = sorted_points; // already sorted lexicographically
        let cross = |o: &[i64], a: &[i64], b: &[i64]| -> i64 {
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        };
        let mut lower: Vec<&Vec<i64>> = Vec::new();
        for p in pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<&Vec<i64>> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        let vertices: Vec<Monomial> = lower
            .into_iter()
            .chain(upper)
            .map(|p| Monomial::new(p.clone()))
            .collect();
        let n = vertices.len();
        let mut facets = Vec::with_capacity(n);
        for i in 0..n {
            let a = &vertices[i].0;
            let b = &vertices[(i + 1) % n].0;
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            // inward normal for CCW orientation
            let mut normal = vec![-dy, dx];
            let g = gcd_all(normal.iter().copied());
            if g > 1 {
                normal.iter_mut().for_each(|v| *v /= g);
            }
            let offset = dot(&normal, a);
            facets.push((normal, offset));
        }
        LatticePolytope {
            dim: 2,
            vertices,
            facets,
        }
    }

    /// Brute-force exact hull for dimension >= 3: every affinely independent
    /// `dim`-subset of points spans a candidate hyperplane; the supporting
    /// ones are facets, and vertices are the points where `dim` facets with
    /// independent normals meet. Desk-scale point counts only.
    fn hull_nd(points: &[Vec<i64>], dim: usize) -> Self {
        let n = points.len();
        let mut facets: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
        let mut idx: Vec<usize> = (0..dim).collect();
        loop {
            // hyperplane through points[idx[0..dim]]
            let base = &points[idx[0]];
            let rows: Vec<Vec<Q>> = idx[1..]
                .iter()
                .map(|&i| {
                    points[i]
                        .iter()
                        .zip(base)
                        .map(|(a, b)| Q::from_integer((a - b).into()))
                        .collect()
                })
                .collect();
            let m = QMatrix::from_rows(rows);
            let ker = kernel_basis(&m);
            if ker.len() == 1 {
                // scale kernel vector to a primitive integer normal
                let v = &ker[0];
                let mut lcm = num_bigint::BigInt::from(1);
                for q in v {
                    lcm = num_integer::lcm(lcm, q.denom().clone());
                }
                let ints: Vec<num_bigint::BigInt> =
                    v.iter().map(|q| q.numer() * &lcm / q.denom()).collect();
                let mut g = num_bigint::BigInt::from(0);
                for z in &ints {
                    g = num_integer::gcd(g, z.clone());
                }
                let mut normal: Vec<i64> = ints
                    .iter()
                    .map(|z| {
                        let r = z / &g;
                        i64::try_from(&r).expect("normal coordinate overflow")
                    })
                    .collect();
                let mut offset = dot(&normal, base);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let d = dot(&normal, p);
                    if d > offset {
                        above = true;
                    } else if d < offset {
                        below = true;
                    }
                }
                if !(above && below) {
                    if below {
                        normal.iter_mut().for_each(|x| *x = -*x);
                        offset = -offset;
                    }
                    facets.insert((normal, offset));
                }
            }
            // next combination
            let mut advanced = false;
            let mut i = dim;
            while i > 0 {
                i -= 1;
                if idx[i] != i + n - dim {
                    idx[i] += 1;
                    for j in i + 1..dim {
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
        let facets: Vec<(Vec<i64>, i64)> = facets.into_iter().collect();
        let mut vertices: Vec<Monomial> = Vec::new();
        for p in points {
            let active: Vec<Vec<Q>> = facets
                .iter()
                .filter(|(nrm, off)| dot(nrm, p) == *off)
                .map(|(nrm, _)| nrm.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect();
            if active.len() >= dim && rank(&QMatrix::from_rows(active)) == dim {
                vertices.push(Monomial::new(p.clone()));
            }
        }
        vertices.sort();
        LatticePolytope {
            dim,
            vertices,
            facets,
        }
    }

    fn check_consistency(&self) {
        for v in &self.vertices {
            for (n, off) in &self.facets {
                assert!(
                    dot(n, &v.0) >= *off,
                    "vertex {:?} violates facet ({:?}, {})",
                    v,
                    n,
                    off
                );
            }
        }
        for (n, off) in &self.facets {
            let active = self
                .vertices
                .iter()
                .filter(|v| dot(n, &v.0) == *off)
                .count();
            assert!(active >= self.dim, "facet not supported by enough vertices");
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Monomial] {
        &self.vertices
    }

    pub fn facets(&self) -> &[(Vec<i64>, i64)] {
        &self.facets
    }

    /// Does `point` lie in the dilation `k * P`?
    pub fn contains_scaled(&self, point: &Monomial, k: i64) -> bool {
        if k == 0 {
            return point.is_zero();
        }
        self.facets
            .iter()
            .all(|(n, off)| dot(n, &point.0) >= k * off)
    }

    fn scan<F: Fn(&[i64]) -> bool>(&self, k: i64, keep: F) -> Vec<Monomial> {
        if k == 0 {
            return vec![Monomial::zero(self.dim)];
        }
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for v in &self.vertices {
            for (i, &c) in v.0.iter().enumerate() {
                lo[i] = lo[i].min(c * k);
                hi[i] = hi[i].max(c * k);
            }
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'outer: loop {
            if keep(&cur) {
                out.push(Monomial::new(cur.clone()));
            }
            for i in (0..self.dim).rev() {
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..self.dim {
                        cur[j] = lo[j];
                    }
                    continue 'outer;
                }
            }
            break;
        }
        out.sort();
        out
    }

    /// All lattice points of `k * P`, in ascending graded-lex order.
    pub fn lattice_points(&self, k: i64) -> Vec<Monomial> {
        assert!(k >= 0);
        self.scan(k, |p| {
            self.facets.iter().all(|(n, off)| dot(n, p) >= k * off)
        })
    }

    /// Lattice points strictly inside `k * P`.
    pub fn interior_points(&self, k: i64) -> Vec<Monomial> {
        assert!(k >= 0);
        if k == 0 {
            return Vec::new();
        }
        self.scan(k, |p| {
            self.facets.iter().all(|(n, off)| dot(n, p) > k * off)
        })
    }

    /// Ehrhart count `E_P(k)`.
    pub fn ehrhart(&self, k: i64) -> usize {
        self.lattice_points(k).len()
    }

    /// Largest `k >= 0` such that `k * P` has no interior lattice points.
    /// The interior of `(dim+1) * P` is never empty, so the search is
    /// bounded; running past the bound is an internal invariant violation.
    pub fn gamma(&self) -> i64 {
        for k in 1..=(self.dim as i64 + 1) {
            if !self.interior_points(k).is_empty() {
                return k - 1;
            }
        }
        panic!("gamma search exceeded dim+1; polytope invariant violated");
    }

    /// Smallest lattice contraction: translate to the coordinate hyperplanes
    /// and divide by the gcd of all vertex coordinates.
    pub fn contraction(&self) -> ContractionData {
        let mut mins = vec![i64::MAX; self.dim];
        for v in &self.vertices {
            for (i, &c) in v.0.iter().enumerate() {
                mins[i] = mins[i].min(c);
            }
        }
        let translated: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.0.iter().zip(&mins).map(|(c, m)| c - m).collect())
            .collect();
        let g = gcd_all(translated.iter().flat_map(|v| v.iter().copied())).max(1);
        let scaled: Vec<Monomial> = translated
            .iter()
            .map(|v| Monomial::new(v.iter().map(|c| c / g).collect()))
            .collect();
        let base = LatticePolytope::hull(&scaled).expect("contraction preserves dimension");
        ContractionData {
            base,
            factor: g,
            translation: mins,
        }
    }

    /// Normality of the polytope. Polygons are always normal; in higher
    /// dimension the levels `m = 2 ... dim-1` are checked against sums of
    /// degree-one lattice points, which suffices because all levels from
    /// `dim-1` on are generated in degree one.
    pub fn is_normal(&self) -> NormalityCertificate {
        if self.dim <= 2 {
            return NormalityCertificate {
                normal: true,
                witness: None,
            };
        }
        let gens = self.lattice_points(1);
        let mut sums: BTreeSet<Monomial> = gens.iter().cloned().collect();
        for m in 2..=(self.dim as i64 - 1) {
            let next: BTreeSet<Monomial> = sums
                .iter()
                .flat_map(|s| gens.iter().map(move |g| s.add(g)))
                .collect();
            for p in self.lattice_points(m) {
                if !next.contains(&p) {
                    return NormalityCertificate {
                        normal: false,
                        witness: Some((m, p)),
                    };
                }
            }
            sums = next;
        }
        NormalityCertificate {
            normal: true,
            witness: None,
        }
    }

    /// Twice the Euclidean area (shoelace) of a lattice polygon.
    pub fn normalized_area(&self) -> Result<i64, PolytopeError> {
        if self.dim != 2 {
            return Err(PolytopeError::NotSurfaceCase(self.dim));
        }
        let n = self.vertices.len();
        let mut acc = 0i64;
        for i in 0..n {
            let a = &self.vertices[i].0;
            let b = &self.vertices[(i + 1) % n].0;
            acc += a[0] * b[1] - b[0] * a[1];
        }
        Ok(acc.abs())
    }
}

/// Convex hull of the union of the supports of all given polynomials.
pub fn newton_polytope(polys: &[SparsePoly]) -> Result<LatticePolytope, PolytopeError> {
    let mut points: Vec<Monomial> = Vec::new();
    for p in polys {
        for (m, c) in p.terms() {
            if !c.is_zero() {
                points.push(m.clone());
            }
        }
    }
    if points.is_empty() {
        return Err(PolytopeError::EmptyInput);
    }
    LatticePolytope::hull(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_int;

    fn pts(list: &[&[i64]]) -> Vec<Monomial> {
        list.iter().map(|p| Monomial::new(p.to_vec())).collect()
    }

    fn poly_from_support(arity: usize, support: &[&[i64]]) -> SparsePoly {
        SparsePoly::from_terms(
            arity,
            support
                .iter()
                .map(|e| (Monomial::new(e.to_vec()), q_int(1))),
        )
    }

    #[test]
    fn unit_triangle_hull() {
        let p = LatticePolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.lattice_points(1).len(), 3);
        assert_eq!(p.normalized_area().unwrap(), 1);
    }

    #[test]
    fn degenerate_support_rejected() {
        // {x*y, 1}: hull of (1,1),(0,0) is a segment in ambient dim 2
        let f = poly_from_support(2, &[&[1, 1]]);
        let g = poly_from_support(2, &[&[0, 0]]);
        match newton_polytope(&[f, g]) {
            Err(PolytopeError::DegeneratePolytope { found: 1, ambient: 2 }) => {}
            other => panic!("expected degenerate, got {:?}", other),
        }
    }

    #[test]
    fn sparse_example_polytope_has_six_points() {
        // (st^6+2, st^5-3st^3, st^4+5s^2t^6, 2+s^2t^6)
        let f1 = poly_from_support(2, &[&[1, 6], &[0, 0]]);
        let f2 = poly_from_support(2, &[&[1, 5], &[1, 3]]);
        let f3 = poly_from_support(2, &[&[1, 4], &[2, 6]]);
        let f4 = poly_from_support(2, &[&[0, 0], &[2, 6]]);
        let p = newton_polytope(&[f1, f2, f3, f4]).unwrap();
        assert_eq!(p.lattice_points(1).len(), 6);
        assert_eq!(p.ehrhart(2), 17);
        assert_eq!(p.ehrhart(3), 34);
        assert_eq!(p.gamma(), 0);
        assert_eq!(p.contraction().factor, 1);
    }

    #[test]
    fn unit_square_counts() {
        let sq = LatticePolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        for k in 0..5 {
            assert_eq!(sq.ehrhart(k), ((k + 1) * (k + 1)) as usize);
        }
        assert_eq!(sq.interior_points(2), pts(&[&[1, 1]]));
        assert_eq!(sq.gamma(), 1);
        assert_eq!(sq.contraction().factor, 1);
    }

    #[test]
    fn trapezoid_ehrhart_matches_closed_form() {
        // vertices (0,0),(2,0),(1,1),(0,1): E(k) = (k+1)(k+1+k/2)
        let tr = LatticePolytope::hull(&pts(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]])).unwrap();
        for k in [1i64, 2, 5] {
            let expect = ((k + 1) * (2 * (k + 1) + k)) as usize / 2;
            assert_eq!(tr.ehrhart(k), expect);
        }
        assert_eq!(tr.ehrhart(5), 51);
        assert_eq!(tr.gamma(), 1);
    }

    #[test]
    fn unit_triangle_interior_points() {
        let t = LatticePolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert!(t.interior_points(2).is_empty());
        assert_eq!(t.interior_points(3), pts(&[&[1, 1]]));
        assert_eq!(t.gamma(), 2);
    }

    #[test]
    fn triangle_contraction() {
        let t = LatticePolytope::hull(&pts(&[&[3, 0], &[0, 3], &[0, 0]])).unwrap();
        assert_eq!(t.gamma(), 0);
        let c = t.contraction();
        assert_eq!(c.factor, 3);
        assert_eq!(c.base.lattice_points(1).len(), 3);
        assert_eq!(c.base.gamma(), 2);
        // idempotence
        assert_eq!(c.base.contraction().factor, 1);
    }

    #[test]
    fn parallelepiped_interior_empty_at_level_one() {
        // (1 x 1 x 2) box
        let mut corner_pts = Vec::new();
        for x in 0..=1 {
            for y in 0..=1 {
                for z in 0..=2 {
                    corner_pts.push(Monomial::new(vec![x, y, z]));
                }
            }
        }
        let box3 = LatticePolytope::hull(&corner_pts).unwrap();
        assert_eq!(box3.dim(), 3);
        assert_eq!(box3.vertices().len(), 8);
        assert!(box3.interior_points(1).is_empty());
        assert_eq!(box3.ehrhart(1), 12);
    }

    #[test]
    fn cube_is_normal_but_classical_simplex_is_not() {
        let cube: Vec<Monomial> = (0..8)
            .map(|i| Monomial::new(vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]))
            .collect();
        let cube = LatticePolytope::hull(&cube).unwrap();
        assert!(cube.is_normal().normal);

        let simplex = LatticePolytope::hull(&pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[1, 1, 3],
        ]))
        .unwrap();
        let cert = simplex.is_normal();
        assert!(!cert.normal);
        let (level, witness) = cert.witness.unwrap();
        assert_eq!(level, 2);
        // witness must actually lie in 2P but not be a sum of two points of P
        assert!(simplex.contains_scaled(&witness, 2));
    }

    #[test]
    fn rectangle_area() {
        let r = LatticePolytope::hull(&pts(&[&[0, 0], &[2, 0], &[2, 6], &[0, 6]])).unwrap();
        assert_eq!(r.normalized_area().unwrap(), 24);
    }

    #[test]
    fn pick_theorem_on_samples() {
        for verts in [
            vec![vec![0, 0], vec![3, 0], vec![0, 3]],
            vec![vec![0, 0], vec![2, 0], vec![3, 2], vec![1, 3]],
            vec![vec![0, 0], vec![4, 1], vec![2, 5]],
        ] {
            let ms: Vec<Monomial> = verts.into_iter().map(Monomial::new).collect();
            let p = LatticePolytope::hull(&ms).unwrap();
            let area2 = p.normalized_area().unwrap();
            let total = p.ehrhart(1) as i64;
            let interior = p.interior_points(1).len() as i64;
            let boundary = total - interior;
            // Pick: E(1) = area + boundary/2 + 1 with area = area2/2
            assert_eq!(2 * total, area2 + boundary + 2);
        }
    }
}
