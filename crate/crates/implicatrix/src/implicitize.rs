//! End-to-end pipeline: representation matrices for the three settings,
//! rank-drop membership tests, implicit equations via determinants of
//! maximal minors and their gcd, extraneous-factor reporting, the degree
//! formula, the moving-lines warm-up for curves, and Gale-dual inputs.

use crate::arith::{q_int, Monomial, Q, SparsePoly};
use crate::gcd::{peel_factor, poly_gcd};
use crate::linalg::{kernel_basis, linear_grid_det, rank_of_linear_grid, LinalgError, QMatrix};
use crate::polytope::{newton_polytope, LatticePolytope, PolytopeError};
use crate::region::{nu0_multiproj_codomain, nu0_projective, region_rb, Complement, Region};
use crate::ring::{Deg, RingElement, RingError, ToricRing};
use crate::syzygy::{koszul_columns, syzygies_in_degree, SyzygyError};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImplicitError {
    #[error("degree {nu:?} is below the certified bound ({bound}); pass force to build anyway")]
    DegreeTooLow { nu: Deg, bound: String },
    #[error("representation matrix is empty at this degree")]
    EmptyMatrix,
    #[error("no full-rank maximal minor found (matrix is {rows}x{cols})")]
    RankDeficient { rows: usize, cols: usize },
    #[error("no factor of the candidate vanishes on the sampled image; degree too low or hypotheses violated")]
    VerificationFailed,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("curve map has base points: {0}")]
    BasePointDetected(String),
    #[error("Gale matrix does not have full column rank")]
    RankDeficientB,
    #[error("Gale matrix columns must sum to zero (column {0})")]
    ColumnSumNonzero(usize),
    #[error("degree formula requires a surface (2-dimensional polytope)")]
    NotSurfaceCase,
    #[error("could not sample a point off the base locus")]
    SamplingFailed,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    ProjectiveCodomain,
    MultiProjCodomain,
    MultiGradedSource,
}

impl Setting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Setting::ProjectiveCodomain => "projective-codomain",
            Setting::MultiProjCodomain => "multiproj-codomain",
            Setting::MultiGradedSource => "multigraded-source",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    SingleMinor,
    MultiMinorGcd,
}

/// Target coordinates of the parametrization, used to sample image points.
#[derive(Clone, Debug)]
pub enum TargetCoords {
    /// `n+1` coordinate polynomials of a map to P^n.
    Projective(Vec<SparsePoly>),
    /// `(f_i, g_i)` pairs of a map to (P^1)^n; an image point interleaves
    /// as `(X_1, Y_1, ..., X_n, Y_n) = (f_1, g_1, ..., f_n, g_n)`.
    Pairs(Vec<(SparsePoly, SparsePoly)>),
}

/// A fully assembled implicitization problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub setting: Setting,
    pub ring: ToricRing,
    /// equal-degree components (empty on the multiprojective-codomain path)
    pub h: Vec<RingElement>,
    /// component pairs (multiprojective-codomain path only)
    pub pairs: Vec<(RingElement, RingElement)>,
    /// Newton polytope of the original input (before contraction)
    pub newton: Option<LatticePolytope>,
    pub target: TargetCoords,
    pub source_arity: usize,
}

/// Degree bound: a scalar for the Z-graded paths, a region complement for
/// the multigraded path.
#[derive(Clone, Debug)]
pub enum NuBound {
    Scalar(i64),
    MultiRegion {
        region: Region,
        complement: Complement,
        default_nu: Option<Deg>,
    },
}

impl Problem {
    /// Projective-codomain problem from the coordinate polynomials of a map
    /// to P^n (equal-degree path).
    pub fn projective(
        coords: &[SparsePoly],
        override_polytope: Option<&LatticePolytope>,
    ) -> Result<Problem, ImplicitError> {
        let newton = newton_polytope(coords)?;
        let (ring, h) = ToricRing::build(coords, override_polytope)?;
        let arity = coords[0].arity();
        Ok(Problem {
            setting: Setting::ProjectiveCodomain,
            ring,
            h,
            pairs: Vec::new(),
            newton: Some(newton),
            target: TargetCoords::Projective(coords.to_vec()),
            source_arity: arity,
        })
    }

    /// Multiprojective-codomain problem from `(f_i, g_i)` pairs; each pair
    /// is realized at its own smallest containment degree on the contracted
    /// polytope of the union of all supports.
    pub fn multiproj_codomain(
        pairs: &[(SparsePoly, SparsePoly)],
        override_polytope: Option<&LatticePolytope>,
    ) -> Result<Problem, ImplicitError> {
        let all: Vec<SparsePoly> = pairs
            .iter()
            .flat_map(|(f, g)| [f.clone(), g.clone()])
            .collect();
        let newton = newton_polytope(&all)?;
        let (ring, _) = ToricRing::build(&all, override_polytope)?;
        let mut ring_pairs = Vec::with_capacity(pairs.len());
        for (f, g) in pairs {
            let err = |p: &SparsePoly| RingError::NotHomogeneousOnPolytope {
                exponent: p.leading().map(|(m, _)| m.0.clone()).unwrap_or_default(),
            };
            let df = ring.min_containment_degree(f).ok_or_else(|| err(f))?;
            let dg = ring.min_containment_degree(g).ok_or_else(|| err(g))?;
            let d = df.max(dg);
            ring_pairs.push((ring.element_of_degree(f, d)?, ring.element_of_degree(g, d)?));
        }
        let arity = pairs[0].0.arity();
        Ok(Problem {
            setting: Setting::MultiProjCodomain,
            ring,
            h: Vec::new(),
            pairs: ring_pairs,
            newton: Some(newton),
            target: TargetCoords::Pairs(pairs.to_vec()),
            source_arity: arity,
        })
    }

    /// Multigraded-source problem over the Cox ring of a product of
    /// projective spaces; all components must share one multidegree.
    pub fn multigraded(ranks: &[usize], coords: &[SparsePoly]) -> Result<Problem, ImplicitError> {
        let ring = ToricRing::multiproj(ranks.to_vec());
        let h: Vec<RingElement> = coords
            .iter()
            .map(|p| ring.element(p))
            .collect::<Result<_, _>>()?;
        let d = h[0].degree.clone();
        for hi in &h {
            if hi.degree != d {
                return Err(SyzygyError::DegreeMismatch(d.clone(), hi.degree.clone()).into());
            }
        }
        let arity = ring.point_arity();
        Ok(Problem {
            setting: Setting::MultiGradedSource,
            ring,
            h,
            pairs: Vec::new(),
            newton: None,
            target: TargetCoords::Projective(coords.to_vec()),
            source_arity: arity,
        })
    }

    /// Common component degree on the equal-degree paths.
    pub fn common_degree(&self) -> Deg {
        self.h.first().map(|e| e.degree.clone()).unwrap_or_default()
    }

    pub fn pair_degrees(&self) -> Vec<i64> {
        self.pairs.iter().map(|(f, _)| f.degree[0]).collect()
    }

    /// The certified degree bound for this problem.
    pub fn nu_bound(&self) -> NuBound {
        match self.setting {
            Setting::ProjectiveCodomain => {
                let n = self.h.len() as i64 - 1;
                let d = self.common_degree()[0];
                let gamma = self.ring.base_polytope().unwrap().gamma();
                NuBound::Scalar(nu0_projective(n, d, gamma))
            }
            Setting::MultiProjCodomain => {
                let gamma = self.ring.base_polytope().unwrap().gamma();
                NuBound::Scalar(nu0_multiproj_codomain(&self.pair_degrees(), gamma))
            }
            Setting::MultiGradedSource => {
                let ranks = match self.ring.grading() {
                    crate::ring::Grading::MultiProj { ranks } => ranks.clone(),
                    _ => unreachable!(),
                };
                let gamma = self.common_degree();
                let (region, complement) = region_rb(&ranks, &gamma);
                let default_nu = match &complement {
                    Complement::ClosedForm { corners } => corners
                        .iter()
                        .min_by_key(|c| {
                            (
                                self.ring.hilbert(c),
                                c.iter().copied().max().unwrap_or(0),
                                std::cmp::Reverse(c.to_vec()),
                            )
                        })
                        .cloned(),
                    Complement::MembershipOnly => None,
                };
                NuBound::MultiRegion {
                    region,
                    complement,
                    default_nu,
                }
            }
        }
    }

    /// Default matrix degree implied by the bound.
    pub fn default_nu(&self) -> Option<Deg> {
        match self.nu_bound() {
            NuBound::Scalar(v) => Some(vec![v]),
            NuBound::MultiRegion { default_nu, .. } => default_nu,
        }
    }

    fn nu_is_admissible(&self, nu: &[i64]) -> (bool, String) {
        match self.nu_bound() {
            NuBound::Scalar(v) => (nu.len() == 1 && nu[0] >= v, format!("nu0 = {}", v)),
            NuBound::MultiRegion { region, .. } => (
                nu.len() == region.s && !region.contains(nu),
                "complement of the invalid-degree region".to_string(),
            ),
        }
    }

    /// Sample a rational source point where the map is defined, returning
    /// its image in target coordinates.
    pub fn sample_image(&self, rng: &mut StdRng) -> Result<Vec<Q>, ImplicitError> {
        for _ in 0..400 {
            let p: Vec<Q> = (0..self.source_arity)
                .map(|_| q_int(rng.gen_range(-11i64..=11)) / q_int(rng.gen_range(1i64..=3)))
                .collect();
            if p.iter().all(|x| x.is_zero()) {
                continue;
            }
            let image = match &self.target {
                TargetCoords::Projective(coords) => {
                    let vals: Vec<Q> = coords.iter().map(|c| c.eval(&p)).collect();
                    if vals.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    vals
                }
                TargetCoords::Pairs(pairs) => {
                    let mut vals = Vec::with_capacity(2 * pairs.len());
                    let mut ok = true;
                    for (f, g) in pairs {
                        let fv = f.eval(&p);
                        let gv = g.eval(&p);
                        if fv.is_zero() && gv.is_zero() {
                            ok = false;
                            break;
                        }
                        vals.push(fv);
                        vals.push(gv);
                    }
                    if !ok {
                        continue;
                    }
                    vals
                }
            };
            return Ok(image);
        }
        Err(ImplicitError::SamplingFailed)
    }

    /// Image of a small torus point (all coordinates nonzero, tiny
    /// numerators and denominators), projectively normalized so that
    /// proportional images collide; used by the interpolation sampler where
    /// row sizes and projective duplicates both matter.
    fn sample_image_normalized(&self, rng: &mut StdRng) -> Result<Vec<Q>, ImplicitError> {
        for _ in 0..400 {
            let p: Vec<Q> = (0..self.source_arity)
                .map(|_| {
                    let num = loop {
                        let v = rng.gen_range(-9i64..=9);
                        if v != 0 {
                            break v;
                        }
                    };
                    q_int(num) / q_int(rng.gen_range(1i64..=3))
                })
                .collect();
            let image = match &self.target {
                TargetCoords::Projective(coords) => {
                    coords.iter().map(|c| c.eval(&p)).collect::<Vec<Q>>()
                }
                TargetCoords::Pairs(pairs) => pairs
                    .iter()
                    .flat_map(|(f, g)| [f.eval(&p), g.eval(&p)])
                    .collect(),
            };
            let Some(first) = image.iter().find(|v| !v.is_zero()).cloned() else {
                continue;
            };
            let inv = first.recip();
            return Ok(image.into_iter().map(|v| v * &inv).collect());
        }
        Err(ImplicitError::SamplingFailed)
    }

    /// Random target point, rejecting zeros of `avoid` when given.
    pub fn sample_off_point(
        &self,
        nvars: usize,
        avoid: Option<&SparsePoly>,
        rng: &mut StdRng,
    ) -> Vec<Q> {
        loop {
            let p: Vec<Q> = (0..nvars)
                .map(|_| q_int(rng.gen_range(-20i64..=20)))
                .collect();
            if p.iter().all(|x| x.is_zero()) {
                continue;
            }
            if let Some(f) = avoid {
                if f.eval(&p).is_zero() {
                    continue;
                }
            }
            return p;
        }
    }
}

/// The representation matrix `M_nu`: rows over the graded basis of `A_nu`,
/// columns over syzygy or Koszul generators, entries linear forms in the
/// target variables (stored as coefficient vectors).
#[derive(Clone, Debug)]
pub struct RepMatrix {
    pub setting: Setting,
    pub nu: Deg,
    pub row_labels: Vec<Monomial>,
    pub col_labels: Vec<String>,
    pub target_vars: Vec<String>,
    pub entries: Vec<Vec<Vec<Q>>>,
    pub generically_full_rank: bool,
    pub below_bound: bool,
}

impl RepMatrix {
    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }
}

/// Assemble the representation matrix of a problem at degree `nu`.
/// Degrees below the certified bound are refused unless `force` is set.
pub fn build_matrix(
    problem: &Problem,
    nu: &[i64],
    force: bool,
    seed: u64,
) -> Result<RepMatrix, ImplicitError> {
    let (admissible, bound_desc) = problem.nu_is_admissible(nu);
    if !admissible && !force {
        return Err(ImplicitError::DegreeTooLow {
            nu: nu.to_vec(),
            bound: bound_desc,
        });
    }
    let row_labels = problem.ring.basis(nu);
    let row_index: BTreeMap<&Monomial, usize> =
        row_labels.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let (col_labels, target_vars, entries) = match problem.setting {
        Setting::ProjectiveCodomain | Setting::MultiGradedSource => {
            let syz = syzygies_in_degree(&problem.ring, &problem.h, nu)?;
            let nt = problem.h.len();
            let target_vars: Vec<String> = (0..nt).map(|i| format!("X{}", i)).collect();
            let col_labels: Vec<String> = (0..syz.dim()).map(|i| format!("syz{}", i)).collect();
            let mut entries = vec![vec![vec![Q::zero(); nt]; syz.dim()]; row_labels.len()];
            for (c, tuple) in syz.generators.iter().enumerate() {
                for (i, a) in tuple.iter().enumerate() {
                    for (m, q) in &a.coeffs {
                        let r = row_index[m];
                        entries[r][c][i] += q;
                    }
                }
            }
            (col_labels, target_vars, entries)
        }
        Setting::MultiProjCodomain => {
            let cols = koszul_columns(&problem.ring, &problem.pairs, nu)?;
            let n = problem.pairs.len();
            let mut target_vars = Vec::with_capacity(2 * n);
            for i in 1..=n {
                target_vars.push(format!("X{}", i));
                target_vars.push(format!("Y{}", i));
            }
            let col_labels: Vec<String> = cols
                .iter()
                .map(|c| format!("pair{}:{:?}", c.pair_index + 1, c.monomial.0))
                .collect();
            let mut entries = vec![vec![vec![Q::zero(); 2 * n]; cols.len()]; row_labels.len()];
            for (c, col) in cols.iter().enumerate() {
                let xi = 2 * col.pair_index;
                let yi = 2 * col.pair_index + 1;
                for (m, q) in &col.f_part.coeffs {
                    entries[row_index[m]][c][yi] += q;
                }
                for (m, q) in &col.g_part.coeffs {
                    entries[row_index[m]][c][xi] -= q;
                }
            }
            (col_labels, target_vars, entries)
        }
    };
    if row_labels.is_empty() || col_labels.is_empty() {
        return Err(ImplicitError::EmptyMatrix);
    }
    let entries = normalize_columns(entries, col_labels.len(), target_vars.len());
    // probabilistic full-row-rank check, retried on accidental rank drop
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let rows = row_labels.len();
    let mut full = false;
    if col_labels.len() >= rows {
        for _ in 0..3 {
            let point: Vec<Q> = (0..target_vars.len())
                .map(|_| q_int(rng.gen_range(-50i64..=50)))
                .collect();
            if rank_of_linear_grid(&entries, &point)? == rows {
                full = true;
                break;
            }
        }
    }
    Ok(RepMatrix {
        setting: problem.setting,
        nu: nu.to_vec(),
        row_labels,
        col_labels,
        target_vars,
        entries,
        generically_full_rank: full,
        below_bound: !admissible,
    })
}

/// Scale every column to primitive integer coefficients. A column is a
/// syzygy basis vector up to scale, so this only rescales minors by a
/// nonzero rational, which the content normalization of every determinant
/// absorbs; integer entries keep the fraction-free eliminations fast.
fn normalize_columns(
    mut entries: Vec<Vec<Vec<Q>>>,
    cols: usize,
    nvars: usize,
) -> Vec<Vec<Vec<Q>>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    for c in 0..cols {
        let mut den_lcm = BigInt::from(1);
        let mut num_gcd = BigInt::from(0);
        for row in entries.iter() {
            for q in &row[c] {
                if !q.is_zero() {
                    den_lcm = den_lcm.lcm(q.denom());
                    num_gcd = num_gcd.gcd(q.numer());
                }
            }
        }
        if num_gcd.is_zero() {
            continue;
        }
        let factor = Q::new(den_lcm, num_gcd);
        if factor == Q::from_integer(1.into()) {
            continue;
        }
        for row in entries.iter_mut() {
            for q in row[c].iter_mut() {
                if !q.is_zero() {
                    *q *= &factor;
                }
            }
        }
        let _ = nvars;
    }
    entries
}

/// Exact rank of the matrix evaluated at a target point.
pub fn rank_at(m: &RepMatrix, point: &[Q]) -> Result<usize, ImplicitError> {
    if point.len() != m.target_vars.len() {
        return Err(ImplicitError::DimensionMismatch {
            expected: m.target_vars.len(),
            got: point.len(),
        });
    }
    Ok(rank_of_linear_grid(&m.entries, point)?)
}

/// Rank-drop membership: the point lies on the represented hypersurface
/// (or on an extraneous-factor locus when the base scheme is not LCI) iff
/// the evaluated rank drops below the row count.
pub fn is_on_hypersurface(m: &RepMatrix, point: &[Q]) -> Result<bool, ImplicitError> {
    Ok(rank_at(m, point)? < m.rows())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorStatus {
    /// the sample-verified implicit equation, raised to the given power
    ImplicitEquationPower(u32),
    /// does not vanish on sampled image points
    Extraneous,
    /// vanishes on samples but was not isolated as the implicit equation
    Unverified,
}

#[derive(Clone, Debug)]
pub struct DegreeReportData {
    pub area_bound: i64,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct ImplicitResult {
    pub candidate: SparsePoly,
    pub degree: i64,
    pub verified: bool,
    pub factors: Vec<(SparsePoly, FactorStatus)>,
    pub deg_formula: Option<DegreeReportData>,
    pub minors_used: usize,
}

/// Greedy independent-column selection at a random evaluation point,
/// honoring the given column preference order (the leftmost order
/// reproduces the reference MaxCol selection).
fn greedy_columns(
    m: &RepMatrix,
    order: &[usize],
    point: &[Q],
) -> Result<Option<Vec<usize>>, ImplicitError> {
    let rows = m.rows();
    let mut evaluated: Vec<Vec<Q>> = Vec::with_capacity(m.cols());
    for c in 0..m.cols() {
        let mut col = Vec::with_capacity(rows);
        for r in 0..rows {
            let lin = &m.entries[r][c];
            let mut acc = Q::zero();
            for (a, x) in lin.iter().zip(point) {
                if !a.is_zero() && !x.is_zero() {
                    acc += a * x;
                }
            }
            col.push(acc);
        }
        evaluated.push(col);
    }
    let mut reducer = crate::ring::RowReducer::new(rows);
    let mut chosen = Vec::with_capacity(rows);
    for &c in order {
        if reducer.insert(evaluated[c].clone()) {
            chosen.push(c);
            if chosen.len() == rows {
                chosen.sort_unstable();
                return Ok(Some(chosen));
            }
        }
    }
    Ok(None)
}

fn minor_det(m: &RepMatrix, cols: &[usize]) -> SparsePoly {
    let sub: Vec<Vec<Vec<Q>>> = (0..m.rows())
        .map(|r| cols.iter().map(|&c| m.entries[r][c].clone()).collect())
        .collect();
    linear_grid_det(&sub, m.target_vars.len())
}

fn homogeneous_monomials(nvars: usize, degree: i64) -> Vec<Monomial> {
    crate::ring::compositions(degree, nvars)
        .into_iter()
        .map(Monomial::new)
        .collect()
}

/// Interpolate the lowest-degree homogeneous polynomial vanishing on
/// sampled image points. Any homogeneous polynomial of that degree
/// vanishing on the whole image is a scalar multiple of the implicit
/// equation, and every use is confirmed by exact division afterwards, so
/// an unlucky sample can only cause a fallback, never a wrong answer.
fn interpolate_image_equation(
    problem: &Problem,
    nvars: usize,
    max_degree: i64,
    rng: &mut StdRng,
) -> Option<SparsePoly> {
    if matches!(problem.setting, Setting::MultiProjCodomain) {
        return None; // multihomogeneous candidates are handled by plain gcd
    }
    let debug = std::env::var("IMPLICATRIX_DEBUG").is_ok();
    // projectively distinct sample pool, grown on demand
    let mut pool: Vec<Vec<Q>> = Vec::new();
    let mut grow_pool = |pool: &mut Vec<Vec<Q>>, want: usize| -> bool {
        let mut misses = 0;
        while pool.len() < want {
            match problem.sample_image_normalized(rng) {
                Ok(img) => {
                    if pool.contains(&img) {
                        misses += 1;
                        if misses > 2000 {
                            return false;
                        }
                    } else {
                        pool.push(img);
                    }
                }
                Err(_) => return false,
            }
        }
        true
    };
    for degree in 1..=max_degree.min(12) {
        let monos: Vec<Monomial> = homogeneous_monomials(nvars, degree);
        if monos.len() > 220 {
            return None;
        }
        let mut extra = 6;
        loop {
            if !grow_pool(&mut pool, monos.len() + extra) {
                return None;
            }
            let rows: Vec<Vec<Q>> = pool
                .iter()
                .map(|img| {
                    monos
                        .iter()
                        .map(|m| {
                            let mut acc = Q::from_integer(1.into());
                            for (i, &e) in m.0.iter().enumerate() {
                                for _ in 0..e {
                                    acc *= &img[i];
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let kernel = kernel_basis(&QMatrix::from_rows(rows));
            if debug {
                eprintln!(
                    "interpolate: degree {}, {} monomials, {} samples, kernel {}",
                    degree,
                    monos.len(),
                    pool.len(),
                    kernel.len()
                );
            }
            match kernel.len() {
                0 => break, // nothing vanishes in this degree
                1 => {
                    let cand = SparsePoly::from_terms(
                        nvars,
                        monos
                            .iter()
                            .cloned()
                            .zip(kernel[0].iter().cloned())
                            .filter(|(_, c)| !c.is_zero()),
                    )
                    .normalized();
                    let ok = (0..10).all(|_| match problem.sample_image(rng) {
                        Ok(img) => cand.eval(&img).is_zero(),
                        Err(_) => false,
                    });
                    if ok {
                        return Some(cand);
                    }
                    if debug {
                        eprintln!("interpolate: candidate failed fresh-sample check");
                    }
                    return None;
                }
                _ => {
                    // not yet enough independent conditions: add samples
                    if extra >= 60 {
                        return None;
                    }
                    extra += 24;
                }
            }
        }
    }
    None
}

/// Extract the implicit equation from a representation matrix.
///
/// `SingleMinor` takes the determinant of the greedy leftmost maximal
/// minor; `MultiMinorGcd` takes up to four distinct minors and returns the
/// gcd of their determinants. The sample-verified factor is isolated, its
/// power peeled off by exact division, and remaining factors are tagged.
pub fn implicit_equation(
    problem: &Problem,
    m: &RepMatrix,
    strategy: Strategy,
    samples: usize,
    seed: u64,
) -> Result<ImplicitResult, ImplicitError> {
    let rows = m.rows();
    let cols = m.cols();
    if rows > cols || !m.generically_full_rank {
        return Err(ImplicitError::RankDeficient { rows, cols });
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let nvars = m.target_vars.len();

    // column preference orders: leftmost, rightmost, then seeded shuffles
    let mut orders: Vec<Vec<usize>> = vec![(0..cols).collect()];
    if matches!(strategy, Strategy::MultiMinorGcd) {
        orders.push((0..cols).rev().collect());
        for _ in 0..2 {
            let mut o: Vec<usize> = (0..cols).collect();
            for i in (1..o.len()).rev() {
                let j = rng.gen_range(0..=i);
                o.swap(i, j);
            }
            orders.push(o);
        }
    }

    let mut selections: Vec<Vec<usize>> = Vec::new();
    for order in &orders {
        for _ in 0..3 {
            let point = problem.sample_off_point(nvars, None, &mut rng);
            if let Some(sel) = greedy_columns(m, order, &point)? {
                if !selections.contains(&sel) {
                    selections.push(sel);
                }
                break;
            }
        }
    }
    if selections.is_empty() {
        return Err(ImplicitError::RankDeficient { rows, cols });
    }

    let dets: Vec<SparsePoly> = selections
        .par_iter()
        .map(|sel| minor_det(m, sel).normalized())
        .collect();
    let dets: Vec<SparsePoly> = dets.into_iter().filter(|d| !d.is_zero()).collect();
    if dets.is_empty() {
        return Err(ImplicitError::RankDeficient { rows, cols });
    }

    // the verified-factor isolation backs the gcd and the factor report of
    // the multi-minor strategy; the single-minor determinant is reported
    // whole
    let verified_factor = if matches!(strategy, Strategy::MultiMinorGcd) {
        let max_deg = dets.iter().map(|d| d.total_degree()).min().unwrap();
        interpolate_image_equation(problem, nvars, max_deg, &mut rng)
    } else {
        None
    };

    let candidate = match strategy {
        Strategy::SingleMinor => dets[0].clone(),
        Strategy::MultiMinorGcd => match &verified_factor {
            Some(f) => {
                // peel the verified factor first, then gcd the cofactors;
                // this keeps the pairwise gcds at the cofactor degrees
                let peeled: Vec<(u32, SparsePoly)> =
                    dets.iter().map(|d| peel_factor(d, f)).collect();
                let min_e = peeled.iter().map(|(e, _)| *e).min().unwrap();
                if min_e == 0 {
                    let mut g = dets[0].clone();
                    for d in &dets[1..] {
                        g = poly_gcd(&g, d);
                    }
                    g
                } else {
                    let mut g = peeled[0].1.clone();
                    for (_, cof) in &peeled[1..] {
                        g = poly_gcd(&g, cof);
                        if g.total_degree() == 0 {
                            break;
                        }
                    }
                    f.pow(min_e).mul(&g).normalized()
                }
            }
            None => {
                let mut g = dets[0].clone();
                for d in &dets[1..] {
                    g = poly_gcd(&g, d);
                }
                g
            }
        },
    }
    .normalized();

    // verification by substitution of the parametrization
    let mut verified = true;
    for _ in 0..samples {
        let img = problem.sample_image(&mut rng)?;
        if !candidate.eval(&img).is_zero() {
            verified = false;
            break;
        }
    }

    // factor report
    let mut factors: Vec<(SparsePoly, FactorStatus)> = Vec::new();
    let mut have_verified_factor = false;
    match &verified_factor {
        Some(f) => {
            let (e, rest) = peel_factor(&candidate, f);
            if e > 0 {
                have_verified_factor = true;
                factors.push((f.clone(), FactorStatus::ImplicitEquationPower(e)));
                if rest.total_degree() > 0 {
                    let mut rest_vanishes = true;
                    for _ in 0..samples.min(20) {
                        let img = problem.sample_image(&mut rng)?;
                        if !rest.eval(&img).is_zero() {
                            rest_vanishes = false;
                            break;
                        }
                    }
                    factors.push((
                        rest.normalized(),
                        if rest_vanishes {
                            FactorStatus::Unverified
                        } else {
                            FactorStatus::Extraneous
                        },
                    ));
                }
            }
        }
        None => {}
    }
    if !have_verified_factor {
        factors.push((
            candidate.clone(),
            if verified {
                FactorStatus::Unverified
            } else {
                FactorStatus::Extraneous
            },
        ));
        if !verified {
            return Err(ImplicitError::VerificationFailed);
        }
    }

    let deg_formula = problem.newton.as_ref().and_then(|n| degree_report(n).ok());

    Ok(ImplicitResult {
        degree: candidate.total_degree(),
        candidate,
        verified,
        factors,
        deg_formula,
        minors_used: dets.len(),
    })
}

/// Degree formula for the surface case: the normalized area of the Newton
/// polygon bounds `deg(phi) * deg(S)`; equality holds exactly when the map
/// is base-point free (base-point multiplicities are not computed here).
pub fn degree_report(newton: &LatticePolytope) -> Result<DegreeReportData, ImplicitError> {
    let area = newton
        .normalized_area()
        .map_err(|_| ImplicitError::NotSurfaceCase)?;
    Ok(DegreeReportData {
        area_bound: area,
        note: "normalized area of the Newton polygon; an upper bound for deg(phi)*deg(S) that \
               is exact for base-point-free maps (base-point multiplicities are subtracted but \
               not computed here)"
            .to_string(),
    })
}

/// Moving-lines implicitization of a plane curve given by three homogeneous
/// bivariate polynomials of degree `k` (univariate affine input is
/// homogenized): the determinant of the k x k matrix of linear forms built
/// from `Syz(a,b,c)_{k-1}` is `lambda * F^e`.
pub fn moving_lines_curve(
    a: &SparsePoly,
    b: &SparsePoly,
    c: &SparsePoly,
    k: i64,
    samples: usize,
    seed: u64,
) -> Result<ImplicitResult, ImplicitError> {
    let homogenize = |p: &SparsePoly| -> Result<SparsePoly, ImplicitError> {
        match p.arity() {
            1 => Ok(SparsePoly::from_terms(
                2,
                p.terms()
                    .map(|(m, q)| (Monomial::new(vec![k - m.0[0], m.0[0]]), q.clone())),
            )),
            2 if p.is_homogeneous() && p.total_degree() == k => Ok(p.clone()),
            _ => Err(ImplicitError::BasePointDetected(
                "curve components must be homogeneous bivariate of the stated degree \
                 (or univariate affine)"
                    .into(),
            )),
        }
    };
    let (a, b, c) = (homogenize(a)?, homogenize(b)?, homogenize(c)?);
    let g = poly_gcd(&poly_gcd(&a, &b), &c);
    if g.total_degree() > 0 {
        return Err(ImplicitError::BasePointDetected(format!(
            "gcd(a, b, c) = {:?} is not constant",
            g
        )));
    }
    let ring = ToricRing::multiproj(vec![1]);
    let h = vec![ring.element(&a)?, ring.element(&b)?, ring.element(&c)?];
    let problem = Problem {
        setting: Setting::MultiGradedSource,
        ring,
        h,
        pairs: Vec::new(),
        newton: None,
        target: TargetCoords::Projective(vec![a.clone(), b.clone(), c.clone()]),
        source_arity: 2,
    };
    let m = build_matrix(&problem, &[k - 1], true, seed)?;
    if m.cols() != k as usize {
        return Err(ImplicitError::BasePointDetected(format!(
            "expected {} independent moving lines, found {}",
            k,
            m.cols()
        )));
    }
    implicit_equation(&problem, &m, Strategy::SingleMinor, samples, seed)
}

/// Dehomogenize by dropping the last exponent coordinate; the usual bridge
/// from the homogeneous Gale-dual pairs to the affine pipeline input.
pub fn dehomogenize_last(p: &SparsePoly) -> SparsePoly {
    assert!(p.arity() >= 1);
    SparsePoly::from_terms(
        p.arity() - 1,
        p.terms()
            .map(|(m, c)| (Monomial::new(m.0[..m.0.len() - 1].to_vec()), c.clone())),
    )
}

/// Rational map pairs from a Gale-dual integer matrix: row `i` gives the
/// linear form `l_i`, and column `j` the pair
/// `f_j = prod_{B_ij > 0} l_i^{B_ij}`, `g_j = prod_{B_ij < 0} l_i^{-B_ij}`.
pub fn gale_dual_map(b: &[Vec<i64>]) -> Result<Vec<(SparsePoly, SparsePoly)>, ImplicitError> {
    let rows = b.len();
    assert!(rows > 0);
    let cols = b[0].len();
    let qm = QMatrix::from_rows(
        b.iter()
            .map(|r| r.iter().map(|&v| q_int(v)).collect())
            .collect(),
    );
    if crate::linalg::rank(&qm) != cols {
        return Err(ImplicitError::RankDeficientB);
    }
    for j in 0..cols {
        let s: i64 = b.iter().map(|r| r[j]).sum();
        if s != 0 {
            return Err(ImplicitError::ColumnSumNonzero(j));
        }
    }
    let linear_forms: Vec<SparsePoly> = b
        .iter()
        .map(|row| {
            let mut p = SparsePoly::zero(cols);
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    let mut e = vec![0i64; cols];
                    e[j] = 1;
                    p.add_term(&Monomial::new(e), &q_int(v));
                }
            }
            p
        })
        .collect();
    let mut pairs = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut f = SparsePoly::one(cols);
        let mut g = SparsePoly::one(cols);
        for (i, l) in linear_forms.iter().enumerate() {
            let e = b[i][j];
            if e > 0 {
                f = f.mul(&l.pow(e as u32));
            } else if e < 0 {
                g = g.mul(&l.pow((-e) as u32));
            }
        }
        pairs.push((f, g));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(arity: usize, terms: &[(&[i64], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            arity,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.to_vec()), q_int(*c))),
        )
    }

    fn sparse_example_problem() -> Problem {
        Problem::projective(
            &[
                sp(2, &[(&[1, 6], 1), (&[0, 0], 2)]),
                sp(2, &[(&[1, 5], 1), (&[1, 3], -3)]),
                sp(2, &[(&[1, 4], 1), (&[2, 6], 5)]),
                sp(2, &[(&[0, 0], 2), (&[2, 6], 1)]),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn sparse_example_matrix_is_17_by_34() {
        let problem = sparse_example_problem();
        assert_eq!(problem.default_nu(), Some(vec![2]));
        let m = build_matrix(&problem, &[2], false, 7).unwrap();
        assert_eq!((m.rows(), m.cols()), (17, 34));
        assert!(m.generically_full_rank);
    }

    #[test]
    fn degree_too_low_without_force() {
        let problem = sparse_example_problem();
        assert!(matches!(
            build_matrix(&problem, &[1], false, 7),
            Err(ImplicitError::DegreeTooLow { .. })
        ));
        let forced = build_matrix(&problem, &[1], true, 7).unwrap();
        assert!(forced.below_bound);
    }

    #[test]
    fn rank_drops_exactly_on_image_points() {
        let problem = sparse_example_problem();
        let m = build_matrix(&problem, &[2], false, 7).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let img = problem.sample_image(&mut rng).unwrap();
            assert!(is_on_hypersurface(&m, &img).unwrap());
        }
        let off = problem.sample_off_point(4, None, &mut rng);
        // overwhelming probability off the sextic surface
        assert_eq!(rank_at(&m, &off).unwrap(), 17);
    }

    #[test]
    fn dimension_mismatch_detected() {
        let problem = sparse_example_problem();
        let m = build_matrix(&problem, &[2], false, 7).unwrap();
        assert!(matches!(
            rank_at(&m, &[q_int(1), q_int(2)]),
            Err(ImplicitError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn moving_lines_circle() {
        // (2st, s^2 - t^2, s^2 + t^2) parametrizes x^2 + y^2 - z^2
        let a = sp(2, &[(&[1, 1], 2)]);
        let b = sp(2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let c = sp(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let res = moving_lines_curve(&a, &b, &c, 2, 20, 5).unwrap();
        let expect = sp(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], -1)]);
        assert_eq!(res.candidate, expect.normalized());
        assert!(res.verified);
    }

    #[test]
    fn moving_lines_conic() {
        // (s^2, st, t^2) parametrizes y^2 - xz
        let a = sp(2, &[(&[2, 0], 1)]);
        let b = sp(2, &[(&[1, 1], 1)]);
        let c = sp(2, &[(&[0, 2], 1)]);
        let res = moving_lines_curve(&a, &b, &c, 2, 20, 5).unwrap();
        let expect = sp(3, &[(&[0, 2, 0], 1), (&[1, 0, 1], -1)]);
        assert_eq!(res.candidate.normalized(), expect.normalized());
    }

    #[test]
    fn moving_lines_rejects_common_factor() {
        let a = sp(2, &[(&[2, 0], 1)]);
        let b = sp(2, &[(&[2, 0], 2)]);
        let c = sp(2, &[(&[1, 1], 1)]);
        assert!(matches!(
            moving_lines_curve(&a, &b, &c, 2, 5, 5),
            Err(ImplicitError::BasePointDetected(_))
        ));
    }

    #[test]
    fn gale_dual_quartic_discriminant_pairs() {
        let b = vec![
            vec![1, 0, 0],
            vec![-2, 1, 0],
            vec![1, -2, 1],
            vec![0, 1, -2],
            vec![0, 0, 1],
        ];
        let pairs = gale_dual_map(&b).unwrap();
        let l1 = sp(3, &[(&[1, 0, 0], 1)]);
        let l2 = sp(3, &[(&[1, 0, 0], -2), (&[0, 1, 0], 1)]);
        let l3 = sp(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], -2), (&[0, 0, 1], 1)]);
        let l4 = sp(3, &[(&[0, 1, 0], 1), (&[0, 0, 1], -2)]);
        let l5 = sp(3, &[(&[0, 0, 1], 1)]);
        assert_eq!(pairs[0].0, l1.mul(&l3));
        assert_eq!(pairs[0].1, l2.mul(&l2));
        assert_eq!(pairs[1].0, l2.mul(&l4));
        assert_eq!(pairs[1].1, l3.mul(&l3));
        assert_eq!(pairs[2].0, l3.mul(&l5));
        assert_eq!(pairs[2].1, l4.mul(&l4));
    }

    #[test]
    fn gale_dual_trivial_column() {
        // single column (1, -1)^t over one variable: f = l1 = u, g = l2 = -u
        let b = vec![vec![1], vec![-1]];
        let pairs = gale_dual_map(&b).unwrap();
        assert_eq!(pairs[0].0, sp(1, &[(&[1], 1)]));
        assert_eq!(pairs[0].1, sp(1, &[(&[1], -1)]));
    }

    #[test]
    fn gale_dual_quartic_feeds_multiproj_pipeline() {
        let b = vec![
            vec![1, 0, 0],
            vec![-2, 1, 0],
            vec![1, -2, 1],
            vec![0, 1, -2],
            vec![0, 0, 1],
        ];
        let pairs: Vec<(SparsePoly, SparsePoly)> = gale_dual_map(&b)
            .unwrap()
            .iter()
            .map(|(f, g)| (dehomogenize_last(f), dehomogenize_last(g)))
            .collect();
        let problem = Problem::multiproj_codomain(&pairs, None).unwrap();
        // contraction of the degree-2 supports is the unit triangle (P^2)
        assert_eq!(problem.ring.num_coords(), 3);
        assert_eq!(problem.pair_degrees(), vec![2, 2, 2]);
        assert_eq!(problem.default_nu(), Some(vec![4]));
    }

    #[test]
    fn gale_dual_triangulated_matrix_degree_bound() {
        // the triangulated discriminant matrix C*M: degrees (2, 11, 3) and
        // a determinant-strand bound beyond 10
        let cm = vec![
            vec![1, 0, 0],
            vec![-1, -3, 0],
            vec![1, -8, 3],
            vec![0, 11, -2],
            vec![-1, 0, -1],
        ];
        let pairs: Vec<(SparsePoly, SparsePoly)> = gale_dual_map(&cm)
            .unwrap()
            .iter()
            .map(|(f, g)| (dehomogenize_last(f), dehomogenize_last(g)))
            .collect();
        for (f, g) in &pairs {
            assert_eq!(f.total_degree(), g.total_degree());
        }
        let problem = Problem::multiproj_codomain(&pairs, None).unwrap();
        assert_eq!(problem.pair_degrees(), vec![2, 11, 3]);
        let nu0 = match problem.nu_bound() {
            NuBound::Scalar(v) => v,
            _ => unreachable!(),
        };
        assert!(nu0 > 10, "nu0 = {}", nu0);
        // the strand is buildable at the bound
        let m = build_matrix(&problem, &[nu0], false, 42).unwrap();
        assert_eq!(m.rows(), problem.ring.hilbert(&[nu0]));
    }

    #[test]
    fn gale_dual_rejects_bad_input() {
        let b = vec![vec![1, 1], vec![-1, -1]];
        assert!(matches!(
            gale_dual_map(&b),
            Err(ImplicitError::RankDeficientB)
        ));
        let b2 = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            gale_dual_map(&b2),
            Err(ImplicitError::ColumnSumNonzero(_))
        ));
    }
}
