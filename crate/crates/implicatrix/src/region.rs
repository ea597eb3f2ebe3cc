//! Degree bounds for all three settings: the scalar nu_0 formulas for the
//! projective and multiprojective-codomain paths, and the multigraded region
//! machinery (local-cohomology supports, the shifted union S_B(gamma), the
//! region R_B(gamma) and its complement) for products of projective spaces.

use std::collections::BTreeMap;

/// Finite union of shifted orthants in Z^s. A sign of `true` in coordinate
/// `j` means the orthant extends upwards (`x_j >= shift_j`), `false` means
/// downwards (`x_j <= shift_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub s: usize,
    pub orthants: Vec<Orthant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthant {
    pub shift: Vec<i64>,
    pub signs: Vec<bool>,
}

impl Orthant {
    pub fn contains(&self, p: &[i64]) -> bool {
        self.shift
            .iter()
            .zip(&self.signs)
            .zip(p)
            .all(|((s, up), x)| if *up { x >= s } else { x <= s })
    }

    fn shifted(&self, delta: &[i64]) -> Orthant {
        Orthant {
            shift: self.shift.iter().zip(delta).map(|(a, b)| a + b).collect(),
            signs: self.signs.clone(),
        }
    }
}

impl Region {
    pub fn empty(s: usize) -> Region {
        Region {
            s,
            orthants: Vec::new(),
        }
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        assert_eq!(p.len(), self.s);
        self.orthants.iter().any(|o| o.contains(p))
    }

    pub fn union(&self, other: &Region) -> Region {
        assert_eq!(self.s, other.s);
        let mut orthants = self.orthants.clone();
        orthants.extend(other.orthants.iter().cloned());
        Region { s: self.s, orthants }
    }

    pub fn shifted(&self, delta: &[i64]) -> Region {
        Region {
            s: self.s,
            orthants: self.orthants.iter().map(|o| o.shifted(delta)).collect(),
        }
    }
}

/// Complement of the region of invalid degrees. Closed form (a union of
/// shifted positive orthants) is available for two grading blocks and
/// strictly positive gamma; otherwise callers fall back to membership
/// queries against the region itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Complement {
    /// Union of `N^s + corner` over the listed corners.
    ClosedForm { corners: Vec<Vec<i64>> },
    /// No closed form computed; query the region and negate.
    MembershipOnly,
}

impl Complement {
    pub fn contains(&self, region: &Region, p: &[i64]) -> bool {
        match self {
            Complement::ClosedForm { corners } => corners
                .iter()
                .any(|c| c.iter().zip(p).all(|(ci, xi)| xi >= ci)),
            Complement::MembershipOnly => !region.contains(p),
        }
    }
}

/// Supports of the nonzero local cohomology of the Cox ring of
/// `P^{r_1} x ... x P^{r_s}` with respect to the irrelevant ideal, indexed
/// by cohomological degree. For a subset `alpha` of blocks the support is
/// the orthant that is negative (with shift `-(r_j + 1)`) exactly on the
/// `alpha` coordinates, attached to index
/// `sum_{j in alpha} (r_j + 1) - (#alpha - 1)`; subsets with equal index are
/// unioned.
pub fn multigraded_supports(ranks: &[usize]) -> BTreeMap<usize, Region> {
    let s = ranks.len();
    assert!(s >= 1);
    let mut out: BTreeMap<usize, Region> = BTreeMap::new();
    for mask in 1u32..(1 << s) {
        let alpha: Vec<usize> = (0..s).filter(|j| mask & (1 << j) != 0).collect();
        let ell: usize =
            alpha.iter().map(|&j| ranks[j] + 1).sum::<usize>() - (alpha.len() - 1);
        let mut shift = vec![0i64; s];
        let mut signs = vec![true; s];
        for &j in &alpha {
            shift[j] = -((ranks[j] + 1) as i64);
            signs[j] = false;
        }
        let orthant = Orthant { shift, signs };
        out.entry(ell)
            .and_modify(|r| r.orthants.push(orthant.clone()))
            .or_insert_with(|| Region {
                s,
                orthants: vec![orthant.clone()],
            });
    }
    out
}

/// `S_B(gamma) = union_k (Supp H^k_B(R) + k*gamma)`.
pub fn sigma_b(ranks: &[usize], gamma: &[i64]) -> Region {
    let s = ranks.len();
    assert_eq!(gamma.len(), s);
    let mut acc = Region::empty(s);
    for (ell, supp) in multigraded_supports(ranks) {
        let delta: Vec<i64> = gamma.iter().map(|g| g * ell as i64).collect();
        acc = acc.union(&supp.shifted(&delta));
    }
    acc
}

/// The region `R_B(gamma)` of invalid degrees together with a description of
/// its complement (the valid degrees). For componentwise non-negative gamma
/// the general union collapses to `S_B(gamma) - gamma`; the closed-form
/// complement is computed for `s = 2` and strictly positive gamma by corner
/// enumeration.
pub fn region_rb(ranks: &[usize], gamma: &[i64]) -> (Region, Complement) {
    assert!(
        gamma.iter().all(|&g| g >= 0),
        "region_rb is the N^s-positive simplification"
    );
    let neg_gamma: Vec<i64> = gamma.iter().map(|g| -g).collect();
    let region = sigma_b(ranks, gamma).shifted(&neg_gamma);
    let complement = complement_closed_form(ranks, gamma, &region);
    (region, complement)
}

/// General definition without the positivity simplification:
/// `R_B(gamma) = union_{0 < k < min(m, cd_B(R))} (S_B(gamma) - k*gamma)`,
/// with `m` the number of map components minus one.
pub fn region_rb_general(ranks: &[usize], gamma: &[i64], m: usize) -> Region {
    let s = ranks.len();
    let sigma = sigma_b(ranks, gamma);
    let cd: usize = ranks.iter().map(|r| r + 1).sum::<usize>() - (s - 1);
    let hi = m.min(cd);
    let mut acc = Region::empty(s);
    for k in 1..hi {
        let delta: Vec<i64> = gamma.iter().map(|g| -g * k as i64).collect();
        acc = acc.union(&sigma.shifted(&delta));
    }
    acc
}

/// Corner enumeration of the complement for two blocks. The region is a
/// union of one up-left, one down-right and one down-left orthant; for
/// strictly positive gamma its complement in Z^2 is exactly two shifted
/// positive orthants.
fn complement_closed_form(ranks: &[usize], gamma: &[i64], region: &Region) -> Complement {
    if ranks.len() != 2 || gamma.iter().any(|&g| g < 1) {
        return Complement::MembershipOnly;
    }
    let m1 = (ranks[0] + 1) as i64;
    let m2 = (ranks[1] + 1) as i64;
    let (g1, g2) = (gamma[0], gamma[1]);
    // R_B orthant corners (after the -gamma shift):
    // up-left:   a <= A1, b >= B1
    // down-right: a >= A2, b <= B2
    // down-left: a <= A3, b <= B3
    let a1 = -m1 + (m1 - 1) * g1;
    let b2 = -m2 + (m2 - 1) * g2;
    let a3 = -m1 + (m1 + m2 - 2) * g1;
    let b3 = -m2 + (m1 + m2 - 2) * g2;
    let mut corners = vec![vec![a1 + 1, b3 + 1], vec![a3 + 1, b2 + 1]];
    // drop an absorbed corner
    corners.dedup();
    if corners.len() == 2 {
        let dominated = |a: &Vec<i64>, b: &Vec<i64>| a[0] >= b[0] && a[1] >= b[1];
        if dominated(&corners[0], &corners[1]) {
            corners.remove(0);
        } else if dominated(&corners[1], &corners[0]) {
            corners.remove(1);
        }
    }
    // sanity: corners must not lie in the region
    debug_assert!(corners.iter().all(|c| !region.contains(c)));
    Complement::ClosedForm { corners }
}

/// `nu_0 = max{(n-2)d, (n-1)d - gamma}` for the projective-codomain path.
pub fn nu0_projective(n: i64, d: i64, gamma: i64) -> i64 {
    assert!(n >= 2 && d >= 1);
    ((n - 2) * d).max((n - 1) * d - gamma)
}

/// `nu_0 = sum d_i - gamma` for the (P^1)^n-codomain path.
pub fn nu0_multiproj_codomain(d: &[i64], gamma: i64) -> i64 {
    assert!(!d.is_empty());
    d.iter().sum::<i64>() - gamma
}

/// The alternate eta_0 conventions used by individual worked examples;
/// reported alongside the theorem bound so a caller can pick either.
pub fn eta0_variants(d: &[i64], gamma: i64) -> (i64, i64) {
    let sum: i64 = d.iter().sum();
    let bc05 = d.iter().map(|x| x - 1).sum::<i64>() + 1;
    (bc05, sum - gamma + 1)
}

/// Row-count comparison between the Newton polytope embedding and its
/// contraction: `delta = d(gamma+1) - (gamma'+1)`, and the contraction has
/// strictly fewer matrix rows iff `delta > d - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionTradeoff {
    pub delta: i64,
    pub threshold: i64,
    pub contraction_strictly_fewer_rows: bool,
    pub nu0_original: i64,
    pub nu0_contracted: i64,
}

pub fn contraction_tradeoff(d: i64, gamma: i64, gamma_prime: i64, n: i64) -> ContractionTradeoff {
    let delta = d * (gamma + 1) - (gamma_prime + 1);
    ContractionTradeoff {
        delta,
        threshold: d - 1,
        contraction_strictly_fewer_rows: delta > d - 1,
        nu0_original: nu0_projective(n, 1, gamma),
        nu0_contracted: nu0_projective(n, d, gamma_prime),
    }
}
