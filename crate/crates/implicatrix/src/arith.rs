//! Exact rational scalars, exponent vectors and sparse multivariate polynomials.
//!
//! Everything downstream (kernels, determinants, semigroup rings) is built on
//! the three types in this module. All arithmetic is arbitrary precision;
//! there is no floating point anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar. `BigRational` keeps the canonical form we need:
/// reduced fraction, positive denominator.
pub type Q = BigRational;

/// Integer shorthand.
pub type Z = BigInt;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

/// Parse "p/q" or "p" into a rational.
pub fn q_parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Z = n.trim().parse().ok()?;
            let d: Z = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => {
            let n: Z = s.parse().ok()?;
            Some(Q::from_integer(n))
        }
    }
}

pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exponent vector of a monomial, also used as a lattice point.
///
/// Ordered by graded lexicographic order: total degree first, then
/// lexicographic with the first coordinate most significant. This is the one
/// term order used everywhere a canonical order is needed (graded bases, gcd
/// normalization, golden matrices).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial(exps)
    }

    pub fn zero(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if any coordinate would go negative.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
/// always in ascending graded-lex order and no zero coefficient is ever
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    arity: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePoly {
    pub fn zero(arity: usize) -> Self {
        SparsePoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::zero(arity), c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Q::one())
    }

    /// The monomial `vars[i]^1`.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        Self::term(Monomial(exps), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero(m.arity());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: &Monomial, c: &Q) {
        debug_assert_eq!(m.arity(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(m);
        }
    }

    /// Total degree; zero polynomial reports -1.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(-1)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(-1)
    }

    /// Leading term under graded lex (largest key).
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.total_degree();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return false,
                _ => {}
            }
        }
        true
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, &(-c.clone()));
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Q) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.arity);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = SparsePoly::zero(self.arity);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&ma.add(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> SparsePoly {
        let mut out = SparsePoly::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            out.terms.insert(ma.add(m), ca * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut out = SparsePoly::one(self.arity);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact division. Returns `None` when `self` is not a polynomial
    /// multiple of `div`.
    pub fn div_exact(&self, div: &SparsePoly) -> Option<SparsePoly> {
        debug_assert_eq!(self.arity, div.arity);
        if div.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.arity);
        let (dm, dc) = div.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.checked_sub(&dm)?;
            let qc = rc / &dc;
            quot.add_term(&qm, &qc);
            rem = rem.sub(&div.mul_monomial(&qm, &qc));
        }
        Some(quot)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        debug_assert_eq!(point.len(), self.arity);
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute a polynomial for every variable.
    pub fn substitute(&self, images: &[SparsePoly]) -> SparsePoly {
        assert_eq!(images.len(), self.arity);
        let out_arity = if images.is_empty() {
            0
        } else {
            images[0].arity()
        };
        // Cache powers of each image.
        let mut powers: Vec<Vec<SparsePoly>> =
            images.iter().map(|p| vec![SparsePoly::one(p.arity())]).collect();
        let mut out = SparsePoly::zero(out_arity);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(out_arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let last = powers[i].last().unwrap().clone();
                    powers[i].push(last.mul(&images[i]));
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn partial_derivative(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[var] = e - 1;
                out.add_term(&Monomial(exps), &(c * q_int(e)));
            }
        }
        out
    }

    /// Primitive over the integers, leading coefficient positive under
    /// graded lex. Zero stays zero. This is the canonical representative
    /// used by `poly_gcd` and by all golden-value comparisons.
    pub fn normalized(&self) -> SparsePoly {
        if self.is_zero() {
            return self.clone();
        }
        // lcm of denominators, gcd of numerators
        let mut den_lcm = Z::one();
        let mut num_gcd = Z::zero();
        for c in self.terms.values() {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
            num_gcd = num_integer::gcd(num_gcd, c.numer().clone());
        }
        let mut factor = Q::new(den_lcm, num_gcd);
        if self.leading().unwrap().1 * &factor < Q::zero() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Rational content (the factor removed by `normalized`).
    pub fn content(&self) -> Q {
        if self.is_zero() {
            return Q::zero();
        }
        let mut den_lcm = Z::one();
        let mut num_gcd = Z::zero();
        for c in self.terms.values() {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
            num_gcd = num_integer::gcd(num_gcd, c.numer().clone());
        }
        let mut content = Q::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    /// Render using the given variable names (sorted descending so leading
    /// terms print first).
    pub fn display(&self, vars: &[&str]) -> String {
        assert_eq!(vars.len(), self.arity);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_zero() {
                factors.push(q_to_string(&abs));
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(vars[v].to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", vars[v], e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display(&refs))
    }
}
