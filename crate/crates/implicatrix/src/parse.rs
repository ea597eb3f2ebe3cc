//! Input grammar for parametrization problems.
//!
//! Statements, each terminated by `;`:
//!   vars s, t;
//!   target P3;                    (or P1xP1xP1, or: multigraded 1,1)
//!   map (s*t^6+2)/(s*t^5-3*s*t^3), ...;
//!   option nu=2;                  (nu, strategy, samples, seed, polytope)
//!
//! Coefficients are integers or literal fractions `a/b`; `*` is required
//! for multiplication; `^` raises to a power. A `/` between two integer
//! literals is a rational coefficient, any other `/` at component level
//! splits numerator and denominator of a rational-function component.

use crate::arith::{q_parse, Monomial, Q, SparsePoly};
use crate::gcd::poly_gcd;
use crate::implicitize::{ImplicitError, Problem, Strategy};
use crate::polytope::LatticePolytope;
use num_traits::One;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("component {0} is identically 0/0")]
    ZeroComponent(usize),
    #[error(transparent)]
    Build(#[from] ImplicitError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    /// codomain P^n
    Pn(usize),
    /// codomain (P^1)^n
    P1Power(usize),
    /// multigraded source with the given block ranks
    Multigraded(Vec<usize>),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub nu: Option<Vec<i64>>,
    pub strategy: Option<Strategy>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub polytope: Option<Vec<Vec<i64>>>,
}

/// Parsed problem: variables, optional target, rational-function components
/// (denominator 1 for plain polynomials), options.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub source_vars: Vec<String>,
    pub target: Option<TargetSpec>,
    pub components: Vec<(SparsePoly, SparsePoly)>,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer, IngestError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                // comment to end of line
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_digit() {
                        s.push(c2);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Int(s), l, c));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' {
                        s.push(c2);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l, c));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' | ';' | '=' => {
                chars.next();
                col += 1;
                toks.push((Tok::Sym(ch), l, c));
            }
            other => {
                return Err(IngestError::Parse {
                    line: l,
                    col: c,
                    msg: format!("unexpected character '{}'", other),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> IngestError {
        let (line, col) = self.here();
        IngestError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect_sym(&mut self, ch: char) -> Result<(), IngestError> {
        match self.peek() {
            Some(Tok::Sym(c)) if *c == ch => {
                self.next();
                Ok(())
            }
            other => Err(self.err(format!("expected '{}', found {:?}", ch, other))),
        }
    }
}

struct ExprParser<'a> {
    lx: &'a mut Lexer,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    fn arity(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<SparsePoly, IngestError> {
        let mut negate = false;
        if let Some(Tok::Sym(s)) = self.lx.peek() {
            if *s == '-' {
                self.lx.next();
                negate = true;
            } else if *s == '+' {
                self.lx.next();
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.lx.peek() {
                Some(Tok::Sym('+')) => {
                    self.lx.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Sym('-')) => {
                    self.lx.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly, IngestError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Sym('*')) = self.lx.peek() {
            self.lx.next();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly, IngestError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.lx.peek() {
            self.lx.next();
            match self.lx.next() {
                Some(Tok::Int(s)) => {
                    let e: u32 = s
                        .parse()
                        .map_err(|_| self.lx.err("exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.lx.err("expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePoly, IngestError> {
        match self.lx.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.lx.next();
                let e = self.expr()?;
                self.lx.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Int(n)) => {
                self.lx.next();
                // literal fraction a/b is a rational coefficient
                if let (Some(Tok::Sym('/')), Some(Tok::Int(_))) =
                    (self.lx.peek(), self.lx.peek2())
                {
                    self.lx.next();
                    if let Some(Tok::Int(d)) = self.lx.next() {
                        let q = q_parse(&format!("{}/{}", n, d))
                            .ok_or_else(|| self.lx.err("zero denominator"))?;
                        return Ok(SparsePoly::constant(self.arity(), q));
                    }
                    unreachable!();
                }
                let q = q_parse(&n).ok_or_else(|| self.lx.err("bad integer"))?;
                Ok(SparsePoly::constant(self.arity(), q))
            }
            Some(Tok::Ident(name)) => {
                self.lx.next();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(SparsePoly::var(self.arity(), i)),
                    None => Err(IngestError::Arity(format!(
                        "unknown variable '{}' (declared: {})",
                        name,
                        self.vars.join(", ")
                    ))),
                }
            }
            other => Err(self.lx.err(format!("expected expression, found {:?}", other))),
        }
    }
}

fn parse_target(lx: &mut Lexer) -> Result<TargetSpec, IngestError> {
    match lx.next() {
        Some(Tok::Ident(word)) if word == "multigraded" => {
            let mut ranks = Vec::new();
            loop {
                match lx.next() {
                    Some(Tok::Int(n)) => {
                        ranks.push(n.parse::<usize>().map_err(|_| lx.err("bad rank"))?)
                    }
                    _ => return Err(lx.err("expected rank integer")),
                }
                match lx.peek() {
                    Some(Tok::Sym(',')) => {
                        lx.next();
                    }
                    _ => break,
                }
            }
            Ok(TargetSpec::Multigraded(ranks))
        }
        Some(Tok::Ident(word)) => {
            // P<k> or P1xP1x...
            if word.contains('x') {
                let parts: Vec<&str> = word.split('x').collect();
                if parts.iter().all(|p| *p == "P1") && parts.len() >= 2 {
                    return Ok(TargetSpec::P1Power(parts.len()));
                }
                return Err(lx.err(format!("unrecognized target '{}'", word)));
            }
            if let Some(num) = word.strip_prefix('P') {
                if let Ok(n) = num.parse::<usize>() {
                    return Ok(TargetSpec::Pn(n));
                }
            }
            Err(lx.err(format!("unrecognized target '{}'", word)))
        }
        other => Err(lx.err(format!("expected target, found {:?}", other))),
    }
}

fn parse_option(lx: &mut Lexer, vars_len: usize, opts: &mut Options) -> Result<(), IngestError> {
    let key = match lx.next() {
        Some(Tok::Ident(k)) => k,
        other => return Err(lx.err(format!("expected option name, found {:?}", other))),
    };
    lx.expect_sym('=')?;
    match key.as_str() {
        "nu" => {
            let mut vals = Vec::new();
            loop {
                let mut neg = false;
                if let Some(Tok::Sym('-')) = lx.peek() {
                    lx.next();
                    neg = true;
                }
                match lx.next() {
                    Some(Tok::Int(n)) => {
                        let v: i64 = n.parse().map_err(|_| lx.err("bad nu"))?;
                        vals.push(if neg { -v } else { v });
                    }
                    _ => return Err(lx.err("expected integer in nu")),
                }
                match lx.peek() {
                    Some(Tok::Sym(',')) => {
                        lx.next();
                    }
                    _ => break,
                }
            }
            opts.nu = Some(vals);
        }
        "strategy" => {
            let mut words = Vec::new();
            loop {
                match lx.peek() {
                    Some(Tok::Ident(w)) => {
                        words.push(w.clone());
                        lx.next();
                    }
                    Some(Tok::Sym('-')) => {
                        lx.next();
                    }
                    _ => break,
                }
            }
            let joined = words.join("-");
            opts.strategy = Some(match joined.as_str() {
                "single-minor" => Strategy::SingleMinor,
                "multi-minor-gcd" => Strategy::MultiMinorGcd,
                other => return Err(lx.err(format!("unknown strategy '{}'", other))),
            });
        }
        "samples" => match lx.next() {
            Some(Tok::Int(n)) => {
                opts.samples = Some(n.parse().map_err(|_| lx.err("bad samples"))?)
            }
            _ => return Err(lx.err("expected integer")),
        },
        "seed" => match lx.next() {
            Some(Tok::Int(n)) => opts.seed = Some(n.parse().map_err(|_| lx.err("bad seed"))?),
            _ => return Err(lx.err("expected integer")),
        },
        "polytope" => {
            // list of vertices (a,b)(c,d)... in the source variables
            let mut verts = Vec::new();
            while let Some(Tok::Sym('(')) = lx.peek() {
                lx.next();
                let mut v = Vec::new();
                loop {
                    let mut neg = false;
                    if let Some(Tok::Sym('-')) = lx.peek() {
                        lx.next();
                        neg = true;
                    }
                    match lx.next() {
                        Some(Tok::Int(n)) => {
                            let x: i64 = n.parse().map_err(|_| lx.err("bad coordinate"))?;
                            v.push(if neg { -x } else { x });
                        }
                        _ => return Err(lx.err("expected vertex coordinate")),
                    }
                    match lx.peek() {
                        Some(Tok::Sym(',')) => {
                            lx.next();
                        }
                        _ => break,
                    }
                }
                lx.expect_sym(')')?;
                if v.len() != vars_len {
                    return Err(IngestError::Arity(format!(
                        "polytope vertex has {} coordinates, expected {}",
                        v.len(),
                        vars_len
                    )));
                }
                verts.push(v);
            }
            if verts.is_empty() {
                return Err(lx.err("polytope option needs at least one vertex"));
            }
            opts.polytope = Some(verts);
        }
        other => return Err(lx.err(format!("unknown option '{}'", other))),
    }
    Ok(())
}

/// Parse the problem grammar. Syntax errors carry line and column.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, IngestError> {
    let mut lx = lex(text)?;
    let mut source_vars: Vec<String> = Vec::new();
    let mut target = None;
    let mut components: Vec<(SparsePoly, SparsePoly)> = Vec::new();
    let mut options = Options::default();
    let mut saw_map = false;

    while let Some(tok) = lx.peek().cloned() {
        match tok {
            Tok::Ident(word) if word == "vars" => {
                lx.next();
                loop {
                    match lx.next() {
                        Some(Tok::Ident(v)) => source_vars.push(v),
                        other => return Err(lx.err(format!("expected variable, found {:?}", other))),
                    }
                    match lx.peek() {
                        Some(Tok::Sym(',')) => {
                            lx.next();
                        }
                        _ => break,
                    }
                }
                lx.expect_sym(';')?;
            }
            Tok::Ident(word) if word == "target" => {
                lx.next();
                target = Some(parse_target(&mut lx)?);
                lx.expect_sym(';')?;
            }
            Tok::Ident(word) if word == "map" => {
                lx.next();
                saw_map = true;
                if source_vars.is_empty() {
                    return Err(lx.err("map before vars declaration"));
                }
                if let Some(Tok::Sym(';')) = lx.peek() {
                    return Err(lx.err("empty map list"));
                }
                loop {
                    let num = {
                        let mut p = ExprParser {
                            lx: &mut lx,
                            vars: &source_vars,
                        };
                        p.expr()?
                    };
                    let den = if let Some(Tok::Sym('/')) = lx.peek() {
                        lx.next();
                        let mut p = ExprParser {
                            lx: &mut lx,
                            vars: &source_vars,
                        };
                        p.expr()?
                    } else {
                        SparsePoly::one(source_vars.len())
                    };
                    components.push((num, den));
                    match lx.peek() {
                        Some(Tok::Sym(',')) => {
                            lx.next();
                        }
                        _ => break,
                    }
                }
                lx.expect_sym(';')?;
            }
            Tok::Ident(word) if word == "option" => {
                lx.next();
                parse_option(&mut lx, source_vars.len(), &mut options)?;
                lx.expect_sym(';')?;
            }
            other => return Err(lx.err(format!("expected statement, found {:?}", other))),
        }
    }
    if !saw_map || components.is_empty() {
        return Err(IngestError::Parse {
            line: 1,
            col: 1,
            msg: "input has no map statement".into(),
        });
    }
    Ok(ProblemSpec {
        source_vars,
        target,
        components,
        options,
    })
}

impl ProblemSpec {
    /// Reduce each component by the gcd of numerator and denominator,
    /// collecting a warning for every component that was reduced.
    pub fn normalize_pairs(&mut self) -> Result<Vec<String>, IngestError> {
        let mut warnings = Vec::new();
        for (i, (num, den)) in self.components.iter_mut().enumerate() {
            if num.is_zero() && den.is_zero() {
                return Err(IngestError::ZeroComponent(i));
            }
            let g = poly_gcd(num, den);
            if g.total_degree() > 0 {
                *num = num.div_exact(&g).expect("gcd divides");
                *den = den.div_exact(&g).expect("gcd divides");
                warnings.push(format!(
                    "component {} reduced by common factor of degree {}",
                    i + 1,
                    g.total_degree()
                ));
            }
        }
        Ok(warnings)
    }

    /// The setting implied by target or denominators: a declared target
    /// wins; otherwise equal denominators mean the projective path and
    /// different denominators the multiprojective one.
    pub fn resolved_target(&self) -> TargetSpec {
        if let Some(t) = &self.target {
            return t.clone();
        }
        let all_equal = self
            .components
            .windows(2)
            .all(|w| w[0].1 == w[1].1);
        if all_equal {
            TargetSpec::Pn(self.components.len())
        } else {
            TargetSpec::P1Power(self.components.len())
        }
    }

    /// Projective coordinates for the P^n path: the plain polynomials when
    /// every denominator is 1, otherwise the common denominator first.
    pub fn projective_coords(&self) -> Result<Vec<SparsePoly>, IngestError> {
        let all_one = self.components.iter().all(|(_, d)| {
            d.num_terms() == 1 && d.total_degree() == 0 && d.content().is_one()
        });
        if all_one {
            return Ok(self.components.iter().map(|(n, _)| n.clone()).collect());
        }
        let den = &self.components[0].1;
        for (i, (_, d)) in self.components.iter().enumerate() {
            if d != den {
                return Err(IngestError::Arity(format!(
                    "component {} denominator differs; the projective path needs one common denominator",
                    i + 1
                )));
            }
        }
        let mut coords = vec![den.clone()];
        coords.extend(self.components.iter().map(|(n, _)| n.clone()));
        Ok(coords)
    }

    fn override_polytope(&self) -> Result<Option<LatticePolytope>, IngestError> {
        match &self.options.polytope {
            None => Ok(None),
            Some(verts) => {
                let pts: Vec<Monomial> = verts.iter().map(|v| Monomial::new(v.clone())).collect();
                let p = LatticePolytope::hull(&pts).map_err(ImplicitError::from)?;
                Ok(Some(p))
            }
        }
    }

    /// Assemble the full problem, consuming the spec's choices.
    pub fn to_problem(&self) -> Result<(Problem, Vec<String>), IngestError> {
        let mut spec = self.clone();
        let mut warnings = spec.normalize_pairs()?;
        let over = spec.override_polytope()?;
        let target = spec.resolved_target();
        let problem = match target {
            TargetSpec::Pn(n) => {
                let coords = spec.projective_coords()?;
                if coords.len() != n + 1 {
                    return Err(IngestError::Arity(format!(
                        "target P{} expects {} coordinates, map provides {}",
                        n,
                        n + 1,
                        coords.len()
                    )));
                }
                Problem::projective(&coords, over.as_ref())?
            }
            TargetSpec::P1Power(n) => {
                if spec.components.len() != n {
                    return Err(IngestError::Arity(format!(
                        "target (P1)^{} expects {} components, map provides {}",
                        n,
                        n,
                        spec.components.len()
                    )));
                }
                Problem::multiproj_codomain(&spec.components, over.as_ref())?
            }
            TargetSpec::Multigraded(ranks) => {
                let nvars: usize = ranks.iter().map(|r| r + 1).sum();
                if nvars != spec.source_vars.len() {
                    return Err(IngestError::Arity(format!(
                        "multigraded ranks {:?} require {} variables, vars declares {}",
                        ranks,
                        nvars,
                        spec.source_vars.len()
                    )));
                }
                for (i, (_, d)) in spec.components.iter().enumerate() {
                    if !(d.num_terms() == 1 && d.total_degree() == 0) {
                        return Err(IngestError::Arity(format!(
                            "multigraded path takes plain polynomials; component {} has a denominator",
                            i + 1
                        )));
                    }
                }
                let coords: Vec<SparsePoly> =
                    spec.components.iter().map(|(nm, _)| nm.clone()).collect();
                Problem::multigraded(&ranks, &coords)?
            }
        };
        if over.is_some() {
            warnings.push("polytope override in effect".to_string());
        }
        Ok((problem, warnings))
    }

    /// Canonical printing; `parse_problem` of the output reproduces the spec.
    pub fn print_canonical(&self) -> String {
        let var_refs: Vec<&str> = self.source_vars.iter().map(|s| s.as_str()).collect();
        let mut out = format!("vars {};\n", self.source_vars.join(", "));
        if let Some(t) = &self.target {
            let t = match t {
                TargetSpec::Pn(n) => format!("P{}", n),
                TargetSpec::P1Power(n) => vec!["P1"; *n].join("x"),
                TargetSpec::Multigraded(r) => format!(
                    "multigraded {}",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            };
            out.push_str(&format!("target {};\n", t));
        }
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|(n, d)| {
                if d.num_terms() == 1 && d.total_degree() == 0 && d.content().is_one() {
                    n.display(&var_refs)
                } else {
                    format!("({})/({})", n.display(&var_refs), d.display(&var_refs))
                }
            })
            .collect();
        out.push_str(&format!("map {};\n", comps.join(", ")));
        if let Some(nu) = &self.options.nu {
            out.push_str(&format!(
                "option nu={};\n",
                nu.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        if let Some(s) = &self.options.strategy {
            let name = match s {
                Strategy::SingleMinor => "single-minor",
                Strategy::MultiMinorGcd => "multi-minor-gcd",
            };
            out.push_str(&format!("option strategy={};\n", name));
        }
        if let Some(s) = self.options.samples {
            out.push_str(&format!("option samples={};\n", s));
        }
        if let Some(s) = self.options.seed {
            out.push_str(&format!("option seed={};\n", s));
        }
        if let Some(p) = &self.options.polytope {
            let verts: Vec<String> = p
                .iter()
                .map(|v| {
                    format!(
                        "({})",
                        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            out.push_str(&format!("option polytope={};\n", verts.join("")));
        }
        out
    }
}

/// Helper for tests and the CLI: rational coefficients of a comma-separated
/// point string.
pub fn parse_point(text: &str) -> Result<Vec<Q>, IngestError> {
    text.split(',')
        .map(|s| {
            q_parse(s).ok_or_else(|| IngestError::Parse {
                line: 1,
                col: 1,
                msg: format!("bad rational '{}'", s),
            })
        })
        .collect()
}

/// Map equality of polynomials by sorted term maps, used by round-trip tests.
pub fn poly_terms(p: &SparsePoly) -> BTreeMap<Vec<i64>, Q> {
    p.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect()
}
