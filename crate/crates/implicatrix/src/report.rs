//! Run reports and persistence: JSON schemas for matrices and pipeline
//! reports, plus the orchestration shared by the CLI subcommands.
//!
//! Reports are reproducible: with a fixed seed the serialized JSON is
//! byte-identical across runs, so wall-clock timings are printed to stderr
//! and never serialized.

use crate::arith::{q_parse, q_to_string, Monomial, Q, SparsePoly};
use crate::implicitize::{
    build_matrix, implicit_equation, FactorStatus, ImplicitError, ImplicitResult, NuBound,
    Problem, RepMatrix, Setting, Strategy,
};
use crate::parse::{IngestError, ProblemSpec};
use crate::region::{contraction_tradeoff, eta0_variants, Complement};
use crate::ring::toric_ideal;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 20;
/// refuse matrices with more rows than this unless forced
pub const MAX_ROWS_GUARD: usize = 20_000;

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PolytopeSummary {
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: usize,
    pub gamma: i64,
    pub contraction_factor: i64,
    pub translation: Vec<i64>,
    pub normalized_area: Option<i64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RingSummary {
    pub grading: String,
    pub num_coords: usize,
    pub component_degrees: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric_ideal: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BoundsSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu0: Option<i64>,
    /// eta_0 conventions printed alongside the theorem bound
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta0_sum_minus_one_plus_one: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta0_sum_minus_gamma_plus_one: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_complement_corners: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default_nu: Option<Vec<i64>>,
    /// bound of the alternate compactification, reported side by side when
    /// the input is a tuple of rational functions
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_projective_nu0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_multiproj_nu0: Option<i64>,
    /// contraction-vs-original row comparison, reported when the Newton
    /// polytope admits a nontrivial contraction
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_delta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_strictly_fewer_rows: Option<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MatrixSummary {
    pub rows: usize,
    pub cols: usize,
    pub nu: Vec<i64>,
    pub generically_full_rank: bool,
    pub below_bound: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorSummary {
    pub polynomial: String,
    pub degree: i64,
    pub status: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ResultSummary {
    pub equation: String,
    pub degree: i64,
    pub verified: bool,
    pub minors_used: usize,
    pub factors: Vec<FactorSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_note: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub setting: String,
    pub problem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSummary>,
    pub ring: RingSummary,
    pub bounds: BoundsSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultSummary>,
    pub warnings: Vec<String>,
}

/// Persisted representation matrix. Entries are coefficient vectors of
/// linear forms over `target_vars`, serialized as exact rational strings;
/// reloading reproduces membership tests without recomputation.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MatrixJson {
    pub schema: u32,
    pub setting: String,
    pub nu: Vec<i64>,
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<Vec<i64>>,
    pub col_labels: Vec<String>,
    pub target_vars: Vec<String>,
    pub entries: Vec<Vec<Vec<String>>>,
    pub generically_full_rank: bool,
    pub below_bound: bool,
}

impl MatrixJson {
    pub fn from_rep(m: &RepMatrix) -> MatrixJson {
        MatrixJson {
            schema: SCHEMA_VERSION,
            setting: m.setting.as_str().to_string(),
            nu: m.nu.clone(),
            rows: m.rows(),
            cols: m.cols(),
            row_labels: m.row_labels.iter().map(|x| x.0.clone()).collect(),
            col_labels: m.col_labels.clone(),
            target_vars: m.target_vars.clone(),
            entries: m
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|lin| lin.iter().map(q_to_string).collect())
                        .collect()
                })
                .collect(),
            generically_full_rank: m.generically_full_rank,
            below_bound: m.below_bound,
        }
    }

    pub fn to_rep(&self) -> Result<RepMatrix, String> {
        let setting = match self.setting.as_str() {
            "projective-codomain" => Setting::ProjectiveCodomain,
            "multiproj-codomain" => Setting::MultiProjCodomain,
            "multigraded-source" => Setting::MultiGradedSource,
            other => return Err(format!("unknown setting '{}'", other)),
        };
        let entries: Result<Vec<Vec<Vec<Q>>>, String> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|lin| {
                        lin.iter()
                            .map(|s| q_parse(s).ok_or_else(|| format!("bad rational '{}'", s)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(RepMatrix {
            setting,
            nu: self.nu.clone(),
            row_labels: self.row_labels.iter().cloned().map(Monomial::new).collect(),
            col_labels: self.col_labels.clone(),
            target_vars: self.target_vars.clone(),
            entries: entries?,
            generically_full_rank: self.generically_full_rank,
            below_bound: self.below_bound,
        })
    }
}

fn polytope_summary(problem: &Problem) -> Option<PolytopeSummary> {
    let newton = problem.newton.as_ref()?;
    let contraction = newton.contraction();
    Some(PolytopeSummary {
        vertices: newton.vertices().iter().map(|v| v.0.clone()).collect(),
        lattice_points: newton.lattice_points(1).len(),
        gamma: newton.gamma(),
        contraction_factor: contraction.factor,
        translation: contraction.translation,
        normalized_area: newton.normalized_area().ok(),
    })
}

fn ring_summary(problem: &Problem, ideal_bound: Option<i64>) -> RingSummary {
    let grading = match problem.ring.grading() {
        crate::ring::Grading::Toric { factor, .. } => {
            format!("Z-graded semigroup ring (contraction factor {})", factor)
        }
        crate::ring::Grading::MultiProj { ranks } => format!("Z^{} Cox ring {:?}", ranks.len(), ranks),
    };
    let component_degrees = if problem.pairs.is_empty() {
        problem.h.iter().map(|e| e.degree.clone()).collect()
    } else {
        problem.pairs.iter().map(|(f, _)| f.degree.clone()).collect()
    };
    let toric_ideal = ideal_bound.map(|bound| {
        let names: Vec<String> = (0..problem.ring.num_coords())
            .map(|i| format!("T{}", i))
            .collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        toric_ideal(&problem.ring, bound)
            .generators
            .iter()
            .map(|g| g.display(&refs))
            .collect()
    });
    RingSummary {
        grading,
        num_coords: problem.ring.num_coords(),
        component_degrees,
        toric_ideal,
    }
}

/// Common denominator variant of a rational-function input, used to report
/// the projective-path bound next to the multiprojective one.
fn projective_variant(spec: &ProblemSpec) -> Option<Problem> {
    if spec.components.is_empty() {
        return None;
    }
    let arity = spec.components[0].0.arity();
    let mut den = SparsePoly::one(arity);
    for (_, g) in &spec.components {
        den = den.mul(g);
    }
    let mut coords = vec![den];
    for (i, (f, _)) in spec.components.iter().enumerate() {
        let mut c = f.clone();
        for (j, (_, g)) in spec.components.iter().enumerate() {
            if i != j {
                c = c.mul(g);
            }
        }
        coords.push(c);
    }
    Problem::projective(&coords, None).ok()
}

fn bounds_summary(problem: &Problem, spec: Option<&ProblemSpec>) -> BoundsSummary {
    let mut out = BoundsSummary {
        nu0: None,
        eta0_sum_minus_one_plus_one: None,
        eta0_sum_minus_gamma_plus_one: None,
        region_complement_corners: None,
        default_nu: problem.default_nu(),
        alternate_projective_nu0: None,
        alternate_multiproj_nu0: None,
        contraction_delta: None,
        contraction_strictly_fewer_rows: None,
    };
    if let (Some(newton), Some(base)) = (problem.newton.as_ref(), problem.ring.base_polytope()) {
        if let crate::ring::Grading::Toric { factor, .. } = problem.ring.grading() {
            if *factor > 1 {
                let n = if problem.pairs.is_empty() {
                    problem.h.len() as i64 - 1
                } else {
                    problem.pairs.len() as i64
                };
                let t = contraction_tradeoff(*factor, newton.gamma(), base.gamma(), n);
                out.contraction_delta = Some(t.delta);
                out.contraction_strictly_fewer_rows = Some(t.contraction_strictly_fewer_rows);
            }
        }
    }
    match problem.nu_bound() {
        NuBound::Scalar(v) => out.nu0 = Some(v),
        NuBound::MultiRegion { complement, .. } => {
            if let Complement::ClosedForm { corners } = complement {
                out.region_complement_corners = Some(corners);
            }
        }
    }
    match problem.setting {
        Setting::MultiProjCodomain => {
            let d = problem.pair_degrees();
            let gamma = problem.ring.base_polytope().unwrap().gamma();
            let (bc05, plus_one) = eta0_variants(&d, gamma);
            out.eta0_sum_minus_one_plus_one = Some(bc05);
            out.eta0_sum_minus_gamma_plus_one = Some(plus_one);
            if let Some(spec) = spec {
                if let Some(proj) = projective_variant(spec) {
                    if let NuBound::Scalar(v) = proj.nu_bound() {
                        out.alternate_projective_nu0 = Some(v);
                    }
                }
            }
        }
        Setting::ProjectiveCodomain => {
            if let Some(spec) = spec {
                let has_denominators = spec
                    .components
                    .iter()
                    .any(|(_, d)| d.total_degree() > 0);
                if has_denominators {
                    if let Ok(multi) = Problem::multiproj_codomain(&spec.components, None) {
                        if let NuBound::Scalar(v) = multi.nu_bound() {
                            out.alternate_multiproj_nu0 = Some(v);
                        }
                    }
                }
            }
        }
        Setting::MultiGradedSource => {}
    }
    out
}

fn result_summary(res: &ImplicitResult, target_vars: &[String]) -> ResultSummary {
    let refs: Vec<&str> = target_vars.iter().map(|s| s.as_str()).collect();
    ResultSummary {
        equation: res.candidate.display(&refs),
        degree: res.degree,
        verified: res.verified,
        minors_used: res.minors_used,
        factors: res
            .factors
            .iter()
            .map(|(f, s)| FactorSummary {
                polynomial: f.display(&refs),
                degree: f.total_degree(),
                status: match s {
                    FactorStatus::ImplicitEquationPower(e) => {
                        format!("implicit-equation-power:{}", e)
                    }
                    FactorStatus::Extraneous => "extraneous".to_string(),
                    FactorStatus::Unverified => "unverified".to_string(),
                },
            })
            .collect(),
        area_bound: res.deg_formula.as_ref().map(|d| d.area_bound),
        area_note: res.deg_formula.as_ref().map(|d| d.note.clone()),
    }
}

pub struct PipelineOptions {
    pub nu: Option<Vec<i64>>,
    pub strategy: Strategy,
    pub samples: usize,
    pub seed: u64,
    pub force: bool,
    pub ideal_bound: Option<i64>,
}

/// analyze: parse + polytope + ring + bounds, no matrix.
pub fn run_analyze(spec: &ProblemSpec, opts: &PipelineOptions) -> Result<RunReport, IngestError> {
    let (problem, warnings) = spec.to_problem()?;
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command: "analyze".into(),
        seed: opts.seed,
        setting: problem.setting.as_str().into(),
        problem: spec.print_canonical(),
        polytope: polytope_summary(&problem),
        ring: ring_summary(&problem, opts.ideal_bound),
        bounds: bounds_summary(&problem, Some(spec)),
        matrix: None,
        result: None,
        warnings,
    })
}

fn resolve_nu(problem: &Problem, opts: &PipelineOptions) -> Result<Vec<i64>, IngestError> {
    if let Some(nu) = &opts.nu {
        return Ok(nu.clone());
    }
    problem.default_nu().ok_or_else(|| {
        IngestError::Build(ImplicitError::DegreeTooLow {
            nu: vec![],
            bound: "no closed-form default degree; supply option nu".into(),
        })
    })
}

/// matrix: build and return the representation matrix with its report.
pub fn run_matrix(
    spec: &ProblemSpec,
    opts: &PipelineOptions,
) -> Result<(RunReport, MatrixJson), IngestError> {
    let (problem, mut warnings) = spec.to_problem()?;
    let nu = resolve_nu(&problem, opts)?;
    guard_rows(&problem, &nu, opts.force)?;
    let m = build_matrix(&problem, &nu, opts.force, opts.seed)?;
    if m.below_bound {
        warnings.push(format!(
            "degree {:?} is below the certified bound; matrix may not represent the image",
            nu
        ));
    }
    if !m.generically_full_rank {
        warnings.push("matrix is not generically of full row rank".into());
    }
    let report = RunReport {
        schema: SCHEMA_VERSION,
        command: "matrix".into(),
        seed: opts.seed,
        setting: problem.setting.as_str().into(),
        problem: spec.print_canonical(),
        polytope: polytope_summary(&problem),
        ring: ring_summary(&problem, opts.ideal_bound),
        bounds: bounds_summary(&problem, Some(spec)),
        matrix: Some(MatrixSummary {
            rows: m.rows(),
            cols: m.cols(),
            nu: m.nu.clone(),
            generically_full_rank: m.generically_full_rank,
            below_bound: m.below_bound,
        }),
        result: None,
        warnings,
    };
    Ok((report, MatrixJson::from_rep(&m)))
}

/// implicitize: full pipeline through the implicit equation.
pub fn run_implicitize(
    spec: &ProblemSpec,
    opts: &PipelineOptions,
) -> Result<RunReport, IngestError> {
    let (problem, mut warnings) = spec.to_problem()?;
    let nu = resolve_nu(&problem, opts)?;
    guard_rows(&problem, &nu, opts.force)?;
    let m = build_matrix(&problem, &nu, opts.force, opts.seed)?;
    if m.below_bound {
        warnings.push(format!("degree {:?} is below the certified bound", nu));
    }
    let res = implicit_equation(&problem, &m, opts.strategy, opts.samples, opts.seed)?;
    if !res.verified {
        warnings.push("candidate does not vanish on all samples".into());
    }
    let summary = result_summary(&res, &m.target_vars);
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        command: "implicitize".into(),
        seed: opts.seed,
        setting: problem.setting.as_str().into(),
        problem: spec.print_canonical(),
        polytope: polytope_summary(&problem),
        ring: ring_summary(&problem, opts.ideal_bound),
        bounds: bounds_summary(&problem, Some(spec)),
        matrix: Some(MatrixSummary {
            rows: m.rows(),
            cols: m.cols(),
            nu: m.nu.clone(),
            generically_full_rank: m.generically_full_rank,
            below_bound: m.below_bound,
        }),
        result: Some(summary),
        warnings,
    })
}

fn guard_rows(problem: &Problem, nu: &[i64], force: bool) -> Result<(), IngestError> {
    let rows = problem.ring.hilbert(nu);
    if rows > MAX_ROWS_GUARD && !force {
        return Err(IngestError::Build(ImplicitError::DegreeTooLow {
            nu: nu.to_vec(),
            bound: format!(
                "{} rows exceeds the desk-scale guard of {}; pass --force to proceed",
                rows, MAX_ROWS_GUARD
            ),
        }));
    }
    Ok(())
}

/// Human-readable rendering of a report.
pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "setting: {}\nseed: {}\n",
        report.setting, report.seed
    ));
    if let Some(p) = &report.polytope {
        out.push_str(&format!(
            "newton polytope: {} vertices {:?}, {} lattice points, gamma = {}, contraction d = {}",
            p.vertices.len(),
            p.vertices,
            p.lattice_points,
            p.gamma,
            p.contraction_factor
        ));
        if let Some(a) = p.normalized_area {
            out.push_str(&format!(", normalized area = {}", a));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "ring: {}, {} coordinates, component degrees {:?}\n",
        report.ring.grading, report.ring.num_coords, report.ring.component_degrees
    ));
    if let Some(ideal) = &report.ring.toric_ideal {
        out.push_str(&format!("toric ideal ({} generators):\n", ideal.len()));
        for g in ideal {
            out.push_str(&format!("  {}\n", g));
        }
    }
    if let Some(nu0) = report.bounds.nu0 {
        out.push_str(&format!("nu0 = {}\n", nu0));
    }
    if let Some(v) = report.bounds.eta0_sum_minus_one_plus_one {
        out.push_str(&format!("eta0 (sum(d_i - 1) + 1 convention) = {}\n", v));
    }
    if let Some(v) = report.bounds.eta0_sum_minus_gamma_plus_one {
        out.push_str(&format!("eta0 (sum d_i - gamma + 1 convention) = {}\n", v));
    }
    if let Some(corners) = &report.bounds.region_complement_corners {
        let parts: Vec<String> = corners
            .iter()
            .map(|c| format!("(N^{} + {:?})", c.len(), c))
            .collect();
        out.push_str(&format!("valid degrees: {}\n", parts.join(" u ")));
    }
    if let Some(nu) = &report.bounds.default_nu {
        out.push_str(&format!("default nu: {:?}\n", nu));
    }
    if let Some(v) = report.bounds.alternate_projective_nu0 {
        out.push_str(&format!("alternate projective compactification nu0 = {}\n", v));
    }
    if let Some(v) = report.bounds.alternate_multiproj_nu0 {
        out.push_str(&format!("alternate multiprojective compactification nu0 = {}\n", v));
    }
    if let (Some(d), Some(fewer)) = (
        report.bounds.contraction_delta,
        report.bounds.contraction_strictly_fewer_rows,
    ) {
        out.push_str(&format!(
            "contraction tradeoff: delta = {}, contraction has strictly fewer rows: {}\n",
            d, fewer
        ));
    }
    if let Some(m) = &report.matrix {
        out.push_str(&format!(
            "matrix: {} x {} at nu = {:?}{}{}\n",
            m.rows,
            m.cols,
            m.nu,
            if m.below_bound { " (below bound)" } else { "" },
            if m.generically_full_rank {
                ""
            } else {
                " (NOT generically full rank)"
            }
        ));
    }
    if let Some(r) = &report.result {
        out.push_str(&format!(
            "implicit equation (degree {}, verified: {}, {} minors):\n  {}\n",
            r.degree, r.verified, r.minors_used, r.equation
        ));
        for f in &r.factors {
            out.push_str(&format!(
                "  factor [{}] degree {}: {}\n",
                f.status, f.degree, f.polynomial
            ));
        }
        if let Some(a) = r.area_bound {
            out.push_str(&format!("degree bound from polygon area: {}\n", a));
        }
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {}\n", w));
    }
    out
}

/// Sampling access for `check`-style verification against a parametrization
/// is not needed: the persisted matrix is self-contained. This helper only
/// evaluates membership.
pub fn check_point(m: &RepMatrix, point: &[Q]) -> Result<(bool, usize), ImplicitError> {
    let rank = crate::implicitize::rank_at(m, point)?;
    Ok((rank < m.rows(), rank))
}

/// Report for the region subcommand; the region itself stays out of the
/// JSON because membership is recomputable from ranks and gamma.
pub fn region_report(ranks: &[usize], gamma: &[i64]) -> RunReport {
    let (_region, complement) = crate::region::region_rb(ranks, gamma);
    let corners = match &complement {
        Complement::ClosedForm { corners } => Some(corners.clone()),
        Complement::MembershipOnly => None,
    };
    let mut warnings = Vec::new();
    if corners.is_none() {
        warnings.push(
            "no closed-form complement for this rank/gamma combination; use membership queries"
                .to_string(),
        );
    }
    RunReport {
        schema: SCHEMA_VERSION,
        command: "region".into(),
        seed: DEFAULT_SEED,
        setting: "multigraded-source".into(),
        problem: format!("ranks {:?}, gamma {:?}", ranks, gamma),
        polytope: None,
        ring: RingSummary {
            grading: format!("Z^{} Cox ring {:?}", ranks.len(), ranks),
            num_coords: ranks.iter().map(|r| r + 1).sum(),
            component_degrees: vec![gamma.to_vec()],
            toric_ideal: None,
        },
        bounds: BoundsSummary {
            nu0: None,
            eta0_sum_minus_one_plus_one: None,
            eta0_sum_minus_gamma_plus_one: None,
            region_complement_corners: corners,
            default_nu: None,
            alternate_projective_nu0: None,
            alternate_multiproj_nu0: None,
            contraction_delta: None,
            contraction_strictly_fewer_rows: None,
        },
        matrix: None,
        result: None,
        warnings,
    }
}
