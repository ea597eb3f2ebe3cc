//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured runtime. Golden values come from the reference runs; the
//! degree-6 surface equation is frozen term by term.

use implicatrix::arith::{q_int, Monomial, Q, SparsePoly};
use implicatrix::implicitize::{
    build_matrix, implicit_equation, is_on_hypersurface, rank_at, FactorStatus, ImplicitError,
    Problem, RepMatrix, Strategy,
};
use implicatrix::linalg::{bareiss_det, PolyMatrix};
use implicatrix::parse::parse_problem;
use implicatrix::region::region_rb;
use implicatrix::syzygy::strand_diagnostics;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::time::Instant;

fn load(name: &str) -> implicatrix::parse::ProblemSpec {
    let path = format!("{}/inputs/{}", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(path).unwrap();
    parse_problem(&text).unwrap()
}

fn problem(name: &str) -> Problem {
    load(name).to_problem().unwrap().0
}

/// The degree-6 implicit equation of the sparse example, exactly as printed
/// in the reference (its two degree-7 misprints corrected to the unique
/// degree-6 monomials with those coefficients).
fn golden_sextic() -> SparsePoly {
    let terms: [(&[i64; 4], i64); 41] = [
        (&[4, 0, 2, 0], 2809),
        (&[4, 0, 1, 1], -14045),
        (&[3, 2, 1, 0], -5618),
        (&[3, 2, 0, 1], 14045),
        (&[3, 0, 3, 0], 212),
        (&[3, 0, 2, 1], -7208),
        (&[3, 0, 1, 2], 30740),
        (&[2, 4, 0, 0], 2809),
        (&[2, 2, 2, 0], -50580),
        (&[2, 2, 1, 1], 261327),
        (&[2, 2, 0, 2], -16695),
        (&[2, 0, 4, 0], 3078),
        (&[2, 0, 3, 1], -31098),
        (&[2, 0, 2, 2], 82434),
        (&[2, 0, 1, 3], -19470),
        (&[1, 4, 1, 0], 66816),
        (&[1, 4, 0, 1], -169849),
        (&[1, 2, 3, 0], -14210),
        (&[1, 2, 2, 1], 157155),
        (&[1, 2, 1, 2], -433384),
        (&[1, 2, 0, 3], 2775),
        (&[1, 0, 5, 0], 116),
        (&[1, 0, 4, 1], -4528),
        (&[1, 0, 3, 2], 36696),
        (&[1, 0, 2, 3], -85360),
        (&[1, 0, 1, 4], 2900),
        (&[0, 6, 0, 0], 124002),
        (&[0, 4, 2, 0], 86976),
        (&[0, 4, 1, 1], -468288),
        (&[0, 4, 0, 2], 169600),
        (&[0, 2, 4, 0], 13632),
        (&[0, 2, 3, 1], -129215),
        (&[0, 2, 2, 2], 269745),
        (&[0, 2, 1, 3], 177675),
        (&[0, 2, 0, 4], -125),
        (&[0, 0, 6, 0], 841),
        (&[0, 0, 5, 1], -12673),
        (&[0, 0, 4, 2], 63946),
        (&[0, 0, 3, 3], -109490),
        (&[0, 0, 2, 4], 7325),
        (&[0, 0, 1, 5], -125),
    ];
    SparsePoly::from_terms(
        4,
        terms
            .iter()
            .map(|(e, c)| (Monomial::new(e.to_vec()), q_int(*c))),
    )
}

#[test]
fn criterion_1_golden_matrix_sizes() {
    let start = Instant::now();
    let p = problem("sparse_surface.txt");
    let m = build_matrix(&p, &[2], false, 42).unwrap();
    assert_eq!((m.rows(), m.cols()), (17, 34));
    let elapsed_a = start.elapsed();
    assert!(elapsed_a.as_secs() < 5, "ran {:?}", elapsed_a);

    let start = Instant::now();
    let spec_q = load("sparse_surface_subpolytope.txt");
    let (pq, _) = spec_q.to_problem().unwrap();
    // nu = 2 sits below the certified bound 2d - gamma' = 3; forced build
    let mq = build_matrix(&pq, &[2], true, 42).unwrap();
    assert_eq!((mq.rows(), mq.cols()), (12, 19));
    assert!(mq.generically_full_rank);
    let elapsed_b = start.elapsed();
    assert!(elapsed_b.as_secs() < 5, "ran {:?}", elapsed_b);
    println!(
        "criterion 1: PASS - 17x34 over N(f) in {:?}, 12x19 over Q in {:?}",
        elapsed_a, elapsed_b
    );
}

#[test]
fn criterion_2_golden_implicit_equation() {
    let start = Instant::now();
    let p = problem("sparse_surface.txt");
    let m = build_matrix(&p, &[2], false, 42).unwrap();
    let res = implicit_equation(&p, &m, Strategy::MultiMinorGcd, 20, 42).unwrap();
    assert!(res.verified);
    assert_eq!(res.degree, 6);
    // determinant-degree bookkeeping of the complex strand
    let diag = strand_diagnostics(&p.ring, &p.h, &[2]).unwrap();
    assert_eq!(diag.det_degree, res.degree);
    // exact coefficient match after content normalization
    assert_eq!(res.candidate, golden_sextic().normalized());
    assert_eq!(res.candidate.num_terms(), 41);
    assert!(res
        .factors
        .iter()
        .any(|(_, s)| matches!(s, FactorStatus::ImplicitEquationPower(1))));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "ran {:?}", elapsed);
    println!(
        "criterion 2: PASS - degree-6 equation, all 41 terms exact, in {:?}",
        elapsed
    );
}

#[test]
fn criterion_3_multigraded_path() {
    let start = Instant::now();
    let p = problem("bidegree23.txt");
    // strand diagnostics at nu = (3,2)
    let diag = strand_diagnostics(&p.ring, &p.h, &[3, 2]).unwrap();
    assert_eq!(diag.dims, vec![(0, 12), (1, 12), (2, 0), (3, 0)]);
    assert_eq!(diag.euler, 0);
    // 12x12 matrix and its degree-12 determinant
    let m = build_matrix(&p, &[3, 2], false, 42).unwrap();
    assert_eq!((m.rows(), m.cols()), (12, 12));
    let res = implicit_equation(&p, &m, Strategy::SingleMinor, 20, 42).unwrap();
    assert_eq!(res.degree, 12);
    assert!(res.verified);
    // identical vanishing under substitution: the determinant of the
    // matrix with X_i replaced by f_i is the substituted determinant, and
    // it must be the zero polynomial
    let coords = match &p.target {
        implicatrix::implicitize::TargetCoords::Projective(c) => c.clone(),
        _ => unreachable!(),
    };
    let entries: Vec<SparsePoly> = (0..12)
        .flat_map(|r| {
            (0..12).map(move |c| (r, c))
        })
        .map(|(r, c)| {
            let lin = &m.entries[r][c];
            let mut acc = SparsePoly::zero(4);
            for (i, q) in lin.iter().enumerate() {
                if !q.is_zero() {
                    acc = acc.add(&coords[i].scale(q));
                }
            }
            acc
        })
        .collect();
    let substituted = PolyMatrix::from_entries(12, 12, 4, entries);
    let det_sub = bareiss_det(&substituted).unwrap();
    assert!(det_sub.is_zero(), "substituted determinant must vanish identically");
    // region complement
    let (_, complement) = region_rb(&[1, 1], &[2, 3]);
    match complement {
        implicatrix::region::Complement::ClosedForm { corners } => {
            assert_eq!(corners, vec![vec![1, 5], vec![3, 2]]);
        }
        _ => panic!("expected closed-form complement"),
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "ran {:?}", elapsed);
    println!(
        "criterion 3: PASS - dims (12,12,0,0), euler 0, 12x12, degree-12 determinant \
         vanishing identically, complement (N^2+(1,5)) u (N^2+(3,2)), in {:?}",
        elapsed
    );
}

#[test]
fn criterion_4_region_calibration() {
    let start = Instant::now();
    let (region, complement) = region_rb(&[1, 3], &[2, 5]);
    let corners = match &complement {
        implicatrix::region::Complement::ClosedForm { corners } => corners.clone(),
        _ => panic!("expected closed-form complement"),
    };
    assert_eq!(corners, vec![vec![1, 17], vec![7, 12]]);
    // exact set equality on all points with |coordinates| <= 30
    for a in -30..=30i64 {
        for b in -30..=30i64 {
            let in_closed_form = corners.iter().any(|c| a >= c[0] && b >= c[1]);
            assert_eq!(
                in_closed_form,
                !region.contains(&[a, b]),
                "mismatch at ({}, {})",
                a,
                b
            );
        }
    }
    println!(
        "criterion 4: PASS - complement (N^2+(1,17)) u (N^2+(7,12)), exact on the 61x61 box, in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_5_kd06_examples() {
    // Example 10: LCI base locus, quintic represented exactly
    let start = Instant::now();
    let p10 = problem("kd06_ex10.txt");
    assert_eq!(p10.ring.num_coords(), 9);
    // the theorem bound is 2; the reference's nu = 1 rests on the refined
    // canonical-module bound, which stays a manual override here
    assert_eq!(p10.default_nu(), Some(vec![2]));
    let m10 = build_matrix(&p10, &[1], true, 42).unwrap();
    assert_eq!((m10.rows(), m10.cols()), (9, 14));
    let r10 = implicit_equation(&p10, &m10, Strategy::MultiMinorGcd, 20, 42).unwrap();
    assert_eq!(r10.degree, 5);
    assert!(r10.verified);
    let elapsed10 = start.elapsed();

    // Example 11: one non-LCI base point adds a linear extraneous factor
    let start = Instant::now();
    let p11 = problem("kd06_ex11.txt");
    let m11 = build_matrix(&p11, &[1], true, 42).unwrap();
    assert_eq!((m11.rows(), m11.cols()), (9, 13));
    let r11 = implicit_equation(&p11, &m11, Strategy::MultiMinorGcd, 20, 42).unwrap();
    assert_eq!(r11.degree, 6);
    assert!(r11.verified);
    let verified_deg: i64 = r11
        .factors
        .iter()
        .filter_map(|(f, s)| match s {
            FactorStatus::ImplicitEquationPower(e) => Some(f.total_degree() * (*e as i64)),
            _ => None,
        })
        .sum();
    assert_eq!(verified_deg, 5);
    let extraneous: Vec<&SparsePoly> = r11
        .factors
        .iter()
        .filter(|(_, s)| matches!(s, FactorStatus::Extraneous))
        .map(|(f, _)| f)
        .collect();
    assert_eq!(extraneous.len(), 1);
    assert_eq!(extraneous[0].total_degree(), 1, "extraneous factor is linear");
    let elapsed11 = start.elapsed();
    println!(
        "criterion 5: PASS - Ex10 9x14 quintic in {:?}; Ex11 9x13 quintic x linear \
         extraneous (tagged) in {:?}",
        elapsed10, elapsed11
    );
}

#[test]
fn criterion_6_degree_formula_rectangles() {
    // bidegree (e1, e2) rectangles report 2 e1 e2 as the area bound
    for (e1, e2) in [(2i64, 6i64), (8, 4), (1, 1)] {
        let corners = SparsePoly::from_terms(
            2,
            [
                (Monomial::new(vec![0, 0]), q_int(1)),
                (Monomial::new(vec![e1, 0]), q_int(1)),
                (Monomial::new(vec![0, e2]), q_int(1)),
                (Monomial::new(vec![e1, e2]), q_int(1)),
            ],
        );
        let newton = implicatrix::newton_polytope(&[corners]).unwrap();
        let report = implicatrix::implicitize::degree_report(&newton).unwrap();
        assert_eq!(report.area_bound, 2 * e1 * e2);
    }
    // the PeDi06 input polytope is the full (8,4) rectangle: bound 64
    let p = problem("pedi06.txt");
    let area = p.newton.as_ref().unwrap().normalized_area().unwrap();
    assert_eq!(area, 64);
    println!("criterion 6 (degree formula): PASS - rectangle bounds 2*e1*e2 exact");
}

/// Slow suite: two 45x45 polynomial determinants and their gcd.
/// Run with: cargo test --release -p implicatrix --test acceptance -- --ignored
#[test]
#[ignore = "slow suite (runtime budget 10 minutes)"]
fn criterion_6_pedi06_sixteenth_power() {
    let start = Instant::now();
    let p = problem("pedi06.txt");
    // contraction of the (8,4) rectangle: d = 4 over the (2,1) rectangle
    assert_eq!(p.ring.toric_factor(), 4);
    assert_eq!(p.ring.num_coords(), 6);
    // nu = 4 is below the certified bound 2d - gamma' = 7; forced build
    let m = build_matrix(&p, &[4], true, 42).unwrap();
    assert_eq!((m.rows(), m.cols()), (45, 59));
    let res = implicit_equation(&p, &m, Strategy::MultiMinorGcd, 20, 42).unwrap();
    assert!(res.minors_used >= 2, "gcd across >= 2 minors");
    assert!(res.verified);
    // F = 2*X0*X1 - X1*X2 - 3*X0*X3 - 2*X1*X3 + 3*X3^2, and gcd = F^16
    let f = SparsePoly::from_terms(
        4,
        [
            (Monomial::new(vec![1, 1, 0, 0]), q_int(2)),
            (Monomial::new(vec![0, 1, 1, 0]), q_int(-1)),
            (Monomial::new(vec![1, 0, 0, 1]), q_int(-3)),
            (Monomial::new(vec![0, 1, 0, 1]), q_int(-2)),
            (Monomial::new(vec![0, 0, 0, 2]), q_int(3)),
        ],
    );
    assert_eq!(res.candidate, f.pow(16).normalized());
    assert!(res
        .factors
        .iter()
        .any(|(fac, s)| *fac == f.normalized()
            && matches!(s, FactorStatus::ImplicitEquationPower(16))));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "ran {:?}", elapsed);
    println!(
        "criterion 6 (PeDi06): PASS - 45x59 matrix, gcd of {} minors = F^16, in {:?}",
        res.minors_used, elapsed
    );
}

fn verification_succeeds(p: &Problem, m: &RepMatrix, rng: &mut StdRng) -> bool {
    if !m.generically_full_rank {
        return false;
    }
    // rank drops on 20 image points
    for _ in 0..20 {
        let img = match p.sample_image(rng) {
            Ok(v) => v,
            Err(_) => return false,
        };
        match is_on_hypersurface(m, &img) {
            Ok(true) => {}
            _ => return false,
        }
    }
    // full rank off the surface
    let off = p.sample_off_point(m.target_vars.len(), None, rng);
    matches!(rank_at(m, &off), Ok(r) if r == m.rows())
}

#[test]
fn criterion_8_indegfalse_lowest_working_degree() {
    let start = Instant::now();
    let p = problem("indegfalse.txt");
    assert_eq!(p.ring.toric_factor(), 3);
    assert_eq!(p.ring.num_coords(), 12);
    // theorem bound is 2d - gamma = 6; nu = 4 is below it but works
    assert_eq!(p.default_nu(), Some(vec![6]));
    let m4 = build_matrix(&p, &[4], true, 42).unwrap();
    assert_eq!((m4.rows(), m4.cols()), (117, 200));
    let mut rng = StdRng::seed_from_u64(42);
    assert!(
        verification_succeeds(&p, &m4, &mut rng),
        "nu = 4 must verify"
    );
    // nu = 3 must fail: the strand has fewer columns than rows
    let failed = match build_matrix(&p, &[3], true, 42) {
        Err(_) => true,
        Ok(m3) => {
            let ok = m3.rows() <= m3.cols() && verification_succeeds(&p, &m3, &mut rng);
            if !ok {
                eprintln!(
                    "nu = 3 matrix is {}x{}, full rank: {}",
                    m3.rows(),
                    m3.cols(),
                    m3.generically_full_rank
                );
            }
            !ok
        }
    };
    assert!(failed, "nu = 3 must not verify");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "ran {:?}", elapsed);
    println!(
        "criterion 8: PASS - 117x200 at nu=4 verifies, nu=3 fails, in {:?}",
        elapsed
    );
}

#[test]
fn sparse_rational_multiproj_bound_and_matrix() {
    // companion check for the rational-input path used across criteria:
    // the (P1)^3 compactification of the sparse example gives nu0 = 3 and
    // a 34 x 51 Koszul matrix
    let p = problem("sparse_rational.txt");
    assert_eq!(p.default_nu(), Some(vec![3]));
    let m = build_matrix(&p, &[3], false, 42).unwrap();
    assert_eq!((m.rows(), m.cols()), (34, 51));
    assert!(m.generically_full_rank);
    println!("companion: PASS - (P1)^3 path 34x51 at nu0 = 3");
}

#[test]
fn generic_trapezoid_bounds_side_by_side() {
    // analyze must report nu0 = 2 for the (P1)^3 path and nu0 = 5 for the
    // common-denominator projective variant
    let spec = load("generic_trapezoid.txt");
    let opts = implicatrix::report::PipelineOptions {
        nu: None,
        strategy: Strategy::MultiMinorGcd,
        samples: 20,
        seed: 42,
        force: false,
        ideal_bound: None,
    };
    let report = implicatrix::report::run_analyze(&spec, &opts).unwrap();
    assert_eq!(report.setting, "multiproj-codomain");
    assert_eq!(report.bounds.nu0, Some(2));
    assert_eq!(report.bounds.alternate_projective_nu0, Some(5));
    println!("companion: PASS - trapezoid bounds nu0 = 2 (multiproj) and 5 (projective)");
}

#[test]
fn sub_polytope_implicit_equation_matches() {
    // the 12x19 matrix over Q represents the same sextic directly
    let spec_q = load("sparse_surface_subpolytope.txt");
    let (pq, _) = spec_q.to_problem().unwrap();
    let mq = build_matrix(&pq, &[2], true, 42).unwrap();
    let res = implicit_equation(&pq, &mq, Strategy::MultiMinorGcd, 20, 42).unwrap();
    assert!(res.verified);
    assert_eq!(res.candidate, golden_sextic().normalized());
    assert!(res
        .factors
        .iter()
        .all(|(_, s)| !matches!(s, FactorStatus::Extraneous)));
    println!("companion: PASS - sub-polytope path reproduces the sextic without extraneous factors");
}

#[test]
fn moving_lines_error_when_degree_unattainable() {
    // degenerate cubic cover: syzygy strand dimension mismatch reported
    let s2t = SparsePoly::from_terms(2, [(Monomial::new(vec![2, 1]), q_int(1))]);
    let st2 = SparsePoly::from_terms(2, [(Monomial::new(vec![1, 2]), q_int(1))]);
    let mix = SparsePoly::from_terms(
        2,
        [
            (Monomial::new(vec![3, 0]), q_int(1)),
            (Monomial::new(vec![0, 3]), q_int(1)),
        ],
    );
    match implicatrix::implicitize::moving_lines_curve(&s2t, &st2, &mix, 3, 10, 42) {
        Ok(res) => assert!(res.verified),
        Err(ImplicitError::BasePointDetected(_)) => {}
        Err(other) => panic!("unexpected error {:?}", other),
    }
}
