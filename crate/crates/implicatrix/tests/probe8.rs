use implicatrix::implicitize::build_matrix;
use implicatrix::parse::parse_problem;
use num_traits::Zero;

#[test]
fn pedi06_entry_sizes() {
    let path = format!("{}/inputs/pedi06.txt", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    let (p, _) = parse_problem(&text).unwrap().to_problem().unwrap();
    let m = build_matrix(&p, &[4], true, 42).unwrap();
    let mut max_bits = 0u64;
    let mut total_bits = 0u64;
    let mut nonzero = 0u64;
    for row in &m.entries {
        for lin in row {
            for q in lin {
                if !q.is_zero() {
                    max_bits = max_bits.max(q.numer().bits());
                    total_bits += q.numer().bits();
                    nonzero += 1;
                }
            }
        }
    }
    eprintln!(
        "{}x{}: nonzero {} avg bits {} max bits {}",
        m.rows(),
        m.cols(),
        nonzero,
        total_bits / nonzero.max(1),
        max_bits
    );
}
