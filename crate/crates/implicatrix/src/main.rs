//! Command-line surface. Exit codes: 0 success, 1 verification failure,
//! 2 input error, 3 internal invariant violation.

use clap::{Parser, Subcommand};
use implicatrix::implicitize::{ImplicitError, Strategy};
use implicatrix::parse::{parse_point, parse_problem, IngestError};
use implicatrix::report::{
    check_point, region_report, render_text, run_analyze, run_implicitize, run_matrix, MatrixJson,
    PipelineOptions, RunReport, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "implicatrix",
    about = "Implicit equations of rational hypersurfaces via toric linear syzygies"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse the input and report polytope, ring and degree bounds.
    Analyze {
        file: PathBuf,
        /// also emit toric-ideal binomial generators up to this degree
        #[arg(long)]
        ideal_bound: Option<i64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the representation matrix and persist it as JSON.
    Matrix {
        file: PathBuf,
        /// matrix degree, comma separated for multidegrees
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Option<Vec<i64>>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Full pipeline: matrix, minors, gcd, verification.
    Implicitize {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        nu: Option<Vec<i64>>,
        /// single-minor or multi-minor-gcd
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a persisted matrix at a point and report membership.
    Check {
        matrix: PathBuf,
        /// comma-separated rational coordinates, e.g. "1,2/3,0,5"
        #[arg(long)]
        point: String,
    },
    /// Region of valid degrees for a product of projective spaces.
    Region {
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
}

fn default_seed() -> u64 {
    std::env::var("IMPLICATRIX_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn emit(report: &RunReport, json: bool, out: &Option<PathBuf>) -> Result<(), CliError> {
    let rendered = serde_json::to_string_pretty(report).expect("report serializes");
    if let Some(path) = out {
        std::fs::write(path, &rendered).map_err(CliError::Io)?;
    }
    if json {
        println!("{}", rendered);
    } else {
        print!("{}", render_text(report));
    }
    Ok(())
}

enum CliError {
    Input(String),
    Verification(String),
    Io(std::io::Error),
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Build(build) => build.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ImplicitError> for CliError {
    fn from(e: ImplicitError) -> Self {
        match e {
            ImplicitError::VerificationFailed
            | ImplicitError::RankDeficient { .. }
            | ImplicitError::BasePointDetected(_) => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Analyze {
            file,
            ideal_bound,
            json,
            out,
        } => {
            let text = std::fs::read_to_string(&file).map_err(CliError::Io)?;
            let spec = parse_problem(&text)?;
            let opts = PipelineOptions {
                nu: spec.options.nu.clone(),
                strategy: Strategy::MultiMinorGcd,
                samples: DEFAULT_SAMPLES,
                seed: spec.options.seed.unwrap_or_else(default_seed),
                force: false,
                ideal_bound,
            };
            let start = Instant::now();
            let report = run_analyze(&spec, &opts)?;
            eprintln!("timing: analyze took {:?}", start.elapsed());
            emit(&report, json, &out)
        }
        Cmd::Matrix {
            file,
            nu,
            force,
            seed,
            out,
            json,
        } => {
            let text = std::fs::read_to_string(&file).map_err(CliError::Io)?;
            let spec = parse_problem(&text)?;
            let opts = PipelineOptions {
                nu: nu.or_else(|| spec.options.nu.clone()),
                strategy: Strategy::MultiMinorGcd,
                samples: DEFAULT_SAMPLES,
                seed: seed.or(spec.options.seed).unwrap_or_else(default_seed),
                force,
                ideal_bound: None,
            };
            let start = Instant::now();
            let (report, matrix) = run_matrix(&spec, &opts)?;
            eprintln!("timing: matrix took {:?}", start.elapsed());
            if let Some(path) = &out {
                let rendered = serde_json::to_string(&matrix).expect("matrix serializes");
                std::fs::write(path, rendered).map_err(CliError::Io)?;
            }
            if json && out.is_none() {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&matrix).expect("matrix serializes")
                );
            } else {
                print!("{}", render_text(&report));
            }
            Ok(())
        }
        Cmd::Implicitize {
            file,
            nu,
            strategy,
            samples,
            seed,
            force,
            json,
            out,
        } => {
            let text = std::fs::read_to_string(&file).map_err(CliError::Io)?;
            let spec = parse_problem(&text)?;
            let strategy = match strategy.as_deref() {
                None => spec.options.strategy.unwrap_or(Strategy::MultiMinorGcd),
                Some("single-minor") => Strategy::SingleMinor,
                Some("multi-minor-gcd") => Strategy::MultiMinorGcd,
                Some(other) => {
                    return Err(CliError::Input(format!("unknown strategy '{}'", other)))
                }
            };
            let opts = PipelineOptions {
                nu: nu.or_else(|| spec.options.nu.clone()),
                strategy,
                samples: samples.or(spec.options.samples).unwrap_or(DEFAULT_SAMPLES),
                seed: seed.or(spec.options.seed).unwrap_or_else(default_seed),
                force,
                ideal_bound: None,
            };
            let start = Instant::now();
            let report = run_implicitize(&spec, &opts)?;
            eprintln!("timing: implicitize took {:?}", start.elapsed());
            emit(&report, json, &out)
        }
        Cmd::Check { matrix, point } => {
            let text = std::fs::read_to_string(&matrix).map_err(CliError::Io)?;
            let mj: MatrixJson =
                serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
            let rep = mj.to_rep().map_err(CliError::Input)?;
            let pt = parse_point(&point)?;
            let (on, rank) = check_point(&rep, &pt)?;
            println!(
                "point is {} the represented hypersurface (rank {} of {})",
                if on { "ON" } else { "OFF" },
                rank,
                rep.rows()
            );
            if on {
                println!(
                    "note: a rank drop certifies membership of the surface union any \
                     extraneous-factor locus when the base scheme is not locally a complete \
                     intersection"
                );
            }
            Ok(())
        }
        Cmd::Region { ranks, gamma, json } => {
            if ranks.is_empty() || ranks.len() != gamma.len() {
                return Err(CliError::Input(
                    "--ranks and --gamma must be non-empty and of equal length".into(),
                ));
            }
            let report = region_report(&ranks, &gamma);
            emit(&report, json, &None)
        }
    }
}

fn main() -> ExitCode {
    // internal invariant violations (panics) exit with code 3
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        default_hook(info);
        eprintln!("internal invariant violation");
        std::process::exit(3);
    }));
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {}", msg);
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {}", msg);
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {}", e);
            ExitCode::from(2)
        }
    }
}
