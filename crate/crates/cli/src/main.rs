//! `covlab`: generators, cover solvers, constructions and polynomial
//! certificates from the command line. Every run prints one key-sorted JSON
//! report on stdout.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use covlab::Error;
use report::{error_kind, Report};

#[derive(Parser, Debug)]
#[command(name = "covlab", version, about = "Exact hyperplane covers and almost covers of finite point sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "COVLAB_THREADS")]
    pub threads: Option<usize>,
    /// Sequential search and no timings, so reports are byte-reproducible.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Largest number of candidate subsets enumeration may scan.
    #[arg(long, global = true, value_name = "N")]
    pub budget_subsets: Option<u64>,
    /// Wall-clock budget in seconds for enumeration and for each search.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub time_budget: Option<f64>,
    /// Incidence cache: loaded when the file exists, written otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
    /// Write a CSV table of trace sizes for every verified hyperplane list.
    #[arg(long, global = true, value_name = "PATH")]
    pub trace_csv: Option<PathBuf>,
    /// Disable symmetry pruning in the cover search.
    #[arg(long, global = true)]
    pub no_symmetry: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a point set file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file; the point set goes to stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Almost-cover numbers ac(X, v) and ac(X).
    Ac {
        /// Point-set file, or perm:N, cube:N, orbit:a,b,.., grid:a,bxc,d
        pointset: String,
        /// Solve for this vertex only (index or coordinates).
        #[arg(long, allow_hyphen_values = true)]
        vertex: Option<String>,
        /// Points are all equivalent under symmetries; solve the first only.
        #[arg(long)]
        transitive: bool,
    },
    /// Minimum cover of all points by hyperplanes of the affine hull.
    Cover {
        pointset: String,
        /// Fail unless the hull is a proper flat, so the hull itself is excluded.
        #[arg(long)]
        exclude_hull: bool,
    },
    /// Largest intersection of the set with a spanned hyperplane.
    Maxtrace { pointset: String },
    /// Cover all points except holes and a vertex, avoiding the vertex.
    Punctured {
        pointset: String,
        #[arg(long, num_args = 1..)]
        holes: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
    },
    /// Explicit cover constructions, verified on the point set they target.
    Construct {
        #[command(subcommand)]
        which: ConstructKind,
    },
    /// Check a hyperplane list (text or a JSON report) against a point set.
    Verify {
        pointset: String,
        #[arg(long)]
        hyperplanes: PathBuf,
        /// Points that must stay uncovered; defaults to what the report says.
        #[arg(long, num_args = 0..)]
        expect_missed: Option<Vec<String>>,
    },
    /// Polynomial-method certificates.
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Zonotope experiments.
    Zono {
        #[command(subcommand)]
        op: ZonoOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    /// All permutations of (1, .., N).
    Permutohedron { n: usize },
    /// All permutations of distinct values.
    #[command(allow_negative_numbers = true)]
    Orbit {
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Cartesian product; one comma-separated --factor per coordinate.
    Grid {
        #[arg(long, required = true, allow_hyphen_values = true)]
        factor: Vec<String>,
    },
    /// Vertices of {0,1}^N.
    Cube { n: usize },
    /// Vertices of a zonotope.
    Zonotope {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// Almost cover of P_N by the hyperplanes x_i = j, j > i.
    Sharp { n: usize },
    Column { n: usize },
    Diagonal { n: usize },
    Odd { n: usize },
    Even { n: usize },
    /// Scaled copies of the hyperplane through the generator endpoints.
    Scaledhull {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolyOp {
    /// Expanded Vandermonde polynomial in N variables.
    Vandermonde {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Signed sum of permutation-monomial coefficients.
    Signedsum { poly: PathBuf },
    /// First point of a permutation orbit where the polynomial is nonzero.
    Witness {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
    },
    /// Permanent of the Vandermonde matrix of the values.
    #[command(allow_negative_numbers = true)]
    Pervandermonde {
        #[arg(required = true)]
        values: Vec<String>,
    },
    /// Numbering b of the values with all products a_i b_i distinct.
    Numbering {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Degree bound for a polynomial vanishing on all grid points but one.
    Afcheck {
        /// Polynomial file; defaults to the axis product of the factors.
        poly: Option<PathBuf>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        factor: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZonoOp {
    /// ac of the vertex set, compared with the rank.
    Ac {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

pub enum Outcome {
    Ok,
    /// A verification ran and failed.
    Failed,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_)
        | Error::HypothesisViolated(_)
        | Error::NoAmbientHyperplane
        | Error::ParityMismatch(_)
        | Error::NotAMember
        | Error::IsAmbientHyperplane
        | Error::DegenerateSpan
        | Error::DegreeMismatch { .. }
        | Error::ContractViolated(_) => 2,
        Error::SizeLimit(_) | Error::BudgetExceeded(_) | Error::Overflow(_) => 3,
        Error::DegenerateInput(_)
        | Error::ShapeMismatch(_)
        | Error::DegenerateCollection(_)
        | Error::Parse(_)
        | Error::CacheMismatch(_) => 64,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(64);
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(64);
        }
    };
    let mut report = Report::new(commands::name(&cli.command), !cli.global.deterministic);
    let outcome = pool.install(|| commands::run(&cli, &mut report));
    let code = match &outcome {
        Err(e) => {
            eprintln!("error ({}): {e}", error_kind(e));
            if matches!(e, Error::SizeLimit(_) | Error::BudgetExceeded(_)) {
                report.budget_hit(e.to_string());
            }
            exit_code_for(e)
        }
        Ok(_) if report.has_budget_hits() => 3,
        Ok(Outcome::Failed) => 2,
        Ok(Outcome::Ok) => 0,
    };
    if !report.is_silent() {
        let doc = report.finish(outcome.as_ref().err());
        println!("{}", serde_json::to_string_pretty(&doc).expect("reports are plain JSON"));
    }
    ExitCode::from(code)
}
