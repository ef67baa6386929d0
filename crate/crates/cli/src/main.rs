//! `congrulab` command-line front end.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "congrulab", version, about = "Congruence tests for projections and sections of 4D bodies")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by all subcommands.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Tolerance (relative to the sup norm of the inputs for `verify`).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Latitude rings per great sphere.
    #[arg(long = "grid-t", global = true, default_value_t = 64)]
    pub grid_t: usize,
    /// Azimuth samples per ring (even).
    #[arg(long = "grid-az", global = true, default_value_t = 256)]
    pub grid_az: usize,
    /// Directions w sampled on S²(ζ).
    #[arg(long = "w-samples", global = true, default_value_t = 200)]
    pub w_samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Projections,
    Sections,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    Projection,
    Section,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonicalize a JSON body spec (transform chain folded into the shape).
    GenBody { spec: PathBuf },
    /// Decide whether K and L are congruent from their projections or sections.
    Verify {
        theorem: Theorem,
        body_k: PathBuf,
        body_l: PathBuf,
        /// Diameter direction, four comma-separated numbers.
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
    },
    /// Rigid symmetries of 3D projections of a polytope.
    Symmetry {
        body: PathBuf,
        /// Subspace as three spanning vectors `a,b,c,d;e,f,g,h;i,j,k,l`; repeatable.
        #[arg(long, conflicts_with = "sample", allow_hyphen_values = true)]
        subspace: Vec<String>,
        /// Number of random subspaces.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Perturb a polytope until its sampled 3D projections have no symmetries.
    Perturb {
        body: PathBuf,
        #[arg(long, default_value_t = 50)]
        subspaces: usize,
        #[arg(long, default_value_t = 30)]
        budget: usize,
        /// Bound on the Hausdorff distance of the perturbation.
        #[arg(long = "max-delta")]
        max_delta: Option<f64>,
    },
    /// Hausdorff distance of inscribed polytopes and the fitted decay exponent.
    Rate {
        body: PathBuf,
        /// Vertex counts, comma-separated.
        #[arg(long, default_value = "40,80,160,320,640")]
        v: String,
    },
    /// Export the support function of `K|w⊥` or the radial function of `K ∩ w⊥`.
    Restrict {
        kind: Restriction,
        body: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CONGRULAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("CONGRULAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    init_threads()?;
    let run = &cli.run;
    match cli.command {
        Command::GenBody { spec } => commands::gen_body(&spec, run),
        Command::Verify {
            theorem,
            body_k,
            body_l,
            zeta,
        } => commands::verify(theorem, &body_k, &body_l, &zeta, run),
        Command::Symmetry {
            body,
            subspace,
            sample,
        } => commands::symmetry(&body, &subspace, sample, run),
        Command::Perturb {
            body,
            subspaces,
            budget,
            max_delta,
        } => commands::perturb(&body, subspaces, budget, max_delta, run),
        Command::Rate { body, v } => commands::rate(&body, &v, run),
        Command::Restrict {
            kind,
            body,
            w,
            points,
        } => commands::restrict(kind, &body, &w, points, run),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            println!("{}", e.payload());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
