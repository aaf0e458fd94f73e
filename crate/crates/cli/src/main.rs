//! `spectra`: command-line front end.
//!
//! Exit codes: 0 success, 2 a mathematical check failed, 3 bad input,
//! 4 the solver stalled on a required check.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectra_core::faces2d::Faces2dConfig;
use spectra_core::lasserre::CertTolerances;
use spectra_core::sdp::SolverConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    CheckFailed,
    Stalled,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::CheckFailed => 2,
            Outcome::Stalled => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "spectra", version, about = "Spectrahedra, rigidly convex sets and Lasserre relaxations")]
struct Cli {
    /// Output directory for reports and figures.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1e-7)]
    feas_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    refute_tol: f64,
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// Directions per coordinate pair for real-zero checks.
    #[arg(long, global = true)]
    directions: Option<usize>,
    /// Rays for planar boundary sampling.
    #[arg(long, global = true, default_value_t = 4096)]
    rays: usize,
    #[arg(long, global = true, default_value_t = 20_240_917)]
    seed: u64,
    /// Comma-separated groups (symbolic, faces, sdp) or criteria (c3) to skip.
    #[arg(long, global = true, value_delimiter = ',')]
    skip: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sampled real-zero check of a polynomial at a point.
    Rz {
        #[arg(long)]
        poly: String,
        /// Base point, e.g. `0,0` or `1/2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// Renegar derivatives `p^(k)` (or `P^(k)` along `--e` with `--homogeneous`).
    Renegar {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        k: u32,
        /// Number of affine variables (inferred when omitted).
        #[arg(long)]
        nvars: Option<usize>,
        /// Treat the input as a form in `t1..tn, u` and differentiate along `--e`.
        #[arg(long)]
        homogeneous: bool,
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
    },
    /// Multiplicity of a boundary point and its exposing tangent.
    Mult {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Characteristic-polynomial coefficients, membership and faces of a pencil.
    Pencil {
        /// Pencil JSON `{"k", "n", "A"}`.
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Hyperbolicity-cone membership of a homogeneous polynomial.
    Hypcone {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Quadratic-module and moment-relaxation queries.
    Lasserre {
        #[command(subcommand)]
        op: LasserreOp,
    },
    /// Face of a point of a planar set and whether it is exposed.
    Faces2d {
        /// Set JSON `{"generators", "interior_point", "bbox"}`.
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Runs every regression check of the two worked examples.
    ReproducePaper {
        /// Include wall-clock runtimes (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Writes the two example figures as SVG.
    Fig {
        /// `1`, `2` or `all`.
        #[arg(long, default_value = "all")]
        which: String,
    },
}

#[derive(Subcommand, Debug)]
enum LasserreOp {
    /// `l in QM(p)_d` for every `{"type": "qm"}` query.
    QmMember { file: PathBuf },
    /// `x in S(p)_d` for every `{"type": "point"}` query.
    RelaxMember { file: PathBuf },
    /// Halving probe over the tangents `t2 - 3a^2 t1 + 2a^3`.
    Probe { file: PathBuf },
}

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: Option<PathBuf>,
    pub solver: SolverConfig,
    pub cert: CertTolerances,
    pub faces: Faces2dConfig,
    pub directions: Option<usize>,
    pub seed: u64,
    pub skip: Vec<String>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let solver = SolverConfig {
            feas_tol: cli.feas_tol,
            refute_tol: cli.refute_tol,
            max_iter: cli.max_iter,
            ..SolverConfig::default()
        };
        solver.validate().map_err(CliError::input)?;
        if cli.rays < 8 {
            return Err(CliError::input("--rays must be at least 8"));
        }
        if cli.directions == Some(0) {
            return Err(CliError::input("--directions must be positive"));
        }
        let cert = CertTolerances {
            refute_tol: cli.refute_tol,
            ..CertTolerances::default()
        };
        let faces = Faces2dConfig {
            rays: cli.rays,
            ..Faces2dConfig::default()
        };
        Ok(RunConfig {
            out: cli.out.clone(),
            solver,
            cert,
            faces,
            directions: cli.directions,
            seed: cli.seed,
            skip: cli.skip.clone(),
        })
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from_cli(&cli)?;
    for w in cfg.solver.warnings() {
        eprintln!("warning: {w}");
    }
    match cli.command {
        Command::Rz { poly, e } => commands::rz(&cfg, &poly, &e),
        Command::Renegar {
            poly,
            k,
            nvars,
            homogeneous,
            e,
        } => commands::renegar(&cfg, &poly, k, nvars, homogeneous, e.as_deref()),
        Command::Mult { poly, x } => commands::mult(&cfg, &poly, &x),
        Command::Pencil { file, x } => commands::pencil(&cfg, &file, x.as_deref()),
        Command::Hypcone { poly, e, x } => commands::hypcone(&cfg, &poly, &e, &x),
        Command::Lasserre { op } => match op {
            LasserreOp::QmMember { file } => commands::qm_member(&cfg, &file),
            LasserreOp::RelaxMember { file } => commands::relax_member(&cfg, &file),
            LasserreOp::Probe { file } => commands::probe(&cfg, &file),
        },
        Command::Faces2d { file, x } => commands::faces2d(&cfg, &file, &x),
        Command::ReproducePaper { timings } => commands::reproduce_paper(&cfg, timings),
        Command::Fig { which } => commands::fig(&cfg, &which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
