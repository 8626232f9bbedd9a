mod commands;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use reflex_core::jacobian::Support;
use reflex_core::lattice::RankMode;

/// Exact computations on lattice polytopes, Laurent polynomials and their
/// period series.
#[derive(Parser, Debug)]
#[command(name = "reflex", version)]
struct Cli {
    /// Seed for generic coefficients and modular primes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Rank computations over Q instead of a large prime field.
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SupportArg {
    Full,
    VertexLattice,
}

impl From<SupportArg> for Support {
    fn from(s: SupportArg) -> Self {
        match s {
            SupportArg::Full => Support::Full,
            SupportArg::VertexLattice => Support::VertexLattice,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polar dual of a reflexive polytope.
    Dual { poly: PathBuf },
    /// Facet offsets, reflexivity and the δ-vector.
    Reflexive { poly: PathBuf },
    /// Ehrhart polynomial, δ-vector and reciprocity for k ≤ 3.
    Ehrhart { poly: PathBuf },
    /// Face lattice with lattice-point counts and degrees.
    Faces { poly: PathBuf },
    /// Stringy Hodge numbers of the anticanonical hypersurface family.
    Hodge { poly: PathBuf },
    /// Euler number (n = 4) and the facet-degree identity.
    Euler { poly: PathBuf },
    /// Edge sum and K3 Picard ranks of a 3-dimensional reflexive polytope.
    K3 { poly: PathBuf },
    /// Fundamental groups of the pair and of the polytope.
    Fundgroup { poly: PathBuf },
    /// The reflexive polygons, one JSON record per class.
    Classify2d {
        #[arg(long = "box", default_value_t = reflex_core::classify::POLYGON_BOX)]
        search_box: i64,
    },
    /// Solutions of Σ 1/d_i = 1 with n + 1 entries.
    Weights { n: usize },
    /// Reflexive simplex of a weight vector.
    Simplex {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
    },
    /// Graded Jacobian ring; a seeded generic polynomial when none is given.
    Jacobian {
        poly: PathBuf,
        laurent: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SupportArg::VertexLattice)]
        support: SupportArg,
        #[arg(long, default_value_t = 4)]
        attempts: u32,
        /// Also check the perfect pairing into the top degree.
        #[arg(long)]
        pairing: bool,
    },
    /// Whether a Laurent polynomial is regular for a polytope.
    Regularity { poly: PathBuf, laurent: PathBuf },
    /// Constant-term series B_0..B_K.
    Periods {
        poly: PathBuf,
        #[arg(long)]
        kmax: usize,
    },
    /// Recurrence satisfied by the compressed period series.
    Recurrence {
        poly: PathBuf,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 2)]
        max_order: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Further compressed terms computed afresh to test the fit.
        #[arg(long, default_value_t = 10)]
        verify: usize,
    },
    /// Constant term of f^(p−1) modulo p.
    Hasse {
        laurent: PathBuf,
        #[arg(long)]
        prime: u64,
    },
}

/// A failed run: exit code 2 for bad input, 1 for a failed internal check.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<reflex_core::Error> for Failure {
    fn from(e: reflex_core::Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

pub struct Settings {
    pub seed: u64,
    pub mode: RankMode,
    pub format: Format,
}

fn configure_threads() {
    if let Some(n) = std::env::var("REFLEX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Input files for `path`: the `.poly` files of a directory in name order,
/// or the path itself.
fn inputs(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let entries = std::fs::read_dir(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "poly"))
        .collect();
    files.sort();
    Ok(files)
}

fn per_polytope(cli: &Cli) -> Option<&Path> {
    match &cli.command {
        Command::Dual { poly }
        | Command::Reflexive { poly }
        | Command::Ehrhart { poly }
        | Command::Faces { poly }
        | Command::Hodge { poly }
        | Command::Euler { poly }
        | Command::K3 { poly }
        | Command::Fundgroup { poly }
        | Command::Periods { poly, .. }
        | Command::Recurrence { poly, .. } => Some(poly),
        Command::Jacobian { poly, laurent: None, .. } => Some(poly),
        _ => None,
    }
}

fn run_one(cli: &Cli, settings: &Settings, poly: Option<&Path>) -> Result<String, Failure> {
    let poly = || poly.expect("polytope commands carry a path");
    match &cli.command {
        Command::Dual { .. } => commands::dual(settings, poly()),
        Command::Reflexive { .. } => commands::reflexive(settings, poly()),
        Command::Ehrhart { .. } => commands::ehrhart(settings, poly()),
        Command::Faces { .. } => commands::faces(settings, poly()),
        Command::Hodge { .. } => commands::hodge(settings, poly()),
        Command::Euler { .. } => commands::euler(settings, poly()),
        Command::K3 { .. } => commands::k3(settings, poly()),
        Command::Fundgroup { .. } => commands::fundgroup(settings, poly()),
        Command::Classify2d { search_box } => commands::classify2d(settings, *search_box),
        Command::Weights { n } => commands::weights(settings, *n),
        Command::Simplex { weights } => commands::simplex(settings, weights),
        Command::Jacobian {
            laurent,
            support,
            attempts,
            pairing,
            poly: given,
        } => {
            let p = if laurent.is_none() { poly() } else { given.as_path() };
            commands::jacobian(settings, p, laurent.as_deref(), (*support).into(), *attempts, *pairing)
        }
        Command::Regularity { poly, laurent } => commands::regularity(settings, poly, laurent),
        Command::Periods { kmax, .. } => commands::periods(settings, poly(), *kmax),
        Command::Recurrence {
            kmax,
            max_order,
            max_degree,
            verify,
            ..
        } => commands::recurrence(settings, poly(), *kmax, *max_order, *max_degree, *verify),
        Command::Hasse { laurent, prime } => commands::hasse(settings, laurent, *prime),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let settings = Settings {
        seed: cli.seed,
        mode: if cli.exact { RankMode::Exact } else { RankMode::modular(cli.seed) },
        format: cli.format,
    };
    let files = match per_polytope(&cli).map(inputs).transpose() {
        Ok(files) => files,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    let results: Vec<(Option<PathBuf>, Result<String, Failure>)> = match files {
        Some(files) => files
            .into_par_iter()
            .map(|f| {
                let out = run_one(&cli, &settings, Some(&f));
                (Some(f), out)
            })
            .collect(),
        None => vec![(None, run_one(&cli, &settings, None))],
    };
    let mut code = 0u8;
    for (file, result) in results {
        match result {
            Ok(text) => print!("{text}"),
            Err(f) => {
                match file {
                    Some(path) => eprintln!("error: {}: {}", path.display(), f.message()),
                    None => eprintln!("error: {}", f.message()),
                }
                // an internal failure outranks bad input
                code = match (code, f.code()) {
                    (1, _) | (_, 1) => 1,
                    (_, c) => c,
                };
            }
        }
    }
    ExitCode::from(code)
}
