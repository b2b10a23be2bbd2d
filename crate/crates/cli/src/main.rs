mod commands;
mod doc;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::report::Format;

/// Exact computations with Lie n-algebras and L∞-morphisms.
///
/// Exit codes: 0 verified, 1 verification failed (the report carries a
/// witness), 2 unusable input.
#[derive(Debug, Parser)]
#[command(name = "linfty", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Reject input entries (brackets, components) of higher arity.
    #[arg(long, global = true)]
    pub arity_bound: Option<usize>,
    /// Degree cutoff for coalgebra homology in `check` and `classify`.
    #[arg(long, global = true)]
    pub degree_cutoff: Option<i32>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub report: Format,
    /// Rotates the order in which sampled points are listed. Arithmetic does
    /// not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an algebra, morphism, cdga or MC pair document.
    Check { path: PathBuf },
    /// Weak equivalence, fibration and related flags of a morphism.
    Classify { path: PathBuf },
    /// Factor a morphism as a weak equivalence followed by a fibration.
    Factor {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "strict")]
        mode: commands::FactorMode,
    },
    /// Pull a fibration f back along g.
    Pullback { f: PathBuf, g: PathBuf },
    /// Maurer–Cartan computations in L ⊗ B.
    Mc {
        #[command(subcommand)]
        command: McCommand,
    },
    /// Truncations, towers, quasi-split test and tower decompositions.
    Postnikov {
        #[command(subcommand)]
        command: PostnikovCommand,
    },
    /// Print the normal form of a document.
    Normalize { path: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Curvature polynomials; with --point, the curvature at that point.
    Curvature {
        /// An mc-pair document, or an algebra and a cdga document.
        #[arg(required = true, num_args = 1..=2)]
        docs: Vec<PathBuf>,
        #[arg(long)]
        point: Option<String>,
    },
    /// Whether a point is a Maurer–Cartan element.
    Check {
        #[arg(required = true, num_args = 1..=2)]
        docs: Vec<PathBuf>,
        #[arg(long)]
        point: String,
    },
    /// Push an MC element forward along a morphism.
    Pushforward {
        morphism: PathBuf,
        cdga: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// The bijection between MC elements of the pullback and matched pairs.
    Pullback {
        f: PathBuf,
        g: PathBuf,
        cdga: PathBuf,
        /// MC element of L′ ⊗ B (source of g).
        #[arg(long, requires = "a")]
        a_prime: Option<String>,
        /// MC element of L ⊗ B (source of f).
        #[arg(long, requires = "a_prime")]
        a: Option<String>,
        /// Grid cap per side when sampling matched pairs.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PostnikovCommand {
    Truncate {
        path: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "le")]
        kind: commands::Kind,
    },
    /// The tower of an algebra, or the ladder of a morphism.
    Tower { path: PathBuf },
    Quasisplit {
        path: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    Decompose1 {
        path: PathBuf,
        #[arg(long)]
        m: usize,
    },
    Decompose2 {
        path: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::Check { path } => commands::check(g, path),
        Command::Classify { path } => commands::classify(g, path),
        Command::Factor { path, mode } => commands::factor(g, path, *mode),
        Command::Pullback { f, g: gp } => commands::pullback(g, f, gp),
        Command::Mc { command } => commands::mc(g, command),
        Command::Postnikov { command } => commands::postnikov(g, command),
        Command::Normalize { path } => match commands::normalize(path) {
            Ok(s) => {
                print!("{s}");
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render(g.report));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
