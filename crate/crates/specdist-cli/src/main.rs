//! `specdist` — spectral distances on finite spectral triples from the
//! command line: point-to-point and state-to-state distances, product
//! (Pythagoras) sweeps, optimal-transport plans with dual certificates,
//! the product-state surface sampler, marginal projections, and built-in
//! verification suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use specdist_core::solver::SolveOptions;

mod commands;
mod output;
mod verify;

use commands::{CommandOutput, Ctx, Failure, Format, PairSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Fixed-width tables with 6 significant digits.
    Human,
    /// Comma-separated values with a header row and full precision.
    Csv,
    /// Pretty-printed JSON with full precision.
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Human => Format::Human,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairsArg {
    /// Deterministic parameter grid on each factor, all unordered pairs.
    Grid,
    /// Seeded random product states, one pair per row.
    Random,
    /// Four explicit state files passed with --states.
    Explicit,
}

/// Spectral distances on finite spectral triples.
#[derive(Debug, Parser)]
#[command(name = "specdist", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative accuracy target for distance values.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Iteration budget per optimization phase.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iter: usize,

    /// Seed for every random choice (restarts, sweeps, suites).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of ascent restarts in the distance solver.
    #[arg(long, global = true, default_value_t = 5)]
    restarts: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance between two states on a spectral triple or metric space.
    ///
    /// A file with a "g" matrix is read as a metric space and solved by
    /// optimal transport; anything else is read as a spectral triple and
    /// solved by the distance engine.
    Dist {
        /// Geometry file (spectral triple or metric space).
        geometry: PathBuf,
        /// First state file.
        phi: PathBuf,
        /// Second state file.
        psi: PathBuf,
    },
    /// Sweep product-state pairs on a product of two triples and classify
    /// each spectral distance against the hypotenuse of the marginals.
    Pythagoras {
        /// Left factor (must carry a grading).
        left: PathBuf,
        /// Right factor.
        right: PathBuf,
        /// How to pick the product-state pairs.
        #[arg(long, value_enum, default_value_t = PairsArg::Grid)]
        pairs: PairsArg,
        /// Parameter steps per two-point factor in grid mode.
        #[arg(long, default_value_t = 5)]
        grid_steps: usize,
        /// Number of pairs in random mode.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Explicit mode: phi_left phi_right psi_left psi_right.
        #[arg(long, num_args = 4)]
        states: Option<Vec<PathBuf>>,
    },
    /// Optimal-transport plan between two weight vectors on a metric space.
    Transport {
        /// Metric-space file.
        metric: PathBuf,
        /// Source weights (state file).
        p: PathBuf,
        /// Target weights (state file).
        q: PathBuf,
    },
    /// Sample the embedded product-state surface over the parameter square.
    Surface {
        /// Grid points per axis (at least 2).
        #[arg(long, default_value_t = 21)]
        resolution: usize,
    },
    /// Embed a four-point state and the product of its marginals, checking
    /// that the projection preserves the first two coordinates.
    #[command(name = "marginal-projection")]
    MarginalProjection {
        /// Four-point probability state file.
        state: PathBuf,
    },
    /// Run a built-in verification suite and report each check.
    Verify {
        /// Suite: oracles, pythagoras, transport, berezin, or all.
        suite: String,
        /// Sphere-quadrature resolution for the berezin suite.
        #[arg(long, default_value_t = 800)]
        resolution: usize,
    },
}

fn run(cli: &Cli) -> Result<CommandOutput, Failure> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Invalid(format!(
            "--tol must be a positive finite number, got {}",
            cli.tol
        )));
    }
    let ctx = Ctx {
        opts: SolveOptions {
            tol: cli.tol,
            max_iter: cli.max_iter,
            seed: cli.seed,
            restarts: cli.restarts,
        },
        format: cli.format.into(),
    };
    match &cli.command {
        Command::Dist { geometry, phi, psi } => commands::cmd_dist(geometry, phi, psi, &ctx),
        Command::Pythagoras {
            left,
            right,
            pairs,
            grid_steps,
            count,
            states,
        } => {
            let spec = match pairs {
                PairsArg::Grid => PairSpec::Grid { steps: *grid_steps },
                PairsArg::Random => PairSpec::Random { count: *count },
                PairsArg::Explicit => PairSpec::Explicit {
                    files: states.as_deref().ok_or_else(|| {
                        Failure::Invalid(
                            "--pairs explicit needs --states phi_left phi_right psi_left psi_right"
                                .into(),
                        )
                    })?,
                },
            };
            commands::cmd_pythagoras(left, right, spec, &ctx)
        }
        Command::Transport { metric, p, q } => commands::cmd_transport(metric, p, q, &ctx),
        Command::Surface { resolution } => commands::cmd_surface(*resolution, &ctx),
        Command::MarginalProjection { state } => commands::cmd_marginal_projection(state, &ctx),
        Command::Verify { suite, resolution } => commands::cmd_verify(suite, *resolution, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version print to stdout and succeed; real usage
            // errors go to stderr and exit 1
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
