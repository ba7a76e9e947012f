//! The `lqnet` command line.
//!
//! Exit codes: 0 success, 1 malformed input or other failure, 2 singular
//! system, 3 no design solution, 4 some player prefers to opt out.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::certificates::certify_all;
use crate::design::{design_solve, DesignOptions, DEFAULT_DESIGN_TOL, DEFAULT_RANK_TOL};
use crate::equilibrium::{
    solve_ne_interior, solve_ne_pg, solve_social_interior, solve_social_pg, solve_vi, Mapping, ViOptions, DEFAULT_TOL,
};
use crate::error::Error;
use crate::game::ActionProfile;
use crate::io::{self, GameFile, PatternFile, ProblemFile};
use crate::ir::ir_check;
use crate::perturbation::{linspace, sweep, SweepConfig, SweepSolver};
use crate::random_networks::{self, ErConfig, WeightLaw};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_IRRATIONAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "lqnet", version, about = "Equilibria and coincidence design for linear-quadratic network games")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Ne,
    Social,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nash equilibrium or social optimum of a game file.
    Solve {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value = "ne")]
        kind: Kind,
        /// Solve on the nonnegative orthant instead of the interior linear system.
        #[arg(long)]
        constrained: bool,
    },
    /// Recover free adjacency entries so that the equilibrium is socially optimal.
    Design {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = crate::design::DEFAULT_STARTS)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DESIGN_TOL)]
        tol: f64,
    },
    /// Uniqueness and continuity certificates of a game's network.
    Certify {
        #[arg(long)]
        game: PathBuf,
    },
    /// Social cost along G + δ·ΔG as CSV.
    Perturb {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        constrained: bool,
    },
    /// Singularity statistics of Erdős–Rényi networks as CSV.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// unit, uniform:LO,HI or gaussian:MU,SIGMA
        #[arg(long, default_value = "unit", value_parser = parse_weights)]
        weights: WeightLaw,
        #[arg(long)]
        undirected: bool,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rank_tol: f64,
    },
    /// Individual-rationality report at the game's equilibrium.
    IrCheck {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value = "ne")]
        kind: Kind,
        #[arg(long)]
        constrained: bool,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let x = x.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let y = y.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((x, y))
}

fn parse_weights(s: &str) -> Result<WeightLaw, String> {
    match s.split_once(':') {
        None if s == "unit" => Ok(WeightLaw::Unit),
        Some(("uniform", rest)) => parse_pair(rest).map(|(lo, hi)| WeightLaw::Uniform { lo, hi }),
        Some(("gaussian", rest)) => parse_pair(rest).map(|(mu, sigma)| WeightLaw::Gaussian { mu, sigma }),
        _ => Err(format!("unknown weight law {s:?}")),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularSystem { .. } => EXIT_SINGULAR,
        Error::NoSolutionFound { .. } => EXIT_NO_SOLUTION,
        _ => EXIT_INPUT,
    }
}

enum Output {
    Json(Value),
    Text(Vec<u8>),
}

fn execute(command: Command) -> Result<(Output, i32), Error> {
    match command {
        Command::Solve { game, kind, constrained } => {
            let file = GameFile::load(&game)?;
            let eq = if let Some(pg) = file.public_goods_game()? {
                if constrained {
                    return Err(Error::InvalidConfig("--constrained is not available for public-goods games".into()));
                }
                match kind {
                    Kind::Ne => solve_ne_pg(&pg, DEFAULT_TOL)?,
                    Kind::Social => solve_social_pg(&pg, DEFAULT_TOL)?,
                }
            } else {
                let g = file.network_game()?;
                match (kind, constrained) {
                    (Kind::Ne, false) => solve_ne_interior(&g)?,
                    (Kind::Social, false) => solve_social_interior(&g)?,
                    (k, true) => {
                        let which = if matches!(k, Kind::Ne) { Mapping::Ne } else { Mapping::Social };
                        let opts = ViOptions { upper: file.upper(), ..ViOptions::default() };
                        solve_vi(&g, which, &ActionProfile::zeros(file.n), &opts)?
                    }
                }
            };
            Ok((Output::Json(io::equilibrium_json(&eq)), EXIT_OK))
        }
        Command::Design { problem, starts, seed, tol } => {
            let problem = ProblemFile::load(&problem)?.problem()?;
            let opts = DesignOptions { starts, seed, tol, ..DesignOptions::default() };
            let outcome = design_solve(&problem, &opts)?;
            Ok((Output::Json(io::design_json(&outcome)), EXIT_OK))
        }
        Command::Certify { game } => {
            let g = GameFile::load(&game)?.adjacency()?;
            Ok((Output::Json(io::certificates_json(&certify_all(&g))), EXIT_OK))
        }
        Command::Perturb { game, pattern, from, to, steps, constrained } => {
            let file = GameFile::load(&game)?;
            let pattern = PatternFile::load(&pattern)?.matrix()?;
            let solver = if constrained { SweepSolver::Constrained } else { SweepSolver::Interior };
            let mut config = SweepConfig::new(file.network_game()?, pattern, linspace(from, to, steps), solver)?;
            config.upper = file.upper();
            config.validate()?;
            let report = sweep(&config)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf).expect("writing to memory");
            Ok((Output::Text(buf), EXIT_OK))
        }
        Command::Random { n, p, samples, seed, weights, undirected, rank_tol } => {
            let config = ErConfig { n, p, weights, directed: !undirected, samples, seed };
            let row = random_networks::study(&config, rank_tol, DEFAULT_DESIGN_TOL)?;
            let mut buf = Vec::new();
            random_networks::write_csv(&[row], &mut buf).expect("writing to memory");
            Ok((Output::Text(buf), EXIT_OK))
        }
        Command::IrCheck { game, kind, constrained } => {
            let file = GameFile::load(&game)?;
            let g = file.network_game()?;
            let eq = match (kind, constrained) {
                (Kind::Ne, false) => solve_ne_interior(&g)?,
                (Kind::Social, false) => solve_social_interior(&g)?,
                (k, true) => {
                    let which = if matches!(k, Kind::Ne) { Mapping::Ne } else { Mapping::Social };
                    let opts = ViOptions { upper: file.upper(), ..ViOptions::default() };
                    solve_vi(&g, which, &ActionProfile::zeros(file.n), &opts)?
                }
            };
            let report = ir_check(&g, &eq, 1e-8)?;
            let code = if report.all_rational() { EXIT_OK } else { EXIT_IRRATIONAL };
            Ok((Output::Json(io::ir_json(&report)), code))
        }
    }
}

/// Run the command line with `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (output, code) = match execute(cli.command) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let bytes = match output {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
            s.push('\n');
            s.into_bytes()
        }
        Output::Text(b) => b,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    code
}
