use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nullsolve::acceptance;
use nullsolve::commands::{self, Avoid, Outcome, EXIT_ERROR, EXIT_OK};
use nullsolve_core::Engine;

/// Exact solvers for covering polynomials, Olson-type zero-sum problems,
/// divisible subgraphs and the associated End-of-the-Line graphs.
#[derive(Parser)]
#[command(name = "nullsolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Brute,
    Ppa,
}

impl From<EngineArg> for Engine {
    fn from(arg: EngineArg) -> Self {
        match arg {
            EngineArg::Brute => Engine::Brute,
            EngineArg::Ppa => Engine::Ppa,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AvoidArgs {
    /// Forbidden degrees are residues modulo P^D.
    #[arg(long = "mod", value_name = "P^D")]
    modulus: Option<String>,
    /// Forbidden degrees are natural numbers.
    #[arg(long)]
    natural: bool,
}

#[derive(Subcommand)]
enum Command {
    /// κ of a residue set, with a covering family of that degree.
    Kappa {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        /// Comma-separated residues.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Solve an Olson instance file.
    SolveOlson {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        engine: EngineArg,
        #[arg(long)]
        trace: bool,
    },
    /// Find a nonempty subgraph with every degree divisible by 2^d.
    DivisibleSubgraph {
        file: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value = "brute")]
        engine: EngineArg,
    },
    /// Find a nonempty subgraph whose degrees avoid forbidden values.
    FAvoiding {
        file: PathBuf,
        #[command(flatten)]
        avoid: AvoidArgs,
        /// Forbidden degrees of one vertex, as `v:a,b`. Repeatable.
        #[arg(long)]
        forbid: Vec<String>,
        #[arg(long, value_enum, default_value = "brute")]
        engine: EngineArg,
    },
    /// Follow the End-of-the-Line path of a general-form polynomial file.
    PpaRun {
        file: PathBuf,
        #[arg(long)]
        trace: bool,
        /// Overrides NULLSOLVE_STEP_CAP and the default cap.
        #[arg(long)]
        step_cap: Option<u64>,
    },
    /// Solve a polynomial file whose full monomial has coefficient 1.
    ExplicitCn { file: PathBuf },
    /// Exact Olson constant by exhaustive search.
    FOracle {
        #[arg(long)]
        p: u64,
        /// Comma-separated exponents.
        #[arg(long)]
        d: String,
        /// Target sets, `;` between rows and `,` inside a row.
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 12)]
        m_cap: usize,
    },
    /// Run the acceptance suite.
    Selftest,
}

fn with_file(path: &PathBuf, run: impl FnOnce(&str, &str) -> Outcome) -> Outcome {
    let name = path.display().to_string();
    match std::fs::read_to_string(path) {
        Ok(text) => run(&name, &text),
        Err(err) => Outcome { stdout: format!("ERROR {name}: {err}\n"), code: EXIT_ERROR },
    }
}

fn step_cap(flag: Option<u64>) -> Result<Option<u64>, Outcome> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("NULLSOLVE_STEP_CAP") {
        Ok(value) => value
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Outcome::usage(format!("NULLSOLVE_STEP_CAP `{value}` is not a number"))),
        Err(_) => Ok(None),
    }
}

fn selftest() -> Outcome {
    let mut stdout = String::new();
    let mut all = true;
    for criterion in acceptance::run_all() {
        all &= criterion.passed;
        stdout.push_str(&criterion.line());
        stdout.push('\n');
    }
    Outcome { stdout, code: if all { EXIT_OK } else { EXIT_ERROR } }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Kappa { p, d, set } => commands::kappa_cmd(p, d, &set),
        Command::SolveOlson { file, engine, trace } => {
            with_file(&file, |name, text| commands::solve_olson_cmd(name, text, engine.into(), trace))
        }
        Command::DivisibleSubgraph { file, d, engine } => {
            with_file(&file, |name, text| commands::divisible_subgraph_cmd(name, text, d, engine.into()))
        }
        Command::FAvoiding { file, avoid, forbid, engine } => {
            let avoid = match avoid.modulus {
                Some(spec) => match commands::parse_prime_power(&spec) {
                    Ok((p, d)) => Avoid::Mod { p, d },
                    Err(message) => return Outcome::usage(message),
                },
                None => Avoid::Natural,
            };
            with_file(&file, |name, text| commands::f_avoiding_cmd(name, text, avoid, &forbid, engine.into()))
        }
        Command::PpaRun { file, trace, step_cap: flag } => match step_cap(flag) {
            Ok(cap) => with_file(&file, |name, text| commands::ppa_run_cmd(name, text, trace, cap)),
            Err(outcome) => outcome,
        },
        Command::ExplicitCn { file } => with_file(&file, commands::explicit_cn_cmd),
        Command::FOracle { p, d, q, m_cap } => commands::f_oracle_cmd(p, &d, &q, m_cap),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse().command);
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.code as u8)
}
