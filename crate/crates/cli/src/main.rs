mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::process::ExitCode;

use encouple::ncoupled::Parity;
use encouple::stabiliser::CodeFamily;
use encouple::Tolerances;
use report::Format;

#[derive(Parser)]
#[command(name = "encouple", version, about = "Encoupled states, their entanglement, and the codes built on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Copy)]
pub struct Common {
    /// Comparison tolerance used by pass/fail checks.
    #[arg(long, global = true, env = "NCOUPLED_TOL", default_value_t = encouple::tolerance::DEFAULT_CMP)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Ncoupled,
    Chi,
    Ghz,
    W,
}

#[derive(Args, Clone, Copy)]
pub struct StateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "even", value_parser = parse_parity)]
    pub parity: Parity,
    #[arg(long = "state", value_enum, default_value_t = StateKind::Ncoupled)]
    pub kind: StateKind,
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    s.parse().map_err(|e: encouple::Error| e.to_string())
}

fn parse_code(s: &str) -> Result<CodeFamily, String> {
    s.parse().map_err(|e: encouple::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    /// Shared dictionary over the n-coupled basis (n = 3).
    Shared,
    /// Shared dictionary over the χ basis (n = 4, 6).
    Chi,
    /// Dictionary-free protocol.
    #[value(alias = "df")]
    DictionaryFree,
    /// Bell-pair dense coding, for transfer accounting only.
    Traditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Computational,
    Hadamard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ErrorLetters {
    X,
    Y,
    Z,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the amplitudes of a state.
    State(StateArgs),
    /// Generate the n-coupled basis and its Gram matrix.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Schmidt decomposition across the cut after the first `m` qubits.
    Schmidt {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        m: usize,
    },
    /// Entanglement entropy of every cut, or of the cut at `m`.
    Entropy {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Whether every qubit pair can be projected into a Bell state.
    Connectedness(StateArgs),
    /// Fewest local measurements that always leave a product state.
    Persistency {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::Computational)]
        basis: BasisArg,
    },
    /// Q-information after tracing out the first qubit.
    Qinfo(StateArgs),
    /// Ising couplings of a state's measurement statistics, or a model round trip.
    Ising {
        #[command(flatten)]
        state: StateArgs,
        /// 1-based variables, comma separated; every subset when absent.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<usize>,
        /// Probability floor.
        #[arg(long, default_value_t = encouple::ising::DEFAULT_EPS)]
        eps: f64,
        /// Round-trip the suppressed model with this top coupling instead.
        #[arg(long, allow_hyphen_values = true)]
        roundtrip: Option<f64>,
    },
    /// Hyperdeterminant witnesses and exact values.
    Hyperdet {
        #[command(flatten)]
        state: StateArgs,
        /// Run the randomized witness search with this many restarts.
        #[arg(long)]
        search: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a dense-coding protocol.
    Densecode {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        message: Option<String>,
        /// Run every message.
        #[arg(long)]
        sweep: bool,
        /// What an interceptor of the sender's qubits holds.
        #[arg(long)]
        eve: bool,
        /// Qubit transfers needed for this many payload bits.
        #[arg(long)]
        accounting: Option<usize>,
    },
    /// Stabiliser generators, syndrome table and error classes of a code.
    Stabcode {
        #[arg(long, value_parser = parse_code)]
        code: CodeFamily,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ErrorLetters::All)]
        errors: ErrorLetters,
    },
    /// Run the full reproduction suite.
    VerifyAll,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances::with_cmp(cli.common.tol);
    let outcome = match cli.command {
        Command::VerifyAll => commands::verify_all(cli.common.format, &tol),
        cmd => run(cmd, &cli.common).map(|r| {
            let text = r.render(cli.common.format, &tol);
            (text, r.passed())
        }),
    };
    match outcome {
        Ok((text, passed)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, common: &Common) -> encouple::Result<report::Report> {
    use commands as c;
    match cmd {
        Command::State(s) => c::state(&s),
        Command::Basis { n } => c::basis(n, common.tol),
        Command::Schmidt { state, m } => c::schmidt(&state, m, common.tol),
        Command::Entropy { state, m } => c::entropy(&state, m),
        Command::Connectedness(s) => c::connectedness(&s, common.tol),
        Command::Persistency { state, basis } => c::persistency(&state, basis),
        Command::Qinfo(s) => c::qinfo(&s),
        Command::Ising { state, vars, eps, roundtrip } => c::ising(&state, &vars, eps, roundtrip, common.tol),
        Command::Hyperdet { state, search, seed } => c::hyperdet(&state, search, seed, common.tol),
        Command::Densecode { protocol, n, message, sweep, eve, accounting } => {
            c::densecode(protocol, n, message.as_deref(), sweep, eve, accounting, common.tol)
        }
        Command::Stabcode { code, n, errors } => c::stabcode(code, n, errors, common.tol),
        Command::VerifyAll => unreachable!("handled by the caller"),
    }
}
