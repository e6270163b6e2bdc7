//! `dgamma`: Euler's constant and the `e_m` coefficients from the command line.

/// `writeln!` into a `String` buffer.
macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        writeln!($out, $($arg)*).expect("writing to a String cannot fail");
    }};
}

mod commands;
mod format;
mod tables;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Largest number of series terms `gamma` will plan for unless raised.
pub const DEFAULT_MAX_TERMS: usize = 20_000;
/// Hard ceiling on working precision.
pub const MAX_FRAC_BITS: u32 = 1 << 20;
/// Largest level accepted on the command line.
pub const MAX_CLI_LEVEL: u32 = 20;

#[derive(Parser, Debug)]
#[command(
    name = "dgamma",
    version,
    about = "Euler's constant via dyadic-block series"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,

    /// Log progress to stderr.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute γ to a number of digits, or a partial sum of the series.
    Gamma(GammaArgs),
    /// Exact coefficients e_m.
    Em(RangeArgs),
    /// Exact coefficients c_m(s).
    Cm(CmArgs),
    /// Deviations δ_m = e_m - H_{m+1}/ln 2.
    Delta(DeltaArgs),
    /// Reproduce one of the reference tables (1, 2 or 3).
    Table(TableArgs),
    /// Show the level, term count and precision chosen for a digit target.
    Plan(PlanArgs),
    /// Run the verification checks; exit status 1 if any fails.
    Verify(VerifyArgs),
    /// Evaluate η(s) through the level-ℓ series.
    Eta(EtaArgs),
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["digits", "terms"])))]
pub struct GammaArgs {
    /// Number of decimal digits to produce.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: Option<u64>,
    /// Number of series terms for a partial sum.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Level ℓ; chosen automatically when omitted.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_CLI_LEVEL as i64))]
    pub level: Option<u32>,
    /// Digits printed for a partial sum.
    #[arg(long, default_value_t = 30, requires = "terms")]
    pub digits_shown: usize,
    /// Cost exponent for automatic level selection.
    #[arg(long, default_value_t = dyadic_gamma::series::DEFAULT_COST_EXPONENT)]
    pub cost: f64,
    /// Refuse plans needing more terms than this.
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
}

#[derive(Args, Debug)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 0)]
    pub from: usize,
    #[arg(long, default_value_t = 20)]
    pub to: usize,
}

#[derive(Args, Debug)]
pub struct CmArgs {
    #[arg(long, default_value_t = 1)]
    pub s: i64,
    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value_t = 12)]
    pub digits_shown: usize,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub digits: u64,
    #[arg(long, default_value_t = dyadic_gamma::series::DEFAULT_COST_EXPONENT)]
    pub cost: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_CLI_LEVEL as i64))]
    pub level: Option<u32>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Check the two-sided bounds on e_m for m = 0..=M.
    #[arg(long, value_name = "M")]
    pub bounds: Option<usize>,
    /// Compare the derivative oracle with e_m for m = 1..=M.
    #[arg(long, value_name = "M")]
    pub oracle: Option<usize>,
    /// Compare γ to D digits across levels 2..=7.
    #[arg(long, value_name = "D")]
    pub cross_level: Option<usize>,
    /// Check η(1) = ln 2 at levels 2, 3, 4.
    #[arg(long)]
    pub eta: bool,
}

#[derive(Args, Debug)]
pub struct EtaArgs {
    #[arg(long, default_value_t = 1)]
    pub s: i64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=MAX_CLI_LEVEL as i64))]
    pub level: u32,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, default_value_t = 20)]
    pub digits_shown: usize,
}

/// Why a command did not succeed, mapped onto the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments (exit 2).
    Usage(String),
    /// Request exceeds a resource cap (exit 3).
    Resource(String),
    /// A verification check failed (exit 1); carries the report.
    Check(String),
}

impl From<dyadic_gamma::Error> for Failure {
    fn from(e: dyadic_gamma::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Output of a successful command, written to stdout in one piece.
pub type CmdResult = Result<String, Failure>;

/// Writes `text` to stdout; a closed pipe is not an error.
fn emit(text: &str) -> bool {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Ok(()) => true,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => true,
        Err(e) => {
            eprintln!("error: writing output: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    let fmt = cli.format;
    let result = match cli.command {
        Command::Gamma(a) => commands::gamma(&a, fmt),
        Command::Em(a) => commands::em(&a, fmt),
        Command::Cm(a) => commands::cm(&a, fmt),
        Command::Delta(a) => commands::delta(&a, fmt),
        Command::Table(a) => tables::table(a.which, fmt),
        Command::Plan(a) => commands::plan(&a, fmt),
        Command::Verify(a) => commands::verify(&a, fmt),
        Command::Eta(a) => commands::eta(&a, fmt),
    };
    match result {
        Ok(text) => {
            if emit(&text) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Check(text)) => {
            emit(&text);
            ExitCode::from(1)
        }
    }
}
