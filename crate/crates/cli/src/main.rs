//! `lcyclic`: batch driver for counting ℓ-cyclic covers of P¹ over F_q.
//!
//! Exit codes: 0 success, 1 a check failed (or I/O error), 2 invalid input,
//! 3 budget exceeded.

mod commands;
mod report;
mod verify;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lcyclic::covers::{EnumConfig, OrbitCache, DEFAULT_BUDGET};
use lcyclic::{Error, FieldSpec};

use commands::{parse_conditions, Ctx};
use report::{emit, Format};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "lcyclic", version, about = "Count ell-cyclic covers of the projective line over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Characteristic of the constant field.
    #[arg(long)]
    p: u64,
    /// Degree of F_q over F_p.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Prime degree of the covers; must divide q - 1.
    #[arg(long, default_value_t = 2)]
    ell: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    shards: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run enumerations above the candidate budget.
    #[arg(long)]
    force_budget: bool,
    /// Directory of orbit cache files.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct Conds {
    /// Local condition PLACE:TYPE with TYPE one of ram, split, inert;
    /// PLACE is `inf` or a monic irreducible polynomial in X.
    #[arg(long = "cond", value_name = "PLACE:TYPE")]
    cond: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Fields and characters of conductor degree n, with optional conditions.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        conds: Conds,
        /// Series truncation (default n).
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Point-count distribution per genus against the i.i.d. model.
    Distribution {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        genus: Vec<u64>,
    },
    /// Euler-product coefficients against enumeration for n = 1..max-n.
    SeriesCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[command(flatten)]
        conds: Conds,
        #[arg(long)]
        truncation: Option<usize>,
        /// Write the counting series to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// The constant C_ell, local densities and main-term ratios.
    Constants {
        #[command(flatten)]
        common: Common,
        /// Place-degree cutoff of the Euler product.
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        /// First n of the main-term ratio range.
        #[arg(long)]
        n: Option<usize>,
        /// Last n of the main-term ratio range.
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        conds: Conds,
    },
    /// Run named check suites; exit 0 iff every check passes.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, required = true)]
        suite: Vec<verify::Suite>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0u64, 1, 2])]
        genus: Vec<u64>,
    },
    /// Kummer enumeration against the idèle-map count.
    OracleCrosscheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "max_n")]
        n: Option<usize>,
        /// Check every n from 1 (or --n) to this value.
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        conds: Conds,
    },
}

fn context(common: &Common) -> CliResult<Ctx> {
    let fs = FieldSpec::new(common.p, common.e, common.ell)?;
    let mut cfg = EnumConfig { budget: DEFAULT_BUDGET, force: common.force_budget, ..EnumConfig::default() };
    if let Some(s) = common.shards {
        if s == 0 {
            return Err(Error::InvalidArgument("--shards must be at least 1".into()).into());
        }
        cfg.shards = s;
    }
    Ok(Ctx { fs, cfg, cache: common.cache_dir.clone().map(OrbitCache::new) })
}

fn check_n(n: usize) -> CliResult<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()).into());
    }
    Ok(n)
}

/// Runs the command; `Ok(false)` when a check reported a failure.
fn run(cli: Cli) -> CliResult<bool> {
    let out = io::stdout().lock();
    match cli.command {
        Command::Count { common, n, conds, truncation } => {
            let ctx = context(&common)?;
            let conds = parse_conditions(&conds.cond, &ctx.fs)?;
            let r = commands::count(&ctx, check_n(n)?, &conds, truncation)?;
            emit("count", &ctx.fs, &r, common.format, out)?;
            Ok(true)
        }
        Command::Distribution { common, genus } => {
            let ctx = context(&common)?;
            let r = commands::distribution(&ctx, &genus)?;
            emit("distribution", &ctx.fs, &r, common.format, out)?;
            Ok(true)
        }
        Command::SeriesCheck { common, max_n, conds, truncation, dump } => {
            let ctx = context(&common)?;
            let conds = parse_conditions(&conds.cond, &ctx.fs)?;
            let r = commands::series_check(&ctx, check_n(max_n)?, &conds, truncation, dump.as_ref())?;
            emit("series-check", &ctx.fs, &r, common.format, out)?;
            Ok(r.passed())
        }
        Command::Constants { common, max_degree, n, max_n, conds } => {
            let ctx = context(&common)?;
            let conds = parse_conditions(&conds.cond, &ctx.fs)?;
            let range = match (n, max_n) {
                (None, None) => None,
                (Some(a), None) => Some((a, a)),
                (None, Some(b)) => Some((1, b)),
                (Some(a), Some(b)) => Some((a, b)),
            };
            let r = commands::constants(&ctx, max_degree, range, &conds)?;
            emit("constants", &ctx.fs, &r, common.format, out)?;
            Ok(true)
        }
        Command::Verify { common, suite, max_n, max_degree, genus } => {
            let ctx = context(&common)?;
            let params = verify::Params { max_n, max_degree, genera: genus };
            let r = verify::run(&ctx, &suite, &params)?;
            emit("verify", &ctx.fs, &r, common.format, out)?;
            Ok(r.passed())
        }
        Command::OracleCrosscheck { common, n, max_n, conds } => {
            let ctx = context(&common)?;
            let conds = parse_conditions(&conds.cond, &ctx.fs)?;
            let ns: Vec<usize> = match (n, max_n) {
                (Some(a), Some(b)) => (check_n(a)?..=b).collect(),
                (Some(a), None) => vec![check_n(a)?],
                (None, Some(b)) => (1..=b).collect(),
                (None, None) => unreachable!("clap requires --n or --max-n"),
            };
            let r = commands::oracle_crosscheck(&ctx, &ns, &conds)?;
            emit("oracle-crosscheck", &ctx.fs, &r, common.format, out)?;
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                _ if e.is_budget() => 3,
                Error::Cache(_) => 1,
                _ => 2,
            })
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
