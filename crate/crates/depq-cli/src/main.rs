//! Command-line front end: profile a dataset's dependencies, compare a
//! synthetic dataset against the real one, or generate baseline
//! synthetic data.
//!
//! Exit codes: 0 success, 1 runtime failure (I/O, parsing, schema
//! mismatch, empty input), 2 configuration error (bad flags or values).
//! Identical invocations on identical inputs write byte-identical
//! report files; pass `--fixed-timestamp` to pin the one embedded
//! timestamp for archival comparisons.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use depq::baselines::{generate, BaselineMethod, BaselineSpec};
use depq::compare::{ld_preservation, CompareConfig, CompareMode};
use depq::error::Error;
use depq::fd::discover_fds;
use depq::qscore::q_matrix;
use depq::ratio::{parse_decimal, Rat};
use depq::report::{render_profile, render_report, write_files, ReportFormat};
use depq::table::{ColumnKind, LoadOptions, Table};

#[derive(Parser)]
#[command(
    name = "depq",
    version,
    about = "Quantify functional and logical dependencies in tabular data",
    after_help = "Log level is read from the DEPQ_LOG environment variable (error, warn, info, debug)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score all column pairs and mine functional dependencies of one dataset
    Profile(ProfileArgs),
    /// Measure how well a synthetic dataset preserves a real dataset's dependencies
    Compare(CompareArgs),
    /// Generate deterministic baseline synthetic data from a real dataset
    Baseline(BaselineArgs),
}

#[derive(Args)]
struct CommonIo {
    /// Output directory for report files
    #[arg(long, default_value = "depq_out", value_name = "DIR")]
    out: PathBuf,

    /// Output families to write
    #[arg(long, value_delimiter = ',', default_values = ["json", "csv", "svg"], value_name = "FMT")]
    format: Vec<String>,

    /// CSV field delimiter
    #[arg(long, default_value = ",", value_name = "CHAR")]
    delimiter: String,
}

#[derive(Args)]
struct AnalysisOpts {
    /// Analyze only these columns (comma separated, repeatable)
    #[arg(long, value_delimiter = ',', value_name = "NAME")]
    columns: Vec<String>,

    /// Exclude these columns from the analysis
    #[arg(long, value_delimiter = ',', value_name = "NAME")]
    exclude: Vec<String>,

    /// Largest left-side size for dependency mining
    #[arg(long, default_value_t = 3, value_name = "N")]
    max_lhs: usize,

    /// Bin a continuous column into N categories, e.g. Age:5 (repeatable)
    #[arg(long, value_name = "COL:BINS")]
    discretize: Vec<String>,

    /// Distinct-value count above which a numeric column is continuous
    #[arg(long, default_value_t = 20, value_name = "N")]
    cardinality_threshold: usize,
}

#[derive(Args)]
struct ProfileArgs {
    /// Input CSV file
    input: PathBuf,

    #[command(flatten)]
    analysis: AnalysisOpts,

    #[command(flatten)]
    io: CommonIo,

    /// Use a fixed timestamp in report metadata
    #[arg(long)]
    fixed_timestamp: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Real dataset CSV
    real: PathBuf,

    /// Synthetic dataset CSV
    synthetic: PathBuf,

    /// Preservation criterion
    #[arg(long, value_enum, default_value_t = ModeArg::Exclusion)]
    mode: ModeArg,

    /// Score distance tolerated in qscore mode (decimal, e.g. 0.05)
    #[arg(long, default_value = "0.05", value_name = "F")]
    epsilon: String,

    #[command(flatten)]
    analysis: AnalysisOpts,

    #[command(flatten)]
    io: CommonIo,

    /// Use a fixed timestamp in report metadata
    #[arg(long)]
    fixed_timestamp: bool,
}

#[derive(Args)]
struct BaselineArgs {
    /// Real dataset CSV
    real: PathBuf,

    /// Baseline synthesizer
    #[arg(long, value_enum)]
    method: MethodArg,

    /// Generator seed
    #[arg(long, default_value_t = 0, value_name = "N")]
    seed: u64,

    /// Output row count (defaults to the real row count)
    #[arg(long, value_name = "N")]
    rows: Option<usize>,

    /// Fraction of rows receiving a cell swap (noisy-swap only)
    #[arg(long, default_value_t = 0.1, value_name = "F")]
    fraction: f64,

    #[command(flatten)]
    io: CommonIo,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exclusion,
    Qscore,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bootstrap,
    Independent,
    NoisySwap,
}

impl From<MethodArg> for BaselineMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bootstrap => BaselineMethod::BootstrapRows,
            MethodArg::Independent => BaselineMethod::IndependentColumns,
            MethodArg::NoisySwap => BaselineMethod::NoisySwap,
        }
    }
}

/// A configuration problem: reported and exited with status 2.
struct ConfigError(String);

enum RunError {
    Config(String),
    Runtime(Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        // Too few analyzable columns is a configuration problem, not a
        // runtime failure.
        match e {
            Error::TooFewColumns { .. } => RunError::Config(e.to_string()),
            other => RunError::Runtime(other),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DEPQ_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Profile(args) => run_profile(args),
        Command::Compare(args) => run_compare(args),
        Command::Baseline(args) => run_baseline(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

fn timestamp(fixed: bool) -> String {
    if fixed {
        FIXED_TIMESTAMP.to_string()
    } else {
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    }
}

fn load_options(io: &CommonIo) -> Result<LoadOptions, ConfigError> {
    let delim = io.delimiter.as_bytes();
    if delim.len() != 1 {
        return Err(ConfigError(format!(
            "--delimiter must be one byte, got '{}'",
            io.delimiter
        )));
    }
    Ok(LoadOptions { delimiter: delim[0], ..LoadOptions::default() })
}

fn parse_formats(io: &CommonIo) -> Result<Vec<ReportFormat>, ConfigError> {
    io.format
        .iter()
        .map(|f| {
            ReportFormat::parse(f)
                .ok_or_else(|| ConfigError(format!("unknown format '{f}' (use json, csv, svg)")))
        })
        .collect()
}

/// Parses `COL:BINS` discretization requests.
fn parse_discretize(specs: &[String]) -> Result<Vec<(String, usize)>, ConfigError> {
    specs
        .iter()
        .map(|s| {
            let (name, bins) = s.rsplit_once(':').ok_or_else(|| {
                ConfigError(format!("--discretize expects COL:BINS, got '{s}'"))
            })?;
            let bins: usize = bins
                .parse()
                .map_err(|_| ConfigError(format!("--discretize bin count '{bins}' is not a number")))?;
            if bins < 2 {
                return Err(ConfigError("--discretize needs at least 2 bins".into()));
            }
            Ok((name.to_string(), bins))
        })
        .collect()
}

/// Loads, types and optionally discretizes one dataset.
fn prepare_table(
    path: &PathBuf,
    analysis: &AnalysisOpts,
    options: &LoadOptions,
) -> Result<Table, RunError> {
    let table = Table::load_csv(path, options)?;
    let mut table = table.infer_kinds(analysis.cardinality_threshold, 0.99);
    for (name, bins) in parse_discretize(&analysis.discretize)? {
        let idx = table.column_index(&name).ok_or_else(|| {
            ConfigError(format!("--discretize names unknown column '{name}'"))
        })?;
        table = table.discretize(idx, bins)?;
    }
    Ok(table)
}

/// Resolves the analyzed categorical columns of a profiled table.
fn resolve_columns(table: &Table, analysis: &AnalysisOpts) -> Result<Vec<usize>, RunError> {
    let mut indices = Vec::new();
    if analysis.columns.is_empty() {
        indices = table.categorical_columns();
    } else {
        for name in &analysis.columns {
            let idx = table
                .column_index(name)
                .ok_or_else(|| ConfigError(format!("--columns names unknown column '{name}'")))?;
            if table.column(idx).kind() != ColumnKind::Categorical {
                return Err(ConfigError(format!(
                    "column '{name}' is continuous; bin it with --discretize {name}:BINS"
                ))
                .into());
            }
            indices.push(idx);
        }
    }
    for name in &analysis.exclude {
        let idx = table
            .column_index(name)
            .ok_or_else(|| ConfigError(format!("--exclude names unknown column '{name}'")))?;
        indices.retain(|&i| i != idx);
    }
    if indices.len() < 2 {
        return Err(Error::TooFewColumns { needed: 2, got: indices.len() }.into());
    }
    Ok(indices)
}

fn run_profile(args: ProfileArgs) -> Result<(), RunError> {
    let options = load_options(&args.io)?;
    let formats = parse_formats(&args.io)?;
    if args.analysis.max_lhs < 1 {
        return Err(ConfigError("--max-lhs must be at least 1".into()).into());
    }

    let table = prepare_table(&args.input, &args.analysis, &options)?;
    let columns = resolve_columns(&table, &args.analysis)?;
    let matrix = q_matrix(&table, &columns)?;
    let fds = discover_fds(&table, &columns, args.analysis.max_lhs)?;

    let files = render_profile(&matrix, &fds, &formats);
    let written = write_files(&args.io.out, &files)?;
    for path in &written {
        log::info!("wrote {}", path.display());
    }
    println!(
        "profile {}: {} columns, {} pairs, {} FDs (max_lhs={}) -> {}",
        table.name,
        columns.len(),
        matrix.entries.len(),
        fds.fds.len(),
        args.analysis.max_lhs,
        args.io.out.display()
    );
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<(), RunError> {
    let options = load_options(&args.io)?;
    let formats = parse_formats(&args.io)?;
    if args.analysis.max_lhs < 1 {
        return Err(ConfigError("--max-lhs must be at least 1".into()).into());
    }
    let epsilon: Rat = parse_decimal(&args.epsilon)
        .ok_or_else(|| ConfigError(format!("--epsilon '{}' is not a decimal", args.epsilon)))?;
    if epsilon > depq::ratio::rat(1, 1) {
        return Err(ConfigError("--epsilon must be within [0, 1]".into()).into());
    }

    let mut real = prepare_table(&args.real, &args.analysis, &options)?;
    let mut synth = prepare_table(&args.synthetic, &args.analysis, &options)?;

    // Column selection applies to both sides; unknown names are
    // configuration errors, kind mismatches surface as schema errors.
    if !args.analysis.columns.is_empty() || !args.analysis.exclude.is_empty() {
        let keep = |t: &Table| -> Vec<String> {
            let base: Vec<String> = if args.analysis.columns.is_empty() {
                t.columns().iter().map(|c| c.name.clone()).collect()
            } else {
                args.analysis.columns.clone()
            };
            base.into_iter().filter(|n| !args.analysis.exclude.contains(n)).collect()
        };
        for name in &args.analysis.columns {
            if real.column_index(name).is_none() || synth.column_index(name).is_none() {
                return Err(ConfigError(format!(
                    "--columns names column '{name}' missing from one input"
                ))
                .into());
            }
        }
        real = real.with_columns(&keep(&real)).map_err(Error::from)?;
        synth = synth.with_columns(&keep(&synth)).map_err(Error::from)?;
    }

    let config = CompareConfig {
        mode: match args.mode {
            ModeArg::Exclusion => CompareMode::Exclusion,
            ModeArg::Qscore => CompareMode::QEpsilon,
        },
        epsilon,
        max_lhs: args.analysis.max_lhs,
    };
    let report = ld_preservation(&real, &synth, &config)?;

    let files = render_report(&report, &formats, &timestamp(args.fixed_timestamp));
    let written = write_files(&args.io.out, &files)?;
    for path in &written {
        log::info!("wrote {}", path.display());
    }
    println!("{}", report.summary_line());
    Ok(())
}

fn run_baseline(args: BaselineArgs) -> Result<(), RunError> {
    let options = load_options(&args.io)?;
    if !(0.0..=1.0).contains(&args.fraction) {
        return Err(ConfigError(format!(
            "--fraction must be within [0, 1], got {}",
            args.fraction
        ))
        .into());
    }
    if args.rows == Some(0) {
        return Err(ConfigError("--rows must be at least 1".into()).into());
    }

    // Baselines sample raw cells, so the table is not re-typed: output
    // cells are byte-identical to input cells.
    let real = Table::load_csv(&args.real, &options)?;
    let spec = BaselineSpec {
        method: args.method.into(),
        seed: args.seed,
        n_rows: args.rows.unwrap_or_else(|| real.n_rows()),
        swap_fraction: args.fraction,
    };
    let synth = generate(&real, &spec)?;

    let file_name = format!("{}.csv", synth.name);
    let files = vec![(file_name, synth.to_csv_bytes()?)];
    let written = write_files(&args.io.out, &files)?;
    println!(
        "baseline {}: seed={} rows={} -> {}",
        spec.method.slug(),
        spec.seed,
        synth.n_rows(),
        written[0].display()
    );
    Ok(())
}
