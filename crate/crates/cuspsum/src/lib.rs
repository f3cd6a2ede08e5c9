//! Command-line front end for `cuspsum-core`: a coefficient cache, window
//! experiments written as CSV, and verification suites written as JSON.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or
//! configuration error, 3 I/O error.

pub mod cache;
pub mod config;
pub mod grid;
pub mod verify;
pub mod windows;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuspsum_core::{partial_sums, FormsError, SUPPORTED_WEIGHTS};

use crate::cache::{CacheStatus, ObtainError};
use crate::config::{ConfigError, Settings};
use crate::verify::Suite;
use crate::windows::{ExperimentConfig, WindowMode, WindowRule};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cuspsum", version, about = "Partial sums of cusp form coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a coefficient table and store it in the cache.
    Gen(GenArgs),
    /// Short-interval mean squares over a grid of centers, as CSV.
    Windows(WindowsArgs),
    /// Run a verification suite and print JSON reports.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat key = value file; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Weight of the eigenform (12, 16, 18, 20, 22, 26).
    #[arg(long)]
    pub weight: Option<u32>,
    /// Table size N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cache file (default: `$CUSPSUM_CACHE_DIR/k<weight>_n<N>.csp`).
    #[arg(long, value_name = "FILE")]
    pub cache: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct WindowsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma list of centers, or logspace:a,b,count for 10^a..10^b.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<WindowMode>,
    /// Exponent for fixed_delta mode, in (1/2, 2/3].
    #[arg(long)]
    pub delta: Option<f64>,
    /// H = X/y in fixed_y mode.
    #[arg(long)]
    pub y: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Io(String),
}

impl AppError {
    pub fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => EXIT_USAGE,
            AppError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Io(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> AppError {
    AppError::Usage(e.to_string())
}

fn io_error(path: &Path, e: io::Error) -> AppError {
    AppError::Io(format!("{}: {e}", path.display()))
}

impl From<ObtainError> for AppError {
    fn from(e: ObtainError) -> Self {
        match e {
            ObtainError::Forms(f) => usage(f),
            ObtainError::Io { .. } => AppError::Io(e.to_string()),
        }
    }
}

fn load_settings(common: &Common, flags: Settings) -> Result<Settings, AppError> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            Settings::from_ini_str(path, &text).map_err(|e: ConfigError| usage(e))?
        }
        None => Settings::default(),
    };
    let s = file.overlay(Settings {
        weight: common.weight,
        n: common.n,
        cache: common.cache.clone(),
        threads: common.threads,
        ..flags
    });
    if let Some(threads) = s.threads {
        if threads == 0 {
            return Err(usage("--threads must be positive"));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(s)
}

fn weight_of(s: &Settings) -> Result<u32, AppError> {
    let k = s.weight.unwrap_or(12);
    if !SUPPORTED_WEIGHTS.contains(&k) {
        return Err(usage(FormsError::UnsupportedWeight(k)));
    }
    Ok(k)
}

fn cache_path(s: &Settings, weight: u32, n: usize) -> PathBuf {
    s.cache.clone().unwrap_or_else(|| cache::default_path(weight, n))
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>, AppError> {
    Ok(match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            }
            Box::new(BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn out_error(out: &Option<PathBuf>, e: io::Error) -> AppError {
    io_error(out.as_deref().unwrap_or(Path::new("<stdout>")), e)
}

fn cmd_gen(args: GenArgs) -> Result<bool, AppError> {
    let s = load_settings(&args.common, Settings::default())?;
    let k = weight_of(&s)?;
    let n = s.n.unwrap_or(10_000);
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let path = cache_path(&s, k, n);
    let (_, status) = cache::obtain(&path, k, n)?;
    match status {
        CacheStatus::Hit => eprintln!("cache hit: {}", path.display()),
        CacheStatus::Generated => eprintln!("generated weight {k}, N = {n}: {}", path.display()),
    }
    Ok(true)
}

fn cmd_windows(args: WindowsArgs) -> Result<bool, AppError> {
    let flags = Settings {
        grid: args.grid.clone(),
        mode: args.mode,
        delta: args.delta,
        y: args.y,
        out: args.out.clone(),
        ..Settings::default()
    };
    let s = load_settings(&args.common, flags)?;
    let k = weight_of(&s)?;
    let grid = grid::parse_grid(s.grid.as_deref().unwrap_or("")).map_err(usage)?;
    let rule = WindowRule::resolve(s.mode.unwrap_or(WindowMode::Theorem), s.delta, s.y).map_err(usage)?;
    let needed = windows::required_n(&grid, &rule).map_err(usage)?;
    let n = s.n.unwrap_or(if grid.is_empty() { 0 } else { needed });
    let cfg = ExperimentConfig {
        weight: k,
        n,
        grid,
        rule,
    };
    let rows = if cfg.grid.is_empty() {
        vec![]
    } else {
        if n < needed {
            return Err(usage(format!("the grid needs N >= {needed}, got {n}")));
        }
        let (t, _) = cache::obtain(&cache_path(&s, k, n), k, n)?;
        windows::compute_rows(&partial_sums(&t), &cfg.grid, &cfg.rule).map_err(usage)?
    };
    let out = open_out(&s.out)?;
    windows::write_csv(out, &cfg, &rows).map_err(|e| out_error(&s.out, e))?;
    Ok(true)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, AppError> {
    let flags = Settings {
        tolerance: args.tolerance,
        out: args.out.clone(),
        ..Settings::default()
    };
    let s = load_settings(&args.common, flags)?;
    let suite = args.suite;
    let tol = s.tolerance.unwrap_or(suite.default_tolerance());
    if tol.is_nan() || tol < 0.0 {
        return Err(usage(format!("tolerance must be non-negative, got {tol}")));
    }
    let table = match suite.default_n() {
        Some(default_n) => {
            let k = weight_of(&s)?;
            let n = s.n.unwrap_or(default_n);
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            Some(cache::obtain(&cache_path(&s, k, n), k, n)?.0)
        }
        None => None,
    };
    let reports = match (suite, &table) {
        (Suite::Kernel, _) => verify::kernel_suite(tol).map_err(usage)?,
        (Suite::Transform, _) => verify::transform_suite(tol).map_err(usage)?,
        (Suite::Decomposition, Some(t)) => verify::decomposition_suite(t, tol).map_err(usage)?,
        (Suite::Hecke, Some(t)) => verify::hecke_suite(t),
        _ => unreachable!("table-backed suites always load a table"),
    };
    let mut out = open_out(&s.out)?;
    serde_json::to_writer_pretty(&mut out, &reports).map_err(|e| out_error(&s.out, e.into()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(|e| out_error(&s.out, e))?;
    let passed = reports.iter().filter(|r| r.pass).count();
    eprintln!("{suite:?}: {passed}/{} passed", reports.len());
    Ok(passed == reports.len())
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Windows(a) => cmd_windows(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::from(EXIT_PASS),
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
