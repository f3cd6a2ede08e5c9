//! Window experiments and their CSV form.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;

use clap::ValueEnum;
use cuspsum_core::{
    smoothed_second_moment, theorem_window, window_mean, window_vs_smoothed, PartialSumTable, SumsError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::fnv1a;

pub const CSV_COLUMNS: [&str; 8] = [
    "X",
    "H",
    "y",
    "count",
    "raw_mean_sq",
    "normalized",
    "smoothed",
    "pass_flag",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WindowMode {
    /// `H = X^{2/3}(log X)^{1/6}`
    Theorem,
    /// `H = X^δ` with `δ ∈ (1/2, 2/3]`
    #[value(name = "fixed_delta", alias = "fixed-delta")]
    FixedDelta,
    /// `H = X/y`
    #[value(name = "fixed_y", alias = "fixed-y")]
    FixedY,
}

impl FromStr for WindowMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s.trim(), true)
    }
}

/// A fully resolved window rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowRule {
    Theorem,
    FixedDelta(f64),
    FixedY(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum RuleError {
    #[error("--delta is required in fixed_delta mode")]
    MissingDelta,
    #[error("--y is required in fixed_y mode")]
    MissingY,
    #[error("delta must lie in (1/2, 2/3], got {0}")]
    DeltaRange(f64),
    #[error("y must be at least 2, got {0}")]
    YRange(f64),
}

impl WindowRule {
    pub fn resolve(mode: WindowMode, delta: Option<f64>, y: Option<f64>) -> Result<Self, RuleError> {
        match mode {
            WindowMode::Theorem => Ok(Self::Theorem),
            WindowMode::FixedDelta => {
                let d = delta.ok_or(RuleError::MissingDelta)?;
                if !(d > 0.5 && d <= 2.0 / 3.0) {
                    return Err(RuleError::DeltaRange(d));
                }
                Ok(Self::FixedDelta(d))
            }
            WindowMode::FixedY => {
                let y = y.ok_or(RuleError::MissingY)?;
                if !(y >= 2.0 && y.is_finite()) {
                    return Err(RuleError::YRange(y));
                }
                Ok(Self::FixedY(y))
            }
        }
    }

    pub fn half_width(&self, x: f64) -> Result<f64, SumsError> {
        match *self {
            Self::Theorem => theorem_window(x),
            Self::FixedDelta(d) => Ok(x.powf(d)),
            Self::FixedY(y) => Ok(x / y),
        }
    }

    fn canonical(&self) -> String {
        match self {
            Self::Theorem => "theorem".into(),
            Self::FixedDelta(d) => format!("fixed_delta:{d:?}"),
            Self::FixedY(y) => format!("fixed_y:{y:?}"),
        }
    }
}

/// Everything that determines a window CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub weight: u32,
    pub n: usize,
    pub grid: Vec<f64>,
    pub rule: WindowRule,
}

impl ExperimentConfig {
    /// FNV-1a of a canonical rendering; floats use their shortest
    /// round-trip form.
    pub fn hash(&self) -> u64 {
        let mut s = format!(
            "weight={};n={};rule={};grid=",
            self.weight,
            self.n,
            self.rule.canonical()
        );
        for x in &self.grid {
            write!(s, "{x:?},").unwrap();
        }
        fnv1a(s.as_bytes())
    }

    pub fn comment_line(&self) -> String {
        format!(
            "# cuspsum {} weight={} N={} config={:016x}",
            env!("CARGO_PKG_VERSION"),
            self.weight,
            self.n,
            self.hash()
        )
    }
}

/// Smallest table covering every window `|n − X| < H` on the grid.
pub fn required_n(grid: &[f64], rule: &WindowRule) -> Result<usize, SumsError> {
    let mut need = 1usize;
    for &x in grid {
        let h = rule.half_width(x)?;
        need = need.max((x + h).ceil() as usize);
    }
    Ok(need)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub y: f64,
    pub count: usize,
    pub raw_mean_sq: f64,
    pub normalized: f64,
    pub smoothed: f64,
    pub pass_flag: bool,
}

/// `y = X/H` ties the smoothed moment and the inequality to the same window.
pub fn window_row(p: &PartialSumTable, x: f64, rule: &WindowRule) -> Result<WindowRow, SumsError> {
    let h = rule.half_width(x)?;
    let y = x / h;
    let stat = window_mean(p, x, h)?;
    let smoothed = smoothed_second_moment(p, x, y)?;
    let ineq = window_vs_smoothed(p, x, y)?;
    Ok(WindowRow {
        x,
        h,
        y,
        count: stat.count,
        raw_mean_sq: stat.raw_mean_sq,
        normalized: stat.normalized,
        smoothed: smoothed.value,
        pass_flag: ineq.pass,
    })
}

/// Rows in grid order; points run in parallel.
pub fn compute_rows(p: &PartialSumTable, grid: &[f64], rule: &WindowRule) -> Result<Vec<WindowRow>, SumsError> {
    grid.par_iter().map(|&x| window_row(p, x, rule)).collect()
}

pub fn write_csv<W: Write>(mut w: W, cfg: &ExperimentConfig, rows: &[WindowRow]) -> io::Result<()> {
    writeln!(w, "{}", cfg.comment_line())?;
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    csv.write_record(CSV_COLUMNS)?;
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()
}
