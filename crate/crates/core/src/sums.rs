//! Exact partial sums `S_f(n) = Σ_{m≤n} a(m)` and the mean-square statistics
//! built on them.
//!
//! Numerators are summed as big integers and turned into `f64` once, through
//! their logarithm, so nothing overflows even at weight 26 and `n ≈ 10⁶`.
//! Windows use the strict condition `|n − X| < H` with real `X`, `H`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::forms::EigenformTable;
use crate::numeric::{ln_abs, CompensatedSum};

/// Default kernel truncation: terms with `y² log²(X/n) > 4π·T_cut` are dropped.
pub const DEFAULT_T_CUT: f64 = 60.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SumsError {
    #[error("X must be at least {min}, got {x}")]
    CenterTooSmall { x: f64, min: f64 },
    #[error("window [{lo}, {hi}] around X = {x} leaves the table range 1..={n_max}")]
    WindowOutOfRange { x: f64, lo: f64, hi: f64, n_max: usize },
    #[error("parameter {name} = {value} is invalid")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("need at least 3 grid points, got {0}")]
    TooFewPoints(usize),
}

/// Exact prefix sums `S[0..=N]` (`S[0] = 0`) with log companions
/// `log(|S[n]|² / n^{k−1})`, `-inf` where `S[n] = 0`.
#[derive(Clone, Debug)]
pub struct PartialSumTable {
    weight: u32,
    s: Vec<BigInt>,
    log_s2_norm: Vec<f64>,
    ln_n: Vec<f64>,
}

impl PartialSumTable {
    /// Build from `S(1), …, S(N)` directly (synthetic inputs, cached data).
    pub fn from_sums(weight: u32, sums: Vec<BigInt>) -> Self {
        let mut s = Vec::with_capacity(sums.len() + 1);
        s.push(BigInt::zero());
        s.extend(sums);
        Self::with_prefix(weight, s)
    }

    fn with_prefix(weight: u32, s: Vec<BigInt>) -> Self {
        let ln_n: Vec<f64> = (0..s.len())
            .map(|n| if n == 0 { f64::NEG_INFINITY } else { libm::log(n as f64) })
            .collect();
        let k1 = f64::from(weight) - 1.0;
        let log_s2_norm = s
            .iter()
            .zip(&ln_n)
            .enumerate()
            .map(|(n, (v, &ln))| {
                if n == 0 || v.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    2.0 * ln_abs(v) - k1 * ln
                }
            })
            .collect();
        Self {
            weight,
            s,
            log_s2_norm,
            ln_n,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn n_max(&self) -> usize {
        self.s.len() - 1
    }

    /// `S(n)`, with `S(0) = 0`.
    pub fn sum(&self, n: usize) -> &BigInt {
        &self.s[n]
    }

    pub fn sums(&self) -> &[BigInt] {
        &self.s
    }

    /// `log(|S(n)|² / n^{k−1})`.
    pub fn log_s2_norm(&self, n: usize) -> f64 {
        self.log_s2_norm[n]
    }

    pub(crate) fn ln_n(&self, n: usize) -> f64 {
        self.ln_n[n]
    }

    /// Largest `c` with `|S(n)| ≤ c·n^{exponent}` over the table.
    pub fn growth_constant(&self, exponent: f64) -> f64 {
        (1..=self.n_max())
            .map(|n| {
                libm::exp(0.5 * self.log_s2_norm[n] + (0.5 * (f64::from(self.weight) - 1.0) - exponent) * self.ln_n[n])
            })
            .fold(0.0, f64::max)
    }
}

/// Exact prefix sums of an eigenform table.
pub fn partial_sums(t: &EigenformTable) -> PartialSumTable {
    let mut s = Vec::with_capacity(t.n_max() + 1);
    let mut acc = BigInt::zero();
    for a in t.q_expansion() {
        acc += a;
        s.push(acc.clone());
    }
    PartialSumTable::with_prefix(t.weight(), s)
}

fn normalization_exponent(weight: u32) -> f64 {
    f64::from(weight) - 0.5
}

/// `(1/X)·Σ_{n≤X}|S(n)|² / X^{k−1/2}`: the empirical long-interval constant.
pub fn long_interval_mean(p: &PartialSumTable, x: f64) -> Result<f64, SumsError> {
    if !(x >= 1.0) {
        return Err(SumsError::CenterTooSmall { x, min: 1.0 });
    }
    let top = libm::floor(x) as usize;
    if top > p.n_max() {
        return Err(SumsError::WindowOutOfRange {
            x,
            lo: 1.0,
            hi: x,
            n_max: p.n_max(),
        });
    }
    let mut num = BigInt::zero();
    for v in &p.s[1..=top] {
        num += v * v;
    }
    let ln_x = libm::log(x);
    Ok(libm::exp(ln_abs(&num) - ln_x - normalization_exponent(p.weight) * ln_x))
}

/// `X^{2/3}(log X)^{1/6}`.
pub fn theorem_window(x: f64) -> Result<f64, SumsError> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(SumsError::CenterTooSmall { x, min: 1.0 });
    }
    Ok(libm::pow(x, 2.0 / 3.0) * libm::pow(libm::log(x), 1.0 / 6.0))
}

/// One short-interval record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowStat {
    pub x: f64,
    pub h: f64,
    pub count: usize,
    /// `(1/H)·Σ_{|n−X|<H}|S(n)|²`
    pub raw_mean_sq: f64,
    /// `raw_mean_sq / X^{k−1/2}`
    pub normalized: f64,
}

/// Integers `n` with `|n − x| < h`, checked to lie in `1..=n_max`.
fn window_indices(x: f64, h: f64, n_max: usize) -> Result<(usize, usize), SumsError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(SumsError::InvalidParameter { name: "H", value: h });
    }
    if !x.is_finite() {
        return Err(SumsError::InvalidParameter { name: "X", value: x });
    }
    let (lo_edge, hi_edge) = (x - h, x + h);
    if lo_edge < 0.0 || hi_edge > n_max as f64 + 1.0 {
        return Err(SumsError::WindowOutOfRange {
            x,
            lo: lo_edge,
            hi: hi_edge,
            n_max,
        });
    }
    let lo = libm::floor(lo_edge) as usize + 1;
    let hi = (libm::ceil(hi_edge) as usize).saturating_sub(1);
    Ok((lo, hi.min(n_max)))
}

pub fn window_mean(p: &PartialSumTable, x: f64, h: f64) -> Result<WindowStat, SumsError> {
    let (lo, hi) = window_indices(x, h, p.n_max())?;
    let mut num = BigInt::zero();
    for v in p.s.get(lo..=hi).unwrap_or(&[]) {
        num += v * v;
    }
    let count = (hi + 1).saturating_sub(lo);
    let ln_h = libm::log(h);
    let raw = libm::exp(ln_abs(&num) - ln_h);
    let normalized = libm::exp(ln_abs(&num) - ln_h - normalization_exponent(p.weight) * libm::log(x));
    Ok(WindowStat {
        x,
        h,
        count,
        raw_mean_sq: raw,
        normalized,
    })
}

/// Gaussian-smoothed second moment
/// `(1/2π)·Σ |S(n)|²/n^{k−1}·exp(−y² log²(X/n)/4π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothedMoment {
    pub value: f64,
    pub terms: usize,
    /// The kernel still exceeded `e^{−T_cut}` at the end of the table.
    pub table_limited: bool,
}

pub fn smoothed_second_moment(p: &PartialSumTable, x: f64, y: f64) -> Result<SmoothedMoment, SumsError> {
    smoothed_second_moment_with_cut(p, x, y, DEFAULT_T_CUT)
}

pub fn smoothed_second_moment_with_cut(
    p: &PartialSumTable,
    x: f64,
    y: f64,
    t_cut: f64,
) -> Result<SmoothedMoment, SumsError> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(SumsError::CenterTooSmall { x, min: 1.0 });
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(SumsError::InvalidParameter { name: "y", value: y });
    }
    if !(t_cut > 0.0) {
        return Err(SumsError::InvalidParameter {
            name: "T_cut",
            value: t_cut,
        });
    }
    let ln_x = libm::log(x);
    let reach = libm::sqrt(4.0 * PI * t_cut) / y;
    let lo = libm::ceil(libm::exp(ln_x - reach)).max(1.0);
    let hi_real = libm::floor(libm::exp(ln_x + reach));
    let table_limited = hi_real > p.n_max() as f64;
    let hi = hi_real.min(p.n_max() as f64);
    let cutoff = 4.0 * PI * t_cut;
    let scale = y * y / (4.0 * PI);
    let mut acc = CompensatedSum::new();
    let mut terms = 0usize;
    if lo <= hi {
        for n in lo as usize..=hi as usize {
            let d = ln_x - p.ln_n[n];
            if y * y * d * d > cutoff {
                continue;
            }
            terms += 1;
            acc.add(libm::exp(p.log_s2_norm[n] - scale * d * d));
        }
    }
    Ok(SmoothedMoment {
        value: acc.value() / (2.0 * PI),
        terms,
        table_limited,
    })
}

/// Both sides of `Σ_{|n−X|<X/y} |S(n)|²/n^{k−1} ≤ 2π·e^{1/π}·smoothed(X, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityReport {
    pub x: f64,
    pub y: f64,
    pub window_count: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub smoothed: SmoothedMoment,
    pub pass: bool,
}

/// On the window `|n − X| < X/y` with `y ≥ 2`, `|log(X/n)| < 2/y`, so the
/// kernel exceeds `e^{−1/π}` there and the inequality holds term by term.
pub fn window_vs_smoothed(p: &PartialSumTable, x: f64, y: f64) -> Result<InequalityReport, SumsError> {
    if !(y >= 2.0) || !y.is_finite() {
        return Err(SumsError::InvalidParameter { name: "y", value: y });
    }
    let (lo, hi) = window_indices(x, x / y, p.n_max())?;
    let smoothed = smoothed_second_moment(p, x, y)?;
    let lhs: CompensatedSum = (lo..=hi).map(|n| libm::exp(p.log_s2_norm[n])).collect();
    let lhs = lhs.value();
    let rhs = 2.0 * PI * libm::exp(1.0 / PI) * smoothed.value;
    Ok(InequalityReport {
        x,
        y,
        window_count: (hi + 1).saturating_sub(lo),
        lhs,
        rhs,
        smoothed,
        pass: lhs <= rhs,
    })
}

/// Which window statistic [`exponent_fit`] regresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitTarget {
    Raw,
    Normalized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of `log(window statistic)` against `log X` with
/// `H = X^δ`.
pub fn exponent_fit(p: &PartialSumTable, grid: &[f64], delta: f64, target: FitTarget) -> Result<FitResult, SumsError> {
    if grid.len() < 3 {
        return Err(SumsError::TooFewPoints(grid.len()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SumsError::InvalidParameter {
            name: "delta",
            value: delta,
        });
    }
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let stat = window_mean(p, x, libm::pow(x, delta))?;
        let v = match target {
            FitTarget::Raw => stat.raw_mean_sq,
            FitTarget::Normalized => stat.normalized,
        };
        points.push((libm::log(x), libm::log(v)));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(SumsError::InvalidParameter {
            name: "X grid spread",
            value: 0.0,
        });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    Ok(FitResult {
        slope,
        intercept,
        residual: libm::sqrt(ss / m),
        points,
    })
}
