//! Truncated Dirichlet series with certified power-law tails.

use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use crate::forms::EigenformTable;
use crate::numeric::{ln_abs, ComplexSum};
use crate::sums::PartialSumTable;
use crate::Complex;

use super::MellinError;

/// Every evaluation must sit at least this far right of the abscissa of
/// absolute convergence implied by the tail model.
pub const ABSCISSA_MARGIN: f64 = 1.0 / 6.0;

/// Factor applied to empirically measured growth constants.
pub const TAIL_INFLATION: f64 = 2.0;

/// What is known about the coefficients past the stored range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    /// Coefficients beyond the stored range are zero.
    FiniteSupport,
    /// `|c(n)| ≤ c·n^alpha` for every `n`.
    Power { c: f64, alpha: f64 },
}

/// `Σ_{n≤N} c(n)·n^{−(s + shift)}` with the coefficients kept as
/// `(log|c(n)|, sign)` so that no magnitude overflows.
#[derive(Clone, Debug)]
pub struct DirichletSeries {
    ln_mag: Vec<f64>,
    sign: Vec<i8>,
    ln_n: Vec<f64>,
    shift: f64,
    tail: TailModel,
}

/// Result of one evaluation.
#[derive(Clone, Copy, Debug)]
pub struct DirichletValue {
    pub value: Complex,
    pub(crate) sum: ComplexSum,
    /// Bound on `|Σ_{n>N} c(n)·n^{−(s+shift)}|` from the tail model.
    pub tail_bound: f64,
    /// `Σ_{n≤N} |c(n)|·n^{−(σ+shift)}`
    pub abs_sum: f64,
    pub terms: usize,
}

impl DirichletSeries {
    /// `coeffs[n]` is the `n`th coefficient; `coeffs[0]` is ignored.
    pub fn new(coeffs: &[BigInt], shift: f64, tail: TailModel) -> Self {
        let n = coeffs.len().saturating_sub(1);
        let mut ln_mag = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        let mut ln_n = Vec::with_capacity(n);
        for (i, c) in coeffs.iter().enumerate().skip(1) {
            ln_mag.push(ln_abs(c));
            sign.push(match c.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            });
            ln_n.push(libm::log(i as f64));
        }
        Self {
            ln_mag,
            sign,
            ln_n,
            shift,
            tail,
        }
    }

    /// `Σ |S(n)|²/n^{s+k−1}` with `|S(n)| ≤ 2c·n^{(k−1)/2+1/3}`, `c`
    /// measured over the whole table.
    pub fn squared_partial_sums(p: &PartialSumTable, n: usize) -> Result<Self, MellinError> {
        check_len(n, p.n_max())?;
        let k1 = f64::from(p.weight()) - 1.0;
        let c = TAIL_INFLATION * p.growth_constant(k1 / 2.0 + 1.0 / 3.0);
        let mut ln_mag = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        let mut ln_n = Vec::with_capacity(n);
        for m in 1..=n {
            let l = p.log_s2_norm(m);
            ln_n.push(p.ln_n(m));
            ln_mag.push(l + k1 * p.ln_n(m));
            sign.push(if l == f64::NEG_INFINITY { 0 } else { 1 });
        }
        Ok(Self {
            ln_mag,
            sign,
            ln_n,
            shift: k1,
            tail: TailModel::Power {
                c: c * c,
                alpha: k1 + 2.0 / 3.0,
            },
        })
    }

    /// `W(s) = Σ w(n)/n^{s+k−1}` with `|w(n)| ≤ 2c·n^{k−1+1/3}`, `c`
    /// measured over the whole table.
    pub fn w_series(t: &EigenformTable, p: &PartialSumTable, n: usize) -> Result<Self, MellinError> {
        let full = w_coefficients(t, p, t.n_max().min(p.n_max()))?;
        check_len(n, full.len() - 1)?;
        let k1 = f64::from(t.weight()) - 1.0;
        let alpha = k1 + 1.0 / 3.0;
        let c = (1..full.len())
            .map(|m| libm::exp(ln_abs(&full[m]) - alpha * libm::log(m as f64)))
            .fold(0.0, f64::max);
        Ok(Self::new(
            &full[..=n],
            k1,
            TailModel::Power {
                c: TAIL_INFLATION * c,
                alpha,
            },
        ))
    }

    pub fn len(&self) -> usize {
        self.ln_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_n.is_empty()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    /// Abscissa of absolute convergence in the `s` variable.
    pub fn abscissa(&self) -> f64 {
        match self.tail {
            TailModel::FiniteSupport => f64::NEG_INFINITY,
            TailModel::Power { alpha, .. } => alpha - self.shift + 1.0,
        }
    }

    pub(crate) fn check_abscissa(&self, re: f64) -> Result<(), MellinError> {
        let min = self.abscissa() + ABSCISSA_MARGIN;
        if re >= min {
            Ok(())
        } else {
            Err(MellinError::Abscissa { re, min })
        }
    }

    /// Bound on the tail `Σ_{n>N}` at real part `re`, by comparison with
    /// `c·∫_N^∞ x^{α−σ} dx`.
    pub fn tail_bound(&self, re: f64, n: usize) -> f64 {
        match self.tail {
            TailModel::FiniteSupport if n >= self.len() => 0.0,
            TailModel::FiniteSupport => self.ln_mag[n..]
                .iter()
                .zip(&self.ln_n[n..])
                .map(|(&m, &l)| libm::exp(m - (re + self.shift) * l))
                .sum(),
            TailModel::Power { c, alpha } => {
                let e = re + self.shift - alpha - 1.0;
                if e <= 0.0 {
                    return f64::INFINITY;
                }
                if n == 0 {
                    // n = 1 term plus the integral from 1.
                    return c * (1.0 + 1.0 / e);
                }
                c * libm::exp(-e * libm::log(n as f64)) / e
            }
        }
    }

    /// Plain sum at one point, no tail, no abscissa check.
    pub(crate) fn eval_point(&self, s: Complex) -> Complex {
        self.partial(s, self.len()).0.value()
    }

    fn partial(&self, s: Complex, n: usize) -> (ComplexSum, f64) {
        let mut acc = ComplexSum::new();
        let mut abs = 0.0;
        let re = s.re + self.shift;
        for i in 0..n {
            if self.sign[i] == 0 {
                continue;
            }
            let mag = libm::exp(self.ln_mag[i] - re * self.ln_n[i]);
            abs += mag;
            let (sin, cos) = libm::sincos(s.im * self.ln_n[i]);
            let m = mag * f64::from(self.sign[i]);
            acc.add(Complex::new(m * cos, -m * sin));
        }
        (acc, abs)
    }

    /// Precompute `c(n)·n^{−(σ+shift)}` for fast evaluation along `Re = σ`.
    pub(crate) fn vertical_line(&self, re: f64) -> VerticalLine {
        let amp = (0..self.len())
            .filter(|&i| self.sign[i] != 0)
            .map(|i| {
                (
                    f64::from(self.sign[i]) * libm::exp(self.ln_mag[i] - (re + self.shift) * self.ln_n[i]),
                    self.ln_n[i],
                )
            })
            .collect();
        VerticalLine { amp }
    }
}

pub(crate) struct VerticalLine {
    amp: Vec<(f64, f64)>,
}

impl VerticalLine {
    pub(crate) fn eval(&self, im: f64) -> Complex {
        let mut acc = ComplexSum::new();
        for &(a, l) in &self.amp {
            let (sin, cos) = libm::sincos(im * l);
            acc.add(Complex::new(a * cos, -a * sin));
        }
        acc.value()
    }
}

fn check_len(n: usize, available: usize) -> Result<(), MellinError> {
    if n == 0 || n > available {
        Err(MellinError::TableTooShort { needed: n, available })
    } else {
        Ok(())
    }
}

/// Sum the first `n` terms at `s` and bound the rest.
pub fn dirichlet_eval(series: &DirichletSeries, s: Complex, n: usize) -> Result<DirichletValue, MellinError> {
    if !crate::numeric::is_finite(s) {
        return Err(MellinError::NonFinite { re: s.re, im: s.im });
    }
    series.check_abscissa(s.re)?;
    let n = n.min(series.len());
    let (sum, abs_sum) = series.partial(s, n);
    Ok(DirichletValue {
        value: sum.value(),
        sum,
        tail_bound: series.tail_bound(s.re, n),
        abs_sum,
        terms: n,
    })
}

/// `w(n) = 2a(n)S(n) − a(n)²`, so that `S(n)² = Σ_{m≤n} w(m)`. Index 0 holds 0.
pub fn w_coefficients(t: &EigenformTable, p: &PartialSumTable, n: usize) -> Result<Vec<BigInt>, MellinError> {
    check_len(n, t.n_max().min(p.n_max()))?;
    let mut w = Vec::with_capacity(n + 1);
    w.push(BigInt::zero());
    for m in 1..=n {
        let a = t.coeff(m);
        w.push((p.sum(m) * 2u32 - a) * a);
    }
    Ok(w)
}
