//! Numerical check of
//!
//! ```text
//! D(s) = W(s) + W(s−1)/(s+k−2)
//!      + (1/2πi) ∫_(σ_z) W(s−z) ζ(z) Γ(z) Γ(s+k−1−z)/Γ(s+k−1) dz
//! ```
//!
//! with `D(s) = Σ S(n)²/n^{s+k−1}` and `W(s) = Σ w(n)/n^{s+k−1}`. Both sides
//! are truncated at the same `N`. Since `S(N)² = Σ_{m≤N} w(m)`, the
//! truncated right side exceeds the truncated left side by exactly
//! `S(N)²·Σ_{n>N} n^{−(s+k−1)}`, which is what the gap should show.

use core::f64::consts::PI;

use crate::forms::EigenformTable;
use crate::numeric::ComplexSum;
use crate::special::{log_gamma, log_gamma_ratio, zeta};
use crate::sums::PartialSumTable;
use crate::Complex;

use super::dirichlet::{dirichlet_eval, DirichletSeries};
use super::quadrature::{Affine, Factor, IntegrandDescriptor, LineIntegralSpec};
use super::MellinError;

/// Smallest admissible `Re s`.
pub const MIN_RE_S: f64 = 3.0;
/// Minimum distance of `σ_z` from the poles at 0 and 1.
pub const POLE_CLEARANCE: f64 = 0.05;

const ROUNDING_FACTOR: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionConfig {
    pub sigma_z: f64,
    pub h: f64,
    /// Truncation height; `None` picks it from the integrand envelope.
    pub t_max: Option<f64>,
    pub tolerance: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self {
            sigma_z: 0.5,
            h: 0.05,
            t_max: None,
            tolerance: 1e-6,
        }
    }
}

/// Absolute error contributions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorBudget {
    pub lhs_tail: f64,
    pub w_tail: f64,
    pub shifted_tail: f64,
    /// `W` tail on the contour times `(1/2π)∫|ζΓΓ/Γ|`.
    pub integral_tail: f64,
    /// `|I(h) − I(2h)|`
    pub quadrature: f64,
    /// Integrand beyond `|t| > T`, assuming `e^{−π|t|/2}` decay.
    pub truncation: f64,
    pub rounding: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.lhs_tail
            + self.w_tail
            + self.shifted_tail
            + self.integral_tail
            + self.quadrature
            + self.truncation
            + self.rounding
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionReport {
    pub s: Complex,
    pub weight: u32,
    pub n: usize,
    pub sigma_z: f64,
    pub t_max: f64,
    pub h: f64,
    pub nodes: usize,
    pub lhs: Complex,
    pub rhs: Complex,
    pub w_term: Complex,
    pub shifted_term: Complex,
    pub integral_term: Complex,
    /// `rhs − lhs`, formed from the compensated sums.
    pub difference: Complex,
    /// `|rhs − lhs|`
    pub gap: f64,
    /// `gap / |lhs|`
    pub rel_gap: f64,
    /// `budget.total() / |lhs|`
    pub certified_error: f64,
    pub budget: ErrorBudget,
    pub tolerance: f64,
    /// Gap and certified error both within tolerance, and the gap within the
    /// certified error.
    pub pass: bool,
}

fn kernel_descriptor<'a>(s: Complex, k1: f64) -> IntegrandDescriptor<'a> {
    IntegrandDescriptor::new(s)
        .with(Factor::Zeta(Affine::Z))
        .with(Factor::Gamma {
            arg: Affine::Z,
            power: 1,
        })
        .with(Factor::GammaRatio {
            num: Affine::new(1.0, -1.0, Complex::new(k1, 0.0)),
            den: Affine::new(1.0, 0.0, Complex::new(k1, 0.0)),
        })
}

/// Smallest `T` (in steps of 5, at least 10) where the estimated integral
/// beyond `T` drops below `target`.
fn pick_height(s: Complex, k1: f64, sigma_z: f64, w_abs: f64, target: f64) -> Result<f64, MellinError> {
    let u = s + k1;
    let mut t = 10.0;
    loop {
        let mut worst: f64 = 0.0;
        for sign in [1.0, -1.0] {
            let z = Complex::new(sigma_z, sign * t);
            let lg = log_gamma(z)? + log_gamma_ratio(u, -z)?;
            worst = worst.max(zeta(z)?.norm() * libm::exp(lg.re));
        }
        let tail = 2.0 * w_abs * worst / (2.0 * PI) * (2.0 / PI);
        if tail <= target || t >= 400.0 {
            return Ok(t);
        }
        t += 5.0;
    }
}

pub fn decomposition_check(
    t: &EigenformTable,
    p: &PartialSumTable,
    s: Complex,
    n: usize,
    cfg: &DecompositionConfig,
) -> Result<DecompositionReport, MellinError> {
    if !crate::numeric::is_finite(s) {
        return Err(MellinError::NonFinite { re: s.re, im: s.im });
    }
    if s.re < MIN_RE_S {
        return Err(MellinError::Abscissa {
            re: s.re,
            min: MIN_RE_S,
        });
    }
    let sz = cfg.sigma_z;
    if !(sz > 0.0 && sz < 1.0) || sz < POLE_CLEARANCE || 1.0 - sz < POLE_CLEARANCE {
        return Err(MellinError::ContourNearPole { sigma_z: sz });
    }
    if !(cfg.tolerance > 0.0) {
        return Err(MellinError::InvalidParameter {
            name: "tolerance",
            value: cfg.tolerance,
        });
    }

    let k1 = f64::from(t.weight()) - 1.0;
    let d_series = DirichletSeries::squared_partial_sums(p, n)?;
    let w_series = DirichletSeries::w_series(t, p, n)?;

    let lhs = dirichlet_eval(&d_series, s, n)?;
    let w_val = dirichlet_eval(&w_series, s, n)?;
    let w_shift = dirichlet_eval(&w_series, s - 1.0, n)?;
    let on_contour = dirichlet_eval(&w_series, s - sz, n)?;
    let inv = (s + (k1 - 1.0)).inv();
    let shifted = w_shift.sum.mul(inv);

    let t_max = match cfg.t_max {
        Some(v) => v,
        None => pick_height(s, k1, sz, on_contour.abs_sum, 1e-3 * f64::EPSILON * lhs.value.norm())?,
    };
    let integral = LineIntegralSpec {
        sigma: sz,
        t_max,
        h: cfg.h,
        integrand: kernel_descriptor(s, k1).with(Factor::Dirichlet {
            series: &w_series,
            arg: Affine::new(1.0, -1.0, Complex::new(0.0, 0.0)),
        }),
    }
    .integrate()?;
    let kernel_mass = LineIntegralSpec {
        sigma: sz,
        t_max,
        h: cfg.h,
        integrand: kernel_descriptor(s, k1),
    }
    .integrate()?
    .abs_sum;

    let mut rhs = ComplexSum::new();
    rhs.add_sum(&w_val.sum);
    rhs.add_sum(&shifted);
    rhs.add_sum(&integral.sum);
    let difference = rhs.difference(&lhs.sum);
    let gap = difference.norm();
    let scale = lhs.value.norm();

    let budget = ErrorBudget {
        lhs_tail: lhs.tail_bound,
        w_tail: w_val.tail_bound,
        shifted_tail: w_shift.tail_bound * inv.norm(),
        integral_tail: on_contour.tail_bound * kernel_mass,
        quadrature: (integral.value - integral.coarse).norm(),
        truncation: 2.0 * integral.endpoint / (2.0 * PI) * (2.0 / PI),
        rounding: ROUNDING_FACTOR
            * f64::EPSILON
            * (lhs.abs_sum + w_val.abs_sum + w_shift.abs_sum * inv.norm() + integral.abs_sum),
    };
    let rel_gap = gap / scale;
    let certified_error = budget.total() / scale;
    let tol = cfg.tolerance;
    Ok(DecompositionReport {
        s,
        weight: t.weight(),
        n,
        sigma_z: sz,
        t_max,
        h: cfg.h,
        nodes: integral.nodes,
        lhs: lhs.value,
        rhs: rhs.value(),
        w_term: w_val.value,
        shifted_term: shifted.value(),
        integral_term: integral.value,
        difference,
        gap,
        rel_gap,
        certified_error,
        budget,
        tolerance: tol,
        pass: rel_gap <= tol && certified_error <= tol && rel_gap <= certified_error,
    })
}
