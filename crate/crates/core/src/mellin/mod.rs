//! The Gaussian concentrating kernel
//!
//! ```text
//! (1/2πi) ∫_(σ) exp(πs²/y²) X^s / y ds = (1/2π) exp(−y² log²X / 4π)
//! ```
//!
//! its differentiated forms, and the three-term decomposition of
//! `D(s) = Σ |S(n)|²/n^{s+k−1}` in terms of `W(s) = Σ w(n)/n^{s+k−1}`.
//!
//! The kernel integrand is entire, so its value does not depend on `σ`. On a
//! fixed line such as `σ = 2` the integrand oscillates and the quadrature
//! has to cancel a factor `exp(π(σ − σ*)²/y²)` with `σ* = −y² log X / 2π`;
//! for `X = 100, y = 20` that is about `e^{684}`. [`Abscissa::Saddle`] puts
//! the contour through `σ*`, where the integrand is a positive Gaussian.

mod decomposition;
mod dirichlet;
mod quadrature;
mod transform;

use core::f64::consts::PI;

use thiserror::Error;

use crate::special::SpecialError;
use crate::Complex;

pub use decomposition::{decomposition_check, DecompositionConfig, DecompositionReport, ErrorBudget};
pub use dirichlet::{
    dirichlet_eval, w_coefficients, DirichletSeries, DirichletValue, TailModel, ABSCISSA_MARGIN, TAIL_INFLATION,
};
pub use quadrature::{Affine, Factor, IntegrandDescriptor, LineIntegral, LineIntegralSpec};
pub use transform::{derivative_transform_check, envelope_constant, DerivativeReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MellinError {
    #[error("parameter {name} = {value} is invalid")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("Re s = {re} is left of the admissible abscissa {min}")]
    Abscissa { re: f64, min: f64 },
    #[error("contour abscissa {sigma_z} is within 0.05 of a pole at 0 or 1")]
    ContourNearPole { sigma_z: f64 },
    #[error("need {needed} coefficients, table has {available}")]
    TableTooShort { needed: usize, available: usize },
    #[error("integrand is not finite at {re} + {im}i")]
    NonFinite { re: f64, im: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    pub x: f64,
    pub y: f64,
}

impl KernelParams {
    pub fn new(x: f64, y: f64) -> Result<Self, MellinError> {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(MellinError::InvalidParameter { name: "X", value: x });
        }
        if !(y > 0.0) || !y.is_finite() {
            return Err(MellinError::InvalidParameter { name: "y", value: y });
        }
        Ok(Self { x, y })
    }

    /// Real point where the integrand's phase is stationary.
    pub fn saddle(&self) -> f64 {
        -self.y * self.y * libm::log(self.x) / (2.0 * PI)
    }
}

/// Where to put the vertical contour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Abscissa {
    Fixed(f64),
    Saddle,
}

impl Abscissa {
    pub fn resolve(self, p: &KernelParams) -> f64 {
        match self {
            Abscissa::Fixed(s) => s,
            Abscissa::Saddle => p.saddle(),
        }
    }
}

fn closed_form_raw(x: f64, y: f64) -> f64 {
    let l = libm::log(x);
    libm::exp(-y * y * l * l / (4.0 * PI)) / (2.0 * PI)
}

/// `(1/2π)·exp(−y²(log X)²/4π)`
pub fn kernel_closed_form(p: &KernelParams) -> f64 {
    closed_form_raw(p.x, p.y)
}

/// Contour defaults: `T = 6y`, `h = min(0.05, y/50)`.
pub fn default_kernel_spec<'a>(p: &KernelParams, abscissa: Abscissa) -> LineIntegralSpec<'a> {
    LineIntegralSpec {
        sigma: abscissa.resolve(p),
        t_max: 6.0 * p.y,
        h: (0.05f64).min(p.y / 50.0),
        integrand: kernel_integrand(p),
    }
}

pub(crate) fn kernel_integrand<'a>(p: &KernelParams) -> IntegrandDescriptor<'a> {
    IntegrandDescriptor::new(Complex::new(0.0, 0.0))
        .with(Factor::Kernel { y: p.y, arg: Affine::Z })
        .with(Factor::Power {
            base: p.x,
            arg: Affine::Z,
        })
        .with(Factor::Constant(Complex::new(1.0 / p.y, 0.0)))
}

/// Quadrature value of the kernel integral along `spec`. The integrand in
/// `spec` is ignored; the kernel for `p` is used.
pub fn kernel_line_integral(p: &KernelParams, spec: &LineIntegralSpec) -> Result<f64, MellinError> {
    let spec = LineIntegralSpec {
        integrand: kernel_integrand(p),
        ..spec.clone()
    };
    Ok(spec.integrate()?.value.re)
}

/// Analytic bound on the part of the kernel integral beyond `|t| > T`,
/// relative to the closed form.
pub fn kernel_tail_bound(p: &KernelParams, sigma: f64, t_max: f64) -> f64 {
    let (y, l) = (p.y, libm::log(p.x));
    let ln_tail = libm::log(2.0 / y) + PI * sigma * sigma / (y * y) + sigma * l - PI * t_max * t_max / (y * y)
        + libm::log(y * y / (2.0 * PI * t_max));
    libm::exp(ln_tail + y * y * l * l / (4.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelReport {
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
    pub t_max: f64,
    pub h: f64,
    pub nodes: usize,
    pub quadrature: f64,
    pub closed_form: f64,
    pub rel_gap: f64,
    /// `|I(h) − I(h/2)|`, relative to the closed form.
    pub step_change: f64,
    pub tail_bound: f64,
    /// `∫|f| / |∫f|`: the cancellation the quadrature has to survive.
    pub cancellation: f64,
    pub truncation_ok: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare quadrature with the closed form at default step and truncation.
pub fn kernel_check(p: &KernelParams, abscissa: Abscissa, tolerance: f64) -> Result<KernelReport, MellinError> {
    let spec = default_kernel_spec(p, abscissa);
    let coarse = spec.integrate()?;
    let fine = LineIntegralSpec {
        h: spec.h / 2.0,
        ..spec.clone()
    }
    .integrate()?;
    let g = kernel_closed_form(p);
    let q = coarse.value.re;
    let rel_gap = (q - g).abs() / g;
    let tail_bound = kernel_tail_bound(p, spec.sigma, spec.t_max);
    let truncation_ok = tail_bound <= tolerance;
    Ok(KernelReport {
        x: p.x,
        y: p.y,
        sigma: spec.sigma,
        t_max: spec.t_max,
        h: spec.h,
        nodes: coarse.nodes,
        quadrature: q,
        closed_form: g,
        rel_gap,
        step_change: (fine.value - coarse.value).norm() / g,
        tail_bound,
        cancellation: coarse.abs_sum / g,
        truncation_ok,
        tolerance,
        pass: rel_gap <= tolerance && truncation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn closed_form_examples() {
        let g = kernel_closed_form(&KernelParams::new(1.0, 7.0).unwrap());
        assert_eq!(g, 1.0 / (2.0 * PI));
        // y·log X = 2√π
        let x = libm::exp(1.0);
        let y = 2.0 * libm::sqrt(PI);
        let g = kernel_closed_form(&KernelParams::new(x, y).unwrap());
        assert!(rel(g, libm::exp(-1.0) / (2.0 * PI)) < 1e-15);
        // mpmath: exp(-9 ln(10)^2 / (4π)) / (2π)
        let g = kernel_closed_form(&KernelParams::new(10.0, 3.0).unwrap());
        assert!(rel(g, 0.003_570_384_875_835_101_7) < 1e-13, "{g}");
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (x, y) in [(2.0, 1.0), (1.0, 5.0), (100.0, 20.0)] {
            let r = kernel_check(&KernelParams::new(x, y).unwrap(), Abscissa::Saddle, 1e-10).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.step_change < 1e-11, "{r:?}");
        }
    }

    #[test]
    fn fixed_line_at_two_works_when_well_conditioned() {
        let p = KernelParams::new(2.0, 1.0).unwrap();
        let r = kernel_check(&p, Abscissa::Fixed(2.0), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.cancellation > 1e5);
        let far = kernel_check(&KernelParams::new(100.0, 20.0).unwrap(), Abscissa::Fixed(2.0), 1e-10).unwrap();
        assert!(!far.pass);
    }

    #[test]
    fn spec_invariants_enforced() {
        let p = KernelParams::new(2.0, 1.0).unwrap();
        let mut spec = default_kernel_spec(&p, Abscissa::Saddle);
        spec.h = spec.t_max / 10.0;
        assert!(kernel_line_integral(&p, &spec).is_err());
        assert!(KernelParams::new(0.5, 1.0).is_err());
        assert!(KernelParams::new(2.0, 0.0).is_err());
    }
}
