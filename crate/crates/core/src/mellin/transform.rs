//! Differentiated kernel identities
//!
//! ```text
//! (1/2πi) ∫ Γ(s+m+l)/Γ(s+l) · exp(πs²/y²) X^s / y ds
//!     = X^{1−l} (d/dX)^m ( X^{m+l−1} g(X) ),   g = closed form
//! ```
//!
//! and the envelope `|·| ≤ g(X)·Σ_r e_{m−r}(l, …, l+m−1)·‖H_r‖₁·(y + y²|log X|)^r`,
//! where `H_r` is the physicists' Hermite polynomial and `‖H_r‖₁` the sum of
//! the absolute values of its coefficients. For `y ≥ 1` the right side is at
//! most `C_{m,l}·(y + y²|log X|)^m·g(X)` with `C_{m,l} = Σ_r e_{m−r}‖H_r‖₁`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Complex;

use super::quadrature::{Affine, Factor, LineIntegralSpec};
use super::{closed_form_raw, default_kernel_spec, kernel_closed_form, Abscissa, KernelParams, MellinError};

pub const MAX_ORDER: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeReport {
    pub m: u32,
    pub l: u32,
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
    /// Quadrature of the left side (real part; the imaginary part is
    /// recorded in `lhs_imag` and should vanish).
    pub lhs: f64,
    pub lhs_imag: f64,
    /// Central finite differences of the closed form.
    pub rhs: f64,
    pub fd_step: f64,
    pub rel_gap: f64,
    /// `C_{m,l}`
    pub envelope_constant: f64,
    /// `g(X)·Σ_r e_{m−r}‖H_r‖₁·B^r`, `B = y + y²|log X|`
    pub envelope: f64,
    /// `|lhs| / (B^m·g(X))`, comparable to `C_{m,l}`.
    pub observed_constant: f64,
    pub within_envelope: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// `‖H_r‖₁` for `r = 0..=n`.
fn hermite_abs_sums(n: usize) -> Vec<f64> {
    // H_{r+1} = 2x·H_r − 2r·H_{r−1}
    let mut prev: Vec<f64> = vec![];
    let mut cur = vec![1.0];
    let mut out = vec![1.0];
    for r in 0..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * r as f64 * c;
        }
        out.push(next.iter().map(|c| c.abs()).sum());
        prev = cur;
        cur = next;
    }
    out
}

/// Elementary symmetric polynomials `e_0..e_m` of `l, l+1, …, l+m−1`.
fn elementary_symmetric(m: u32, l: u32) -> Vec<f64> {
    let mut e = vec![1.0];
    for j in 0..m {
        let v = f64::from(l + j);
        let mut next = vec![0.0; e.len() + 1];
        for (i, &c) in e.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * v;
        }
        e = next;
    }
    e
}

fn envelope_terms(m: u32, l: u32) -> Vec<f64> {
    let h = hermite_abs_sums(m as usize);
    let e = elementary_symmetric(m, l);
    (0..=m as usize).map(|r| e[m as usize - r] * h[r]).collect()
}

/// `C_{m,l}`.
pub fn envelope_constant(m: u32, l: u32) -> f64 {
    envelope_terms(m, l).iter().sum()
}

fn central_difference(f: &dyn Fn(f64) -> f64, x: f64, h: f64, m: u32) -> f64 {
    match m {
        0 => f(x),
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        _ => (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (h * h * h * h),
    }
}

pub fn derivative_transform_check(
    m: u32,
    l: u32,
    p: &KernelParams,
    tolerance: f64,
) -> Result<DerivativeReport, MellinError> {
    if m > MAX_ORDER {
        return Err(MellinError::InvalidParameter {
            name: "m",
            value: f64::from(m),
        });
    }
    if l > MAX_ORDER {
        return Err(MellinError::InvalidParameter {
            name: "l",
            value: f64::from(l),
        });
    }
    let base = default_kernel_spec(p, Abscissa::Saddle);
    let spec = LineIntegralSpec {
        integrand: base.integrand.clone().with(Factor::Pochhammer {
            arg: Affine::new(0.0, 1.0, Complex::new(f64::from(l), 0.0)),
            m,
        }),
        ..base
    };
    let lhs = spec.integrate()?.value;

    let (x, y) = (p.x, p.y);
    let ln_x = libm::log(x);
    // Step relative to the scale on which log g varies; one Richardson
    // step removes the h² term, so balance h⁴ against ε/h^m.
    let scale = 1.0
        / (1.0f64)
            .max(y * y * ln_x.abs() / (2.0 * PI))
            .max(y / libm::sqrt(2.0 * PI));
    let fd_step = x * scale * libm::pow(f64::EPSILON, 1.0 / f64::from(m + 4));
    let power = f64::from(m + l) - 1.0;
    let f = move |t: f64| libm::pow(t, power) * closed_form_raw(t, y);
    let fine = central_difference(&f, x, fd_step, m);
    let coarse = central_difference(&f, x, 2.0 * fd_step, m);
    let rhs = libm::pow(x, 1.0 - f64::from(l)) * (4.0 * fine - coarse) / 3.0;

    let g = kernel_closed_form(p);
    let b = y + y * y * ln_x.abs();
    let envelope = g * envelope_terms(m, l)
        .iter()
        .enumerate()
        .map(|(r, c)| c * libm::pow(b, r as f64))
        .sum::<f64>();
    // Equality holds at m = 0; allow for the quadrature error.
    let within_envelope = lhs.norm() <= envelope * (1.0 + tolerance);
    let rel_gap = (lhs.re - rhs).abs() / rhs.abs();
    Ok(DerivativeReport {
        m,
        l,
        x,
        y,
        sigma: spec.sigma,
        lhs: lhs.re,
        lhs_imag: lhs.im,
        rhs,
        fd_step,
        rel_gap,
        envelope_constant: envelope_constant(m, l),
        envelope,
        observed_constant: lhs.norm() / (libm::pow(b, f64::from(m)) * g),
        within_envelope,
        tolerance,
        pass: rel_gap <= tolerance && within_envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_and_symmetric_tables() {
        // H_2 = 4x² − 2, H_3 = 8x³ − 12x, H_4 = 16x⁴ − 48x² + 12
        assert_eq!(hermite_abs_sums(4), vec![1.0, 2.0, 6.0, 20.0, 76.0]);
        // (s+1)(s+2) = s² + 3s + 2
        assert_eq!(elementary_symmetric(2, 1), vec![1.0, 3.0, 2.0]);
        assert_eq!(envelope_constant(0, 0), 1.0);
        // e_1(0) = 0, so only H_1 survives
        assert_eq!(envelope_constant(1, 0), 2.0);
    }

    #[test]
    fn order_zero_is_the_kernel() {
        let r = derivative_transform_check(0, 0, &KernelParams::new(10.0, 3.0).unwrap(), 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn first_derivative_at_e() {
        let p = KernelParams::new(core::f64::consts::E, 2.0).unwrap();
        let r = derivative_transform_check(1, 0, &p, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        // X g'(X) = −(y² log X / 2π) g
        let want = -(4.0 / (2.0 * PI)) * kernel_closed_form(&p);
        assert!((r.lhs - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn second_order_inside_envelope() {
        let r = derivative_transform_check(2, 1, &KernelParams::new(10.0, 3.0).unwrap(), 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.within_envelope && r.observed_constant <= r.envelope_constant);
    }

    #[test]
    fn order_limits() {
        let p = KernelParams::new(2.0, 1.0).unwrap();
        assert!(derivative_transform_check(5, 0, &p, 1e-6).is_err());
        assert!(derivative_transform_check(0, 5, &p, 1e-6).is_err());
    }
}
