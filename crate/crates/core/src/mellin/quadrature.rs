//! Vertical-line integrands described factor by factor, and the trapezoid
//! rule that integrates them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::numeric::{is_finite, ComplexSum};
use crate::special::{log_beta, log_gamma, log_gamma_ratio, zeta};
use crate::Complex;

use super::dirichlet::{DirichletSeries, VerticalLine};
use super::MellinError;

/// `s·S + z·Z + c`, where `S` is the descriptor's fixed parameter and `Z`
/// the point on the contour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub s: f64,
    pub z: f64,
    pub c: Complex,
}

impl Affine {
    /// The contour variable itself.
    pub const Z: Affine = Affine {
        s: 0.0,
        z: 1.0,
        c: Complex::new(0.0, 0.0),
    };

    pub const fn new(s: f64, z: f64, c: Complex) -> Self {
        Self { s, z, c }
    }

    pub fn at(&self, s: Complex, z: Complex) -> Complex {
        s * self.s + z * self.z + self.c
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    /// `Γ(arg)^power`
    Gamma {
        arg: Affine,
        power: i32,
    },
    /// `Γ(num)/Γ(den)` through the Stirling difference, for `Re > 0`.
    GammaRatio {
        num: Affine,
        den: Affine,
    },
    /// `Γ(arg + m)/Γ(arg) = arg(arg+1)…(arg+m−1)`, evaluated as a product.
    Pochhammer {
        arg: Affine,
        m: u32,
    },
    Zeta(Affine),
    /// `B(a, b)^power`
    Beta {
        a: Affine,
        b: Affine,
        power: i32,
    },
    /// `exp(π·arg²/y²)`
    Kernel {
        y: f64,
        arg: Affine,
    },
    /// `base^arg`
    Power {
        base: f64,
        arg: Affine,
    },
    /// `Σ c(n)·n^{−(arg + shift)}` over the stored coefficients.
    Dirichlet {
        series: &'a DirichletSeries,
        arg: Affine,
    },
    Constant(Complex),
}

/// A product of factors, evaluated at `z` with the parameter `s` fixed.
#[derive(Clone, Debug)]
pub struct IntegrandDescriptor<'a> {
    pub s: Complex,
    pub factors: Vec<Factor<'a>>,
}

impl<'a> IntegrandDescriptor<'a> {
    pub fn new(s: Complex) -> Self {
        Self { s, factors: Vec::new() }
    }

    pub fn with(mut self, f: Factor<'a>) -> Self {
        self.factors.push(f);
        self
    }

    /// Evaluate at an arbitrary point. Dirichlet factors are summed directly.
    pub fn eval(&self, z: Complex) -> Result<Complex, MellinError> {
        self.eval_with(z, &mut |series, w| Ok(series.eval_point(w)))
    }

    fn eval_with(
        &self,
        z: Complex,
        dirichlet: &mut dyn FnMut(&DirichletSeries, Complex) -> Result<Complex, MellinError>,
    ) -> Result<Complex, MellinError> {
        let s = self.s;
        let mut log = Complex::new(0.0, 0.0);
        let mut mult = Complex::new(1.0, 0.0);
        for f in &self.factors {
            match *f {
                Factor::Gamma { arg, power } => log += log_gamma(arg.at(s, z))? * f64::from(power),
                Factor::GammaRatio { num, den } => {
                    let d = den.at(s, z);
                    log += log_gamma_ratio(d, num.at(s, z) - d)?;
                }
                Factor::Pochhammer { arg, m } => {
                    let a = arg.at(s, z);
                    for j in 0..m {
                        mult *= a + f64::from(j);
                    }
                }
                Factor::Zeta(arg) => mult *= zeta(arg.at(s, z))?,
                Factor::Beta { a, b, power } => log += log_beta(a.at(s, z), b.at(s, z))? * f64::from(power),
                Factor::Kernel { y, arg } => {
                    let v = arg.at(s, z);
                    log += v * v * (PI / (y * y));
                }
                Factor::Power { base, arg } => log += arg.at(s, z) * libm::log(base),
                Factor::Dirichlet { series, arg } => mult *= dirichlet(series, arg.at(s, z))?,
                Factor::Constant(c) => mult *= c,
            }
        }
        let v = log.exp() * mult;
        if is_finite(v) {
            Ok(v)
        } else {
            Err(MellinError::NonFinite { re: z.re, im: z.im })
        }
    }
}

/// `(1/2πi)∫_{σ−iT}^{σ+iT} f(z) dz` by the trapezoid rule with step `h`.
#[derive(Clone, Debug)]
pub struct LineIntegralSpec<'a> {
    pub sigma: f64,
    pub t_max: f64,
    pub h: f64,
    pub integrand: IntegrandDescriptor<'a>,
}

/// Quadrature output. All values already carry the `1/2π`.
#[derive(Clone, Copy, Debug)]
pub struct LineIntegral {
    pub value: Complex,
    pub(crate) sum: ComplexSum,
    /// Same sum on every second node (step `2h`).
    pub coarse: Complex,
    /// `(1/2π)·Σ h·|f|`, the scale against which rounding is measured.
    pub abs_sum: f64,
    /// `max |f(σ ± iT)|`
    pub endpoint: f64,
    pub nodes: usize,
}

impl<'a> LineIntegralSpec<'a> {
    pub fn validate(&self) -> Result<(), MellinError> {
        if !self.sigma.is_finite() {
            return Err(MellinError::InvalidParameter {
                name: "sigma",
                value: self.sigma,
            });
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(MellinError::InvalidParameter {
                name: "T",
                value: self.t_max,
            });
        }
        if !(self.h > 0.0) || self.h > self.t_max / 50.0 {
            return Err(MellinError::InvalidParameter {
                name: "h",
                value: self.h,
            });
        }
        let s = self.integrand.s;
        for f in &self.integrand.factors {
            if let Factor::Dirichlet { series, arg } = f {
                let re = arg.at(s, Complex::new(self.sigma, 0.0)).re;
                series.check_abscissa(re)?;
            }
        }
        Ok(())
    }

    fn node_count(&self) -> usize {
        libm::floor(self.t_max / self.h) as usize
    }

    /// Node heights in summation order: `0, h, −h, 2h, −2h, …`.
    fn heights(&self) -> Vec<(usize, f64)> {
        let j_max = self.node_count();
        let mut out = Vec::with_capacity(2 * j_max + 1);
        out.push((0, 0.0));
        for j in 1..=j_max {
            let t = j as f64 * self.h;
            out.push((j, t));
            out.push((j, -t));
        }
        out
    }

    pub fn integrate(&self) -> Result<LineIntegral, MellinError> {
        self.validate()?;
        let lines: Vec<(usize, VerticalLine)> = self
            .integrand
            .factors
            .iter()
            .enumerate()
            .filter_map(|(i, f)| match f {
                Factor::Dirichlet { series, arg } => {
                    let re = arg.at(self.integrand.s, Complex::new(self.sigma, 0.0)).re;
                    Some((i, series.vertical_line(re)))
                }
                _ => None,
            })
            .collect();
        let eval = |t: f64| -> Result<Complex, MellinError> {
            let z = Complex::new(self.sigma, t);
            let mut k = 0;
            self.integrand.eval_with(z, &mut |_, w| {
                let v = lines[k].1.eval(w.im);
                k += 1;
                Ok(v)
            })
        };

        let heights = self.heights();
        #[cfg(feature = "parallel")]
        let values: Vec<Result<Complex, MellinError>> = {
            use rayon::prelude::*;
            heights.par_iter().map(|&(_, t)| eval(t)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let values: Vec<Result<Complex, MellinError>> = heights.iter().map(|&(_, t)| eval(t)).collect();

        let w = self.h / (2.0 * PI);
        let mut sum = ComplexSum::new();
        let mut coarse = ComplexSum::new();
        let mut abs_sum = 0.0;
        let mut endpoint: f64 = 0.0;
        let j_max = self.node_count();
        for (&(j, _), v) in heights.iter().zip(values) {
            let v = v?;
            sum.add(v * w);
            abs_sum += v.norm() * w;
            if j % 2 == 0 {
                coarse.add(v * (2.0 * w));
            }
            if j == j_max {
                endpoint = endpoint.max(v.norm());
            }
        }
        Ok(LineIntegral {
            value: sum.value(),
            sum,
            coarse: coarse.value(),
            abs_sum,
            endpoint,
            nodes: heights.len(),
        })
    }
}
