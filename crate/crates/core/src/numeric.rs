//! Small numeric helpers shared by the statistics and contour modules.

use num_bigint::{BigInt, BigUint};

use crate::Complex;

/// Natural log of `|x|`, computed from the two leading 64-bit limbs so that
/// arbitrarily large integers never overflow. Returns `-inf` for zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    ln_uint(x.magnitude())
}

/// Natural log of an unsigned big integer; `-inf` for zero.
pub fn ln_uint(x: &BigUint) -> f64 {
    let digits: alloc::vec::Vec<u64> = x.iter_u64_digits().collect();
    match digits.len() {
        0 => f64::NEG_INFINITY,
        1 => libm::log(digits[0] as f64),
        len => {
            let hi = digits[len - 1] as f64;
            let lo = digits[len - 2] as f64;
            // hi * 2^64 + lo, rescaled by 2^-64 to stay in range.
            let lead = hi + lo * 5.421_010_862_427_522e-20;
            libm::log(lead) + ((len - 1) as f64) * 64.0 * core::f64::consts::LN_2
        }
    }
}

/// Signed `exp(ln|x| - shift)` for a big integer, overflow-proof as long as
/// the result itself is representable.
pub fn scaled_to_f64(x: &BigInt, ln_shift: f64) -> f64 {
    let v = libm::exp(ln_abs(x) - ln_shift);
    if x.sign() == num_bigint::Sign::Minus {
        -v
    } else {
        v
    }
}

/// Neumaier-compensated accumulator. `hi() + lo()` carries roughly twice the
/// working precision of a naive running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn add_sum(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            sum: self.sum * k,
            comp: self.comp * k,
        }
    }

    pub fn hi(&self) -> f64 {
        self.sum
    }

    pub fn lo(&self) -> f64 {
        self.comp
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Complex compensated accumulator (independent real and imaginary parts).
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    pub re: CompensatedSum,
    pub im: CompensatedSum,
}

impl ComplexSum {
    pub const fn new() -> Self {
        Self {
            re: CompensatedSum::new(),
            im: CompensatedSum::new(),
        }
    }

    pub fn add(&mut self, z: Complex) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn add_sum(&mut self, other: &ComplexSum) {
        self.re.add_sum(&other.re);
        self.im.add_sum(&other.im);
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }

    /// Exact-as-possible difference `self - other`, taking the high parts
    /// first so nearly equal sums cancel without losing the low parts.
    pub fn difference(&self, other: &ComplexSum) -> Complex {
        let re = (self.re.hi() - other.re.hi()) + (self.re.lo() - other.re.lo());
        let im = (self.im.hi() - other.im.hi()) + (self.im.lo() - other.im.lo());
        Complex::new(re, im)
    }

    /// Multiply by a complex constant, keeping the split between parts.
    pub fn mul(&self, k: Complex) -> Self {
        let mut out = Self::new();
        out.add(Complex::new(self.re.hi(), self.im.hi()) * k);
        out.add(Complex::new(self.re.lo(), self.im.lo()) * k);
        out
    }
}

/// Reject NaN or infinite components.
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
