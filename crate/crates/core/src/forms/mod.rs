//! Exact q-expansions of level-one Hecke eigenforms.
//!
//! `Δ = q·∏(1-qⁿ)²⁴` is built from Jacobi's sparse expansion of `∏(1-qⁿ)³`
//! followed by three exact squarings. The other weights with a
//! one-dimensional cusp space are `Δ·E₄ᵃ·E₆ᵇ`.

mod hecke;
pub mod ntt;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use hecke::{hecke_report, HeckeFailure, HeckeReport};

/// Weights `k` with `dim S_k(SL₂(Z)) = 1`.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Below this many terms the schoolbook product is faster than three NTTs.
const SCHOOLBOOK_CUTOFF: usize = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("a series needs at least one coefficient")]
    EmptySeries,
    #[error("weight {0} is not supported; dim S_k = 1 only for k in 12, 16, 18, 20, 22, 26")]
    UnsupportedWeight(u32),
    #[error("Eisenstein series are provided for weights 4 and 6, not {0}")]
    UnsupportedEisensteinWeight(u32),
    #[error("index bound must be at least {min}, got {got}")]
    IndexBound { min: usize, got: usize },
    #[error("certified coefficient bound needs {required_bits} modulus bits, prime set has {available_bits}")]
    ReconstructionOverflow { required_bits: u64, available_bits: u64 },
    #[error("transform length {0} exceeds the largest supported length")]
    TransformTooLong(usize),
    #[error("coefficient {index} of E4^3 - E6^2 is not divisible by 1728")]
    NonExactDivision { index: usize },
    #[error("invalid eigenform table: {0}")]
    InvalidTable(&'static str),
}

/// Exact q-expansion coefficients `c[0], c[1], …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<BigInt>,
}

impl IntegerSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, FormsError> {
        if coeffs.is_empty() {
            return Err(FormsError::EmptySeries);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, FormsError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest stored index.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Normalized eigenform coefficients `a[0..=N]` with `a[0] = 0`, `a[1] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformTable {
    weight: u32,
    a: Vec<BigInt>,
}

impl EigenformTable {
    /// Build from a full q-expansion (index 0 included). Only the
    /// normalization is validated here; Hecke structure is left to
    /// [`hecke_report`].
    pub fn from_q_expansion(weight: u32, a: Vec<BigInt>) -> Result<Self, FormsError> {
        if !SUPPORTED_WEIGHTS.contains(&weight) {
            return Err(FormsError::UnsupportedWeight(weight));
        }
        if a.len() < 2 {
            return Err(FormsError::InvalidTable("need at least a(1)"));
        }
        if !a[0].is_zero() {
            return Err(FormsError::InvalidTable("a(0) must vanish"));
        }
        if !a[1].is_one() {
            return Err(FormsError::InvalidTable("a(1) must equal 1"));
        }
        Ok(Self { weight, a })
    }

    /// Build from `a(1), …, a(N)`.
    pub fn from_coefficients(weight: u32, coeffs: Vec<BigInt>) -> Result<Self, FormsError> {
        let mut a = Vec::with_capacity(coeffs.len() + 1);
        a.push(BigInt::zero());
        a.extend(coeffs);
        Self::from_q_expansion(weight, a)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Largest index `N`.
    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    /// `a(n)`; zero for `n = 0`.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.a[n]
    }

    /// The whole q-expansion including the zero constant term.
    pub fn q_expansion(&self) -> &[BigInt] {
        &self.a
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self {
            weight: self.weight,
            a: self.a[..=n.min(self.n_max())].to_vec(),
        }
    }

    #[doc(hidden)]
    pub fn coeff_mut(&mut self, n: usize) -> &mut BigInt {
        &mut self.a[n]
    }
}

/// `∏(1-qⁿ)³ = Σ (-1)^m (2m+1) q^{m(m+1)/2}` through degree `n`.
pub fn eta_cubed_sparse(n: usize) -> IntegerSeries {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut m: usize = 0;
    loop {
        let idx = m * (m + 1) / 2;
        if idx > n {
            break;
        }
        let v = BigInt::from(2 * m as i64 + 1);
        coeffs[idx] = if m.is_multiple_of(2) { v } else { -v };
        m += 1;
    }
    IntegerSeries { coeffs }
}

/// Quadratic-time truncated product; kept as the oracle for the NTT path.
pub fn series_mul_schoolbook(a: &IntegerSeries, b: &IntegerSeries, n: usize) -> IntegerSeries {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.coeffs.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    IntegerSeries { coeffs: out }
}

pub fn series_square_schoolbook(a: &IntegerSeries, n: usize) -> IntegerSeries {
    series_mul_schoolbook(a, a, n)
}

/// Multimodular NTT product, using at most `prime_limit` primes.
pub fn series_mul_ntt(
    a: &IntegerSeries,
    b: &IntegerSeries,
    n: usize,
    prime_limit: usize,
) -> Result<IntegerSeries, FormsError> {
    let coeffs = ntt::convolve(&a.coeffs, Some(&b.coeffs), n + 1, prime_limit)?;
    Ok(IntegerSeries { coeffs })
}

pub fn series_square_ntt(a: &IntegerSeries, n: usize, prime_limit: usize) -> Result<IntegerSeries, FormsError> {
    let coeffs = ntt::convolve(&a.coeffs, None, n + 1, prime_limit)?;
    Ok(IntegerSeries { coeffs })
}

/// Exact `a·b mod q^{n+1}`.
pub fn series_mul(a: &IntegerSeries, b: &IntegerSeries, n: usize) -> Result<IntegerSeries, FormsError> {
    if a.len().min(b.len()).min(n + 1) <= SCHOOLBOOK_CUTOFF {
        return Ok(series_mul_schoolbook(a, b, n));
    }
    series_mul_ntt(a, b, n, ntt::NTT_PRIMES.len())
}

/// Exact `a² mod q^{n+1}`.
pub fn series_square(a: &IntegerSeries, n: usize) -> Result<IntegerSeries, FormsError> {
    if a.len().min(n + 1) <= SCHOOLBOOK_CUTOFF {
        return Ok(series_square_schoolbook(a, n));
    }
    series_square_ntt(a, n, ntt::NTT_PRIMES.len())
}

/// `q·(η³)⁸`, i.e. `a[n] = τ(n)` for `1 ≤ n ≤ N`.
pub fn generate_delta(n: usize) -> Result<EigenformTable, FormsError> {
    if n < 1 {
        return Err(FormsError::IndexBound { min: 1, got: n });
    }
    let deg = n - 1;
    let mut s = eta_cubed_sparse(deg);
    for _ in 0..3 {
        s = series_square(&s, deg)?;
    }
    let mut a = Vec::with_capacity(n + 1);
    a.push(BigInt::zero());
    a.extend(s.coeffs);
    EigenformTable::from_q_expansion(12, a)
}

fn divisor_power_sums(n: usize, power: u32) -> Vec<u128> {
    let mut sigma = vec![0u128; n + 1];
    for d in 1..=n {
        let dp = (d as u128).pow(power);
        for m in (d..=n).step_by(d) {
            sigma[m] += dp;
        }
    }
    sigma
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ` or `E₆ = 1 − 504 Σ σ₅(n) qⁿ` through degree `n`.
pub fn eisenstein(k: u32, n: usize) -> Result<IntegerSeries, FormsError> {
    let (scale, power) = match k {
        4 => (240i64, 3),
        6 => (-504i64, 5),
        other => return Err(FormsError::UnsupportedEisensteinWeight(other)),
    };
    let sigma = divisor_power_sums(n, power);
    let scale = BigInt::from(scale);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(BigInt::one());
    coeffs.extend(sigma[1..].iter().map(|&s| &scale * BigInt::from(s)));
    Ok(IntegerSeries { coeffs })
}

/// `(E₄³ − E₆²)/1728`, with every division checked for exactness.
pub fn delta_via_eisenstein(n: usize) -> Result<EigenformTable, FormsError> {
    if n < 1 {
        return Err(FormsError::IndexBound { min: 1, got: n });
    }
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let e4_sq = series_square(&e4, n)?;
    let e4_cubed = series_mul(&e4_sq, &e4, n)?;
    let e6_sq = series_square(&e6, n)?;
    let d = BigInt::from(1728);
    let mut a = Vec::with_capacity(n + 1);
    for (i, (x, y)) in e4_cubed.coeffs.iter().zip(&e6_sq.coeffs).enumerate() {
        let (q, r) = (x - y).div_rem(&d);
        if !r.is_zero() {
            return Err(FormsError::NonExactDivision { index: i });
        }
        a.push(q);
    }
    EigenformTable::from_q_expansion(12, a)
}

/// Exponents `(a, b)` with `4a + 6b = k − 12`.
fn eisenstein_exponents(k: u32) -> Result<(u32, u32), FormsError> {
    match k {
        12 => Ok((0, 0)),
        16 => Ok((1, 0)),
        18 => Ok((0, 1)),
        20 => Ok((2, 0)),
        22 => Ok((1, 1)),
        26 => Ok((2, 1)),
        other => Err(FormsError::UnsupportedWeight(other)),
    }
}

/// The normalized eigenform spanning `S_k` for `k` in [`SUPPORTED_WEIGHTS`].
pub fn eigenform(k: u32, n: usize) -> Result<EigenformTable, FormsError> {
    let (e4_pow, e6_pow) = eisenstein_exponents(k)?;
    let delta = generate_delta(n)?;
    if e4_pow == 0 && e6_pow == 0 {
        return Ok(delta);
    }
    let mut acc = IntegerSeries { coeffs: delta.a };
    if e4_pow > 0 {
        let e4 = eisenstein(4, n)?;
        for _ in 0..e4_pow {
            acc = series_mul(&acc, &e4, n)?;
        }
    }
    if e6_pow > 0 {
        let e6 = eisenstein(6, n)?;
        for _ in 0..e6_pow {
            acc = series_mul(&acc, &e6, n)?;
        }
    }
    // Δ starts at q¹ with coefficient 1 and each Eᵢ starts with 1.
    if !acc.coeffs[1].is_one() {
        return Err(FormsError::InvalidTable("leading coefficient is not 1"));
    }
    EigenformTable::from_q_expansion(k, acc.coeffs)
}
