//! Exact integer convolution through number-theoretic transforms modulo a
//! fixed set of word-size primes, recombined with Garner's CRT.
//!
//! Every prime has the form `c·2^26 + 1 < 2^62`, so transforms of length up
//! to `2^26` are available and Montgomery products never overflow `u128`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use super::FormsError;

/// `(p, g)` with `g` a primitive root mod `p`.
pub const NTT_PRIMES: [(u64, u64); 8] = [
    (4_611_686_017_554_972_673, 5),
    (4_611_686_015_004_835_841, 3),
    (4_611_686_009_971_671_041, 6),
    (4_611_686_007_555_751_937, 3),
    (4_611_686_007_488_643_073, 5),
    (4_611_686_007_085_989_889, 22),
    (4_611_686_005_878_030_337, 5),
    (4_611_686_004_066_091_009, 13),
];

/// Every prime above exceeds `2^61`; a set of `k` primes certifies `61·k` bits.
pub const BITS_PER_PRIME: u64 = 61;

/// Largest transform length supported by every prime in the set.
pub const MAX_TRANSFORM_LEN: usize = 1 << 26;

#[derive(Clone, Copy, Debug)]
struct Montgomery {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = self.to_mont(base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        self.from_mont(acc)
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Residue of a signed big integer, in Montgomery form.
    fn reduce_big(&self, x: &BigInt) -> u64 {
        let p = self.p as u128;
        let mut r: u128 = 0;
        let mut digits: Vec<u64> = x.iter_u64_digits().collect();
        digits.reverse();
        for d in digits {
            r = ((r << 64) | d as u128) % p;
        }
        let r = r as u64;
        let r = if x.sign() == Sign::Minus && r != 0 {
            self.p - r
        } else {
            r
        };
        self.to_mont(r)
    }
}

/// Precomputed twiddles for one prime and one transform length.
struct Transform {
    field: Montgomery,
    len: usize,
    roots: Vec<u64>,
    inv_roots: Vec<u64>,
    inv_len: u64,
}

impl Transform {
    fn new(p: u64, g: u64, len: usize) -> Self {
        let field = Montgomery::new(p);
        let w = field.pow(g, (p - 1) / len as u64);
        let w_inv = field.inv(w);
        let half = len / 2;
        let mut roots = Vec::with_capacity(half.max(1));
        let mut inv_roots = Vec::with_capacity(half.max(1));
        let (wm, wim) = (field.to_mont(w), field.to_mont(w_inv));
        let (mut cur, mut cur_inv) = (field.to_mont(1), field.to_mont(1));
        for _ in 0..half.max(1) {
            roots.push(cur);
            inv_roots.push(cur_inv);
            cur = field.mul(cur, wm);
            cur_inv = field.mul(cur_inv, wim);
        }
        let inv_len = field.to_mont(field.inv(len as u64 % p));
        Self {
            field,
            len,
            roots,
            inv_roots,
            inv_len,
        }
    }

    /// Decimation in frequency: natural order in, bit-reversed order out.
    fn forward(&self, a: &mut [u64]) {
        let f = &self.field;
        let n = self.len;
        let mut m = n / 2;
        while m >= 1 {
            let step = n / (2 * m);
            for block in a.chunks_exact_mut(2 * m) {
                let (lo, hi) = block.split_at_mut(m);
                for j in 0..m {
                    let u = lo[j];
                    let v = hi[j];
                    lo[j] = f.add(u, v);
                    hi[j] = f.mul(f.sub(u, v), self.roots[j * step]);
                }
            }
            m /= 2;
        }
    }

    /// Decimation in time: bit-reversed order in, natural order out, scaled.
    fn inverse(&self, a: &mut [u64]) {
        let f = &self.field;
        let n = self.len;
        let mut m = 1;
        while m < n {
            let step = n / (2 * m);
            for block in a.chunks_exact_mut(2 * m) {
                let (lo, hi) = block.split_at_mut(m);
                for j in 0..m {
                    let u = lo[j];
                    let v = f.mul(hi[j], self.inv_roots[j * step]);
                    lo[j] = f.add(u, v);
                    hi[j] = f.sub(u, v);
                }
            }
            m *= 2;
        }
        for x in a.iter_mut() {
            *x = f.mul(*x, self.inv_len);
        }
    }
}

fn max_bits(xs: &[BigInt]) -> u64 {
    xs.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn bit_length(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

/// Number of primes required so that the CRT modulus exceeds twice the
/// certified bound `min_len · max|a| · max|b|` on every output coefficient.
pub fn primes_required(a: &[BigInt], b: &[BigInt], out_len: usize) -> u64 {
    let terms = a.len().min(b.len()).min(out_len).max(1) as u64;
    let bound_bits = max_bits(a) + max_bits(b) + bit_length(terms);
    // M > 2^(61k) must exceed 2^(bound_bits + 1).
    (bound_bits + 1).div_ceil(BITS_PER_PRIME).max(1)
}

/// Residues of the truncated product modulo one prime, natural order.
fn convolve_mod(prime: (u64, u64), a: &[BigInt], b: Option<&[BigInt]>, len: usize, out_len: usize) -> Vec<u64> {
    let t = Transform::new(prime.0, prime.1, len);
    let mut fa = vec![0u64; len];
    for (slot, x) in fa.iter_mut().zip(a) {
        *slot = t.field.reduce_big(x);
    }
    t.forward(&mut fa);
    match b {
        None => {
            for x in fa.iter_mut() {
                *x = t.field.mul(*x, *x);
            }
        }
        Some(b) => {
            let mut fb = vec![0u64; len];
            for (slot, x) in fb.iter_mut().zip(b) {
                *slot = t.field.reduce_big(x);
            }
            t.forward(&mut fb);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = t.field.mul(*x, *y);
            }
        }
    }
    t.inverse(&mut fa);
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x = t.field.from_mont(*x);
    }
    fa
}

/// Garner recombination into the symmetric range `(-M/2, M/2]`.
struct Garner {
    primes: Vec<u64>,
    fields: Vec<Montgomery>,
    /// `inv[i][j] = p_j^{-1} mod p_i` in Montgomery form of field `i`, `j < i`.
    inv: Vec<Vec<u64>>,
    modulus: Vec<u64>,
    half: Vec<u64>,
}

const MAX_LIMBS: usize = NTT_PRIMES.len() + 1;

fn limbs_mul_add(acc: &mut [u64; MAX_LIMBS], mul: u64, add: u64) {
    let mut carry = add as u128;
    for limb in acc.iter_mut() {
        let t = *limb as u128 * mul as u128 + carry;
        *limb = t as u64;
        carry = t >> 64;
    }
    debug_assert_eq!(carry, 0);
}

fn limbs_cmp(a: &[u64], b: &[u64]) -> core::cmp::Ordering {
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            core::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    core::cmp::Ordering::Equal
}

fn limbs_sub(a: &[u64], b: &[u64]) -> [u64; MAX_LIMBS] {
    let mut out = [0u64; MAX_LIMBS];
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let (d1, b1) = a[i].overflowing_sub(b[i]);
        let (d2, b2) = d1.overflowing_sub(borrow);
        out[i] = d2;
        borrow = (b1 || b2) as u64;
    }
    out
}

fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

impl Garner {
    fn new(primes: &[u64]) -> Self {
        let fields: Vec<Montgomery> = primes.iter().map(|&p| Montgomery::new(p)).collect();
        let inv = (0..primes.len())
            .map(|i| {
                (0..i)
                    .map(|j| fields[i].to_mont(fields[i].inv(primes[j] % primes[i])))
                    .collect()
            })
            .collect();
        let mut modulus = [0u64; MAX_LIMBS];
        modulus[0] = 1;
        for &p in primes {
            limbs_mul_add(&mut modulus, p, 0);
        }
        let mut half = [0u64; MAX_LIMBS];
        for i in 0..MAX_LIMBS {
            half[i] = modulus[i] >> 1;
            if i + 1 < MAX_LIMBS {
                half[i] |= modulus[i + 1] << 63;
            }
        }
        Self {
            primes: primes.to_vec(),
            fields,
            inv,
            modulus: modulus.to_vec(),
            half: half.to_vec(),
        }
    }

    fn combine(&self, residues: &[u64]) -> BigInt {
        let k = self.primes.len();
        let mut digits = [0u64; NTT_PRIMES.len()];
        for i in 0..k {
            let f = &self.fields[i];
            let mut t = residues[i] % self.primes[i];
            for j in 0..i {
                let vj = digits[j] % self.primes[i];
                t = f.mul(f.sub(t, vj), self.inv[i][j]);
            }
            digits[i] = t;
        }
        let mut acc = [0u64; MAX_LIMBS];
        acc[0] = digits[k - 1];
        for i in (0..k - 1).rev() {
            limbs_mul_add(&mut acc, self.primes[i], digits[i]);
        }
        if limbs_cmp(&acc, &self.half) == core::cmp::Ordering::Greater {
            let mag = limbs_sub(&self.modulus, &acc);
            BigInt::from_biguint(Sign::Minus, limbs_to_biguint(&mag))
        } else {
            BigInt::from_biguint(Sign::Plus, limbs_to_biguint(&acc))
        }
    }
}

/// Exact product `a·b` (or `a²` when `b` is `None`) truncated to `out_len`
/// coefficients, using as many primes as the certified bound demands but no
/// more than `prime_limit`.
pub fn convolve(
    a: &[BigInt],
    b: Option<&[BigInt]>,
    out_len: usize,
    prime_limit: usize,
) -> Result<Vec<BigInt>, FormsError> {
    let a = &a[..a.len().min(out_len)];
    let b = b.map(|b| &b[..b.len().min(out_len)]);
    let b_ref = b.unwrap_or(a);
    if a.is_empty() || b_ref.is_empty() || out_len == 0 {
        return Ok(vec![BigInt::zero(); out_len]);
    }
    let needed = primes_required(a, b_ref, out_len) as usize;
    let limit = prime_limit.min(NTT_PRIMES.len());
    if needed > limit {
        return Err(FormsError::ReconstructionOverflow {
            required_bits: primes_required_bits(a, b_ref, out_len),
            available_bits: limit as u64 * BITS_PER_PRIME,
        });
    }
    let full = a.len() + b_ref.len() - 1;
    // No wraparound: the cyclic length covers every product index.
    let len = full.next_power_of_two().max(2);
    if len > MAX_TRANSFORM_LEN {
        return Err(FormsError::TransformTooLong(len));
    }
    let primes = &NTT_PRIMES[..needed];
    let keep = out_len.min(full);

    #[cfg(feature = "parallel")]
    let residues: Vec<Vec<u64>> = {
        use rayon::prelude::*;
        primes.par_iter().map(|&pr| convolve_mod(pr, a, b, len, keep)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let residues: Vec<Vec<u64>> = primes.iter().map(|&pr| convolve_mod(pr, a, b, len, keep)).collect();

    let garner = Garner::new(&primes.iter().map(|p| p.0).collect::<Vec<_>>());
    let mut out = Vec::with_capacity(out_len);
    let mut scratch = vec![0u64; needed];
    for idx in 0..keep {
        for (slot, r) in scratch.iter_mut().zip(&residues) {
            *slot = r[idx];
        }
        out.push(garner.combine(&scratch));
    }
    out.resize(out_len, BigInt::zero());
    Ok(out)
}

fn primes_required_bits(a: &[BigInt], b: &[BigInt], out_len: usize) -> u64 {
    let terms = a.len().min(b.len()).min(out_len).max(1) as u64;
    max_bits(a) + max_bits(b) + bit_length(terms) + 1
}
