use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;

use super::EigenformTable;

/// The first invariant that failed, in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeFailure {
    /// `a(mn) ≠ a(m)a(n)` for coprime `m < n`.
    Multiplicativity { m: usize, n: usize },
    /// `a(p^{r+1}) ≠ a(p)a(p^r) − p^{k−1}a(p^{r−1})`.
    PrimePower { p: usize, exponent: u32 },
    /// `|a(p)| > 2p^{(k−1)/2}`.
    Deligne { p: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeReport {
    pub bound: usize,
    pub multiplicative_checked: u64,
    pub multiplicative_failures: u64,
    pub recursion_checked: u64,
    pub recursion_failures: u64,
    pub deligne_checked: u64,
    pub deligne_failures: u64,
    pub first_failure: Option<HeckeFailure>,
}

impl HeckeReport {
    pub fn total_failures(&self) -> u64 {
        self.multiplicative_failures + self.recursion_failures + self.deligne_failures
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    fn record(&mut self, failure: HeckeFailure) {
        if self.first_failure.is_none() {
            self.first_failure = Some(failure);
        }
    }
}

fn primes_up_to(n: usize) -> Vec<usize> {
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Check multiplicativity on coprime pairs, the prime-power recursion and
/// the Deligne bound at primes, for all indices up to `bound`.
///
/// Failures are counted, never raised. `bound` is clamped to the table size.
pub fn hecke_report(t: &EigenformTable, bound: usize) -> HeckeReport {
    let bound = bound.min(t.n_max());
    let k = t.weight();
    let mut report = HeckeReport {
        bound,
        ..HeckeReport::default()
    };

    for m in 2..=bound {
        let mut n = m + 1;
        while m * n <= bound {
            if m.gcd(&n) == 1 {
                report.multiplicative_checked += 1;
                if t.coeff(m) * t.coeff(n) != *t.coeff(m * n) {
                    report.multiplicative_failures += 1;
                    report.record(HeckeFailure::Multiplicativity { m, n });
                }
            }
            n += 1;
        }
    }

    for p in primes_up_to(bound) {
        let pk1: BigInt = BigInt::from(p).pow(k - 1);
        let (mut prev, mut cur, mut r) = (1usize, p, 1u32);
        while let Some(next) = cur.checked_mul(p).filter(|&x| x <= bound) {
            report.recursion_checked += 1;
            let want = t.coeff(p) * t.coeff(cur) - &pk1 * t.coeff(prev);
            if want != *t.coeff(next) {
                report.recursion_failures += 1;
                report.record(HeckeFailure::PrimePower { p, exponent: r + 1 });
            }
            prev = cur;
            cur = next;
            r += 1;
        }

        report.deligne_checked += 1;
        let ap = t.coeff(p);
        if ap * ap > BigInt::from(4) * &pk1 {
            report.deligne_failures += 1;
            report.record(HeckeFailure::Deligne { p });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::generate_delta;

    #[test]
    fn delta_passes() {
        let t = generate_delta(2000).unwrap();
        let r = hecke_report(&t, 2000);
        assert!(r.passed(), "{r:?}");
        assert!(r.multiplicative_checked > 1000);
        assert!(r.recursion_checked > 10);
    }

    #[test]
    fn corrupted_coefficient_is_located() {
        let mut t = generate_delta(100).unwrap();
        *t.coeff_mut(6) += 1;
        let r = hecke_report(&t, 100);
        assert!(!r.passed());
        assert_eq!(r.first_failure, Some(HeckeFailure::Multiplicativity { m: 2, n: 3 }));
    }

    #[test]
    fn corrupted_prime_power_and_deligne() {
        let mut t = generate_delta(50).unwrap();
        *t.coeff_mut(8) += 1;
        // Bound 8 keeps (3, 8) out of the multiplicativity pairs.
        let r = hecke_report(&t, 8);
        assert_eq!(r.first_failure, Some(HeckeFailure::PrimePower { p: 2, exponent: 3 }));

        let mut t = generate_delta(50).unwrap();
        // 2·7^5.5 ≈ 88 900; push a(7) beyond it.
        *t.coeff_mut(7) = BigInt::from(100_000);
        let r = hecke_report(&t, 6);
        assert!(r.passed());
        let r = hecke_report(&t, 7);
        assert_eq!(r.first_failure, Some(HeckeFailure::Deligne { p: 7 }));
    }

    #[test]
    fn bound_one_is_vacuous() {
        let t = generate_delta(10).unwrap();
        let r = hecke_report(&t, 1);
        assert!(r.passed());
        assert_eq!(r.multiplicative_checked + r.recursion_checked + r.deligne_checked, 0);
    }
}
