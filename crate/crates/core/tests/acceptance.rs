//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cuspsum_core::mellin::{kernel_check, DecompositionConfig};
use cuspsum_core::{
    decomposition_check, delta_via_eisenstein, derivative_transform_check, eigenform, exponent_fit, generate_delta,
    hecke_report, long_interval_mean, partial_sums, theorem_window, window_mean, window_vs_smoothed, Abscissa, Complex,
    EigenformTable, FitTarget, KernelParams, PartialSumTable,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// Covers X + theorem_window(X) at X = 10⁶.
const TABLE_N: usize = 1_020_000;

struct Outcome {
    failures: usize,
}

impl Outcome {
    fn record(&mut self, name: &str, pass: bool, elapsed: Duration, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {name} ({:.2}s) {detail}", elapsed.as_secs_f64());
        if !pass {
            self.failures += 1;
        }
    }
}

fn coefficients(out: &mut Outcome) {
    let t0 = Instant::now();
    let fast = generate_delta(10_000).unwrap();
    let slow = delta_via_eisenstein(10_000).unwrap();
    let elapsed = t0.elapsed();
    let head: Vec<i64> = (1..=6).map(|n| fast.coeff(n).to_i64().unwrap()).collect();
    let equal = fast.q_expansion() == slow.q_expansion();
    let pass = equal && head == [1, -24, 252, -1472, 4830, -6048] && elapsed < Duration::from_secs(5);
    out.record("coefficients", pass, elapsed, format!("equal={equal} head={head:?}"));
}

fn hecke(out: &mut Outcome) {
    let t0 = Instant::now();
    let mut failures = 0;
    for k in [12, 16, 22] {
        failures += hecke_report(&eigenform(k, 10_000).unwrap(), 10_000).total_failures();
    }
    let elapsed = t0.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(10);
    out.record(
        "hecke",
        pass,
        elapsed,
        format!("weights=12,16,22 bound=10000 failures={failures}"),
    );
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// `1 + c·Σ σ_j(n) qⁿ` mod `p`.
fn eisenstein_mod(j: u64, c: i64, n: usize, p: u64) -> Vec<u64> {
    let mut sigma = vec![0u64; n + 1];
    for d in 1..=n {
        let dj = pow_mod(d as u64, j, p);
        for m in (d..=n).step_by(d) {
            sigma[m] = (sigma[m] + dj) % p;
        }
    }
    let c = c.rem_euclid(p as i64) as u64;
    let mut e: Vec<u64> = sigma.iter().map(|&s| mul_mod(c, s, p)).collect();
    e[0] = 1;
    e
}

/// `τ(n) mod p` for each index from `(E₄E₈ − E₆²)/1728`, using `E₄² = E₈`.
/// Each index is one length-n convolution.
fn tau_mod(indices: &[usize], n: usize, p: u64) -> Vec<u64> {
    let e4 = eisenstein_mod(3, 240, n, p);
    let e6 = eisenstein_mod(5, -504, n, p);
    let e8 = eisenstein_mod(7, 480, n, p);
    let inv = pow_mod(1728, p - 2, p);
    indices
        .iter()
        .map(|&i| {
            let mut acc: u128 = 0;
            for j in 0..=i {
                let a = u128::from(e4[j]) * u128::from(e8[i - j]) % u128::from(p);
                let b = u128::from(e6[j]) * u128::from(e6[i - j]) % u128::from(p);
                acc = (acc + a + u128::from(p) - b) % u128::from(p);
            }
            mul_mod(acc as u64, inv, p)
        })
        .collect()
}

fn residue(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
    r.to_u64().unwrap()
}

fn performance(out: &mut Outcome) {
    let n = 1_000_000;
    let t0 = Instant::now();
    let t = generate_delta(n).unwrap();
    let elapsed = t0.elapsed();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let indices: Vec<usize> = (0..100).map(|_| rng.random_range(1..=n)).collect();
    // |τ(n)| < 2^118 for n ≤ 10⁶, so agreement modulo both primes is equality.
    let primes = [(1u64 << 61) - 1, (1u64 << 62) - 57];
    let mut mismatches = 0;
    for p in primes {
        let want = tau_mod(&indices, n, p);
        mismatches += indices
            .iter()
            .zip(&want)
            .filter(|(&i, &w)| residue(t.coeff(i), p) != w)
            .count();
    }
    let pass = mismatches == 0 && elapsed < Duration::from_secs(60);
    out.record(
        "performance",
        pass,
        elapsed,
        format!("N=1000000 spot_indices=100 mismatches={mismatches}"),
    );
}

fn kernel(out: &mut Outcome) {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut all = true;
    for x in [2.0, 10.0, 100.0] {
        for y in [1.0, 5.0, 20.0] {
            let r = kernel_check(&KernelParams::new(x, y).unwrap(), Abscissa::Saddle, 1e-10).unwrap();
            worst = worst.max(r.rel_gap);
            all &= r.pass;
        }
    }
    let elapsed = t0.elapsed();
    let pass = all && elapsed < Duration::from_secs(1);
    out.record(
        "kernel",
        pass,
        elapsed,
        format!("grid=3x3 tol=1e-10 worst_rel_gap={worst:.2e}"),
    );
}

fn derivatives(out: &mut Outcome) {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut all = true;
    for (m, l) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
        for (x, y) in [(2.0, 1.0), (std::f64::consts::E, 2.0), (10.0, 3.0), (100.0, 1.0)] {
            let r = derivative_transform_check(m, l, &KernelParams::new(x, y).unwrap(), 1e-6).unwrap();
            worst = worst.max(r.rel_gap);
            all &= r.pass;
        }
    }
    let elapsed = t0.elapsed();
    let pass = all && elapsed < Duration::from_secs(5);
    out.record(
        "derivatives",
        pass,
        elapsed,
        format!("tol=1e-6 worst_rel_gap={worst:.2e}"),
    );
}

fn decomposition(out: &mut Outcome, t: &EigenformTable, p: &PartialSumTable) {
    let t0 = Instant::now();
    let cfg = DecompositionConfig::default();
    let mut all = true;
    let mut detail = Vec::new();
    for s in [Complex::new(4.0, 0.0), Complex::new(4.0, 3.0)] {
        let a = decomposition_check(t, p, s, 100_000, &cfg).unwrap();
        let b = decomposition_check(t, p, s, 200_000, &cfg).unwrap();
        all &= a.rel_gap <= 1e-6 && a.pass && b.gap < a.gap;
        detail.push(format!(
            "s={s}: rel_gap={:.2e} gap={:.2e}->{:.2e}",
            a.rel_gap, a.gap, b.gap
        ));
    }
    let elapsed = t0.elapsed();
    let pass = all && elapsed < Duration::from_secs(120);
    out.record("decomposition", pass, elapsed, detail.join("; "));
}

fn cn_trend(out: &mut Outcome, p: &PartialSumTable) {
    let t0 = Instant::now();
    let c: Vec<f64> = [1e4, 1e5, 1e6]
        .iter()
        .map(|&x| long_interval_mean(p, x).unwrap())
        .collect();
    let hi = c.iter().cloned().fold(f64::MIN, f64::max);
    let lo = c.iter().cloned().fold(f64::MAX, f64::min);
    let d1 = (c[1] - c[0]).abs();
    let d2 = (c[2] - c[1]).abs();
    let pass = hi <= 1.1 * lo && d2 < d1;
    out.record(
        "cn_trend",
        pass,
        t0.elapsed(),
        format!("C={:.6}/{:.6}/{:.6} diffs={d1:.2e},{d2:.2e}", c[0], c[1], c[2]),
    );
}

fn theorem_windows(out: &mut Outcome, p: &PartialSumTable) {
    let t0 = Instant::now();
    let grid = [1e4, 3e4, 1e5, 3e5, 1e6];
    let stats: Vec<f64> = grid
        .iter()
        .map(|&x| window_mean(p, x, theorem_window(x).unwrap()).unwrap().normalized)
        .collect();
    let hi = stats.iter().cloned().fold(f64::MIN, f64::max);
    let lo = stats.iter().cloned().fold(f64::MAX, f64::min);
    let fit = exponent_fit(p, &grid, 2.0 / 3.0, FitTarget::Raw).unwrap();
    let target = f64::from(p.weight()) - 0.5;
    let pass = hi <= 4.0 * lo && (fit.slope - target).abs() <= 0.15;
    out.record(
        "theorem_window",
        pass,
        t0.elapsed(),
        format!("band={:.3} slope={:.4} target={target}", hi / lo, fit.slope),
    );
}

fn inequality(out: &mut Outcome, p: &PartialSumTable) {
    let t0 = Instant::now();
    let mut all = true;
    let mut cells = 0;
    for x in [1e3, 1e4, 1e5, 5e5] {
        for y in [2.0, 20.0, 200.0] {
            all &= window_vs_smoothed(p, x, y).unwrap().pass;
            cells += 1;
        }
    }
    out.record("inequality", all, t0.elapsed(), format!("cells={cells}"));
}

fn main() -> ExitCode {
    let mut out = Outcome { failures: 0 };
    coefficients(&mut out);
    hecke(&mut out);
    performance(&mut out);
    kernel(&mut out);
    derivatives(&mut out);
    let t = generate_delta(TABLE_N).unwrap();
    let p = partial_sums(&t);
    decomposition(&mut out, &t, &p);
    cn_trend(&mut out, &p);
    theorem_windows(&mut out, &p);
    inequality(&mut out, &p);
    if out.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
