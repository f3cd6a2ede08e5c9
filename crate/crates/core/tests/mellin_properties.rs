use std::sync::OnceLock;

use cuspsum_core::mellin::{default_kernel_spec, kernel_check, DecompositionConfig, DirichletSeries, TailModel};
use cuspsum_core::{
    decomposition_check, derivative_transform_check, dirichlet_eval, generate_delta, kernel_closed_form,
    kernel_line_integral, partial_sums, w_coefficients, Abscissa, Complex, EigenformTable, KernelParams,
    PartialSumTable,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn delta(n: usize) -> (EigenformTable, PartialSumTable) {
    let t = generate_delta(n).unwrap();
    let p = partial_sums(&t);
    (t, p)
}

fn delta_1e5() -> &'static (EigenformTable, PartialSumTable) {
    static CELL: OnceLock<(EigenformTable, PartialSumTable)> = OnceLock::new();
    CELL.get_or_init(|| delta(100_000))
}

#[test]
fn kernel_identity_on_the_grid() {
    for x in [2.0, 10.0, 100.0] {
        for y in [1.0, 5.0, 20.0] {
            let r = kernel_check(&KernelParams::new(x, y).unwrap(), Abscissa::Saddle, 1e-10).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.step_change < 1e-11, "{r:?}");
        }
    }
}

#[test]
fn kernel_line_integral_at_unit_center() {
    let p = KernelParams::new(1.0, 5.0).unwrap();
    let spec = default_kernel_spec(&p, Abscissa::Saddle);
    let v = kernel_line_integral(&p, &spec).unwrap();
    assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-10 / (2.0 * std::f64::consts::PI));
    assert_eq!(kernel_closed_form(&p), 1.0 / (2.0 * std::f64::consts::PI));
}

#[test]
fn derivative_transforms() {
    for (m, l) in [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2), (4, 0)] {
        for (x, y) in [(2.0, 1.0), (std::f64::consts::E, 2.0), (10.0, 3.0)] {
            let tol = if m <= 2 { 1e-6 } else { 1e-4 };
            let r = derivative_transform_check(m, l, &KernelParams::new(x, y).unwrap(), tol).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.lhs_imag.abs() <= 1e-10 * r.lhs.abs());
        }
    }
}

#[test]
fn w_coefficient_examples() {
    let (t, p) = delta(10);
    let w = w_coefficients(&t, &p, 10).unwrap();
    assert_eq!(w[1], BigInt::from(1));
    assert_eq!(w[2], BigInt::from(528));
    assert_eq!(w[3], BigInt::from(51912));
    // S(n)² = Σ_{m≤n} w(m)
    let mut acc = BigInt::from(0);
    for (n, wn) in w.iter().enumerate().skip(1) {
        acc += wn;
        assert_eq!(acc, p.sum(n) * p.sum(n));
    }
    assert!(w_coefficients(&t, &p, 11).is_err());
}

#[test]
fn single_coefficient_series() {
    let e1 = DirichletSeries::new(&[BigInt::from(0), BigInt::from(1)], 11.0, TailModel::FiniteSupport);
    let v = dirichlet_eval(&e1, Complex::new(-30.0, 7.0), 1).unwrap();
    assert_eq!(v.value, Complex::new(1.0, 0.0));
    assert_eq!(v.tail_bound, 0.0);
}

#[test]
fn dirichlet_value_at_four() {
    let (_, p) = delta_1e5();
    let d = DirichletSeries::squared_partial_sums(p, 100_000).unwrap();
    let v = dirichlet_eval(&d, Complex::new(4.0, 0.0), 100_000).unwrap();
    assert!(v.tail_bound < 1e-8);
    let anchor = 1.021_977_898_582_296_7;
    assert!((v.value.re - anchor).abs() < 1e-14, "{}", v.value.re);
    assert_eq!(v.value.im, 0.0);
    // Tail soundness: adding terms 50 001..100 000 moves the value by less
    // than the bound reported at 50 000.
    let half = dirichlet_eval(&d, Complex::new(4.0, 0.0), 50_000).unwrap();
    assert!((v.value - half.value).norm() < half.tail_bound);
}

#[test]
fn dirichlet_abscissa_is_enforced() {
    let (_, p) = delta_1e5();
    let d = DirichletSeries::squared_partial_sums(p, 1000).unwrap();
    // |S|² ≤ c·n^{k−1+2/3}: abscissa 5/3, margin 1/6.
    assert!(dirichlet_eval(&d, Complex::new(1.8, 0.0), 1000).is_err());
    assert!(dirichlet_eval(&d, Complex::new(1.84, 0.0), 1000).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_conjugate_symmetry(re in 3.0f64..8.0, im in -30.0f64..30.0) {
        let (t, p) = delta_1e5();
        let w = DirichletSeries::w_series(t, p, 5000).unwrap();
        let s = Complex::new(re, im);
        let a = dirichlet_eval(&w, s, 5000).unwrap().value;
        let b = dirichlet_eval(&w, s.conj(), 5000).unwrap().value;
        prop_assert!((a.conj() - b).norm() <= 1e-15 * a.norm().max(1.0));
    }

    #[test]
    fn tail_bounds_are_sound(re in 2.0f64..6.0, im in -10.0f64..10.0, n in 100usize..20_000) {
        let (t, p) = delta_1e5();
        let w = DirichletSeries::w_series(t, p, 2 * n).unwrap();
        let s = Complex::new(re, im);
        let short = dirichlet_eval(&w, s, n).unwrap();
        let long = dirichlet_eval(&w, s, 2 * n).unwrap();
        prop_assert!((long.value - short.value).norm() <= short.tail_bound);
    }
}

#[test]
fn decomposition_at_desk_scale() {
    let (t, p) = delta_1e5();
    let cfg = DecompositionConfig::default();
    for s in [Complex::new(4.0, 0.0), Complex::new(4.0, 3.0), Complex::new(3.0, -1.0)] {
        let r = decomposition_check(t, p, s, 20_000, &cfg).unwrap();
        assert!(r.rel_gap <= r.certified_error, "{r:?}");
        if s.re >= 4.0 {
            assert!(r.pass, "{r:?}");
        }
        let rc = decomposition_check(t, p, s.conj(), 20_000, &cfg).unwrap();
        assert!((rc.lhs - r.lhs.conj()).norm() < 1e-15);
        assert!((rc.rhs - r.rhs.conj()).norm() < 1e-14);
    }
}

#[test]
fn decomposition_other_contour() {
    let (t, p) = delta(5000);
    let cfg = DecompositionConfig {
        sigma_z: 0.3,
        ..DecompositionConfig::default()
    };
    let r = decomposition_check(&t, &p, Complex::new(5.0, 1.0), 5000, &cfg).unwrap();
    assert!(r.rel_gap < 1e-12 && r.rel_gap <= r.certified_error, "{r:?}");
}

#[test]
fn small_table_is_a_negative_control() {
    let (t, p) = delta(1000);
    let r = decomposition_check(&t, &p, Complex::new(4.0, 0.0), 1000, &DecompositionConfig::default()).unwrap();
    assert!(!r.pass);
    assert!(r.certified_error > r.tolerance);
}
