//! Exact Fourier coefficients of level-one Hecke eigenforms, short-interval
//! mean squares of their partial sums, and numerical checks of the Gaussian
//! Mellin kernel and of the three-term decomposition of
//! `D(s, S_f × S_f) = Σ |S_f(n)|² / n^{s+k-1}`.
//!
//! Everything integer-valued (coefficients, partial sums, Dirichlet
//! coefficients) is exact; floating point only appears once a statistic or a
//! complex special function is formed.
//!
//! The crate is `no_std` + `alloc`. The `std` feature (default) only matters
//! for `parallel`, which spreads NTT primes and quadrature nodes over rayon.

#![no_std]
#![allow(
    clippy::many_single_char_names,
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::wrong_self_convention
)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod forms;
pub mod mellin;
pub mod numeric;
pub mod special;
pub mod sums;

pub use forms::{
    delta_via_eisenstein, eigenform, eisenstein, eta_cubed_sparse, generate_delta, hecke_report, series_mul,
    series_square, EigenformTable, FormsError, HeckeFailure, HeckeReport, IntegerSeries, SUPPORTED_WEIGHTS,
};
pub use mellin::{
    decomposition_check, derivative_transform_check, dirichlet_eval, kernel_closed_form, kernel_line_integral,
    w_coefficients, Abscissa, DecompositionReport, DerivativeReport, DirichletSeries, KernelParams, LineIntegralSpec,
    MellinError, TailModel,
};
pub use special::{log_beta, log_gamma, log_gamma_ratio, zeta, SpecialError};
pub use sums::{
    exponent_fit, long_interval_mean, partial_sums, smoothed_second_moment, theorem_window, window_mean,
    window_vs_smoothed, FitResult, FitTarget, InequalityReport, PartialSumTable, SmoothedMoment, SumsError, WindowStat,
};

/// Complex scalar used by the special functions and contour integrals.
pub type Complex = num_complex::Complex64;
