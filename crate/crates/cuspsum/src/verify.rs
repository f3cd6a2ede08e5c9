//! Verification suites and their JSON reports.

use std::f64::consts::E;

use clap::ValueEnum;
use cuspsum_core::mellin::{kernel_check, DecompositionConfig};
use cuspsum_core::{
    decomposition_check, derivative_transform_check, hecke_report, partial_sums, Abscissa, Complex, EigenformTable,
    KernelParams, MellinError,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Kernel,
    Transform,
    Decomposition,
    Hecke,
}

impl Suite {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Kernel => 1e-10,
            Suite::Transform | Suite::Decomposition => 1e-6,
            Suite::Hecke => 0.0,
        }
    }

    /// Table size the suite needs, if any.
    pub fn default_n(self) -> Option<usize> {
        match self {
            Suite::Kernel | Suite::Transform => None,
            Suite::Decomposition => Some(100_000),
            Suite::Hecke => Some(10_000),
        }
    }
}

/// One JSON record. `lhs`/`rhs` are numbers, or `[re, im]` for complex values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub rel_gap: Option<f64>,
    pub certified_error: Option<f64>,
    pub pass: bool,
}

fn complex(z: Complex) -> Value {
    json!([z.re, z.im])
}

pub const KERNEL_GRID: [(f64, f64); 9] = [
    (2.0, 1.0),
    (2.0, 5.0),
    (2.0, 20.0),
    (10.0, 1.0),
    (10.0, 5.0),
    (10.0, 20.0),
    (100.0, 1.0),
    (100.0, 5.0),
    (100.0, 20.0),
];

pub fn kernel_suite(tolerance: f64) -> Result<Vec<CheckReport>, MellinError> {
    KERNEL_GRID
        .iter()
        .map(|&(x, y)| {
            let r = kernel_check(&KernelParams::new(x, y)?, Abscissa::Saddle, tolerance)?;
            Ok(CheckReport {
                check: "kernel".into(),
                params: json!({ "X": x, "y": y, "sigma": r.sigma, "t_max": r.t_max, "h": r.h, "tolerance": tolerance }),
                lhs: json!(r.quadrature),
                rhs: json!(r.closed_form),
                rel_gap: Some(r.rel_gap),
                certified_error: Some(r.step_change + r.tail_bound),
                pass: r.pass,
            })
        })
        .collect()
}

pub const TRANSFORM_ORDERS: [(u32, u32); 4] = [(0, 0), (1, 0), (1, 1), (2, 1)];
pub const TRANSFORM_POINTS: [(f64, f64); 3] = [(2.0, 1.0), (E, 2.0), (10.0, 3.0)];

pub fn transform_suite(tolerance: f64) -> Result<Vec<CheckReport>, MellinError> {
    let mut out = Vec::new();
    for (m, l) in TRANSFORM_ORDERS {
        for (x, y) in TRANSFORM_POINTS {
            let r = derivative_transform_check(m, l, &KernelParams::new(x, y)?, tolerance)?;
            out.push(CheckReport {
                check: "transform".into(),
                params: json!({
                    "m": m, "l": l, "X": x, "y": y, "fd_step": r.fd_step,
                    "envelope": r.envelope, "within_envelope": r.within_envelope, "tolerance": tolerance,
                }),
                lhs: json!(r.lhs),
                rhs: json!(r.rhs),
                rel_gap: Some(r.rel_gap),
                certified_error: None,
                pass: r.pass,
            });
        }
    }
    Ok(out)
}

pub const DECOMPOSITION_POINTS: [(f64, f64); 2] = [(4.0, 0.0), (4.0, 3.0)];

pub fn decomposition_suite(t: &EigenformTable, tolerance: f64) -> Result<Vec<CheckReport>, MellinError> {
    let p = partial_sums(t);
    let cfg = DecompositionConfig {
        tolerance,
        ..DecompositionConfig::default()
    };
    DECOMPOSITION_POINTS
        .iter()
        .map(|&(re, im)| {
            let s = Complex::new(re, im);
            let r = decomposition_check(t, &p, s, t.n_max(), &cfg)?;
            Ok(CheckReport {
                check: "decomposition".into(),
                params: json!({
                    "s": [re, im], "weight": r.weight, "N": r.n, "sigma_z": r.sigma_z,
                    "t_max": r.t_max, "h": r.h, "tolerance": tolerance,
                }),
                lhs: complex(r.lhs),
                rhs: complex(r.rhs),
                rel_gap: Some(r.rel_gap),
                certified_error: Some(r.certified_error),
                pass: r.pass,
            })
        })
        .collect()
}

pub fn hecke_suite(t: &EigenformTable) -> Vec<CheckReport> {
    let r = hecke_report(t, t.n_max());
    let first = r.first_failure.map(|f| format!("{f:?}"));
    vec![CheckReport {
        check: "hecke".into(),
        params: json!({
            "weight": t.weight(),
            "bound": r.bound,
            "multiplicative_checked": r.multiplicative_checked,
            "recursion_checked": r.recursion_checked,
            "deligne_checked": r.deligne_checked,
            "first_failure": first,
        }),
        lhs: json!(r.total_failures()),
        rhs: json!(0),
        rel_gap: None,
        certified_error: None,
        pass: r.passed(),
    }]
}
