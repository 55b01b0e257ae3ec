//! Numerical evaluation of q-shifted factorials, q-polylogarithms, multiple
//! elliptic gamma and multiple sine functions, and their cone generalizations.
//!
//! Infinite products are accumulated as sums of principal logarithms and
//! exponentiated once at the end. Every truncated evaluation reports a
//! rigorous bound on the absolute error of that logarithm, which bounds the
//! relative error of the value by `exp(bound) - 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::EvalConfig;

mod gamma;
mod generalized;
mod polylog;
mod qfactorial;
mod sine;

pub use gamma::multiple_elliptic_gamma;
pub use generalized::{
    generalized_elliptic_gamma_c, generalized_multiple_sine_c, generalized_q_factorial_c,
    generalized_q_polylog_c, GammaMethod,
};
pub use polylog::q_polylog;
pub use qfactorial::q_factorial;
pub use sine::{multiple_sine, ProductForm};

/// A value given through its logarithm, with truncation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: Complex64,
    /// A logarithm of `value` (any branch).
    pub log: Complex64,
    /// Bound on the absolute error of `log` caused by truncation.
    pub tail_bound: f64,
    /// The truncation level actually used (on the scale of `-ln |factor - 1|`).
    pub cutoff_used: f64,
    /// Number of factors or series terms evaluated.
    pub factors: u64,
}

impl Evaluation {
    pub fn from_log(log: Complex64, tail_bound: f64, cutoff_used: f64, factors: u64) -> Self {
        Evaluation {
            value: log.exp(),
            log,
            tail_bound,
            cutoff_used,
            factors,
        }
    }

    /// An exact value (no truncation).
    pub fn exact(value: Complex64) -> Self {
        Evaluation {
            value,
            log: value.ln(),
            tail_bound: 0.0,
            cutoff_used: 0.0,
            factors: 1,
        }
    }

    /// `self^k` for an integer `k`.
    pub fn pow(self, k: i32) -> Self {
        Evaluation::from_log(
            self.log * k as f64,
            self.tail_bound * k.unsigned_abs() as f64,
            self.cutoff_used,
            self.factors,
        )
    }

    /// Product of two evaluations; diagnostics are combined.
    pub fn times(self, other: Evaluation) -> Self {
        Evaluation::from_log(
            self.log + other.log,
            self.tail_bound + other.tail_bound,
            self.cutoff_used.max(other.cutoff_used),
            self.factors + other.factors,
        )
    }

    /// Multiplication by `exp(w)`.
    pub fn times_exp(self, w: Complex64) -> Self {
        Evaluation::from_log(
            self.log + w,
            self.tail_bound,
            self.cutoff_used,
            self.factors,
        )
    }
}

/// `cfg` with the tail budget shared among `parts` factors, so that the
/// combined bound of a composite evaluation stays within `cfg.tail_guard`.
pub(crate) fn share_guard(cfg: &EvalConfig, parts: usize) -> EvalConfig {
    EvalConfig {
        tail_guard: cfg.tail_guard / parts.max(1) as f64,
        ..cfg.clone()
    }
}

/// A truncated series value with its tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Bound on the absolute value of the omitted tail.
    pub tail_bound: f64,
    /// Number of terms summed.
    pub terms: u64,
}
