//! The multiple q-polylogarithm `Li_{r+2}(x | q)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SeriesValue;
use crate::cmath::{expm1, CompensatedSum, I};
use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// Smallest `N >= 1` with `k y^(N+1) / ((N+1)(1-y)) <= target`, and that bound.
pub(crate) fn geometric_cutoff(k: f64, y: f64, target: f64) -> (u64, f64) {
    let bound = |n: u64| k * y.powf(n as f64 + 1.0) / ((n as f64 + 1.0) * (1.0 - y));
    let mut n = 1u64;
    while bound(n) > target {
        n = (n * 2).max(n + 1);
    }
    let (mut lo, mut hi) = (n / 2, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (hi.max(1), bound(hi.max(1)))
}

/// `sum_{n>=1} x^n / (n prod_j (1 - q_j^n))` for `Im z > 0`.
pub fn q_polylog(z: Complex64, tau: &[Complex64], cfg: &EvalConfig) -> Result<SeriesValue> {
    if !(z.im > 0.0) {
        return Err(Error::OutsideDomain(
            "q-polylogarithm needs Im z > 0".into(),
        ));
    }
    let mut k = 1.0;
    for (index, t) in tau.iter().enumerate() {
        let gap = -(-2.0 * PI * t.im.abs()).exp_m1();
        if gap < cfg.tail_guard {
            return Err(Error::OnUnitCircle { index });
        }
        k /= gap;
    }
    let y = (-2.0 * PI * z.im).exp();
    let (n_max, tail) = geometric_cutoff(k, y, 0.5 * cfg.tail_guard);
    if n_max > cfg.product_cutoff {
        return Err(Error::NonConvergent(format!("{n_max} series terms needed")));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=n_max {
        let nf = n as f64;
        let mut term = (2.0 * PI * I * z * nf).exp() / nf;
        for t in tau {
            term /= -expm1(2.0 * PI * I * t * nf);
        }
        acc.add(term);
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: tail,
        terms: n_max,
    })
}
