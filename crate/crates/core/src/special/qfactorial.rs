//! The multiple q-shifted factorial `(x | q)_inf`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Evaluation;
use crate::cmath::{ln1p, CompensatedSum, I};
use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// Smallest level `L >= 1` for which the Chernoff bound on the omitted
/// factors is below `target`, together with that bound.
///
/// Factors are indexed by `j` with level `E(j) = l0 + sum_i ell_i (j_i + eps_i)`
/// and `|y_j| = exp(-E(j))`; the omitted ones have `E(j) > L` and contribute
/// at most `sum |y_j| / (1 - |y_j|)` to the logarithm.
pub(crate) fn chernoff_level(l0: f64, ell: &[f64], eps: &[f64], target: f64) -> (f64, f64) {
    let log_p = |theta: f64| -> f64 {
        let mut s = -(1.0 - theta) * l0;
        for (&l, &e) in ell.iter().zip(eps) {
            let a = (1.0 - theta) * l;
            s += -a * e - (-(-a).exp_m1()).ln();
        }
        s
    };
    let grid = (1..200).map(|i| i as f64 / 200.0);
    let shrink = -(-1f64).exp_m1();
    let level = grid
        .clone()
        .map(|theta| (log_p(theta) - (target * shrink).ln()) / theta)
        .fold(f64::INFINITY, f64::min)
        .max(1.0);
    let bound = grid
        .map(|theta| (-theta * level + log_p(theta)).exp())
        .fold(f64::INFINITY, f64::min)
        / -(-level).exp_m1();
    (level, bound)
}

/// Multi-indices `j` (lexicographic order) with `E(j) <= level`.
pub(crate) fn for_each_index<F: FnMut(&[u64]) -> Result<()>>(
    l0: f64,
    ell: &[f64],
    eps: &[f64],
    level: f64,
    mut visit: F,
) -> Result<()> {
    let n = ell.len();
    let mut rest = vec![0.0; n + 1];
    for i in (0..n).rev() {
        rest[i] = rest[i + 1] + ell[i] * eps[i];
    }
    let mut j = vec![0u64; n];
    fn rec<F: FnMut(&[u64]) -> Result<()>>(
        i: usize,
        partial: f64,
        j: &mut Vec<u64>,
        ctx: (&[f64], &[f64], &[f64], f64),
        visit: &mut F,
    ) -> Result<()> {
        let (ell, eps, rest, level) = ctx;
        if i == j.len() {
            return visit(j);
        }
        let mut k = 0u64;
        loop {
            let e = partial + ell[i] * (k as f64 + eps[i]);
            if e + rest[i + 1] > level {
                break;
            }
            j[i] = k;
            rec(i + 1, e, j, ctx, visit)?;
            k += 1;
        }
        j[i] = 0;
        Ok(())
    }
    if l0 + rest[0] > level {
        return Ok(());
    }
    rec(0, l0, &mut j, (ell, eps, &rest, level), &mut visit)
}

/// `(x | q)_inf` with `x = e^{2 pi i z}`, `q_j = e^{2 pi i tau_j}`.
///
/// Parameters with `Im tau_j < 0` enter through `q_j^{-(j+1)}`; with `k` of
/// them the product is raised to `(-1)^k`. The result is symmetric in `tau`.
pub fn q_factorial(z: Complex64, tau: &[Complex64], cfg: &EvalConfig) -> Result<Evaluation> {
    if !z.is_finite() || tau.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("non-finite parameter".into()));
    }
    let mut ell = Vec::with_capacity(tau.len());
    let mut eps = Vec::with_capacity(tau.len());
    let mut shift = Vec::with_capacity(tau.len());
    let mut negatives = 0;
    for (index, t) in tau.iter().enumerate() {
        let l = 2.0 * PI * t.im.abs();
        if -(-l).exp_m1() < cfg.tail_guard {
            return Err(Error::OnUnitCircle { index });
        }
        ell.push(l);
        if t.im < 0.0 {
            negatives += 1;
            eps.push(1.0);
            shift.push(-*t);
        } else {
            eps.push(0.0);
            shift.push(*t);
        }
    }
    let exponent = if negatives % 2 == 0 { 1.0 } else { -1.0 };
    let l0 = 2.0 * PI * z.im;
    let (level, tail) = if tau.is_empty() {
        (l0.max(0.0), 0.0)
    } else {
        chernoff_level(l0, &ell, &eps, 0.5 * cfg.tail_guard)
    };
    let mut acc = CompensatedSum::new();
    let mut count = 0u64;
    let mut zero = false;
    let mut visit = |j: &[u64]| -> Result<()> {
        count += 1;
        if count > cfg.product_cutoff {
            return Err(Error::NonConvergent(format!(
                "more than {} factors needed",
                cfg.product_cutoff
            )));
        }
        let mut w = z;
        for ((&k, &s), &e) in j.iter().zip(&shift).zip(&eps) {
            w += s * (k as f64 + e);
        }
        let y = (2.0 * PI * I * w).exp();
        if y == Complex64::new(1.0, 0.0) {
            zero = true;
        } else {
            acc.add(ln1p(-y));
        }
        Ok(())
    };
    if tau.is_empty() {
        visit(&[])?;
    } else {
        for_each_index(l0, &ell, &eps, level, &mut visit)?;
    }
    if zero {
        if exponent < 0.0 {
            return Err(Error::NonConvergent("z is at a pole".into()));
        }
        return Ok(Evaluation {
            value: Complex64::new(0.0, 0.0),
            log: Complex64::new(f64::NEG_INFINITY, 0.0),
            tail_bound: tail,
            cutoff_used: level,
            factors: count,
        });
    }
    Ok(Evaluation::from_log(
        acc.value() * exponent,
        tail,
        level,
        count,
    ))
}
