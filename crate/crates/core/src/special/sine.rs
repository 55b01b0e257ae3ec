//! The multiple sine functions `S_r` through their infinite product forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{q_factorial, share_guard, Evaluation};
use crate::bernoulli::classical_bernoulli;
use crate::cmath::I;
use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// Which of the two product representations to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductForm {
    /// `exp((-1)^r pi i B / r!) prod (x_k | q_k)_inf`.
    #[default]
    First,
    /// `exp((-1)^(r+1) pi i B / r!) prod (x_k^{-1} | q_k^{-1})_inf`.
    Second,
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Sign `(-1)^r` of the Bernoulli prefactor for the given form.
pub(crate) fn prefactor_sign(r: usize, form: ProductForm) -> f64 {
    let even = r.is_multiple_of(2);
    match (form, even) {
        (ProductForm::First, true) | (ProductForm::Second, false) => 1.0,
        _ => -1.0,
    }
}

/// `log (x | q)_inf` (first form) or `log (x^{-1} | q^{-1})_inf` (second form)
/// at `x = e^{2 pi i w}`, `q_j = e^{2 pi i ratios_j}`.
pub(crate) fn corner_factor(
    w: Complex64,
    ratios: &[Complex64],
    form: ProductForm,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    match form {
        ProductForm::First => q_factorial(w, ratios, cfg),
        ProductForm::Second => {
            let neg: Vec<Complex64> = ratios.iter().map(|t| -t).collect();
            q_factorial(-w, &neg, cfg)
        }
    }
}

/// `S_r(z | omega)`, `r = omega.len()`. For `r = 1` the closed form
/// `2 sin(pi z / omega)`; for `r >= 2` the product representation, which
/// needs `Im(omega_j / omega_k) != 0` for `j != k`.
pub fn multiple_sine(
    z: Complex64,
    omega: &[Complex64],
    form: ProductForm,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let r = omega.len();
    if r == 0 {
        return Err(Error::InvalidInput("S_r needs at least one period".into()));
    }
    if omega.iter().any(|w| w.norm() == 0.0) {
        return Err(Error::ZeroPeriod);
    }
    if r == 1 {
        return Ok(Evaluation::exact(2.0 * (PI * z / omega[0]).sin()));
    }
    let b = classical_bernoulli(r, z, omega)?;
    let mut out = Evaluation::exact(Complex64::new(1.0, 0.0))
        .times_exp(prefactor_sign(r, form) * PI * I * b / factorial(r));
    for k in 0..r {
        let ratios: Vec<Complex64> = (0..r)
            .filter(|&j| j != k)
            .map(|j| omega[j] / omega[k])
            .collect();
        if ratios.iter().any(|q| q.im.abs() < cfg.ratio_guard) {
            let mut ray = vec![0; r];
            ray[k] = 1;
            return Err(Error::DegenerateRatios { ray });
        }
        out = out.times(corner_factor(
            z / omega[k],
            &ratios,
            form,
            &share_guard(cfg, r),
        )?);
    }
    Ok(out)
}
