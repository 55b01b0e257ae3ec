//! The multiple elliptic gamma functions `G_r`.

use num_complex::Complex64;

use super::{q_factorial, share_guard, Evaluation};
use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// `G_r(z | tau_0, ..., tau_r) = (x^{-1} q_0 ... q_r | q)_inf (x | q)_inf^{(-1)^r}`
/// with `r = tau.len() - 1`.
pub fn multiple_elliptic_gamma(
    z: Complex64,
    tau: &[Complex64],
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    if tau.is_empty() {
        return Err(Error::InvalidInput("G_r needs at least one period".into()));
    }
    let r = tau.len() - 1;
    let total: Complex64 = tau.iter().sum();
    let cfg = &share_guard(cfg, 2);
    let a = q_factorial(total - z, tau, cfg)?;
    let b = q_factorial(z, tau, cfg)?;
    Ok(a.times(b.pow(if r.is_multiple_of(2) { 1 } else { -1 })))
}
