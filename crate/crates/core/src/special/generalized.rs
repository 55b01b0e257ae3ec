//! Cone generalizations: `Li^C`, `(x|q)^C_inf`, `S_r^C` and `G_{r-1}^C`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::polylog::geometric_cutoff;
use super::sine::{corner_factor, factorial, prefactor_sign};
use super::{multiple_sine, share_guard, Evaluation, ProductForm, SeriesValue};
use crate::bernoulli::{generalized_bernoulli, Region};
use crate::cmath::{expm1, ln1p, CompensatedSum, I};
use crate::cone::{require_good, Cone, IntVector};
use crate::cone_sums::{cutoff_for_tail, dual_margin, enumerate_truncated, lattice_tail_bound};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::sl::all_k_rho;
use crate::subdivision::{
    default_complex, inclusion_exclusion_complex, subdivide_avoiding_ray, SignedComplex,
};

/// How to evaluate `G_{r-1}^C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMethod {
    /// Truncated lattice product; needs `Im tau` in the interior of the dual cone.
    #[default]
    Direct,
    /// Through `Li^C` and `Li^{C°}`; needs `Im z` in the strip where both converge.
    Polylog,
}

/// Runs `f` on the default signed complex of `c`, retrying once with a
/// subdivision avoiding the offending ray if a spurious near-pole is hit.
fn with_complex<T, F: Fn(&SignedComplex) -> Result<T>>(c: &Cone, f: F) -> Result<T> {
    let sc = default_complex(c)?;
    match f(&sc) {
        Err(Error::NearPole {
            ray,
            genuine: false,
        }) => {
            let pieces = subdivide_avoiding_ray(c, &IntVector(ray))?;
            f(&inclusion_exclusion_complex(c, &pieces)?)
        }
        other => other,
    }
}

/// `sum_{n>=1} e^{2 pi i z n} / n * sum_{m in region} e^{2 pi i n (m . tau)}`, with the
/// inner sum in closed form; converges when `|x| e^{-2 pi D} < 1`, `D` the
/// smallest decay rate among the terms.
fn cone_polylog(
    sc: &SignedComplex,
    z: Complex64,
    tau: &[Complex64],
    region: Region,
    cfg: &EvalConfig,
) -> Result<SeriesValue> {
    let c = &sc.source;
    let r = c.dim();
    if tau.len() != r {
        return Err(Error::InvalidInput(format!("tau must have length {r}")));
    }
    let scale = tau.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidInput("tau must be nonzero and finite".into()));
    }
    // per-term pairings g . tau, prefactor bound and decay rate
    let mut pairings = Vec::with_capacity(sc.terms.len());
    let mut rho = 0.0;
    let mut decay = f64::INFINITY;
    for t in &sc.terms {
        let mut gs = Vec::with_capacity(t.dim);
        let mut ct = 1.0;
        let mut dt = 0.0;
        for g in &t.generators {
            let p: Complex64 = g.0.iter().zip(tau).map(|(&k, &w)| w * k as f64).sum();
            if p.im.abs() < cfg.pole_guard * scale {
                return Err(Error::NearPole {
                    ray: g.0.clone(),
                    genuine: c.generator_index(g).is_some(),
                });
            }
            let s = 2.0 * PI * p.im.abs();
            ct /= -(-s).exp_m1();
            let decays = match region {
                Region::Closed => p.im < 0.0,
                Region::Interior => p.im > 0.0,
            };
            if decays {
                dt += s;
            }
            gs.push(p);
        }
        rho += ct;
        decay = decay.min(dt);
        pairings.push(gs);
    }
    let y = (-2.0 * PI * z.im - decay).exp();
    if !(y < 1.0) {
        return Err(Error::OutsideDomain(
            "cone polylogarithm diverges at this Im z".into(),
        ));
    }
    let (n_max, tail) = geometric_cutoff(rho, y, 0.5 * cfg.tail_guard);
    if n_max.saturating_mul(sc.terms.len() as u64) > cfg.product_cutoff {
        return Err(Error::NonConvergent(format!("{n_max} series terms needed")));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=n_max {
        let nf = n as f64;
        let mut inner = CompensatedSum::new();
        for (t, gs) in sc.terms.iter().zip(&pairings) {
            let mut term = Complex64::new(1.0, 0.0);
            for &p in gs {
                let x = -2.0 * PI * I * nf * p;
                term /= match region {
                    Region::Closed => -expm1(-x),
                    Region::Interior => expm1(x),
                };
            }
            if region == Region::Closed {
                term *= t.sign as f64;
            }
            inner.add(term);
        }
        acc.add((2.0 * PI * I * z * nf).exp() / nf * inner.value());
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: tail,
        terms: n_max,
    })
}

/// `Li^C(z | tau)` (or `Li^{C°}`) for `Im z > 0`.
pub fn generalized_q_polylog_c(
    c: &Cone,
    z: Complex64,
    tau: &[Complex64],
    region: Region,
    cfg: &EvalConfig,
) -> Result<SeriesValue> {
    if !(z.im > 0.0) {
        return Err(Error::OutsideDomain("Li^C needs Im z > 0".into()));
    }
    with_complex(c, |sc| cone_polylog(sc, z, tau, region, cfg))
}

/// `(x | q)^C_inf = exp(-Li^C(z | tau))` (or the interior version).
pub fn generalized_q_factorial_c(
    c: &Cone,
    z: Complex64,
    tau: &[Complex64],
    region: Region,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let li = generalized_q_polylog_c(c, z, tau, region, cfg)?;
    Ok(Evaluation::from_log(
        -li.value,
        li.tail_bound,
        li.terms as f64,
        li.terms,
    ))
}

/// `S_r^C(z | omega)` for a good cone of dimension `r >= 2`, through the
/// product over the cone generators; needs `Im((K_rho omega)_j / (K_rho omega)_1) != 0`.
/// A one-dimensional cone gives `2 sin(pi z / omega)`.
pub fn generalized_multiple_sine_c(
    c: &Cone,
    z: Complex64,
    omega: &[Complex64],
    form: ProductForm,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let r = c.dim();
    if omega.len() != r {
        return Err(Error::InvalidInput(format!("omega must have length {r}")));
    }
    require_good(c)?;
    if r == 1 {
        return multiple_sine(z, omega, form, cfg);
    }
    let maps = all_k_rho(c)?;
    let mut corners = Vec::with_capacity(maps.len());
    for k in &maps {
        let (a1, ratios) = k.ratios(omega);
        if a1.norm() == 0.0 || ratios.iter().any(|q| q.im.abs() < cfg.ratio_guard) {
            return Err(Error::DegenerateRatios {
                ray: k.source_ray.0.clone(),
            });
        }
        corners.push((a1, ratios));
    }
    let b = generalized_bernoulli(c, r, z, omega, Region::Closed)?.value;
    let mut out = Evaluation::exact(Complex64::new(1.0, 0.0))
        .times_exp(prefactor_sign(r, form) * PI * I * b / factorial(r));
    let sub = share_guard(cfg, corners.len());
    for (a1, ratios) in corners {
        out = out.times(corner_factor(z / a1, &ratios, form, &sub)?);
    }
    Ok(out)
}

/// `G_{r-1}^C(z | tau) = [(x|q)^C_inf]^{(-1)^(r-1)} (x^{-1}|q)^{C°}_inf` for a cone of dimension `r`.
pub fn generalized_elliptic_gamma_c(
    c: &Cone,
    z: Complex64,
    tau: &[Complex64],
    method: GammaMethod,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let r = c.dim();
    if tau.len() != r {
        return Err(Error::InvalidInput(format!("tau must have length {r}")));
    }
    let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
    match method {
        GammaMethod::Direct => direct_gamma(c, z, tau, sign, cfg),
        GammaMethod::Polylog => with_complex(c, |sc| {
            let a = cone_polylog(sc, z, tau, Region::Closed, cfg)?;
            let b = cone_polylog(sc, -z, tau, Region::Interior, cfg)?;
            Ok(Evaluation::from_log(
                -sign * a.value - b.value,
                a.tail_bound + b.tail_bound,
                a.terms.max(b.terms) as f64,
                a.terms + b.terms,
            ))
        }),
    }
}

fn direct_gamma(
    c: &Cone,
    z: Complex64,
    tau: &[Complex64],
    sign: f64,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let r = c.dim();
    let a: Vec<f64> = tau.iter().map(|t| 2.0 * PI * t.im).collect();
    let delta = dual_margin(c, &a);
    if !(delta > 0.0) {
        return Err(Error::OutsideDomain(
            "direct product needs Im tau in the interior of the dual cone".into(),
        ));
    }
    // |e^{2 pi i (+-z + n . tau)}| <= big * e^{-n . a}
    let big = (2.0 * PI * z.im.abs()).exp();
    let target = 0.5 * cfg.tail_guard;
    let cutoff = cutoff_for_tail(r, delta, target / (4.0 * big)).max((2.0 * big).ln());
    let tail = 4.0 * big * lattice_tail_bound(r, delta, cutoff);
    let mut acc = CompensatedSum::new();
    let mut count = 0u64;
    for (strict, w, s) in [(false, z, sign), (true, -z, 1.0)] {
        let mut part = CompensatedSum::new();
        enumerate_truncated(c, &a, cutoff, strict, |n| {
            let p: Complex64 = n.iter().zip(tau).map(|(&k, &t)| t * k as f64).sum();
            part.add(ln1p(-(2.0 * PI * I * (w + p)).exp()));
            count += 1;
        });
        acc.add(part.value() * s);
    }
    if count > cfg.product_cutoff {
        return Err(Error::NonConvergent(format!("{count} factors needed")));
    }
    Ok(Evaluation::from_log(acc.value(), tail, cutoff, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmath::rel_err_log;
    use crate::cone::make_cone;
    use crate::special::{multiple_elliptic_gamma, q_factorial, q_polylog};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn iv(v: &[i64]) -> IntVector {
        IntVector(v.to_vec())
    }

    fn conifold() -> Cone {
        make_cone(vec![
            iv(&[0, 0, 1]),
            iv(&[1, 0, 1]),
            iv(&[0, 1, 1]),
            iv(&[1, 1, 1]),
        ])
        .unwrap()
    }

    #[test]
    fn standard_cone_reductions() {
        let cfg = EvalConfig::default();
        let z = c(0.2, 0.15);
        let tau = [c(0.3, 0.5), c(-0.2, 0.7)];
        let s2 = Cone::standard(2);
        let li = generalized_q_polylog_c(&s2, z, &tau, Region::Closed, &cfg).unwrap();
        let li0 = q_polylog(z, &tau, &cfg).unwrap();
        assert!((li.value - li0.value).norm() < 1e-13);
        let qf = generalized_q_factorial_c(&s2, z, &tau, Region::Closed, &cfg).unwrap();
        let qf0 = q_factorial(z, &tau, &cfg).unwrap();
        assert!(rel_err_log(qf.log, qf0.log) < 1e-12);
        let g0 = multiple_elliptic_gamma(z, &tau, &cfg).unwrap();
        for m in [GammaMethod::Direct, GammaMethod::Polylog] {
            let g = generalized_elliptic_gamma_c(&s2, z, &tau, m, &cfg).unwrap();
            assert!(rel_err_log(g.log, g0.log) < 1e-11, "{m:?}");
        }
        let omega = [c(1.0, 0.2), c(0.3, 1.1)];
        let s = generalized_multiple_sine_c(&s2, z, &omega, ProductForm::First, &cfg).unwrap();
        let s0 = multiple_sine(z, &omega, ProductForm::First, &cfg).unwrap();
        assert!(rel_err_log(s.log, s0.log) < 1e-12);
    }

    #[test]
    fn conifold_gamma_methods_and_relations() {
        let cfg = EvalConfig::default();
        let cn = conifold();
        let tau = [c(0.13, 0.21), c(-0.27, 0.19), c(0.31, 0.62)];
        let z = c(0.17, 0.05);
        let d = generalized_elliptic_gamma_c(&cn, z, &tau, GammaMethod::Direct, &cfg).unwrap();
        let p = generalized_elliptic_gamma_c(&cn, z, &tau, GammaMethod::Polylog, &cfg).unwrap();
        assert!(rel_err_log(d.log, p.log) < 1e-9);
        let d1 =
            generalized_elliptic_gamma_c(&cn, z + 1.0, &tau, GammaMethod::Direct, &cfg).unwrap();
        assert!(rel_err_log(d.log, d1.log) < 1e-11);
    }

    #[test]
    fn conifold_sine_forms_agree() {
        let cfg = EvalConfig::default();
        let cn = conifold();
        let omega = [c(0.4, 0.9), c(-0.3, 0.5), c(1.0, 0.2)];
        let z = c(0.3, 0.1);
        let a = generalized_multiple_sine_c(&cn, z, &omega, ProductForm::First, &cfg).unwrap();
        let b = generalized_multiple_sine_c(&cn, z, &omega, ProductForm::Second, &cfg).unwrap();
        assert!(rel_err_log(a.log, b.log) < 1e-8, "{} vs {}", a.log, b.log);
    }
}
