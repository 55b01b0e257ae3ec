//! Seeded test points satisfying each identity's hypotheses with a margin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::checks::{generic_cone_ratios, generic_periods, reflection_plan};
use super::Identity;
use crate::cone::Cone;
use crate::cone_sums::dual_margin;
use crate::error::{Error, Result};
use crate::sl::ModuliPoint;
use crate::subdivision::{default_complex, SignedComplex};

/// Margin by which sampled points satisfy genericity conditions.
pub const MARGIN: f64 = 0.05;

const ATTEMPTS: usize = 10_000;

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// `sum_i c_i v_i / |v_i|` over the facet normals with `c_i` in `[0.5, 1.5]`:
/// a point well inside the dual cone.
fn dual_interior<R: Rng>(c: &Cone, rng: &mut R) -> Vec<f64> {
    let mut a = vec![0.0; c.dim()];
    for v in c.normals() {
        let norm = v.0.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        let w = uniform(rng, 0.5, 1.5) / norm;
        for (ai, &x) in a.iter_mut().zip(&v.0) {
            *ai += w * x as f64;
        }
    }
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    a.iter().map(|x| x / scale).collect()
}

/// Periods `rho e^{i phi}` with `rho` in `radius` and `phi` away from the real axis.
fn spread_periods<R: Rng>(
    n: usize,
    radius: (f64, f64),
    upper: bool,
    rng: &mut R,
) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let phi = uniform(rng, 0.1 * PI, 0.9 * PI);
            let sign = if upper || rng.gen_bool(0.5) {
                1.0
            } else {
                -1.0
            };
            Complex64::from_polar(uniform(rng, radius.0, radius.1), sign * phi)
        })
        .collect()
}

fn small_z<R: Rng>(rng: &mut R, im: (f64, f64)) -> Complex64 {
    Complex64::new(uniform(rng, 0.0, 1.0), uniform(rng, im.0, im.1))
}

/// Generic periods `omega` for the multiple-sine identities on `c`.
fn generic_omega<R: Rng>(c: &Cone, rng: &mut R) -> Vec<Complex64> {
    dual_interior(c, rng)
        .into_iter()
        .map(|a| Complex64::new(a, uniform(rng, -1.0, 1.0)))
        .collect()
}

/// Minimum over the rays of a signed complex of `|Re(g . omega)| / max |omega_j|`.
fn pole_margin(sc: &SignedComplex, omega: &[Complex64]) -> f64 {
    let scale = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let mut m = f64::INFINITY;
    for t in &sc.terms {
        for g in &t.generators {
            let x: Complex64 = g.0.iter().zip(omega).map(|(&k, &w)| w * k as f64).sum();
            m = m.min(x.re.abs() / scale);
        }
    }
    m
}

/// Draws a point at which `identity` can be checked on `c`. For identities
/// not involving a cone, `c.dim()` is the number of periods.
pub fn sample_point<R: Rng>(identity: Identity, c: &Cone, rng: &mut R) -> Result<ModuliPoint> {
    let n = c.dim();
    for _ in 0..ATTEMPTS {
        let candidate = draw(identity, c, n, rng)?;
        if let Some(p) = candidate {
            return Ok(p);
        }
    }
    Err(Error::HypothesisViolated(format!(
        "no admissible point for {identity} found in {ATTEMPTS} attempts"
    )))
}

fn draw<R: Rng>(
    identity: Identity,
    c: &Cone,
    n: usize,
    rng: &mut R,
) -> Result<Option<ModuliPoint>> {
    use Identity::*;
    let point = match identity {
        GrModularity | GrRelations => {
            let tau = spread_periods(n, (0.6, 1.4), false, rng);
            if generic_periods(&tau, MARGIN).is_err() {
                return Ok(None);
            }
            ModuliPoint::new(small_z(rng, (-0.2, 0.2)), tau)
        }
        SrTwoForms => {
            let tau = spread_periods(n, (0.6, 1.4), true, rng);
            if generic_periods(&tau, MARGIN).is_err() {
                return Ok(None);
            }
            ModuliPoint::new(small_z(rng, (-0.3, 0.3)), tau)
        }
        ConeModularity | SrCTwoForms | SrCHomogeneity | CompletionInvariance => {
            let omega = generic_omega(c, rng);
            if generic_cone_ratios(c, &omega, MARGIN).is_err() {
                return Ok(None);
            }
            ModuliPoint::new(small_z(rng, (-0.3, 0.3)), omega)
        }
        BernoulliProps | BernoulliFit => {
            let omega: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)))
                .collect();
            let scale = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
            let sc = default_complex(c)?;
            let ok = sc.terms.iter().all(|t| {
                t.generators.iter().all(|g| {
                    let x: Complex64 = g.0.iter().zip(&omega).map(|(&k, &w)| w * k as f64).sum();
                    x.norm() >= MARGIN * scale
                })
            });
            if !ok {
                return Ok(None);
            }
            ModuliPoint::new(small_z(rng, (-0.5, 0.5)), omega)
        }
        ConesumReflection => {
            let omega: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)))
                .collect();
            let second = reflection_plan(c)?;
            if pole_margin(&default_complex(c)?, &omega) < MARGIN
                || pole_margin(&second.complex, &omega) < MARGIN
            {
                return Ok(None);
            }
            ModuliPoint::new(Complex64::default(), omega)
        }
        ConesumBruteForce => {
            let omega = dual_interior(c, rng)
                .into_iter()
                .map(|a| Complex64::new(a, uniform(rng, -1.0, 1.0)))
                .collect();
            ModuliPoint::new(Complex64::default(), omega)
        }
        PolylogExp | QfactRelations => {
            let upper = identity == PolylogExp;
            let tau: Vec<Complex64> = (0..n)
                .map(|_| {
                    let sign = if upper || rng.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    };
                    Complex64::new(uniform(rng, -0.5, 0.5), sign * uniform(rng, 0.06, 0.8))
                })
                .collect();
            let z = if upper {
                small_z(rng, (0.02, 0.5))
            } else {
                small_z(rng, (-0.3, 0.3))
            };
            ModuliPoint::new(z, tau)
        }
        GrCFactorization | GrCMethods => {
            let b = dual_interior(c, rng);
            let s = uniform(rng, 0.4, 0.9);
            let tau: Vec<Complex64> = b
                .iter()
                .map(|&y| Complex64::new(uniform(rng, -0.5, 0.5), s * y))
                .collect();
            if identity == GrCFactorization && generic_cone_ratios(c, &tau, MARGIN).is_err() {
                return Ok(None);
            }
            let im: Vec<f64> = tau.iter().map(|t| t.im).collect();
            let delta = dual_margin(c, &im);
            let z = Complex64::new(uniform(rng, 0.0, 1.0), uniform(rng, 0.1, 0.5) * delta);
            ModuliPoint::new(z, tau)
        }
        GrCAsSrCProduct => {
            let tau: Vec<Complex64> = (0..n)
                .map(|_| {
                    Complex64::from_polar(
                        uniform(rng, 3.5, 4.5),
                        uniform(rng, 0.25 * PI, 0.75 * PI),
                    )
                })
                .collect();
            let im: Vec<f64> = tau.iter().map(|t| t.im).collect();
            if dual_margin(c, &im) <= 0.0 || generic_cone_ratios(c, &tau, MARGIN).is_err() {
                return Ok(None);
            }
            ModuliPoint::new(small_z(rng, (-0.2, 0.2)), tau)
        }
    };
    Ok(Some(point))
}
