//! Lattice sums `sum_{n in C} exp(-n . omega)` and their interior versions.
//!
//! The closed form sums `sign / prod_j (1 - exp(-g_j . omega))` over the terms
//! of a signed complex; it analytically continues the series to generic
//! complex `omega`. [`brute_force_cone_sum`] is the independent oracle.

use num_complex::Complex64;
use serde::Serialize;

use crate::cmath::{expm1, CompensatedSum};
use crate::cone::{Cone, IntVector};
use crate::error::{Error, Result};
use crate::subdivision::{
    inclusion_exclusion_complex, subdivide_avoiding_ray, unimodular_subdivide, SignedComplex,
};

/// Default pole guard on `|Re (g . omega)|` after scaling `omega` to unit max-modulus.
pub const DEFAULT_POLE_GUARD: f64 = 1e-9;

/// A signed complex ready for evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct ConeSumPlan {
    pub complex: SignedComplex,
}

/// Short description of a plan for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanSummary {
    pub terms: usize,
    pub terms_by_dim: Vec<usize>,
}

fn dot(g: &IntVector, w: &[Complex64]) -> Complex64 {
    g.0.iter().zip(w).map(|(&k, &x)| x * k as f64).sum()
}

impl ConeSumPlan {
    /// The plan from the default unimodular subdivision of a good cone.
    pub fn new(c: &Cone) -> Result<Self> {
        let pieces = unimodular_subdivide(c)?;
        Ok(ConeSumPlan {
            complex: inclusion_exclusion_complex(c, &pieces)?,
        })
    }

    pub fn from_complex(complex: SignedComplex) -> Self {
        ConeSumPlan { complex }
    }

    pub fn cone(&self) -> &Cone {
        &self.complex.source
    }

    pub fn summary(&self) -> PlanSummary {
        let r = self.cone().dim();
        let mut by_dim = vec![0; r];
        for t in &self.complex.terms {
            by_dim[t.dim - 1] += 1;
        }
        PlanSummary {
            terms: self.complex.terms.len(),
            terms_by_dim: by_dim,
        }
    }

    /// `g . omega` for every term generator; raises `NearPole` when the real
    /// part is within the guard of zero.
    fn arguments(&self, omega: &[Complex64], guard: f64) -> Result<Vec<Vec<Complex64>>> {
        let r = self.cone().dim();
        if omega.len() != r {
            return Err(Error::InvalidInput(format!("omega must have length {r}")));
        }
        let scale = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::InvalidInput(
                "omega must be nonzero and finite".into(),
            ));
        }
        let mut out = Vec::with_capacity(self.complex.terms.len());
        for t in &self.complex.terms {
            let mut args = Vec::with_capacity(t.dim);
            for g in &t.generators {
                let x = dot(g, omega);
                if (x.re / scale).abs() < guard {
                    return Err(Error::NearPole {
                        ray: g.0.clone(),
                        genuine: self.cone().generator_index(g).is_some(),
                    });
                }
                args.push(x);
            }
            out.push(args);
        }
        Ok(out)
    }

    /// `sum_terms sign / prod_j (1 - exp(-g_j . omega))`.
    pub fn sum(&self, omega: &[Complex64], guard: f64) -> Result<Complex64> {
        let args = self.arguments(omega, guard)?;
        let mut acc = CompensatedSum::new();
        for (t, xs) in self.complex.terms.iter().zip(&args) {
            let mut term = Complex64::new(t.sign as f64, 0.0);
            for &x in xs {
                term /= -expm1(-x);
            }
            acc.add(term);
        }
        Ok(acc.value())
    }

    /// `sum_terms prod_j 1 / (exp(g_j . omega) - 1)`.
    pub fn interior_sum(&self, omega: &[Complex64], guard: f64) -> Result<Complex64> {
        let args = self.arguments(omega, guard)?;
        let mut acc = CompensatedSum::new();
        for xs in &args {
            let mut term = Complex64::new(1.0, 0.0);
            for &x in xs {
                term /= expm1(x);
            }
            acc.add(term);
        }
        Ok(acc.value())
    }
}

fn with_respread<F>(c: &Cone, eval: F) -> Result<Complex64>
where
    F: Fn(&ConeSumPlan) -> Result<Complex64>,
{
    let plan = ConeSumPlan::new(c)?;
    match eval(&plan) {
        Err(Error::NearPole {
            ray,
            genuine: false,
        }) => {
            // a spurious pole of this subdivision: move the ray out of the way
            let pieces = subdivide_avoiding_ray(c, &IntVector(ray))?;
            let plan = ConeSumPlan::from_complex(inclusion_exclusion_complex(c, &pieces)?);
            eval(&plan)
        }
        other => other,
    }
}

/// The analytically continued sum over `C ∩ Z^r`. A spurious near-pole of the
/// default subdivision triggers one retry with a subdivision avoiding that ray.
pub fn cone_sum(c: &Cone, omega: &[Complex64]) -> Result<Complex64> {
    with_respread(c, |p| p.sum(omega, DEFAULT_POLE_GUARD))
}

/// The analytically continued sum over `C° ∩ Z^r`.
pub fn interior_cone_sum(c: &Cone, omega: &[Complex64]) -> Result<Complex64> {
    with_respread(c, |p| p.interior_sum(omega, DEFAULT_POLE_GUARD))
}

// ---------------------------------------------------------------------------
// brute force oracle

/// Result of a direct lattice summation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceSum {
    pub value: Complex64,
    /// Rigorous bound on `sum |exp(-n . omega)|` over the omitted points.
    pub tail_bound: f64,
    pub cutoff: f64,
    pub points: usize,
}

/// Enumerates the lattice points of `C` (or `C°`) with `n . a <= cutoff`,
/// where `a` lies in the interior of the dual cone.
pub fn enumerate_truncated<F: FnMut(&[i64])>(
    c: &Cone,
    a: &[f64],
    cutoff: f64,
    strict: bool,
    mut visit: F,
) {
    let r = c.dim();
    // C ∩ {n . a <= T} is the simplex-like hull of 0 and g T / (g . a)
    let mut lo = vec![0i64; r];
    let mut hi = vec![0i64; r];
    for g in c.generators() {
        let ga: f64 = g.0.iter().zip(a).map(|(&x, &y)| x as f64 * y).sum();
        let s = cutoff / ga;
        for i in 0..r {
            let v = g.0[i] as f64 * s;
            lo[i] = lo[i].min(v.floor() as i64);
            hi[i] = hi[i].max(v.ceil() as i64);
        }
    }
    // lower bound of the remaining contribution of coordinates i.. to n . a
    let mut rest_min = vec![0.0; r + 1];
    for i in (0..r).rev() {
        rest_min[i] = rest_min[i + 1] + (a[i] * lo[i] as f64).min(a[i] * hi[i] as f64);
    }
    let normals: Vec<Vec<i64>> = c.normals().iter().map(|v| v.0.clone()).collect();
    let mut p = vec![0i64; r];
    fn rec<F: FnMut(&[i64])>(
        i: usize,
        partial: f64,
        p: &mut Vec<i64>,
        ctx: (&[i64], &[i64], &[f64], &[f64], f64, &[Vec<i64>], bool),
        visit: &mut F,
    ) {
        let (lo, hi, a, rest_min, cutoff, normals, strict) = ctx;
        let r = p.len();
        if i == r {
            if partial > cutoff * (1.0 + 1e-12) {
                return;
            }
            let inside = normals.iter().all(|v| {
                let d: i128 = v
                    .iter()
                    .zip(p.iter())
                    .map(|(&x, &y)| x as i128 * y as i128)
                    .sum();
                if strict {
                    d > 0
                } else {
                    d >= 0
                }
            });
            if inside {
                visit(p);
            }
            return;
        }
        for x in lo[i]..=hi[i] {
            let part = partial + a[i] * x as f64;
            if part + rest_min[i + 1] > cutoff * (1.0 + 1e-12) + 1e-9 {
                if a[i] >= 0.0 {
                    break;
                }
                continue;
            }
            p[i] = x;
            rec(i + 1, part, p, ctx, visit);
        }
        p[i] = 0;
    }
    rec(
        0,
        0.0,
        &mut p,
        (&lo, &hi, a, &rest_min, cutoff, &normals, strict),
        &mut visit,
    );
}

/// `min_g (g . a) / |g|_1` over the generators: every `n` in `C` has
/// `n . a >= delta |n|_1`. Non-positive when `a` is not in the interior of the dual.
pub fn dual_margin(c: &Cone, a: &[f64]) -> f64 {
    c.generators()
        .iter()
        .map(|g| {
            let ga: f64 = g.0.iter().zip(a).map(|(&x, &y)| x as f64 * y).sum();
            let l1: f64 = g.0.iter().map(|&x| (x as f64).abs()).sum();
            ga / l1
        })
        .fold(f64::INFINITY, f64::min)
}

/// Bound on `sum_{n in Z^r, n . a > T, n . a >= delta |n|_1} exp(-n . a)`:
/// `exp(-theta T) * ((1 + e^{-s}) / (1 - e^{-s}))^r` with `s = (1 - theta) delta`,
/// minimised over a grid of `theta`.
pub fn lattice_tail_bound(r: usize, delta: f64, cutoff: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 1..100 {
        let theta = i as f64 / 100.0;
        let s = (1.0 - theta) * delta;
        let f = ((1.0 + (-s).exp()) / -(-s).exp_m1()).powi(r as i32);
        best = best.min((-theta * cutoff).exp() * f);
    }
    best
}

/// Smallest cutoff `T` (on the scale of `n . a`) whose tail bound is below `target`.
pub fn cutoff_for_tail(r: usize, delta: f64, target: f64) -> f64 {
    let mut t = 1.0;
    while lattice_tail_bound(r, delta, t) > target {
        t *= 1.25;
    }
    // bisect down a little
    let (mut lo, mut hi) = (t / 1.25, t);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if lattice_tail_bound(r, delta, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Direct summation of `exp(-n . omega)` over lattice points of `C` (or `C°`
/// when `strict`) with `Re(n . omega) <= cutoff`. Without a cutoff one is
/// chosen so that the tail bound is below `1e-15`.
pub fn brute_force_cone_sum(
    c: &Cone,
    omega: &[Complex64],
    cutoff: Option<f64>,
    strict: bool,
) -> Result<BruteForceSum> {
    let r = c.dim();
    if omega.len() != r {
        return Err(Error::InvalidInput(format!("omega must have length {r}")));
    }
    let a: Vec<f64> = omega.iter().map(|w| w.re).collect();
    let delta = dual_margin(c, &a);
    if !(delta > 0.0) {
        return Err(Error::DivergentRegion);
    }
    let cutoff = cutoff.unwrap_or_else(|| cutoff_for_tail(r, delta, 1e-15));
    let mut acc = CompensatedSum::new();
    let mut points = 0usize;
    enumerate_truncated(c, &a, cutoff, strict, |n| {
        let x: Complex64 = n.iter().zip(omega).map(|(&k, &w)| w * k as f64).sum();
        acc.add((-x).exp());
        points += 1;
    });
    Ok(BruteForceSum {
        value: acc.value(),
        tail_bound: lattice_tail_bound(r, delta, cutoff),
        cutoff,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmath::rel_err;
    use crate::cone::make_cone;
    use crate::subdivision::subdivide_through_ray;

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
    fn geometric_series() {
        let l2 = 2f64.ln();
        let l3 = 3f64.ln();
        let v = cone_sum(&Cone::standard(1), &[c(l2, 0.0)]).unwrap();
        assert!((v - 2.0).norm() < 1e-15);
        let v = cone_sum(&Cone::standard(2), &[c(l2, 0.0), c(l3, 0.0)]).unwrap();
        assert!((v - 3.0).norm() < 1e-14);
        let v = interior_cone_sum(&Cone::standard(2), &[c(l2, 0.0), c(l3, 0.0)]).unwrap();
        assert!((v - 0.5).norm() < 1e-15);
        let v = interior_cone_sum(&Cone::standard(1), &[c(l2, 0.0)]).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let b = brute_force_cone_sum(&Cone::standard(2), &[c(l2, 0.0), c(l3, 0.0)], None, false)
            .unwrap();
        assert!((b.value - 3.0).norm() < 1e-14);
        assert!(b.tail_bound < 1e-14);
    }

    #[test]
    fn conifold_matches_brute_force() {
        let omega = [c(0.3, 0.1), c(0.5, -0.2), c(1.1, 0.05)];
        let closed = cone_sum(&conifold(), &omega).unwrap();
        let brute = brute_force_cone_sum(&conifold(), &omega, None, false).unwrap();
        assert!(brute.tail_bound < 1e-14);
        assert!(
            rel_err(closed, brute.value) < 1e-12,
            "{closed} vs {}",
            brute.value
        );
        let closed = interior_cone_sum(&conifold(), &omega).unwrap();
        let brute = brute_force_cone_sum(&conifold(), &omega, None, true).unwrap();
        assert!(rel_err(closed, brute.value) < 1e-12);
    }

    #[test]
    fn reflection_on_the_conifold() {
        let omega = [c(0.3, 0.7), c(-0.5, -0.2), c(1.1, 0.35)];
        let neg: Vec<Complex64> = omega.iter().map(|w| -w).collect();
        let lhs = interior_cone_sum(&conifold(), &omega).unwrap();
        let rhs = -cone_sum(&conifold(), &neg).unwrap();
        assert!(rel_err(lhs, rhs) < 1e-12);
    }

    #[test]
    fn two_subdivisions_agree() {
        let cn = conifold();
        let other = subdivide_through_ray(&cn, &iv(&[1, 1, 2])).unwrap();
        let p1 = ConeSumPlan::new(&cn).unwrap();
        let p2 = ConeSumPlan::from_complex(inclusion_exclusion_complex(&cn, &other).unwrap());
        let omega = [c(-0.3, 0.4), c(0.8, 0.1), c(0.2, -1.0)];
        let a = p1.sum(&omega, 1e-9).unwrap();
        let b = p2.sum(&omega, 1e-9).unwrap();
        assert!(rel_err(a, b) < 1e-12);
    }

    #[test]
    fn near_pole_names_the_ray() {
        let cn = conifold();
        // (0,0,1) . omega has zero real part: a genuine pole
        let omega = [c(0.3, 0.1), c(0.5, 0.2), c(0.0, 0.4)];
        match cone_sum(&cn, &omega) {
            Err(Error::NearPole { ray, genuine }) => {
                assert_eq!(ray, vec![0, 0, 1]);
                assert!(genuine);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spurious_pole_is_routed_around() {
        // the wall (1,1,2) of the second subdivision; Re((1,1,2).omega) = 0
        let cn = conifold();
        let other = subdivide_through_ray(&cn, &iv(&[1, 1, 2])).unwrap();
        let p2 = ConeSumPlan::from_complex(inclusion_exclusion_complex(&cn, &other).unwrap());
        let omega = [c(2.0, 0.3), c(0.0, -0.1), c(-1.0, 0.2)];
        match p2.sum(&omega, 1e-9) {
            Err(Error::NearPole { ray, genuine }) => {
                assert_eq!(ray, vec![1, 1, 2]);
                assert!(!genuine);
            }
            other => panic!("unexpected {other:?}"),
        }
        // the default plan does not have this ray
        assert!(cone_sum(&cn, &omega).is_ok());
    }

    #[test]
    fn divergent_region() {
        let omega = [c(-0.3, 0.0), c(0.5, 0.0)];
        assert_eq!(
            brute_force_cone_sum(&Cone::standard(2), &omega, None, false),
            Err(Error::DivergentRegion)
        );
    }
}
