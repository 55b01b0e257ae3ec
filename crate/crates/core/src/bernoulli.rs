//! Classical multiple Bernoulli polynomials and their cone generalizations.
//!
//! `B^C_{r,n}(z|omega)` is `n!` times the coefficient of `t^n` in
//! `(-1)^r t^r e^{zt} sum_{m in C} e^{(omega . m) t}`, with the lattice sum
//! replaced by its signed-complex closed form. A term of dimension `k` with
//! generators `g_j` and `a_j = g_j . omega` contributes
//! `t^(r-k) e^{zt} prod_j E(a_j t) / a_j` (closed cone) or
//! `(-1)^(r+k) t^(r-k) e^{zt} prod_j E(-a_j t) / a_j` (interior), where
//! `E(x) = x / (e^x - 1) = sum_n B_n x^n / n!`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cone::{Cone, IntVector};
use crate::cone_sums::DEFAULT_POLE_GUARD;
use crate::error::{Error, Result};
use crate::series::PowerSeries;
use crate::subdivision::{
    default_complex, inclusion_exclusion_complex, subdivide_avoiding_ray, SignedComplex,
};

const CACHED: usize = 128;

fn bernoulli_table(n: usize) -> Vec<BigRational> {
    // sum_{k=0}^{m} binom(m+1, k) B_k = 0 for m >= 1, B_0 = 1
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::from_integer(BigInt::from(1)));
    for m in 1..=n {
        let mut binom = BigInt::from(1); // binom(m+1, 0)
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom now equals binom(m+1, m) = m+1
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

fn cache() -> &'static (Vec<BigRational>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<BigRational>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let exact = bernoulli_table(CACHED);
        let mut fact = BigInt::from(1);
        let mut over_fact = Vec::with_capacity(CACHED + 1);
        for (k, bk) in exact.iter().enumerate() {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            let q = bk / BigRational::from_integer(fact.clone());
            over_fact.push(q.to_f64().unwrap_or(0.0));
        }
        (exact, over_fact)
    })
}

/// The Bernoulli number `B_n` (with `B_1 = -1/2`), exact.
pub fn bernoulli_number(n: usize) -> BigRational {
    if n <= CACHED {
        cache().0[n].clone()
    } else {
        bernoulli_table(n).pop().expect("table is nonempty")
    }
}

/// `B_k / k!` in double precision.
fn bernoulli_over_factorial(k: usize) -> Result<f64> {
    cache()
        .1
        .get(k)
        .copied()
        .ok_or_else(|| Error::InvalidInput(format!("Bernoulli order {k} exceeds {CACHED}")))
}

/// `E(a t) / a = sum_k B_k a^(k-1) t^k / k!` with `len` coefficients.
fn todd_factor(a: Complex64, len: usize) -> Result<PowerSeries> {
    let mut coefficients = Vec::with_capacity(len);
    let mut pow = a.inv();
    for k in 0..len {
        coefficients.push(pow * bernoulli_over_factorial(k)?);
        pow *= a;
    }
    Ok(PowerSeries {
        coefficients,
        order_offset: 0,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// The classical multiple Bernoulli polynomial `B_{r,n}(z|omega)`, `r = omega.len()`.
pub fn classical_bernoulli(n: usize, z: Complex64, omega: &[Complex64]) -> Result<Complex64> {
    if omega.iter().any(|w| *w == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroPeriod);
    }
    let len = n + 1;
    let mut s = PowerSeries::exp_linear(z, len);
    for &w in omega {
        s = &s * &todd_factor(w, len)?;
    }
    Ok(s.coefficient(n as i32) * factorial(n))
}

/// Which lattice points the generating series runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// The closed cone `C`.
    Closed,
    /// The interior `C°`.
    Interior,
}

/// A generalized Bernoulli value with its inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernoulliValue {
    pub r: usize,
    pub n: usize,
    pub z: Complex64,
    pub omega: Vec<Complex64>,
    pub value: Complex64,
    pub region: Region,
}

/// `B^C_{r,n}` (or `B^{C°}_{r,n}`) through an explicit signed complex of `C`.
///
/// Raises `NearPole` when some `|g . omega|` is below `guard` times the
/// largest `|omega_j|`.
pub fn generalized_bernoulli_with(
    complex: &SignedComplex,
    n: usize,
    z: Complex64,
    omega: &[Complex64],
    region: Region,
    guard: f64,
) -> Result<Complex64> {
    let c = &complex.source;
    let r = c.dim();
    if omega.len() != r {
        return Err(Error::InvalidInput(format!("omega must have length {r}")));
    }
    let scale = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidInput(
            "omega must be nonzero and finite".into(),
        ));
    }
    let len = n + 1;
    let ez = PowerSeries::exp_linear(z, len);
    let mut total = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for t in &complex.terms {
        let shift = (r - t.dim) as i32;
        if shift as usize > n {
            continue;
        }
        let mut s = ez.clone();
        for g in &t.generators {
            let a: Complex64 = g.0.iter().zip(omega).map(|(&k, &w)| w * k as f64).sum();
            if a.norm() < guard * scale {
                return Err(Error::NearPole {
                    ray: g.0.clone(),
                    genuine: c.generator_index(g).is_some(),
                });
            }
            let f = match region {
                Region::Closed => todd_factor(a, len)?,
                Region::Interior => todd_factor(-a, len)?.scaled(Complex64::new(-1.0, 0.0)),
            };
            s = &s * &f;
        }
        let mut v = s.shifted(shift).coefficient(n as i32);
        if region == Region::Interior && (r - t.dim) % 2 == 1 {
            v = -v;
        }
        // Neumaier step
        let sum = total + v;
        comp += if total.norm() >= v.norm() {
            (total - sum) + v
        } else {
            (v - sum) + total
        };
        total = sum;
    }
    Ok((total + comp) * factorial(n))
}

/// `B^C_{r,n}(z|omega)` or `B^{C°}_{r,n}(z|omega)` for a good cone, using the
/// default subdivision and, on a spurious near-pole, one avoiding that ray.
pub fn generalized_bernoulli(
    c: &Cone,
    n: usize,
    z: Complex64,
    omega: &[Complex64],
    region: Region,
) -> Result<BernoulliValue> {
    let sc = default_complex(c)?;
    let value = match generalized_bernoulli_with(&sc, n, z, omega, region, DEFAULT_POLE_GUARD) {
        Err(Error::NearPole {
            ray,
            genuine: false,
        }) => {
            let pieces = subdivide_avoiding_ray(c, &IntVector(ray))?;
            let sc = inclusion_exclusion_complex(c, &pieces)?;
            generalized_bernoulli_with(&sc, n, z, omega, region, DEFAULT_POLE_GUARD)?
        }
        other => other?,
    };
    Ok(BernoulliValue {
        r: c.dim(),
        n,
        z,
        omega: omega.to_vec(),
        value,
        region,
    })
}
