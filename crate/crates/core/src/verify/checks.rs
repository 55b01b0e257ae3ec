//! The individual identity checks. Each returns an [`Outcome`] comparing two
//! sides computed through different code paths.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Comparison, Part};
use crate::bernoulli::{
    classical_bernoulli, generalized_bernoulli, generalized_bernoulli_with, Region,
};
use crate::cmath::{rel_err, rel_err_log, I};
use crate::cone::{Cone, IntVector};
use crate::cone_sums::{
    brute_force_cone_sum, cone_sum, dual_margin, interior_cone_sum, ConeSumPlan,
};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::int_linalg::mat_mul;
use crate::sl::{act, all_k_rho, embed_sl, s_element, ModuliPoint};
use crate::special::{
    generalized_elliptic_gamma_c, generalized_multiple_sine_c, multiple_elliptic_gamma,
    multiple_sine, q_factorial, q_polylog, Evaluation, GammaMethod, ProductForm,
};
use crate::subdivision::{
    inclusion_exclusion_complex, lift_to_half_line, subdivide_through_ray, unimodular_subdivide,
};

/// Result of one check before it is wrapped into an `IdentityCheck`.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub comparison: Comparison,
    pub parts: Vec<Part>,
    pub tail_bound: f64,
    pub factors: u64,
}

/// Collects diagnostics of the evaluations used in a check.
#[derive(Default)]
struct Tally {
    tail: f64,
    factors: u64,
    parts: Vec<Part>,
}

impl Tally {
    fn eval(&mut self, e: Result<Evaluation>) -> Result<Complex64> {
        let e = e.map_err(hypothesis)?;
        self.tail = self.tail.max(e.tail_bound);
        self.factors += e.factors;
        Ok(e.log)
    }

    fn part(&mut self, label: impl Into<String>, residual: f64) {
        self.parts.push(Part {
            label: label.into(),
            residual,
        });
    }

    fn finish(self, lhs: Complex64, rhs: Complex64, comparison: Comparison) -> Outcome {
        Outcome {
            lhs,
            rhs,
            comparison,
            parts: self.parts,
            tail_bound: self.tail,
            factors: self.factors,
        }
    }
}

/// Genericity failures become `HypothesisViolated`; other errors pass through.
pub(crate) fn hypothesis(e: Error) -> Error {
    match e {
        Error::DegenerateRatios { .. }
        | Error::OutsideDomain(_)
        | Error::SingularAction(_)
        | Error::DivergentRegion
        | Error::OnUnitCircle { .. }
        | Error::NearPole { genuine: true, .. } => Error::HypothesisViolated(e.to_string()),
        other => other,
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(what.into()))
    }
}

/// All `Im(tau_j / tau_k)` (`j != k`) and `Im(tau_k)/|tau_k|` are at least `guard`.
pub(crate) fn generic_periods(tau: &[Complex64], guard: f64) -> Result<()> {
    for (k, tk) in tau.iter().enumerate() {
        require(
            tk.norm() > 0.0 && (tk.im / tk.norm()).abs() >= guard,
            &format!("Im tau_{k} vanishes"),
        )?;
        for (j, tj) in tau.iter().enumerate() {
            if j != k {
                require(
                    (tj / tk).im.abs() >= guard,
                    &format!("Im(tau_{j}/tau_{k}) vanishes"),
                )?;
            }
        }
    }
    Ok(())
}

/// `Im((K_rho omega)_j / (K_rho omega)_1) != 0` for every generator.
pub(crate) fn generic_cone_ratios(c: &Cone, omega: &[Complex64], guard: f64) -> Result<()> {
    for k in all_k_rho(c)? {
        let (a1, ratios) = k.ratios(omega);
        require(
            a1.norm() > 0.0 && ratios.iter().all(|q| q.im.abs() >= guard),
            &format!("degenerate period ratios at ray {}", k.source_ray),
        )?;
    }
    Ok(())
}

fn im_in_dual_interior(c: &Cone, tau: &[Complex64]) -> Result<()> {
    let b: Vec<f64> = tau.iter().map(|t| t.im).collect();
    require(
        dual_margin(c, &b) > 0.0,
        "Im tau is not in the interior of the dual cone",
    )
}

/// `G_r(z|tau)` against both modular transforms.
pub(crate) fn gr_modularity(p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let tau = &p.tau;
    require(!tau.is_empty(), "G_r needs at least one period")?;
    generic_periods(tau, cfg.ratio_guard)?;
    let r = tau.len() - 1;
    let z = p.z;
    let mut t = Tally::default();
    let lhs = t.eval(multiple_elliptic_gamma(z, tau, cfg))?;
    let one = c64(1.0, 0.0);
    let mut rhs_first = Complex64::default();
    for (sign, extra) in [(1.0, -one), (-1.0, one)] {
        let mut periods = tau.clone();
        periods.push(extra);
        let b = classical_bernoulli(r + 2, z, &periods)?;
        let mut rhs = sign * 2.0 * PI * I * b / factorial(r + 2);
        for (k, tk) in tau.iter().enumerate() {
            let mut params: Vec<Complex64> = (0..=r)
                .filter(|&j| j != k)
                .map(|j| sign * tau[j] / tk)
                .collect();
            params.push(-one / tk);
            rhs += t.eval(multiple_elliptic_gamma(sign * z / tk, &params, cfg))?;
        }
        let label = if sign > 0.0 { "S" } else { "S^-1" };
        t.part(label, rel_err_log(lhs, rhs));
        if sign > 0.0 {
            rhs_first = rhs;
        }
    }
    Ok(t.finish(lhs, rhs_first, Comparison::Log))
}

/// `prod_rho G_{r-2}(z/a_1 | a_2/a_1, ...) = exp(-2 pi i B^C_{r,r}(z|omega) / r!)`.
pub(crate) fn cone_modularity(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let r = c.dim();
    require(r >= 2, "cone modularity needs dimension at least 2")?;
    generic_cone_ratios(c, &p.tau, cfg.ratio_guard)?;
    let mut t = Tally::default();
    let mut lhs = Complex64::default();
    for k in all_k_rho(c)? {
        let (a1, ratios) = k.ratios(&p.tau);
        lhs += t.eval(multiple_elliptic_gamma(p.z / a1, &ratios, cfg))?;
    }
    let b = generalized_bernoulli(c, r, p.z, &p.tau, Region::Closed)
        .map_err(hypothesis)?
        .value;
    let rhs = -2.0 * PI * I * b / factorial(r);
    t.part("product", rel_err_log(lhs, rhs));
    Ok(t.finish(lhs, rhs, Comparison::Log))
}

/// The two product representations of `S_r^C`.
pub(crate) fn src_two_forms(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    require(c.dim() >= 2, "product forms need dimension at least 2")?;
    generic_cone_ratios(c, &p.tau, cfg.ratio_guard)?;
    let mut t = Tally::default();
    let a = t.eval(generalized_multiple_sine_c(
        c,
        p.z,
        &p.tau,
        ProductForm::First,
        cfg,
    ))?;
    let b = t.eval(generalized_multiple_sine_c(
        c,
        p.z,
        &p.tau,
        ProductForm::Second,
        cfg,
    ))?;
    t.part("forms", rel_err_log(a, b));
    Ok(t.finish(a, b, Comparison::Log))
}

/// The two product representations of the ordinary `S_r`.
pub(crate) fn sr_two_forms(p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    require(p.tau.len() >= 2, "product forms need at least two periods")?;
    generic_periods(&p.tau, cfg.ratio_guard)?;
    let mut t = Tally::default();
    let a = t.eval(multiple_sine(p.z, &p.tau, ProductForm::First, cfg))?;
    let b = t.eval(multiple_sine(p.z, &p.tau, ProductForm::Second, cfg))?;
    t.part("forms", rel_err_log(a, b));
    Ok(t.finish(a, b, Comparison::Log))
}

/// `S_r^C(cz | c omega) = S_r^C(z | omega)`.
pub(crate) fn src_homogeneity(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    generic_cone_ratios(c, &p.tau, cfg.ratio_guard)?;
    let scale = Complex64::from_polar(1.7, 0.4);
    let scaled: Vec<Complex64> = p.tau.iter().map(|w| w * scale).collect();
    let mut t = Tally::default();
    let a = t.eval(generalized_multiple_sine_c(
        c,
        p.z,
        &p.tau,
        ProductForm::First,
        cfg,
    ))?;
    let b = t.eval(generalized_multiple_sine_c(
        c,
        p.z * scale,
        &scaled,
        ProductForm::First,
        cfg,
    ))?;
    t.part("scaling", rel_err_log(a, b));
    Ok(t.finish(a, b, Comparison::Log))
}

/// Signed complex of `C x R_{>=0}` lifted from the default subdivision of `C`.
fn hat_complex(c: &Cone) -> Result<crate::subdivision::SignedComplex> {
    let pieces = unimodular_subdivide(c)?;
    inclusion_exclusion_complex(&c.times_half_line(), &lift_to_half_line(&pieces))
}

/// `G_{r-1}^C(z|tau)` by its lattice product against both factorizations into
/// transformed ordinary `G_{r-1}` with a `B^{C x R}_{r+1,r+1}` prefactor.
pub(crate) fn grc_factorization(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let r = c.dim();
    im_in_dual_interior(c, &p.tau)?;
    generic_cone_ratios(c, &p.tau, cfg.ratio_guard)?;
    let mut t = Tally::default();
    let lhs = t.eval(generalized_elliptic_gamma_c(
        c,
        p.z,
        &p.tau,
        GammaMethod::Direct,
        cfg,
    ))?;
    let hat = hat_complex(c)?;
    let (s, s_inv) = s_element(r)?;
    let maps = all_k_rho(c)?;
    let mut rhs_first = Complex64::default();
    for (sign, g) in [(1.0, &s), (-1.0, &s_inv)] {
        let mut periods = p.tau.clone();
        periods.push(c64(-sign, 0.0));
        let b =
            generalized_bernoulli_with(&hat, r + 1, p.z, &periods, Region::Closed, cfg.pole_guard)
                .map_err(hypothesis)?;
        let mut rhs = sign * 2.0 * PI * I * b / factorial(r + 1);
        for k in &maps {
            let m = mat_mul(g, &embed_sl(k))?;
            let q = act(&m, p, cfg.singular_guard).map_err(hypothesis)?;
            rhs += t.eval(multiple_elliptic_gamma(q.z, &q.tau, cfg))?;
        }
        t.part(
            if sign > 0.0 { "S K" } else { "S^-1 K" },
            rel_err_log(lhs, rhs),
        );
        if sign > 0.0 {
            rhs_first = rhs;
        }
    }
    Ok(t.finish(lhs, rhs_first, Comparison::Log))
}

/// Partial products of the representation of `G^C` by multiple sines:
/// returns the outcome at `k_max` and the residuals for every `K = 0..=k_max`.
pub(crate) fn grc_as_src_product(
    c: &Cone,
    p: &ModuliPoint,
    k_max: usize,
    cfg: &EvalConfig,
) -> Result<(Outcome, Vec<f64>)> {
    let d = c.dim();
    require(
        d >= 2,
        "the product of multiple sines needs dimension at least 2",
    )?;
    require(p.tau.iter().all(|t| t.im > 0.0), "Im tau_j > 0 fails")?;
    im_in_dual_interior(c, &p.tau)?;
    generic_cone_ratios(c, &p.tau, cfg.ratio_guard)?;
    let mut t = Tally::default();
    let lhs = t.eval(generalized_elliptic_gamma_c(
        c,
        p.z,
        &p.tau,
        GammaMethod::Direct,
        cfg,
    ))?;
    let hat = hat_complex(c)?;
    let mut periods = p.tau.clone();
    periods.push(c64(-1.0, 0.0));
    let b_hat =
        generalized_bernoulli_with(&hat, d + 1, p.z, &periods, Region::Closed, cfg.pole_guard)
            .map_err(hypothesis)?;
    let mut rhs = 2.0 * PI * I * b_hat / factorial(d + 1);
    let power = if d % 2 == 1 { 1.0 } else { -1.0 };
    let bern = |w: Complex64| -> Result<Complex64> {
        Ok(generalized_bernoulli(c, d, w, &p.tau, Region::Closed)
            .map_err(hypothesis)?
            .value)
    };
    let mut residuals = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let kf = k as f64;
        let up = p.z + kf + 1.0;
        let down = p.z - kf;
        // the two forms coincide; each side uses the one whose products converge fastest
        let s_up = t.eval(generalized_multiple_sine_c(
            c,
            up,
            &p.tau,
            ProductForm::Second,
            cfg,
        ))?;
        let s_down = t.eval(generalized_multiple_sine_c(
            c,
            down,
            &p.tau,
            ProductForm::First,
            cfg,
        ))?;
        rhs += power * (s_up + s_down) - PI * I * (bern(up)? - bern(down)?) / factorial(d);
        residuals.push(rel_err_log(lhs, rhs));
    }
    for (k, &res) in residuals.iter().enumerate() {
        t.part(format!("K={k}"), res);
    }
    Ok((t.finish(lhs, rhs, Comparison::Log), residuals))
}

/// Direct lattice product against the polylogarithm form of `G^C`.
pub(crate) fn grc_methods(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    im_in_dual_interior(c, &p.tau)?;
    let mut t = Tally::default();
    let a = t.eval(generalized_elliptic_gamma_c(
        c,
        p.z,
        &p.tau,
        GammaMethod::Direct,
        cfg,
    ))?;
    let b = t.eval(generalized_elliptic_gamma_c(
        c,
        p.z,
        &p.tau,
        GammaMethod::Polylog,
        cfg,
    ))?;
    t.part("methods", rel_err_log(a, b));
    // periodicity and inversion
    let a1 = t.eval(generalized_elliptic_gamma_c(
        c,
        p.z + 1.0,
        &p.tau,
        GammaMethod::Direct,
        cfg,
    ))?;
    t.part("z+1", rel_err_log(a, a1));
    let neg: Vec<Complex64> = p.tau.iter().map(|w| -w).collect();
    let inv = t.eval(generalized_elliptic_gamma_c(
        c,
        -p.z,
        &neg,
        GammaMethod::Polylog,
        cfg,
    ))?;
    t.part("inversion", rel_err_log(a + inv, Complex64::default()));
    Ok(t.finish(a, b, Comparison::Log))
}

/// The signed complex of a second subdivision through an interior ray
/// `sum_j w_j v_j`, chosen so the subdivision differs from the default one.
pub(crate) fn reflection_plan(c: &Cone) -> Result<ConeSumPlan> {
    let base = unimodular_subdivide(c)?;
    let n = c.generators().len();
    for extra in 0..=n {
        let mut rho = vec![0i64; c.dim()];
        for (j, g) in c.generators().iter().enumerate() {
            let w = if j + 1 == extra { 2 } else { 1 };
            for (x, &y) in rho.iter_mut().zip(&g.0) {
                *x += w * y;
            }
        }
        let pieces = subdivide_through_ray(c, &IntVector(rho).primitive())?;
        if pieces != base {
            return Ok(ConeSumPlan::from_complex(inclusion_exclusion_complex(
                c, &pieces,
            )?));
        }
    }
    Err(Error::InvalidSubdivision(
        "no second subdivision found".into(),
    ))
}

/// Interior sum against the reflected closed-cone sum, the latter through a
/// different subdivision.
pub(crate) fn conesum_reflection(c: &Cone, p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let neg: Vec<Complex64> = p.tau.iter().map(|w| -w).collect();
    let lhs = interior_cone_sum(c, &p.tau).map_err(hypothesis)?;
    let sign = if c.dim().is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = sign
        * reflection_plan(c)?
            .sum(&neg, cfg.pole_guard)
            .map_err(hypothesis)?;
    let mut t = Tally::default();
    t.part("reflection", rel_err(lhs, rhs));
    Ok(t.finish(lhs, rhs, Comparison::Value))
}

/// Closed form against direct summation, for `Re omega` in the dual interior.
pub(crate) fn conesum_brute_force(c: &Cone, p: &ModuliPoint) -> Result<Outcome> {
    let lhs = cone_sum(c, &p.tau).map_err(hypothesis)?;
    let b = brute_force_cone_sum(c, &p.tau, None, false).map_err(hypothesis)?;
    let mut t = Tally::default();
    t.tail = b.tail_bound;
    t.factors = b.points as u64;
    t.part("closed", rel_err(lhs, b.value));
    let li = interior_cone_sum(c, &p.tau).map_err(hypothesis)?;
    let bi = brute_force_cone_sum(c, &p.tau, None, true).map_err(hypothesis)?;
    t.tail = t.tail.max(bi.tail_bound);
    t.part("interior", rel_err(li, bi.value));
    Ok(t.finish(lhs, b.value, Comparison::Value))
}

/// `(x|q)_inf = exp(-Li(x|q))` for `Im z > 0`, `Im tau_j > 0`.
pub(crate) fn polylog_exp(p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    require(p.z.im > 0.0, "Im z > 0 fails")?;
    require(p.tau.iter().all(|t| t.im > 0.0), "Im tau_j > 0 fails")?;
    let mut t = Tally::default();
    let lhs = t.eval(q_factorial(p.z, &p.tau, cfg))?;
    let li = q_polylog(p.z, &p.tau, cfg).map_err(hypothesis)?;
    t.tail = t.tail.max(li.tail_bound);
    t.factors += li.terms;
    t.part("exp", rel_err_log(lhs, -li.value));
    Ok(t.finish(lhs, -li.value, Comparison::Log))
}

/// Inversion, shift and permutation relations of the q-factorial.
pub(crate) fn qfact_relations(p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let (z, tau) = (p.z, &p.tau);
    let mut t = Tally::default();
    let base = t.eval(q_factorial(z, tau, cfg))?;
    let mut worst = (base, base, -1.0);
    let mut note = |t: &mut Tally, label: String, lhs: Complex64, rhs: Complex64| {
        let res = rel_err_log(lhs, rhs);
        if res > worst.2 {
            worst = (lhs, rhs, res);
        }
        t.part(label, res);
    };
    let reversed: Vec<Complex64> = tau.iter().rev().copied().collect();
    let perm = t.eval(q_factorial(z, &reversed, cfg))?;
    note(&mut t, "permutation".into(), base, perm);
    for j in 0..tau.len() {
        let mut flipped = tau.clone();
        flipped[j] = -tau[j];
        let inv = t.eval(q_factorial(z - tau[j], &flipped, cfg))?;
        note(&mut t, format!("inversion {j}"), base, -inv);
        let shifted = t.eval(q_factorial(z + tau[j], tau, cfg))?;
        let mut fewer = tau.clone();
        fewer.remove(j);
        let lower = t.eval(q_factorial(z, &fewer, cfg))?;
        note(&mut t, format!("shift {j}"), shifted, base - lower);
    }
    let (lhs, rhs, _) = worst;
    Ok(t.finish(lhs, rhs, Comparison::Log))
}

/// Periodicity, shift and inversion relations of `G_r`.
pub(crate) fn gr_relations(p: &ModuliPoint, cfg: &EvalConfig) -> Result<Outcome> {
    let (z, tau) = (p.z, &p.tau);
    require(tau.len() >= 2, "relations need at least two periods")?;
    let mut t = Tally::default();
    let base = t.eval(multiple_elliptic_gamma(z, tau, cfg))?;
    let mut worst = (base, base, -1.0);
    let mut note = |t: &mut Tally, label: String, lhs: Complex64, rhs: Complex64| {
        let res = rel_err_log(lhs, rhs);
        if res > worst.2 {
            worst = (lhs, rhs, res);
        }
        t.part(label, res);
    };
    let periodic = t.eval(multiple_elliptic_gamma(z + 1.0, tau, cfg))?;
    note(&mut t, "z+1".into(), periodic, base);
    for j in 0..tau.len() {
        let shifted = t.eval(multiple_elliptic_gamma(z + tau[j], tau, cfg))?;
        let mut fewer = tau.clone();
        fewer.remove(j);
        let lower = t.eval(multiple_elliptic_gamma(z, &fewer, cfg))?;
        note(&mut t, format!("shift {j}"), shifted, lower + base);
        let mut flipped = tau.clone();
        flipped[j] = -tau[j];
        let inv = t.eval(multiple_elliptic_gamma(z - tau[j], &flipped, cfg))?;
        note(&mut t, format!("inversion {j}"), base, -inv);
    }
    let (lhs, rhs, _) = worst;
    Ok(t.finish(lhs, rhs, Comparison::Log))
}

/// Classical reduction, scaling and reflection of the Bernoulli polynomials.
pub(crate) fn bernoulli_props(c: &Cone, p: &ModuliPoint) -> Result<Outcome> {
    let r = c.dim();
    let (z, omega) = (p.z, &p.tau);
    let scale = Complex64::from_polar(1.3, -0.7);
    let scaled: Vec<Complex64> = omega.iter().map(|w| w * scale).collect();
    let total: Complex64 = omega.iter().sum();
    let standard = Cone::standard(r);
    let mut t = Tally::default();
    let mut worst = (Complex64::default(), Complex64::default(), -1.0);
    let mut note = |t: &mut Tally, label: String, lhs: Complex64, rhs: Complex64| {
        let res = rel_err(lhs, rhs);
        if res > worst.2 {
            worst = (lhs, rhs, res);
        }
        t.part(label, res);
    };
    let gen = |cone: &Cone, n: usize, w: Complex64, om: &[Complex64], region: Region| {
        generalized_bernoulli(cone, n, w, om, region)
            .map(|v| v.value)
            .map_err(hypothesis)
    };
    for n in 0..=r + 2 {
        let classical = classical_bernoulli(n, z, omega).map_err(hypothesis)?;
        let reduced = gen(&standard, n, z, omega, Region::Closed)?;
        note(&mut t, format!("reduction n={n}"), reduced, classical);
        let refl = classical_bernoulli(n, total - z, omega).map_err(hypothesis)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        note(
            &mut t,
            format!("classical reflection n={n}"),
            refl,
            sign * classical,
        );
        let factor = scale.powi(n as i32 - r as i32);
        let cls = classical_bernoulli(n, z * scale, &scaled).map_err(hypothesis)?;
        note(
            &mut t,
            format!("classical scaling n={n}"),
            cls,
            factor * classical,
        );
        let bc = gen(c, n, z, omega, Region::Closed)?;
        let bcs = gen(c, n, z * scale, &scaled, Region::Closed)?;
        note(&mut t, format!("scaling n={n}"), bcs, factor * bc);
        let bi = gen(c, n, -z, omega, Region::Interior)?;
        note(&mut t, format!("reflection n={n}"), bi, sign * bc);
    }
    let (lhs, rhs, _) = worst;
    Ok(t.finish(lhs, rhs, Comparison::Value))
}

/// Polynomiality in `z`: the `(n+1)`-th finite difference of `z -> B^C_{r,n}(z|omega)`
/// over `r + n + 2` equispaced points vanishes; the residual is relative to
/// the size of the terms entering the difference.
pub(crate) fn bernoulli_fit(c: &Cone, p: &ModuliPoint) -> Result<Outcome> {
    let r = c.dim();
    let h = c64(0.37, 0.11);
    let mut t = Tally::default();
    let mut worst = (Complex64::default(), Complex64::default(), -1.0);
    for n in 0..=r + 2 {
        let pts = r + n + 2;
        let vals: Vec<Complex64> = (0..pts)
            .map(|k| {
                generalized_bernoulli(c, n, p.z + h * k as f64, &p.tau, Region::Closed)
                    .map(|v| v.value)
                    .map_err(hypothesis)
            })
            .collect::<Result<_>>()?;
        let mut res: f64 = 0.0;
        for start in 0..pts - (n + 1) {
            let mut diff = Complex64::default();
            let mut size = 0.0;
            let mut binom = 1.0;
            for i in 0..=n + 1 {
                let sign = if (n + 1 - i) % 2 == 0 { 1.0 } else { -1.0 };
                let term = vals[start + i] * (sign * binom);
                diff += term;
                size += term.norm();
                binom = binom * (n + 1 - i) as f64 / (i + 1) as f64;
            }
            let rel = if size == 0.0 { 0.0 } else { diff.norm() / size };
            if rel > worst.2 {
                worst = (diff, Complex64::default(), rel);
            }
            res = res.max(rel);
        }
        t.part(format!("degree n={n}"), res);
    }
    let (lhs, rhs, _) = worst;
    Ok(t.finish(lhs, rhs, Comparison::Value))
}

/// `q_rho` values are unchanged when the completion `n^rho` is shifted by
/// integer combinations of the incident normals.
pub(crate) fn completion_invariance(c: &Cone, p: &ModuliPoint) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut worst = (Complex64::default(), Complex64::default(), -1.0);
    for (idx, k) in all_k_rho(c)?.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + idx as u64);
        let (a1, ratios) = k.ratios(&p.tau);
        let q: Vec<Complex64> = ratios.iter().map(|&x| (2.0 * PI * I * x).exp()).collect();
        let mut res: f64 = 0.0;
        for _ in 0..20 {
            let shifts: Vec<i64> = (0..k.normals.len())
                .map(|_| rng.gen_range(-5..=5))
                .collect();
            let k2 = k.reshifted(&shifts)?;
            require(
                k2.matrix[0] == k.matrix[0],
                "first row changed under reshift",
            )?;
            let (b1, ratios2) = k2.ratios(&p.tau);
            res = res.max(rel_err(a1, b1));
            for (qa, &x) in q.iter().zip(&ratios2) {
                let qb = (2.0 * PI * I * x).exp();
                let e = rel_err(*qa, qb);
                if e > worst.2 {
                    worst = (*qa, qb, e);
                }
                res = res.max(e);
            }
        }
        t.part(format!("ray {}", k.source_ray), res);
    }
    let (lhs, rhs, _) = worst;
    Ok(t.finish(lhs, rhs, Comparison::Value))
}
