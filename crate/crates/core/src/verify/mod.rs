//! Named numerical identity checks, seeded test-point sampling and
//! deterministic reports.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::cone::Cone;
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::sl::ModuliPoint;

mod checks;
mod report;
mod sampling;

pub use report::{default_suite, run_report, Report, SuiteEntry};
pub use sampling::sample_point;

/// Default number of partial products for [`Identity::GrCAsSrCProduct`].
pub const DEFAULT_PRODUCT_TERMS: usize = 30;

/// The supported identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// Modular property of `G_r` (both transforms).
    GrModularity,
    /// Product of `G_{r-2}` over the cone generators against the Bernoulli exponential.
    ConeModularity,
    /// The two product representations of `S_r^C`.
    SrCTwoForms,
    /// The two product representations of `S_r`.
    SrTwoForms,
    /// `S_r^C(cz | c omega) = S_r^C(z | omega)`.
    SrCHomogeneity,
    /// `G_{r-1}^C` against transformed ordinary `G_{r-1}` with a Bernoulli prefactor.
    GrCFactorization,
    /// `G^C` as an infinite product of multiple sines (partial products).
    GrCAsSrCProduct,
    /// Direct and polylogarithm evaluations of `G^C`, periodicity and inversion.
    GrCMethods,
    /// Interior lattice sum against the reflected closed sum.
    ConesumReflection,
    /// Closed-form lattice sums against direct summation.
    ConesumBruteForce,
    /// `(x|q)_inf = exp(-Li(x|q))`.
    PolylogExp,
    /// Inversion, shift and permutation relations of q-factorials.
    QfactRelations,
    /// Periodicity, shift and inversion relations of `G_r`.
    GrRelations,
    /// Reduction, scaling and reflection of Bernoulli polynomials.
    BernoulliProps,
    /// Polynomiality of `B^C_{r,n}` in `z`.
    BernoulliFit,
    /// Independence of the `q_rho` from the completion choice.
    CompletionInvariance,
}

impl Identity {
    pub const ALL: [Identity; 16] = [
        Identity::GrModularity,
        Identity::ConeModularity,
        Identity::SrCTwoForms,
        Identity::SrTwoForms,
        Identity::SrCHomogeneity,
        Identity::GrCFactorization,
        Identity::GrCAsSrCProduct,
        Identity::GrCMethods,
        Identity::ConesumReflection,
        Identity::ConesumBruteForce,
        Identity::PolylogExp,
        Identity::QfactRelations,
        Identity::GrRelations,
        Identity::BernoulliProps,
        Identity::BernoulliFit,
        Identity::CompletionInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::GrModularity => "Gr_modularity",
            Identity::ConeModularity => "cone_modularity",
            Identity::SrCTwoForms => "SrC_two_forms",
            Identity::SrTwoForms => "Sr_two_forms",
            Identity::SrCHomogeneity => "SrC_homogeneity",
            Identity::GrCFactorization => "GrC_factorization",
            Identity::GrCAsSrCProduct => "GrC_as_SrC_product",
            Identity::GrCMethods => "GrC_methods",
            Identity::ConesumReflection => "conesum_reflection",
            Identity::ConesumBruteForce => "conesum_brute_force",
            Identity::PolylogExp => "polylog_exp",
            Identity::QfactRelations => "qfact_relations",
            Identity::GrRelations => "Gr_relations",
            Identity::BernoulliProps => "bernoulli_props",
            Identity::BernoulliFit => "bernoulli_fit",
            Identity::CompletionInvariance => "completion_invariance",
        }
    }

    /// Whether the identity involves the cone (otherwise only the number of
    /// periods matters).
    pub fn uses_cone(self) -> bool {
        !matches!(
            self,
            Identity::GrModularity
                | Identity::SrTwoForms
                | Identity::PolylogExp
                | Identity::QfactRelations
                | Identity::GrRelations
        )
    }

    /// Relative tolerance applied to the residual, given the number of
    /// periods. The generic tier depends on the index `r` of the functions
    /// involved, which is one less than the number of periods for `G_r`.
    pub fn tolerance(self, periods: usize, cfg: &EvalConfig) -> f64 {
        let r = match self {
            Identity::GrModularity | Identity::GrRelations => periods.saturating_sub(1),
            _ => periods,
        };
        let generic = if r <= 3 { cfg.tol } else { cfg.tol.max(1e-6) };
        match self {
            Identity::ConesumBruteForce | Identity::CompletionInvariance => 1e-12,
            Identity::ConesumReflection | Identity::PolylogExp | Identity::QfactRelations => 1e-10,
            Identity::BernoulliProps => 1e-9,
            Identity::BernoulliFit => 1e-8,
            Identity::GrCFactorization => cfg.tol.max(1e-6),
            Identity::GrCAsSrCProduct => 1e-4,
            _ => generic,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// How `lhs` and `rhs` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Both sides are values; residual `|lhs - rhs| / max(|lhs|, |rhs|)`.
    Value,
    /// Both sides are logarithms; residual `|exp(lhs - rhs) - 1|` (mod `2 pi i`).
    Log,
}

/// A named sub-comparison of a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Part {
    pub label: String,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Inputs of a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckInputs {
    /// Cone name when known.
    pub cone_name: Option<String>,
    /// Cone generators, when the identity involves a cone.
    pub cone: Option<Vec<Vec<i64>>>,
    pub z: Complex64,
    /// `tau` or `omega`, depending on the identity.
    pub periods: Vec<Complex64>,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub inputs: CheckInputs,
    pub comparison: Comparison,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Largest residual over all parts.
    pub residual: f64,
    pub tolerance: f64,
    /// Largest tail bound reported by any truncated evaluation of the check.
    pub tail_bound: f64,
    pub factors: u64,
    pub parts: Vec<Part>,
    pub status: Status,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn from_outcome(
        identity: Identity,
        inputs: CheckInputs,
        o: checks::Outcome,
        cfg: &EvalConfig,
    ) -> Self {
        let residual = o.parts.iter().map(|p| p.residual).fold(0.0, f64::max);
        let tolerance = identity.tolerance(inputs.periods.len(), cfg);
        let ok = residual <= tolerance && o.tail_bound <= cfg.tail_guard;
        IdentityCheck {
            name: identity.name().to_string(),
            inputs,
            comparison: o.comparison,
            lhs: o.lhs,
            rhs: o.rhs,
            residual,
            tolerance,
            tail_bound: o.tail_bound,
            factors: o.factors,
            parts: o.parts,
            status: if ok { Status::Pass } else { Status::Fail },
            error: None,
        }
    }

    /// A failed check carrying an evaluation error.
    pub fn errored(identity: Identity, inputs: CheckInputs, err: &Error, cfg: &EvalConfig) -> Self {
        IdentityCheck {
            name: identity.name().to_string(),
            comparison: Comparison::Value,
            lhs: Complex64::default(),
            rhs: Complex64::default(),
            residual: f64::INFINITY,
            tolerance: identity.tolerance(inputs.periods.len(), cfg),
            tail_bound: 0.0,
            factors: 0,
            parts: Vec::new(),
            status: Status::Fail,
            error: Some(err.to_string()),
            inputs,
        }
    }
}

pub(crate) fn inputs_for(
    identity: Identity,
    cone: &Cone,
    name: Option<&str>,
    p: &ModuliPoint,
) -> CheckInputs {
    let uses = identity.uses_cone();
    CheckInputs {
        cone_name: if uses { name.map(str::to_string) } else { None },
        cone: uses.then(|| cone.generators().iter().map(|g| g.0.clone()).collect()),
        z: p.z,
        periods: p.tau.clone(),
    }
}

/// Runs one identity at one point. Identities that do not involve a cone
/// ignore `cone` and use `point.tau` as their periods.
///
/// Violated genericity hypotheses raise `HypothesisViolated` instead of
/// producing a residual.
pub fn verify(
    identity: Identity,
    cone: &Cone,
    point: &ModuliPoint,
    cfg: &EvalConfig,
) -> Result<IdentityCheck> {
    verify_named(identity, cone, None, point, cfg)
}

/// [`verify`] with the cone's corpus name recorded in the inputs.
pub fn verify_named(
    identity: Identity,
    cone: &Cone,
    cone_name: Option<&str>,
    point: &ModuliPoint,
    cfg: &EvalConfig,
) -> Result<IdentityCheck> {
    if identity.uses_cone() && point.tau.len() != cone.dim() {
        return Err(Error::InvalidInput(format!(
            "{identity} on a cone of dimension {} needs {} periods",
            cone.dim(),
            cone.dim()
        )));
    }
    let o = match identity {
        Identity::GrModularity => checks::gr_modularity(point, cfg)?,
        Identity::ConeModularity => checks::cone_modularity(cone, point, cfg)?,
        Identity::SrCTwoForms => checks::src_two_forms(cone, point, cfg)?,
        Identity::SrTwoForms => checks::sr_two_forms(point, cfg)?,
        Identity::SrCHomogeneity => checks::src_homogeneity(cone, point, cfg)?,
        Identity::GrCFactorization => checks::grc_factorization(cone, point, cfg)?,
        Identity::GrCAsSrCProduct => {
            return partial_product_check(cone, cone_name, point, DEFAULT_PRODUCT_TERMS, cfg)
        }
        Identity::GrCMethods => checks::grc_methods(cone, point, cfg)?,
        Identity::ConesumReflection => checks::conesum_reflection(cone, point, cfg)?,
        Identity::ConesumBruteForce => checks::conesum_brute_force(cone, point)?,
        Identity::PolylogExp => checks::polylog_exp(point, cfg)?,
        Identity::QfactRelations => checks::qfact_relations(point, cfg)?,
        Identity::GrRelations => checks::gr_relations(point, cfg)?,
        Identity::BernoulliProps => checks::bernoulli_props(cone, point)?,
        Identity::BernoulliFit => checks::bernoulli_fit(cone, point)?,
        Identity::CompletionInvariance => checks::completion_invariance(cone, point)?,
    };
    Ok(IdentityCheck::from_outcome(
        identity,
        inputs_for(identity, cone, cone_name, point),
        o,
        cfg,
    ))
}

/// Residuals of the partial products `K = 0..=k_max` of `G^C` as a product of
/// multiple sines.
pub fn product_residuals(
    cone: &Cone,
    point: &ModuliPoint,
    k_max: usize,
    cfg: &EvalConfig,
) -> Result<Vec<f64>> {
    Ok(checks::grc_as_src_product(cone, point, k_max, cfg)?.1)
}

/// Whether `residuals` decrease, allowing increases only below `noise`.
pub fn decreasing_within_noise(residuals: &[f64], noise: f64) -> bool {
    residuals.windows(2).all(|w| w[1] <= w[0] || w[1] <= noise)
}

/// Noise floor for the partial-product trend: rounding in the accumulated logarithms.
pub const PRODUCT_NOISE_FLOOR: f64 = 1e-11;

fn partial_product_check(
    cone: &Cone,
    cone_name: Option<&str>,
    point: &ModuliPoint,
    k_max: usize,
    cfg: &EvalConfig,
) -> Result<IdentityCheck> {
    let (o, residuals) = checks::grc_as_src_product(cone, point, k_max, cfg)?;
    let identity = Identity::GrCAsSrCProduct;
    let mut check = IdentityCheck::from_outcome(
        identity,
        inputs_for(identity, cone, cone_name, point),
        o,
        cfg,
    );
    // the residual of the identity is the one of the last partial product
    check.residual = *residuals.last().expect("at least one partial product");
    let trend = decreasing_within_noise(&residuals, PRODUCT_NOISE_FLOOR);
    let ok = check.residual <= check.tolerance && check.tail_bound <= cfg.tail_guard && trend;
    check.status = if ok { Status::Pass } else { Status::Fail };
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for i in Identity::ALL {
            assert_eq!(i.name().parse::<Identity>().unwrap(), i);
        }
        assert!(matches!(
            "nope".parse::<Identity>(),
            Err(Error::UnknownIdentity(_))
        ));
    }

    #[test]
    fn trend_detection() {
        assert!(decreasing_within_noise(
            &[1.0, 0.5, 0.1, 1e-13, 2e-13],
            1e-11
        ));
        assert!(!decreasing_within_noise(&[1.0, 0.5, 0.7], 1e-11));
    }
}
