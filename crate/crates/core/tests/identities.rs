//! Identity checks at explicit points, and hypothesis guards.

use conegamma::corpus;
use conegamma::sl::{s_element, ModuliPoint};
use conegamma::verify::{
    decreasing_within_noise, product_residuals, verify, Identity, PRODUCT_NOISE_FLOOR,
};
use conegamma::{Error, EvalConfig};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(z: Complex64, tau: &[Complex64]) -> ModuliPoint {
    ModuliPoint::new(z, tau.to_vec())
}

#[test]
fn two_dimensional_s_element() {
    let (s, s_inv) = s_element(2).unwrap();
    assert_eq!(s, vec![vec![0, 0, -1], vec![0, 1, 0], vec![1, 0, 0]]);
    assert_eq!(s_inv, vec![vec![0, 0, 1], vec![0, 1, 0], vec![-1, 0, 0]]);
}

#[test]
fn elliptic_gamma_modularity_at_a_generic_point() {
    let cfg = EvalConfig::default();
    let tau = [c(0.3, 0.9), c(-0.2, 1.1), c(0.15, 0.7)];
    let check = verify(
        Identity::GrModularity,
        &corpus::standard(3),
        &point(c(0.21, 0.08), &tau),
        &cfg,
    )
    .unwrap();
    assert!(check.passed(), "{check:?}");
    assert!(check.residual <= 1e-8);
}

#[test]
fn cone_modularity_on_the_standard_cone_is_ordinary_modularity() {
    let cfg = EvalConfig::default();
    let omega = [c(1.0, 0.3), c(0.4, -0.8), c(0.7, 0.9)];
    let p = point(c(0.17, 0.05), &omega);
    let cone = verify(Identity::ConeModularity, &corpus::standard(3), &p, &cfg).unwrap();
    assert!(cone.passed(), "{cone:?}");
}

#[test]
fn multiple_sine_forms_on_the_cone_corpus() {
    let cfg = EvalConfig::default();
    let omega = [c(0.9, 0.35), c(0.6, -0.7), c(1.3, 0.2)];
    for cone in [corpus::conifold(), corpus::pentagon()] {
        let p = point(c(0.3, -0.1), &omega);
        for id in [
            Identity::SrCTwoForms,
            Identity::ConeModularity,
            Identity::SrCHomogeneity,
        ] {
            let check = verify(id, &cone, &p, &cfg).unwrap();
            assert!(check.passed(), "{id}: {check:?}");
        }
    }
}

#[test]
fn factorization_on_the_conifold() {
    let cfg = EvalConfig::default();
    let tau = [c(0.13, 0.21), c(-0.27, 0.19), c(0.31, 0.62)];
    let check = verify(
        Identity::GrCFactorization,
        &corpus::conifold(),
        &point(c(0.17, 0.05), &tau),
        &cfg,
    )
    .unwrap();
    assert!(check.passed(), "{check:?}");
    assert!(check.tail_bound <= 1e-8);
}

#[test]
fn partial_products_converge_on_the_standard_plane_cone() {
    let cfg = EvalConfig::default();
    let tau = [
        Complex64::from_polar(4.0, 1.2),
        Complex64::from_polar(3.8, 2.0),
    ];
    let p = point(c(0.4, 0.1), &tau);
    let residuals = product_residuals(&corpus::standard(2), &p, 30, &cfg).unwrap();
    assert_eq!(residuals.len(), 31);
    assert!(residuals[30] < 1e-4, "{residuals:?}");
    assert!(
        decreasing_within_noise(&residuals, PRODUCT_NOISE_FLOOR),
        "{residuals:?}"
    );
    assert!(residuals[0] > 1e3 * residuals[10].max(PRODUCT_NOISE_FLOOR));
}

fn is_hypothesis(e: Error) -> bool {
    matches!(e, Error::HypothesisViolated(_))
}

#[test]
fn real_period_ratios_are_reported_not_evaluated() {
    let cfg = EvalConfig::default();
    // all periods real: every ratio is real
    let real = [c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)];
    for id in [Identity::SrCTwoForms, Identity::ConeModularity] {
        let e = verify(id, &corpus::conifold(), &point(c(0.2, 0.1), &real), &cfg).unwrap_err();
        assert!(is_hypothesis(e), "{id}");
    }
    let parallel = [c(0.2, 0.9), c(0.4, 1.8), c(0.1, 0.7)];
    let e = verify(
        Identity::GrModularity,
        &corpus::standard(3),
        &point(c(0.2, 0.1), &parallel),
        &cfg,
    )
    .unwrap_err();
    assert!(is_hypothesis(e));
}

#[test]
fn other_hypotheses_are_reported() {
    let cfg = EvalConfig::default();
    let tau = [c(0.1, 0.5), c(0.2, 0.4)];
    let e = verify(
        Identity::PolylogExp,
        &corpus::standard(2),
        &point(c(0.1, -0.2), &tau),
        &cfg,
    )
    .unwrap_err();
    assert!(is_hypothesis(e));
    // Im tau outside the dual interior
    let e = verify(
        Identity::GrCFactorization,
        &corpus::standard(2),
        &point(c(0.1, 0.05), &[c(0.1, 0.5), c(0.2, -0.4)]),
        &cfg,
    )
    .unwrap_err();
    assert!(is_hypothesis(e));
}

#[test]
fn wrong_period_count_is_invalid_input() {
    let cfg = EvalConfig::default();
    let e = verify(
        Identity::SrCTwoForms,
        &corpus::conifold(),
        &point(c(0.1, 0.0), &[c(1.0, 0.2)]),
        &cfg,
    )
    .unwrap_err();
    assert!(matches!(e, Error::InvalidInput(_)));
}
