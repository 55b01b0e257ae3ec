//! Property tests for the structural invariants of cones, subdivisions, the
//! unimodular maps, lattice sums, Bernoulli polynomials, the special
//! functions and the identity checks.

use std::collections::BTreeSet;

use conegamma::bernoulli::{classical_bernoulli, generalized_bernoulli, Region};
use conegamma::cone::{dual_cone, faces, is_good, make_cone, multiplicity, IntVector};
use conegamma::cone_sums::{cone_sum, ConeSumPlan, DEFAULT_POLE_GUARD};
use conegamma::corpus;
use conegamma::series::PowerSeries;
use conegamma::sl::{act, all_k_rho, ModuliPoint};
use conegamma::special::q_factorial;
use conegamma::subdivision::{
    check_signed_counts, inclusion_exclusion_complex, rays, subdivide_avoiding_ray,
    subdivide_through_ray, unimodular_subdivide,
};
use conegamma::verify::{sample_point, verify, Identity};
use conegamma::{Cone, Error, EvalConfig};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// A unimodular matrix as a product of elementary row operations.
fn unimodular(r: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % r, j % r);
        if i != j {
            let row = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(row) {
                *x += k * y;
            }
        }
    }
    m
}

/// A corpus cone moved by a random `GL_r(Z)` element; goodness is preserved.
fn good_cone() -> impl Strategy<Value = Cone> {
    (
        0usize..5,
        prop::collection::vec((0usize..4, 0usize..4, -1i64..=1), 0..4),
    )
        .prop_map(|(which, ops)| {
            let (_, base) = corpus::default_corpus().swap_remove(which);
            let u = unimodular(base.dim(), &ops);
            let gens = base
                .generators()
                .iter()
                .map(|g| IntVector(mat_vec(&u, &g.0)))
                .collect();
            make_cone(gens).expect("image of a valid cone")
        })
}

/// Whether some integral `u` with `u . g = 1` on `r` independent generators
/// has `u . g >= 1` on all of them and `u . rho = 1`. Then every lattice point
/// of a unimodular cell is a nonnegative integer combination of its rays, so
/// `rho` must be one of them and no subdivision can avoid it.
fn height_one_obstruction(c: &Cone, rho: &IntVector) -> bool {
    let gens = c.generators();
    let r = c.dim();
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        if let Some(u) = solve_unit_heights(&subset.iter().map(|&i| &gens[i].0).collect::<Vec<_>>())
        {
            let height = |v: &[i64]| {
                v.iter()
                    .zip(&u)
                    .map(|(&a, b)| Rational64::from_integer(a) * b)
                    .sum::<Rational64>()
            };
            let one = Rational64::from_integer(1);
            if u.iter().all(|x| x.is_integer())
                && gens.iter().all(|g| height(&g.0) >= one)
                && height(&rho.0) == one
            {
                return true;
            }
        }
        // next r-subset in lexicographic order
        let Some(i) = (0..r).rev().find(|&i| subset[i] < gens.len() - r + i) else {
            return false;
        };
        subset[i] += 1;
        for j in i + 1..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// The `u` with `u . g = 1` for each row `g`, if the rows are independent.
fn solve_unit_heights(rows: &[&Vec<i64>]) -> Option<Vec<Rational64>> {
    let r = rows.len();
    let mut a: Vec<Vec<Rational64>> = rows
        .iter()
        .map(|g| {
            g.iter()
                .map(|&x| Rational64::from_integer(x))
                .chain([Rational64::from_integer(1)])
                .collect()
        })
        .collect();
    for col in 0..r {
        let p = (col..r).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let pivot = a[col][col];
        for x in &mut a[col] {
            *x /= pivot;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                let row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[r]).collect())
}

fn small_cone() -> impl Strategy<Value = Result<Cone, Error>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3..6)
        .prop_map(|gs| make_cone(gs.into_iter().map(IntVector).collect()))
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn box_points(r: usize, lo: i64, hi: i64) -> Vec<IntVector> {
    let mut out = vec![IntVector(vec![])];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.0.clone();
                    q.push(x);
                    IntVector(q)
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_primitive_and_satisfy_every_normal(c in small_cone()) {
        if let Ok(c) = c {
            for g in c.generators() {
                prop_assert!(g.is_primitive());
                for v in c.normals() {
                    prop_assert!(g.dot(v) >= 0);
                }
            }
        }
    }

    #[test]
    fn dual_of_dual_is_the_cone(c in small_cone()) {
        if let Ok(c) = c {
            let dd = dual_cone(&dual_cone(&c).unwrap()).unwrap();
            let a: BTreeSet<_> = c.generators().iter().cloned().collect();
            let b: BTreeSet<_> = dd.generators().iter().cloned().collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn strongly_convex_and_boundary_is_tight(c in small_cone()) {
        if let Ok(c) = c {
            for p in box_points(3, -3, 3) {
                if !p.is_zero() {
                    prop_assert!(!(c.contains(&p, false) && c.contains(&p.neg(), false)));
                }
                let boundary = c.contains(&p, false) && !c.contains(&p, true);
                let tight = c.contains(&p, false) && c.normals().iter().any(|v| v.dot(&p) == 0);
                prop_assert_eq!(boundary, tight);
            }
        }
    }

    #[test]
    fn face_generators_lie_on_their_facets(c in small_cone()) {
        if let Ok(c) = c {
            for codim in 1..=c.dim() {
                for f in faces(&c, codim) {
                    for &i in &f.incident_normals {
                        for g in &f.generators {
                            prop_assert_eq!(c.normals()[i].dot(g), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn simplicial_cone_is_good_iff_unimodular(gs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3)) {
        if let Ok(c) = make_cone(gs.into_iter().map(IntVector).collect()) {
            if c.is_simplicial() {
                let unimod = multiplicity(c.generators()).unwrap() == 1;
                prop_assert_eq!(is_good(&c).unwrap().is_good(), unimod);
            }
        }
    }
}

#[test]
fn standard_cones_are_good() {
    for r in 2..=6 {
        assert!(is_good(&corpus::standard(r)).unwrap().is_good());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivisions_are_unimodular_and_count_exactly(c in good_cone()) {
        let pieces = unimodular_subdivide(&c).unwrap();
        for p in &pieces {
            prop_assert_eq!(p.multiplicity().unwrap(), 1);
        }
        let sc = inclusion_exclusion_complex(&c, &pieces).unwrap();
        let hi = if c.dim() == 2 { 6 } else { 3 };
        prop_assert_eq!(check_signed_counts(&sc, -hi, hi), None);
    }

    #[test]
    fn avoiding_a_ray_keeps_it_out(c in good_cone(), w in prop::collection::vec(1i64..4, 5)) {
        let mut rho = vec![0; c.dim()];
        for (g, k) in c.generators().iter().zip(&w) {
            for (x, y) in rho.iter_mut().zip(&g.0) {
                *x += k * y;
            }
        }
        let rho = IntVector(rho).primitive();
        match subdivide_avoiding_ray(&c, &rho) {
            Ok(pieces) => {
                prop_assert!(!rays(&pieces).contains(&rho));
                let sc = inclusion_exclusion_complex(&c, &pieces).unwrap();
                prop_assert_eq!(check_signed_counts(&sc, -3, 3), None);
            }
            Err(Error::NoAvoidingSubdivision(_)) => {
                prop_assert!(height_one_obstruction(&c, &rho), "refused to avoid {:?}", rho);
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        let through = subdivide_through_ray(&c, &rho).unwrap();
        prop_assert!(rays(&through).contains(&rho));
    }

    #[test]
    fn cone_sums_do_not_depend_on_the_subdivision(
        c in good_cone(),
        w in prop::collection::vec(1i64..4, 5),
        omega in prop::collection::vec(complex(), 4),
    ) {
        let omega = &omega[..c.dim()];
        let mut rho = vec![0; c.dim()];
        for (g, k) in c.generators().iter().zip(&w) {
            for (x, y) in rho.iter_mut().zip(&g.0) {
                *x += k * y;
            }
        }
        let rho = IntVector(rho).primitive();
        let a = cone_sum(&c, omega);
        let other = inclusion_exclusion_complex(&c, &subdivide_through_ray(&c, &rho).unwrap()).unwrap();
        let b = ConeSumPlan::from_complex(other).sum(omega, 1e-3);
        // only compare where both subdivisions are well away from their poles
        prop_assume!(a.is_ok() && b.is_ok());
        let (a, b) = (a.unwrap(), b.unwrap());
        prop_assert!(rel(a, b) < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn unimodular_maps_fix_the_first_row(c in good_cone()) {
        for k in all_k_rho(&c).unwrap() {
            prop_assert_eq!(&k.matrix[0], &k.source_ray.0);
            if c.dim() >= 3 {
                prop_assert_eq!(k.det, 1);
            } else {
                prop_assert_eq!(k.det.abs(), 1);
            }
            let omega: Vec<Complex64> = (0..c.dim()).map(|j| Complex64::new(0.3 + j as f64, 0.7 - j as f64)).collect();
            let first: Complex64 = k.source_ray.0.iter().zip(&omega).map(|(&a, &w)| w * a as f64).sum();
            prop_assert!((k.apply(&omega)[0] - first).norm() < 1e-12);
        }
    }

    #[test]
    fn completion_shifts_move_ratios_by_integers(c in good_cone(), shifts in prop::collection::vec(-5i64..=5, 3)) {
        let omega: Vec<Complex64> = (0..c.dim()).map(|j| Complex64::new(0.4 + 0.3 * j as f64, 0.9 - 0.2 * j as f64)).collect();
        for k in all_k_rho(&c).unwrap() {
            let s = &shifts[..k.normals.len()];
            let moved = k.reshifted(s).unwrap();
            let (_, a) = k.ratios(&omega);
            let (_, b) = moved.ratios(&omega);
            for (x, y) in a.iter().zip(&b) {
                let d = y - x;
                prop_assert!((d.re - d.re.round()).abs() < 1e-9 && d.im.abs() < 1e-9);
            }
        }
    }
}

fn sl_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0usize..3, 0usize..3, -1i64..=1), 0..5)
        .prop_map(|ops| unimodular(3, &ops))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_a_left_action(g in sl_matrix(), h in sl_matrix(), z in complex(), t in prop::collection::vec(complex(), 2)) {
        let p = ModuliPoint::new(z, t.iter().map(|w| w + Complex64::new(0.0, 1.5)).collect());
        let gh: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).map(|k| g[i][k] * h[k][j]).sum()).collect())
            .collect();
        if let (Ok(a), Ok(hp)) = (act(&gh, &p, 1e-6), act(&h, &p, 1e-6)) {
            if let Ok(b) = act(&g, &hp, 1e-6) {
                prop_assert!((a.z - b.z).norm() < 1e-9 * (1.0 + a.z.norm()));
                for (x, y) in a.tau.iter().zip(&b.tau) {
                    prop_assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()));
                }
            }
        }
    }

    #[test]
    fn series_products_only_see_lower_orders(
        a in prop::collection::vec(complex(), 8),
        b in prop::collection::vec(complex(), 8),
        junk in complex(),
    ) {
        let pa = PowerSeries { coefficients: a.clone(), order_offset: 0 };
        let pb = PowerSeries { coefficients: b, order_offset: 0 };
        let mut a2 = a;
        a2[7] = junk;
        let pa2 = PowerSeries { coefficients: a2, order_offset: 0 };
        let x = &pa * &pb;
        let y = &pa2 * &pb;
        for k in 0..7 {
            prop_assert_eq!(x.coefficient(k), y.coefficient(k));
        }
    }

    #[test]
    fn bernoulli_reduces_and_scales(
        r in 1usize..=4,
        n in 0usize..=6,
        z in complex(),
        omega in prop::collection::vec((0.3f64..1.0, -1.0f64..1.0), 4),
        c in (0.5f64..2.0, -3.0f64..3.0),
    ) {
        let omega: Vec<Complex64> = omega[..r].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let cone = corpus::standard(r);
        let general = generalized_bernoulli(&cone, n, z, &omega, Region::Closed).unwrap().value;
        let classical = classical_bernoulli(n, z, &omega).unwrap();
        prop_assert!((general - classical).norm() <= 1e-12 * (1.0 + classical.norm()));
        let c = Complex64::from_polar(c.0, c.1);
        let scaled: Vec<Complex64> = omega.iter().map(|w| w * c).collect();
        let lhs = classical_bernoulli(n, c * z, &scaled).unwrap();
        let rhs = c.powi(n as i32 - r as i32) * classical;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn q_factorial_is_symmetric_with_bounded_tail(
        z in complex(),
        t in prop::collection::vec((-0.5f64..0.5, 0.06f64..0.8, any::<bool>()), 3),
    ) {
        let cfg = EvalConfig::default();
        let tau: Vec<Complex64> = t.iter().map(|&(a, b, s)| Complex64::new(a, if s { b } else { -b })).collect();
        let a = q_factorial(z, &tau, &cfg).unwrap();
        let rev: Vec<Complex64> = tau.iter().rev().copied().collect();
        let b = q_factorial(z, &rev, &cfg).unwrap();
        prop_assert!(rel(a.value, b.value) < 1e-12);
        prop_assert!(a.tail_bound <= cfg.tail_guard);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Every identity holds at seeded admissible points, and a check passes
    /// exactly when its residual and tail bound are within their limits.
    #[test]
    fn identities_hold_at_sampled_points(seed in any::<u64>(), which in 0usize..16, cone in 0usize..5) {
        let cfg = EvalConfig::default();
        let id = Identity::ALL[which];
        let (_, c) = corpus::default_corpus().swap_remove(cone);
        let c = if id == Identity::GrCAsSrCProduct { corpus::standard(2) } else { c };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_point(id, &c, &mut rng).unwrap();
        let check = verify(id, &c, &p, &cfg).unwrap();
        let within = check.residual <= check.tolerance && check.tail_bound <= cfg.tail_guard;
        prop_assert!(check.passed(), "{} on {:?}: {:?}", id, c.generators(), check);
        prop_assert!(within || !check.passed());
    }
}

#[test]
fn default_pole_guard_is_the_documented_one() {
    assert_eq!(DEFAULT_POLE_GUARD, EvalConfig::default().pole_guard);
}
