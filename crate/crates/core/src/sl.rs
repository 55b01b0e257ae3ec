//! The unimodular matrices attached to the rays of a good cone, the `S`
//! element, and the fractional-linear action on `(z | tau)`.
//!
//! For a ray `m` with incident normals `v_1..v_{r-1}`, the map is
//! `K = [n, v_1, ..., v_{r-1}]^{-1}` (columns), where `n` completes the normals
//! to a unimodular matrix. Its first row is always `m`.

use num_complex::Complex64;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cone::{require_good, Cone, IntVector};
use crate::error::{Error, Result};
use crate::int_linalg::{complete_to_unimodular, det, inverse_unimodular, reduce_modulo_span};

/// `K~_rho` together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularMap {
    /// Row-major `r x r` matrix.
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
    pub source_ray: IntVector,
    /// The ordered incident normals `v_1..v_{r-1}`.
    pub normals: Vec<IntVector>,
    pub completion: IntVector,
}

impl UnimodularMap {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// `K~ omega`.
    pub fn apply(&self, omega: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(omega).map(|(&k, &w)| w * k as f64).sum())
            .collect()
    }

    /// `((K~ omega)_1, [(K~ omega)_j / (K~ omega)_1 for j = 2..r])`.
    pub fn ratios(&self, omega: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let a = self.apply(omega);
        let a1 = a[0];
        (a1, a[1..].iter().map(|&x| x / a1).collect())
    }

    /// The same construction with `n` replaced by `n + sum a_i v_i`.
    pub fn reshifted(&self, shifts: &[i64]) -> Result<UnimodularMap> {
        if shifts.len() != self.normals.len() {
            return Err(Error::InvalidInput("one shift per normal".into()));
        }
        let mut n = self.completion.0.clone();
        for (v, &a) in self.normals.iter().zip(shifts) {
            for (x, &y) in n.iter_mut().zip(&v.0) {
                *x = x
                    .checked_add(a.checked_mul(y).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
        }
        build(self.source_ray.clone(), self.normals.clone(), IntVector(n))
    }
}

fn build(m: IntVector, normals: Vec<IntVector>, n: IntVector) -> Result<UnimodularMap> {
    let r = m.dim();
    // V has columns n, v_1, ..., v_{r-1}
    let v: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            std::iter::once(n.0[i])
                .chain(normals.iter().map(|nv| nv.0[i]))
                .collect()
        })
        .collect();
    let d = det(&v);
    let matrix = inverse_unimodular(&v).map_err(|_| Error::NotGood {
        normals: Vec::new(),
    })?;
    let det = if d.is_negative() { -1 } else { 1 };
    debug_assert!(d.abs().is_one());
    debug_assert_eq!(matrix[0], m.0);
    Ok(UnimodularMap {
        matrix,
        det,
        source_ray: m,
        normals,
        completion: n,
    })
}

/// `K~_rho` for the generator with index `rho_index` of a good cone.
pub fn k_rho(c: &Cone, rho_index: usize) -> Result<UnimodularMap> {
    require_good(c)?;
    k_rho_unchecked(c, rho_index)
}

/// As [`k_rho`], skipping the goodness check (the completion still has to exist).
pub fn k_rho_unchecked(c: &Cone, rho_index: usize) -> Result<UnimodularMap> {
    let r = c.dim();
    let m = c
        .generators()
        .get(rho_index)
        .ok_or_else(|| Error::InvalidInput(format!("no generator with index {rho_index}")))?
        .clone();
    let mut normals: Vec<IntVector> = c
        .incident_normals(&m)
        .into_iter()
        .map(|i| c.normals()[i].clone())
        .collect();
    if normals.len() != r - 1 {
        return Err(Error::NonSimpleRay {
            ray: m.0.clone(),
            normals: normals.len(),
            expected: r - 1,
        });
    }
    // canonical order: lexicographically decreasing, then orientation fixed
    // by swapping the last two (so the standard cone at e_1 gives the identity)
    normals.sort_by(|a, b| b.cmp(a));
    if r >= 3 {
        let mut rows = vec![m.0.clone()];
        rows.extend(normals.iter().map(|v| v.0.clone()));
        if det(&rows).is_negative() {
            normals.swap(r - 3, r - 2);
        }
    }
    // any n with m . n = 1: first column of the inverse of a unimodular
    // completion of the row m
    let comp = complete_to_unimodular(std::slice::from_ref(&m.0), r)?.ok_or(Error::NotGood {
        normals: c.incident_normals(&m),
    })?;
    let inv = inverse_unimodular(&comp)?;
    let n0: Vec<i64> = inv.iter().map(|row| row[0]).collect();
    let basis: Vec<Vec<i64>> = normals.iter().map(|v| v.0.clone()).collect();
    let n = reduce_modulo_span(&n0, &basis)?;
    build(m, normals, IntVector(n))
}

/// `K~_rho` for every generator, in generator order.
pub fn all_k_rho(c: &Cone) -> Result<Vec<UnimodularMap>> {
    require_good(c)?;
    (0..c.generators().len())
        .map(|i| k_rho_unchecked(c, i))
        .collect()
}

/// `diag(K~, 1)`.
pub fn embed_sl(k: &UnimodularMap) -> Vec<Vec<i64>> {
    let r = k.dim();
    let mut out = vec![vec![0i64; r + 1]; r + 1];
    for (i, row) in k.matrix.iter().enumerate() {
        out[i][..r].copy_from_slice(row);
    }
    out[r][r] = 1;
    out
}

/// The `(r+1) x (r+1)` element `S` and its inverse.
pub fn s_element(r: usize) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    if r < 2 {
        return Err(Error::InvalidInput("S is defined for r >= 2".into()));
    }
    let n = r + 1;
    let mut s = vec![vec![0i64; n]; n];
    let mut s_inv = vec![vec![0i64; n]; n];
    s[0][r] = -1;
    s[r][0] = 1;
    s_inv[0][r] = 1;
    s_inv[r][0] = -1;
    for i in 1..r {
        s[i][i] = 1;
        s_inv[i][i] = 1;
    }
    Ok((s, s_inv))
}

/// The parameter tuple `(z | tau_1, ..., tau_r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuliPoint {
    pub z: Complex64,
    pub tau: Vec<Complex64>,
}

impl ModuliPoint {
    pub fn new(z: Complex64, tau: Vec<Complex64>) -> Self {
        ModuliPoint { z, tau }
    }
}

/// Fractional-linear action of an `(r+1) x (r+1)` integer matrix on
/// `(z | tau)` through the homogeneous coordinates `(tau, 1)`.
pub fn act(g: &[Vec<i64>], p: &ModuliPoint, singular_guard: f64) -> Result<ModuliPoint> {
    let r = p.tau.len();
    if g.len() != r + 1 || g.iter().any(|row| row.len() != r + 1) {
        return Err(Error::InvalidInput("matrix size must be r+1".into()));
    }
    let ext: Vec<Complex64> = p
        .tau
        .iter()
        .copied()
        .chain(std::iter::once(Complex64::new(1.0, 0.0)))
        .collect();
    let y: Vec<Complex64> = g
        .iter()
        .map(|row| row.iter().zip(&ext).map(|(&k, &t)| t * k as f64).sum())
        .collect();
    let den = y[r];
    let scale = y.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if den.norm() <= singular_guard * scale {
        return Err(Error::SingularAction(den.norm()));
    }
    Ok(ModuliPoint {
        z: p.z / den,
        tau: y[..r].iter().map(|&w| w / den).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::make_cone;
    use crate::int_linalg::mat_mul;

    fn iv(v: &[i64]) -> IntVector {
        IntVector(v.to_vec())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
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
    fn standard_plane_ray_e2() {
        let s2 = Cone::standard(2);
        let idx = s2.generator_index(&iv(&[0, 1])).unwrap();
        let k = k_rho(&s2, idx).unwrap();
        assert_eq!(k.matrix, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(k.det, -1);
        assert_eq!(k.completion, iv(&[0, 1]));
        let e = embed_sl(&k);
        assert_eq!(det(&e), num_bigint::BigInt::from(-1));
    }

    #[test]
    fn standard_ray_e1_gives_identity() {
        for r in 2..=5 {
            let s = Cone::standard(r);
            let idx = s.generator_index(&IntVector::unit(r, 0)).unwrap();
            let k = k_rho(&s, idx).unwrap();
            assert_eq!(k.matrix, crate::int_linalg::identity(r), "r = {r}");
        }
    }

    #[test]
    fn conifold_maps_have_first_row_m_and_det_one() {
        let c = conifold();
        for (i, m) in c.generators().iter().enumerate() {
            let k = k_rho(&c, i).unwrap();
            assert_eq!(k.matrix[0], m.0);
            assert_eq!(k.det, 1);
            assert_eq!(det(&k.matrix), num_bigint::BigInt::one());
            assert_eq!(det(&embed_sl(&k)), num_bigint::BigInt::one());
        }
        let idx = c.generator_index(&iv(&[1, 1, 1])).unwrap();
        let k = k_rho(&c, idx).unwrap();
        let nset: Vec<IntVector> = k.normals.clone();
        assert!(nset.contains(&iv(&[-1, 0, 1])) && nset.contains(&iv(&[0, -1, 1])));
    }

    #[test]
    fn non_simple_and_non_good() {
        let bad = make_cone(vec![iv(&[1, 0]), iv(&[1, 2])]).unwrap();
        assert!(matches!(k_rho(&bad, 0), Err(Error::NotGood { .. })));
    }

    #[test]
    fn s_element_shape() {
        let (s, s_inv) = s_element(2).unwrap();
        assert_eq!(s, vec![vec![0, 0, -1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(mat_mul(&s, &s_inv).unwrap(), crate::int_linalg::identity(3));
        for r in 2..=5 {
            let (s, s_inv) = s_element(r).unwrap();
            assert_eq!(det(&s), num_bigint::BigInt::one());
            assert_eq!(
                mat_mul(&s, &s_inv).unwrap(),
                crate::int_linalg::identity(r + 1)
            );
        }
    }

    #[test]
    fn s_action_formula() {
        let p = ModuliPoint::new(c(0.2, 0.1), vec![c(0.3, 0.9), c(-0.2, 1.1), c(0.15, 0.7)]);
        let (s, s_inv) = s_element(3).unwrap();
        let q = act(&s, &p, 1e-12).unwrap();
        let t1 = p.tau[0];
        assert!((q.z - p.z / t1).norm() < 1e-15);
        assert!((q.tau[0] + 1.0 / t1).norm() < 1e-15);
        assert!((q.tau[1] - p.tau[1] / t1).norm() < 1e-15);
        let q = act(&s_inv, &p, 1e-12).unwrap();
        assert!((q.z + p.z / t1).norm() < 1e-15);
        assert!((q.tau[0] + 1.0 / t1).norm() < 1e-15);
        assert!((q.tau[2] + p.tau[2] / t1).norm() < 1e-15);
        let id = crate::int_linalg::identity(4);
        assert_eq!(act(&id, &p, 1e-12).unwrap(), p);
    }

    #[test]
    fn singular_action() {
        let p = ModuliPoint::new(c(0.2, 0.1), vec![c(0.0, 0.0), c(1.0, 1.0)]);
        let (s, _) = s_element(2).unwrap();
        assert!(matches!(act(&s, &p, 1e-12), Err(Error::SingularAction(_))));
    }

    #[test]
    fn completion_shift_only_moves_ratios_by_integers() {
        let c = conifold();
        let omega = vec![c_(0.3, 0.8), c_(-0.4, 1.2), c_(0.9, 0.5)];
        for i in 0..c.generators().len() {
            let k = k_rho(&c, i).unwrap();
            let (a1, q) = k.ratios(&omega);
            for shifts in [[1, 0], [0, -2], [3, 5]] {
                let k2 = k.reshifted(&shifts).unwrap();
                assert_eq!(k2.matrix[0], k.matrix[0]);
                let (b1, q2) = k2.ratios(&omega);
                assert!((a1 - b1).norm() < 1e-14);
                for (x, y) in q.iter().zip(&q2) {
                    let d = x - y;
                    assert!((d.re - d.re.round()).abs() < 1e-12 && d.im.abs() < 1e-12);
                }
            }
        }
    }

    fn c_(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
}
