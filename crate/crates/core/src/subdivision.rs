//! Unimodular subdivisions of cones and the signed inclusion–exclusion complex.
//!
//! A subdivision is a list of full-dimensional [`SimplicialCone`]s forming a
//! simplicial triangulation of the cone's base. Refinement inserts a primitive
//! lattice point `u = sum q_i m_i` (`0 <= q_i < 1`) of a non-unimodular cell and
//! star-subdivides every cell containing the smallest face through `u`, so each
//! new cell has strictly smaller multiplicity than the cell it replaces.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::cone::{face_lattice, is_good, make_cone, Cone, Goodness, IntVector};
use crate::error::{Error, Result};
use crate::int_linalg::{
    adjugate, complete_to_unimodular, gcd_of_maximal_minors, inverse_unimodular, narrow, rank,
};

/// A simplicial cone with `k` linearly independent generators in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplicialCone {
    pub generators: Vec<IntVector>,
    pub parent_dim: usize,
}

impl SimplicialCone {
    /// Generators are kept in lexicographic order.
    pub fn new(mut generators: Vec<IntVector>, parent_dim: usize) -> Self {
        generators.sort();
        SimplicialCone {
            generators,
            parent_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    fn rows(&self) -> Vec<Vec<i64>> {
        self.generators.iter().map(|g| g.0.clone()).collect()
    }

    /// Lattice index of the generators in the saturated lattice of their
    /// span (`|det|` when full-dimensional); 1 iff the cone is standard.
    pub fn multiplicity(&self) -> Result<u64> {
        let rows = self.rows();
        if rank(&rows) != rows.len() {
            return Err(Error::Degenerate);
        }
        let g = gcd_of_maximal_minors(&rows);
        Ok(narrow(&g)? as u64)
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.multiplicity(), Ok(1))
    }

    pub fn has_ray(&self, rho: &IntVector) -> bool {
        self.generators.contains(rho)
    }
}

/// One term of a [`SignedComplex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedTerm {
    pub generators: Vec<IntVector>,
    pub dim: usize,
    pub sign: i32,
    /// An `SL_r(Z)` (or `GL_r(Z)`) matrix whose first `dim` rows are the
    /// generators. Its inverse plays the role of the map sending the term to
    /// `R^k_{>=0}`; only the first `dim` coordinates `g_j . omega` are needed.
    #[serde(skip)]
    pub completion: Vec<Vec<i64>>,
    #[serde(skip)]
    inverse: Vec<Vec<i64>>,
}

impl SignedTerm {
    /// Coordinates `c` with `p = sum_j c_j b_j`, `b_j` the completion rows.
    fn coordinates(&self, p: &IntVector) -> Vec<i128> {
        let r = p.dim();
        (0..r)
            .map(|j| {
                (0..r)
                    .map(|i| p.0[i] as i128 * self.inverse[i][j] as i128)
                    .sum()
            })
            .collect()
    }

    /// Whether `p` lies in the closed term.
    pub fn contains(&self, p: &IntVector) -> bool {
        let c = self.coordinates(p);
        c.iter()
            .enumerate()
            .all(|(j, &x)| if j < self.dim { x >= 0 } else { x == 0 })
    }

    /// Whether `p` lies in the relative interior of the term.
    pub fn contains_relint(&self, p: &IntVector) -> bool {
        let c = self.coordinates(p);
        c.iter()
            .enumerate()
            .all(|(j, &x)| if j < self.dim { x > 0 } else { x == 0 })
    }
}

/// The signed decomposition of a cone into standard simplicial cones of all
/// dimensions `1..=r`, with signs `(-1)^(r-k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedComplex {
    pub terms: Vec<SignedTerm>,
    #[serde(skip)]
    pub source: Cone,
}

impl SignedComplex {
    /// Signed number of closed terms containing `p`; equals `[p in C]`.
    pub fn count(&self, p: &IntVector) -> i64 {
        self.terms
            .iter()
            .filter(|t| t.contains(p))
            .map(|t| t.sign as i64)
            .sum()
    }

    /// Number of terms containing `p` in their relative interior; equals `[p in C°]`.
    pub fn interior_count(&self, p: &IntVector) -> i64 {
        self.terms.iter().filter(|t| t.contains_relint(p)).count() as i64
    }

    pub fn top_terms(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.dim == self.source.dim())
            .count()
    }

    /// `[{generators, dim, sign}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.terms).expect("terms serialize")
    }
}

// ---------------------------------------------------------------------------
// initial triangulation

/// Pulling triangulation: the face with generator set `face` (of dimension
/// `d`) is coned from its lexicographically least generator over the
/// triangulations of its facets not containing it.
fn pull(
    gens: &[IntVector],
    lattice: &[(BTreeSet<usize>, usize)],
    face: &BTreeSet<usize>,
    d: usize,
) -> Vec<Vec<usize>> {
    if face.len() == d {
        return vec![face.iter().copied().collect()];
    }
    let apex = *face
        .iter()
        .min_by(|&&a, &&b| gens[a].cmp(&gens[b]))
        .expect("nonempty face");
    let mut out = Vec::new();
    for (sub, sub_dim) in lattice {
        if *sub_dim + 1 != d || !sub.is_subset(face) || sub.contains(&apex) {
            continue;
        }
        for mut cell in pull(gens, lattice, sub, *sub_dim) {
            cell.push(apex);
            out.push(cell);
        }
    }
    out
}

fn initial_triangulation(c: &Cone) -> Vec<SimplicialCone> {
    let gens = c.generators();
    let r = c.dim();
    if c.is_simplicial() {
        return vec![SimplicialCone::new(gens.to_vec(), r)];
    }
    let mut lattice: Vec<(BTreeSet<usize>, usize)> = face_lattice(c)
        .into_iter()
        .map(|f| {
            let d = if f.is_empty() {
                0
            } else {
                rank(&f.iter().map(|&i| gens[i].0.clone()).collect::<Vec<_>>())
            };
            (f, d)
        })
        .collect();
    lattice.push(((0..gens.len()).collect(), r));
    let all: BTreeSet<usize> = (0..gens.len()).collect();
    pull(gens, &lattice, &all, r)
        .into_iter()
        .map(|cell| SimplicialCone::new(cell.into_iter().map(|i| gens[i].clone()).collect(), r))
        .collect()
}

// ---------------------------------------------------------------------------
// refinement

/// Candidate `(score, u, q-numerators, det)` for a non-unimodular cell: the
/// primitive lattice point of the half-open parallelepiped minimising the
/// largest child multiplicity, ties broken lexicographically.
fn best_interior_point(cell: &SimplicialCone) -> Result<(IntVector, Vec<BigInt>, BigInt)> {
    let rows = cell.rows();
    let r = rows.len();
    // columns of M are the generators; q = M^{-1} u = adj(M) u / det(M)
    let m: Vec<Vec<i64>> = (0..r)
        .map(|i| rows.iter().map(|g| g[i]).collect())
        .collect();
    let (adj, d) = adjugate(&m);
    let (adj, d) = if d.is_negative() {
        (
            adj.into_iter()
                .map(|row| row.into_iter().map(|x| -x).collect())
                .collect::<Vec<Vec<BigInt>>>(),
            -d,
        )
    } else {
        (adj, d)
    };
    let lo: Vec<i64> = (0..r)
        .map(|i| rows.iter().map(|g| g[i].min(0)).sum())
        .collect();
    let hi: Vec<i64> = (0..r)
        .map(|i| rows.iter().map(|g| g[i].max(0)).sum())
        .collect();
    let mut best: Option<(BigInt, IntVector, Vec<BigInt>)> = None;
    let mut point = lo.clone();
    'outer: loop {
        let u = IntVector(point.clone());
        if !u.is_zero() && u.is_primitive() {
            let q: Vec<BigInt> = adj
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&point)
                        .map(|(a, &x)| a * BigInt::from(x))
                        .sum::<BigInt>()
                })
                .collect();
            if q.iter().all(|x| !x.is_negative() && x < &d) {
                let score = q.iter().max().cloned().unwrap_or_default();
                let better = match &best {
                    None => true,
                    Some((s, v, _)) => score < *s || (score == *s && u < *v),
                };
                if better {
                    best = Some((score, u, q));
                }
            }
        }
        for i in (0..r).rev() {
            if point[i] < hi[i] {
                point[i] += 1;
                for (p, &l) in point.iter_mut().zip(&lo).skip(i + 1) {
                    *p = l;
                }
                continue 'outer;
            }
        }
        break;
    }
    let (_, u, q) = best.ok_or_else(|| {
        Error::InvalidSubdivision("no interior lattice point in a non-unimodular cell".into())
    })?;
    Ok((u, q, d))
}

/// Replaces every cell containing all of `face` by its stellar subdivision at `u`.
fn star(cells: Vec<SimplicialCone>, face: &[IntVector], u: &IntVector) -> Vec<SimplicialCone> {
    let mut out = Vec::with_capacity(cells.len() + face.len());
    for cell in cells {
        if face.iter().all(|v| cell.generators.contains(v)) {
            for v in face {
                let gens = cell
                    .generators
                    .iter()
                    .map(|g| if g == v { u.clone() } else { g.clone() })
                    .collect();
                out.push(SimplicialCone::new(gens, cell.parent_dim));
            }
        } else {
            out.push(cell);
        }
    }
    out
}

/// Refines a simplicial triangulation until every cell is standard.
pub fn refine_to_unimodular(mut cells: Vec<SimplicialCone>) -> Result<Vec<SimplicialCone>> {
    loop {
        let mut worst: Option<(u64, usize)> = None;
        for (i, c) in cells.iter().enumerate() {
            let m = c.multiplicity()?;
            if m > 1 && worst.is_none_or(|(w, j)| m > w || (m == w && c < &cells[j])) {
                worst = Some((m, i));
            }
        }
        let Some((_, i)) = worst else { break };
        let (u, q, _) = best_interior_point(&cells[i])?;
        let face: Vec<IntVector> = cells[i]
            .generators
            .iter()
            .zip(&q)
            .filter(|(_, qi)| qi.is_positive())
            .map(|(g, _)| g.clone())
            .collect();
        cells = star(cells, &face, &u);
    }
    cells.sort();
    Ok(cells)
}

/// A unimodular subdivision of any full-dimensional strongly convex cone,
/// without the goodness precondition.
pub fn unimodular_subdivide_unchecked(c: &Cone) -> Result<Vec<SimplicialCone>> {
    refine_to_unimodular(initial_triangulation(c))
}

fn require_good(c: &Cone) -> Result<()> {
    match is_good(c)? {
        Goodness::Good(_) => Ok(()),
        Goodness::NotGood { violating } => Err(Error::NotGood {
            normals: violating.incident_normals,
        }),
    }
}

/// A subdivision of a good cone into standard simplicial cones forming a
/// simplicial triangulation of its base.
pub fn unimodular_subdivide(c: &Cone) -> Result<Vec<SimplicialCone>> {
    require_good(c)?;
    unimodular_subdivide_unchecked(c)
}

/// All distinct rays of a subdivision.
pub fn rays(pieces: &[SimplicialCone]) -> BTreeSet<IntVector> {
    pieces
        .iter()
        .flat_map(|p| p.generators.iter().cloned())
        .collect()
}

// ---------------------------------------------------------------------------
// ray avoidance

fn check_ray(c: &Cone, rho: &IntVector) -> Result<IntVector> {
    if rho.dim() != c.dim() || rho.is_zero() {
        return Err(Error::InvalidInput(
            "ray must be a nonzero vector in Z^r".into(),
        ));
    }
    let rho = rho.primitive();
    if !c.contains(&rho, false) {
        return Err(Error::RayOutsideCone(rho.0));
    }
    if c.generator_index(&rho).is_some() {
        return Err(Error::RayIsGenerator(rho.0));
    }
    Ok(rho)
}

/// Lattice points of `c` in the box `[-b, b]^r`, in lexicographic order.
fn lattice_points(c: &Cone, b: i64) -> Vec<IntVector> {
    let r = c.dim();
    let mut out = Vec::new();
    let mut p = vec![-b; r];
    loop {
        let v = IntVector(p.clone());
        if !v.is_zero() && v.is_primitive() && c.contains(&v, false) {
            out.push(v);
        }
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if p[i] < b {
                p[i] += 1;
                for x in p.iter_mut().skip(i + 1) {
                    *x = -b;
                }
                break;
            }
        }
    }
}

/// A standard simplicial cone `S` inside `c` in which `rho` is a nonnegative
/// integer combination of at least two generators, so `rho` is never a ray of
/// a triangulation that keeps `S` as a cell.
fn standard_cell_around(c: &Cone, rho: &IntVector) -> Option<SimplicialCone> {
    let r = c.dim();
    for b in 1..=4 {
        let pts = lattice_points(c, b);
        // restrict to points "near" rho to keep the search small
        let mut best: Option<(i128, SimplicialCone)> = None;
        for idx in crate::int_linalg::subsets(pts.len(), r) {
            let gens: Vec<IntVector> = idx.iter().map(|&i| pts[i].clone()).collect();
            if gens.contains(rho) {
                continue;
            }
            let m: Vec<Vec<i64>> = gens.iter().map(|g| g.0.clone()).collect();
            let Ok(inv) = inverse_unimodular(&m) else {
                continue;
            };
            // rho = sum lambda_j g_j  <=>  lambda = rho . inv (row convention)
            let lambda: Vec<i128> = (0..r)
                .map(|j| (0..r).map(|i| rho.0[i] as i128 * inv[i][j] as i128).sum())
                .collect();
            if lambda.iter().any(|&l| l < 0) || lambda.iter().filter(|&&l| l > 0).count() < 2 {
                continue;
            }
            let size: i128 = gens
                .iter()
                .flat_map(|g| g.0.iter())
                .map(|&x| (x as i128).abs())
                .sum();
            let cell = SimplicialCone::new(gens, r);
            if best
                .as_ref()
                .is_none_or(|(s, b)| size < *s || (size == *s && cell < *b))
            {
                best = Some((size, cell));
            }
        }
        if let Some((_, cell)) = best {
            return Some(cell);
        }
    }
    None
}

/// Placing triangulation of `cone(start ∪ points)` that keeps `start` as a cell.
fn placing_triangulation(
    start: SimplicialCone,
    points: &[IntVector],
) -> Result<Vec<SimplicialCone>> {
    let r = start.parent_dim;
    let mut cells = vec![start.clone()];
    let mut placed: Vec<IntVector> = start.generators.clone();
    for p in points {
        if placed.contains(p) {
            continue;
        }
        let hull = make_cone(placed.clone())?;
        if hull.contains(p, false) {
            placed.push(p.clone());
            continue;
        }
        // boundary (r-1)-faces of the current triangulation
        let mut face_count: BTreeMap<Vec<IntVector>, usize> = BTreeMap::new();
        for cell in &cells {
            for skip in 0..r {
                let f: Vec<IntVector> = cell
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, g)| g.clone())
                    .collect();
                *face_count.entry(f).or_default() += 1;
            }
        }
        let mut new_cells = Vec::new();
        for (f, n) in face_count {
            if n != 1 {
                continue;
            }
            let visible = hull
                .normals()
                .iter()
                .any(|nv| nv.dot(p) < 0 && f.iter().all(|v| nv.dot(v) == 0));
            if visible {
                let mut g = f.clone();
                g.push(p.clone());
                new_cells.push(SimplicialCone::new(g, r));
            }
        }
        cells.extend(new_cells);
        placed.push(p.clone());
    }
    Ok(cells)
}

/// A unimodular subdivision of a good cone in which `rho` is not a ray of
/// any cell.
///
/// Such a subdivision need not exist. If an integral functional `u` has
/// `u . g >= 1` on every generator and `u . rho = 1`, then `rho` is a ray of
/// every unimodular cell containing it. Height-one points of the pentagon cone
/// are an example. The error is then `NoAvoidingSubdivision`.
pub fn subdivide_avoiding_ray(c: &Cone, rho: &IntVector) -> Result<Vec<SimplicialCone>> {
    require_good(c)?;
    let rho = check_ray(c, rho)?;
    avoid_in(c, unimodular_subdivide_unchecked(c)?, rho)
}

/// Returns `base` if `rho` is not one of its rays; otherwise rebuilds the
/// subdivision around a standard cell that contains `rho` off its rays.
fn avoid_in(c: &Cone, base: Vec<SimplicialCone>, rho: IntVector) -> Result<Vec<SimplicialCone>> {
    if !rays(&base).contains(&rho) {
        return Ok(base);
    }
    let s =
        standard_cell_around(c, &rho).ok_or_else(|| Error::NoAvoidingSubdivision(rho.0.clone()))?;
    let cells = placing_triangulation(s, c.generators())?;
    let out = refine_to_unimodular(cells)?;
    if rays(&out).contains(&rho) {
        return Err(Error::NoAvoidingSubdivision(rho.0));
    }
    Ok(out)
}

/// A unimodular subdivision in which the interior lattice ray `rho` *is* a
/// ray: the standard subdivision is star-subdivided at `rho` and refined.
/// Used to produce a second, genuinely different subdivision.
pub fn subdivide_through_ray(c: &Cone, rho: &IntVector) -> Result<Vec<SimplicialCone>> {
    let rho = check_ray(c, rho)?;
    let base = unimodular_subdivide_unchecked(c)?;
    if rays(&base).contains(&rho) {
        return Ok(base);
    }
    let r = c.dim();
    let cell = base
        .iter()
        .find(|cell| {
            let m: Vec<Vec<i64>> = cell.rows();
            let inv = inverse_unimodular(&m).expect("standard cell");
            (0..r).all(|j| {
                (0..r)
                    .map(|i| rho.0[i] as i128 * inv[i][j] as i128)
                    .sum::<i128>()
                    >= 0
            })
        })
        .ok_or_else(|| Error::InvalidSubdivision("ray not covered by subdivision".into()))?;
    let inv = inverse_unimodular(&cell.rows())?;
    let face: Vec<IntVector> = cell
        .generators
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            (0..r)
                .map(|i| rho.0[i] as i128 * inv[i][*j] as i128)
                .sum::<i128>()
                > 0
        })
        .map(|(_, g)| g.clone())
        .collect();
    let cells = star(base, &face, &rho);
    refine_to_unimodular(cells)
}

/// Lifts a subdivision of `C` to one of `C x R_{>=0}` by appending `e_{r+1}`.
pub fn lift_to_half_line(pieces: &[SimplicialCone]) -> Vec<SimplicialCone> {
    pieces
        .iter()
        .map(|p| {
            let r = p.parent_dim;
            let mut gens: Vec<IntVector> = p
                .generators
                .iter()
                .map(|g| {
                    let mut e = g.0.clone();
                    e.push(0);
                    IntVector(e)
                })
                .collect();
            gens.push(IntVector::unit(r + 1, r));
            SimplicialCone::new(gens, r + 1)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// signed complex

fn validate_pieces(c: &Cone, pieces: &[SimplicialCone]) -> Result<()> {
    let r = c.dim();
    if pieces.is_empty() {
        return Err(Error::InvalidSubdivision("no pieces".into()));
    }
    let mut inverses = Vec::new();
    for p in pieces {
        if p.dim() != r || p.generators.iter().any(|g| g.dim() != r) {
            return Err(Error::InvalidSubdivision(
                "pieces must be full-dimensional".into(),
            ));
        }
        if !p.generators.iter().all(|g| c.contains(g, false)) {
            return Err(Error::InvalidSubdivision(format!(
                "piece {:?} leaves the cone",
                p.generators
            )));
        }
        if !p.is_standard() {
            return Err(Error::InvalidSubdivision(format!(
                "piece {:?} is not standard",
                p.generators
            )));
        }
        inverses.push(inverse_unimodular(&p.rows())?);
    }
    // union/disjointness on a sampled box
    let b: i64 = if r <= 3 { 4 } else { 2 };
    let mut p = vec![-b; r];
    loop {
        let v = IntVector(p.clone());
        let mut covering = 0;
        let mut interior = 0;
        for inv in &inverses {
            let coords: Vec<i128> = (0..r)
                .map(|j| (0..r).map(|i| v.0[i] as i128 * inv[i][j] as i128).sum())
                .collect();
            if coords.iter().all(|&x| x >= 0) {
                covering += 1;
            }
            if coords.iter().all(|&x| x > 0) {
                interior += 1;
            }
        }
        let inside = c.contains(&v, false);
        if inside != (covering > 0) || interior > 1 {
            return Err(Error::InvalidSubdivision(format!(
                "union/disjointness fails at {v}"
            )));
        }
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if p[i] < b {
                p[i] += 1;
                for x in p.iter_mut().skip(i + 1) {
                    *x = -b;
                }
                break;
            }
        }
    }
}

/// The signed inclusion–exclusion complex of a unimodular subdivision: every
/// face of dimension `k = 1..=r` of the triangulation that is not contained in
/// the boundary of `C`, with sign `(-1)^(r-k)`. Terms are ordered by
/// `(dim, generators)`.
pub fn inclusion_exclusion_complex(c: &Cone, pieces: &[SimplicialCone]) -> Result<SignedComplex> {
    validate_pieces(c, pieces)?;
    let r = c.dim();
    let mut faces: BTreeSet<(usize, Vec<IntVector>)> = BTreeSet::new();
    for p in pieces {
        let n = p.generators.len();
        for mask in 1u32..(1u32 << n) {
            let f: Vec<IntVector> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| p.generators[i].clone())
                .collect();
            if f.len() < r && c.on_common_facet(&f) {
                continue;
            }
            faces.insert((f.len(), f));
        }
    }
    let mut terms = Vec::with_capacity(faces.len());
    for (k, gens) in faces {
        let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.0.clone()).collect();
        let completion = complete_to_unimodular(&rows, r)?
            .ok_or_else(|| Error::InvalidSubdivision(format!("face {gens:?} is not standard")))?;
        let inverse = inverse_unimodular(&completion)?;
        terms.push(SignedTerm {
            generators: gens,
            dim: k,
            sign: if (r - k).is_multiple_of(2) { 1 } else { -1 },
            completion,
            inverse,
        });
    }
    Ok(SignedComplex {
        terms,
        source: c.clone(),
    })
}

/// Convenience: the signed complex of the default unimodular subdivision
/// (no goodness check; used for auxiliary cones such as `C x R_{>=0}`).
pub fn default_complex(c: &Cone) -> Result<SignedComplex> {
    inclusion_exclusion_complex(c, &unimodular_subdivide_unchecked(c)?)
}

/// Exact comparison of the signed count with the membership indicator over the
/// box `[lo, hi]^r`; returns the first mismatching point, if any.
pub fn check_signed_counts(sc: &SignedComplex, lo: i64, hi: i64) -> Option<IntVector> {
    let r = sc.source.dim();
    let mut p = vec![lo; r];
    loop {
        let v = IntVector(p.clone());
        let expect = i64::from(sc.source.contains(&v, false));
        let expect_int = i64::from(sc.source.contains(&v, true));
        if sc.count(&v) != expect || sc.interior_count(&v) != expect_int {
            return Some(v);
        }
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if p[i] < hi {
                p[i] += 1;
                for x in p.iter_mut().skip(i + 1) {
                    *x = lo;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn standard_cone_is_its_own_subdivision() {
        let s = unimodular_subdivide(&Cone::standard(3)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].generators, Cone::standard(3).generators());
    }

    #[test]
    fn conifold_is_cut_along_a_diagonal() {
        let s = unimodular_subdivide(&conifold()).unwrap();
        let expected = vec![
            SimplicialCone::new(vec![iv(&[0, 0, 1]), iv(&[0, 1, 1]), iv(&[1, 1, 1])], 3),
            SimplicialCone::new(vec![iv(&[0, 0, 1]), iv(&[1, 0, 1]), iv(&[1, 1, 1])], 3),
        ];
        assert_eq!(s, expected);
        assert!(s.iter().all(|p| p.multiplicity().unwrap() == 1));
    }

    #[test]
    fn non_good_simplicial_cone_gets_the_midpoint() {
        let c = make_cone(vec![iv(&[1, 0]), iv(&[1, 2])]).unwrap();
        assert!(matches!(
            unimodular_subdivide(&c),
            Err(Error::NotGood { .. })
        ));
        let s = unimodular_subdivide_unchecked(&c).unwrap();
        assert_eq!(s.len(), 2);
        assert!(rays(&s).contains(&iv(&[1, 1])));
        assert!(s.iter().all(|p| p.multiplicity().unwrap() == 1));
    }

    #[test]
    fn each_child_has_smaller_multiplicity() {
        let cell = SimplicialCone::new(vec![iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[1, 1, 5])], 3);
        let m = cell.multiplicity().unwrap();
        let (u, q, _) = best_interior_point(&cell).unwrap();
        let face: Vec<IntVector> = cell
            .generators
            .iter()
            .zip(&q)
            .filter(|(_, qi)| qi.is_positive())
            .map(|(g, _)| g.clone())
            .collect();
        for child in star(vec![cell.clone()], &face, &u) {
            assert!(child.multiplicity().unwrap() < m);
        }
    }

    #[test]
    fn avoiding_ray_examples() {
        let s2 = Cone::standard(2);
        let s = subdivide_avoiding_ray(&s2, &iv(&[1, 1])).unwrap();
        assert!(!rays(&s).contains(&iv(&[1, 1])));
        assert_eq!(
            subdivide_avoiding_ray(&s2, &iv(&[1, 0])),
            Err(Error::RayIsGenerator(vec![1, 0]))
        );
        assert_eq!(
            subdivide_avoiding_ray(&s2, &iv(&[-1, 1])),
            Err(Error::RayOutsideCone(vec![-1, 1]))
        );
        let through = subdivide_through_ray(&s2, &iv(&[1, 1])).unwrap();
        assert!(rays(&through).contains(&iv(&[1, 1])));
        let avoid = subdivide_avoiding_ray(&s2, &iv(&[1, 1])).unwrap();
        assert!(!rays(&avoid).contains(&iv(&[1, 1])));
        let s3 = Cone::standard(3);
        let s = subdivide_avoiding_ray(&s3, &iv(&[1, 1, 1])).unwrap();
        assert!(!rays(&s).contains(&iv(&[1, 1, 1])));
    }

    #[test]
    fn avoiding_a_ray_that_the_base_subdivision_uses() {
        // (1,1,2) = (0,0,1) + (1,1,1) lies on the diagonal wall; force it to be
        // a ray of the base subdivision, then rebuild around it.
        let c = conifold();
        let rho = iv(&[1, 1, 2]);
        let through = subdivide_through_ray(&c, &rho).unwrap();
        assert!(rays(&through).contains(&rho));
        let avoid = avoid_in(&c, through, rho.clone()).unwrap();
        assert!(!rays(&avoid).contains(&rho));
        assert!(avoid.iter().all(|p| p.is_standard()));
        let sc = inclusion_exclusion_complex(&c, &avoid).unwrap();
        assert_eq!(check_signed_counts(&sc, -3, 6), None);

        let s3 = Cone::standard(3);
        let rho = iv(&[1, 1, 1]);
        let through = subdivide_through_ray(&s3, &rho).unwrap();
        let avoid = avoid_in(&s3, through, rho.clone()).unwrap();
        assert!(!rays(&avoid).contains(&rho));
    }

    #[test]
    fn standard_2d_complex() {
        let s2 = Cone::standard(2);
        let pieces = subdivide_through_ray(&s2, &iv(&[1, 1])).unwrap();
        let sc = inclusion_exclusion_complex(&s2, &pieces).unwrap();
        let summary: Vec<(usize, i32)> = sc.terms.iter().map(|t| (t.dim, t.sign)).collect();
        assert_eq!(summary, vec![(1, -1), (2, 1), (2, 1)]);
        assert_eq!(sc.terms[0].generators, vec![iv(&[1, 1])]);
        assert_eq!(check_signed_counts(&sc, 0, 20), None);
        let trivial =
            inclusion_exclusion_complex(&s2, &unimodular_subdivide(&s2).unwrap()).unwrap();
        assert_eq!(trivial.terms.len(), 1);
        assert_eq!(trivial.terms[0].sign, 1);
    }

    #[test]
    fn conifold_complex() {
        let c = conifold();
        let sc = inclusion_exclusion_complex(&c, &unimodular_subdivide(&c).unwrap()).unwrap();
        let summary: Vec<(usize, i32)> = sc.terms.iter().map(|t| (t.dim, t.sign)).collect();
        assert_eq!(summary, vec![(2, -1), (3, 1), (3, 1)]);
        assert_eq!(sc.terms[0].generators, vec![iv(&[0, 0, 1]), iv(&[1, 1, 1])]);
        assert_eq!(check_signed_counts(&sc, 0, 8), None);
    }

    #[test]
    fn invalid_pieces_are_rejected() {
        let s2 = Cone::standard(2);
        let overlapping = vec![
            SimplicialCone::new(vec![iv(&[1, 0]), iv(&[0, 1])], 2),
            SimplicialCone::new(vec![iv(&[1, 0]), iv(&[1, 1])], 2),
        ];
        assert!(matches!(
            inclusion_exclusion_complex(&s2, &overlapping),
            Err(Error::InvalidSubdivision(_))
        ));
        let gap = vec![SimplicialCone::new(vec![iv(&[1, 0]), iv(&[1, 1])], 2)];
        assert!(matches!(
            inclusion_exclusion_complex(&s2, &gap),
            Err(Error::InvalidSubdivision(_))
        ));
    }

    #[test]
    fn lifted_complex_counts() {
        let c = conifold();
        let hat = c.times_half_line();
        let lifted = lift_to_half_line(&unimodular_subdivide(&c).unwrap());
        let sc = inclusion_exclusion_complex(&hat, &lifted).unwrap();
        assert_eq!(check_signed_counts(&sc, 0, 4), None);
    }
}
