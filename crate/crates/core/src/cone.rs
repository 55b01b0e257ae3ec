//! Strongly convex rational polyhedral cones.
//!
//! A [`Cone`] is built from a ray description and carries both its primitive
//! extreme rays and its primitive inward facet normals, so that
//! `x` lies in the cone iff `x . v >= 0` for every normal `v`. All arithmetic
//! here is exact.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int_linalg::{
    cofactor_vector, complete_to_unimodular, det, gcd_of_maximal_minors, narrow, narrow_vec,
    primitive_big, primitive_i64, rank, subsets,
};

/// An integer vector in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn unit(r: usize, i: usize) -> Self {
        IntVector((0..r).map(|j| i64::from(i == j)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &IntVector) -> i128 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    /// Divides out the gcd of the entries.
    pub fn primitive(&self) -> IntVector {
        IntVector(primitive_i64(&self.0))
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive() == *self && !self.is_zero()
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

/// Input format for a cone: `{"dim": r, "generators": [[...], ...]}`.
/// Normals are always derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl ConeSpec {
    pub fn build(&self) -> Result<Cone> {
        if self.generators.iter().any(|g| g.len() != self.dim) {
            return Err(Error::InvalidInput(format!(
                "every generator must have length {}",
                self.dim
            )));
        }
        make_cone(self.generators.iter().cloned().map(IntVector).collect())
    }
}

/// A full-dimensional, strongly convex rational cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cone {
    dim: usize,
    generators: Vec<IntVector>,
    normals: Vec<IntVector>,
}

/// A face of a cone: the generators it contains and the facet normals that
/// vanish on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub codim: usize,
    pub incident_normals: Vec<usize>,
    pub generator_indices: Vec<usize>,
    pub generators: Vec<IntVector>,
}

/// Completion of the incident normals of one face to an `SL_r(Z)` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceCertificate {
    pub codim: usize,
    pub incident_normals: Vec<usize>,
    /// Rows: the incident normals followed by the completing rows.
    pub completion: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Goodness {
    Good(Vec<FaceCertificate>),
    NotGood { violating: Face },
}

impl Goodness {
    pub fn is_good(&self) -> bool {
        matches!(self, Goodness::Good(_))
    }
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn spec(&self) -> ConeSpec {
        ConeSpec {
            dim: self.dim,
            generators: self.generators.iter().map(|g| g.0.clone()).collect(),
        }
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim
    }

    pub fn generator_index(&self, v: &IntVector) -> Option<usize> {
        self.generators.iter().position(|g| g == v)
    }

    /// Indices of the normals vanishing on `v`.
    pub fn incident_normals(&self, v: &IntVector) -> Vec<usize> {
        self.normals
            .iter()
            .enumerate()
            .filter(|(_, n)| n.dot(v) == 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `x . v >= 0` for all normals (`> 0` when `strict`, i.e. `x` in the interior).
    pub fn contains(&self, point: &IntVector, strict: bool) -> bool {
        self.normals.iter().all(|n| {
            let d = n.dot(point);
            if strict {
                d > 0
            } else {
                d >= 0
            }
        })
    }

    /// Whether all of `points` lie on a common facet.
    pub fn on_common_facet(&self, points: &[IntVector]) -> bool {
        self.normals
            .iter()
            .any(|n| points.iter().all(|p| n.dot(p) == 0))
    }

    /// The standard cone `R^r_{>=0}`.
    pub fn standard(r: usize) -> Cone {
        let mut basis: Vec<IntVector> = (0..r).map(|i| IntVector::unit(r, i)).collect();
        basis.sort();
        Cone {
            dim: r,
            generators: basis.clone(),
            normals: basis,
        }
    }

    /// `C x R_{>=0}`: generators lifted with a trailing 0 plus `e_{r+1}`.
    pub fn times_half_line(&self) -> Cone {
        let r = self.dim;
        let lift = |v: &IntVector| {
            let mut e = v.0.clone();
            e.push(0);
            IntVector(e)
        };
        let mut generators: Vec<IntVector> = self.generators.iter().map(lift).collect();
        generators.push(IntVector::unit(r + 1, r));
        let mut normals: Vec<IntVector> = self.normals.iter().map(lift).collect();
        normals.push(IntVector::unit(r + 1, r));
        generators.sort();
        normals.sort();
        Cone {
            dim: r + 1,
            generators,
            normals,
        }
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

fn rows(vs: &[&IntVector]) -> Vec<Vec<i64>> {
    vs.iter().map(|v| v.0.clone()).collect()
}

/// A nonnegative nontrivial relation `sum l_i g_i = 0` among the generators,
/// searched over circuits (minimal dependent subsets).
fn has_nonnegative_relation(gens: &[IntVector], r: usize) -> bool {
    let n = gens.len();
    let full_rank = rank(&gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
    for size in 2..=(full_rank + 1).min(n) {
        for idx in subsets(n, size) {
            let m: Vec<Vec<i64>> = idx.iter().map(|&i| gens[i].0.clone()).collect();
            if rank(&m) != size - 1 {
                continue;
            }
            // pick size-1 independent coordinates; the kernel of the
            // restricted size x (size-1) system is spanned by its cofactors
            let mut cols = Vec::new();
            for c in 0..r {
                let mut trial = cols.clone();
                trial.push(c);
                let sub: Vec<Vec<i64>> = m
                    .iter()
                    .map(|row| trial.iter().map(|&j| row[j]).collect())
                    .collect();
                if rank(&sub) == trial.len() {
                    cols = trial;
                }
                if cols.len() == size - 1 {
                    break;
                }
            }
            let restricted_t: Vec<Vec<i64>> = cols
                .iter()
                .map(|&j| m.iter().map(|row| row[j]).collect())
                .collect();
            let lambda = cofactor_vector(&restricted_t, size);
            let pos = lambda.iter().all(|x| !x.is_negative());
            let neg = lambda.iter().all(|x| !x.is_positive());
            if (pos || neg) && lambda.iter().any(|x| !x.is_zero()) {
                return true;
            }
        }
    }
    false
}

/// Builds a validated cone from a ray description: generators are
/// primitivized, deduplicated and pruned to extreme rays, and the facet normals
/// are enumerated.
pub fn make_cone(generators: Vec<IntVector>) -> Result<Cone> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput(
            "a cone needs at least one generator".into(),
        ));
    };
    let r = first.dim();
    if r == 0 || generators.iter().any(|g| g.dim() != r) {
        return Err(Error::InvalidInput(
            "generators must be nonempty vectors of equal length".into(),
        ));
    }
    let mut seen = HashSet::new();
    let gens: Vec<IntVector> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(IntVector::primitive)
        .filter(|g| seen.insert(g.clone()))
        .collect();
    if gens.is_empty() {
        return Err(Error::NotFullDimensional { rank: 0, dim: r });
    }
    if has_nonnegative_relation(&gens, r) {
        return Err(Error::NotStronglyConvex);
    }
    let rk = rank(&gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
    if rk < r {
        return Err(Error::NotFullDimensional { rank: rk, dim: r });
    }

    let mut normals: BTreeSet<IntVector> = BTreeSet::new();
    for idx in subsets(gens.len(), r - 1) {
        let sel: Vec<&IntVector> = idx.iter().map(|&i| &gens[i]).collect();
        let m = rows(&sel);
        if rank(&m) != r - 1 {
            continue;
        }
        let w = IntVector(narrow_vec(&primitive_big(&cofactor_vector(&m, r)))?);
        let signs: Vec<i128> = gens.iter().map(|g| w.dot(g).signum()).collect();
        if signs.iter().all(|&s| s >= 0) {
            normals.insert(w);
        } else if signs.iter().all(|&s| s <= 0) {
            normals.insert(w.neg());
        }
    }
    let normals: Vec<IntVector> = normals.into_iter().collect();

    let mut extreme: Vec<IntVector> = gens
        .into_iter()
        .filter(|g| {
            let inc: Vec<Vec<i64>> = normals
                .iter()
                .filter(|n| n.dot(g) == 0)
                .map(|n| n.0.clone())
                .collect();
            rank(&inc) == r - 1
        })
        .collect();
    extreme.sort();
    Ok(Cone {
        dim: r,
        generators: extreme,
        normals,
    })
}

/// The dual cone, generated by the normals of `c`.
pub fn dual_cone(c: &Cone) -> Result<Cone> {
    make_cone(c.normals.clone())
}

/// All faces of `c` as sets of generator indices, including the apex (empty set).
pub(crate) fn face_lattice(c: &Cone) -> Vec<BTreeSet<usize>> {
    let facets: Vec<BTreeSet<usize>> = c
        .normals
        .iter()
        .map(|n| {
            c.generators
                .iter()
                .enumerate()
                .filter(|(_, g)| n.dot(g) == 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut all: BTreeSet<BTreeSet<usize>> = facets.iter().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = facets.clone();
    while let Some(f) = frontier.pop() {
        for g in &facets {
            let inter: BTreeSet<usize> = f.intersection(g).copied().collect();
            if all.insert(inter.clone()) {
                frontier.push(inter);
            }
        }
    }
    all.into_iter().collect()
}

fn build_face(c: &Cone, idx: &BTreeSet<usize>) -> Face {
    let generators: Vec<IntVector> = idx.iter().map(|&i| c.generators[i].clone()).collect();
    let dim = if generators.is_empty() {
        0
    } else {
        rank(&generators.iter().map(|g| g.0.clone()).collect::<Vec<_>>())
    };
    let incident_normals = c
        .normals
        .iter()
        .enumerate()
        .filter(|(_, n)| generators.iter().all(|g| n.dot(g) == 0))
        .map(|(i, _)| i)
        .collect();
    Face {
        codim: c.dim - dim,
        incident_normals,
        generator_indices: idx.iter().copied().collect(),
        generators,
    }
}

/// All faces of the given codimension (`1..=r`; codimension `r` is the apex).
pub fn faces(c: &Cone, codim: usize) -> Vec<Face> {
    let mut out: Vec<Face> = face_lattice(c)
        .iter()
        .map(|idx| build_face(c, idx))
        .filter(|f| f.codim == codim)
        .collect();
    if codim == c.dim && out.is_empty() {
        out.push(build_face(c, &BTreeSet::new()));
    }
    out.sort_by(|a, b| a.generator_indices.cmp(&b.generator_indices));
    out
}

/// Goodness: at every codimension-`k` face the `k` incident normals complete
/// to an `SL_r(Z)` matrix. The apex is checked only when exactly `r` facets
/// meet there; a non-simplicial apex is skipped.
pub fn is_good(c: &Cone) -> Result<Goodness> {
    let r = c.dim;
    let mut certs = Vec::new();
    for codim in 1..=r {
        for face in faces(c, codim) {
            let k = face.incident_normals.len();
            if k != codim {
                if codim == r {
                    continue;
                }
                return Err(Error::NonSimpleFace { codim, normals: k });
            }
            let m: Vec<Vec<i64>> = face
                .incident_normals
                .iter()
                .map(|&i| c.normals[i].0.clone())
                .collect();
            if !gcd_of_maximal_minors(&m).is_one() {
                return Ok(Goodness::NotGood { violating: face });
            }
            let completion = complete_to_unimodular(&m, r)?.ok_or(Error::NotGood {
                normals: face.incident_normals.clone(),
            })?;
            certs.push(FaceCertificate {
                codim,
                incident_normals: face.incident_normals,
                completion,
            });
        }
    }
    Ok(Goodness::Good(certs))
}

/// Fails with [`Error::NotGood`] unless `c` is good.
pub fn require_good(c: &Cone) -> Result<()> {
    match is_good(c)? {
        Goodness::Good(_) => Ok(()),
        Goodness::NotGood { violating } => Err(Error::NotGood {
            normals: violating.incident_normals,
        }),
    }
}

/// `|det|` of `r` linearly independent generators.
pub fn multiplicity(generators: &[IntVector]) -> Result<u64> {
    let r = generators.len();
    if r == 0 || generators.iter().any(|g| g.dim() != r) {
        return Err(Error::InvalidInput(
            "multiplicity needs r vectors in Z^r".into(),
        ));
    }
    let d = det(&generators.iter().map(|g| g.0.clone()).collect::<Vec<_>>());
    if d.is_zero() {
        return Err(Error::Degenerate);
    }
    let d = narrow(&d.abs())?;
    Ok(d as u64)
}

/// Membership test; see [`Cone::contains`].
pub fn contains(c: &Cone, point: &IntVector, strict: bool) -> bool {
    c.contains(point, strict)
}
