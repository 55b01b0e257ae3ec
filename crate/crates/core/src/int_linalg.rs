//! Exact integer linear algebra on small dense matrices.
//!
//! Matrices are stored row-major as `Vec<Vec<_>>`. Entries enter as `i64`,
//! every intermediate quantity (determinants, minors, adjugates, column
//! operations) is carried in `BigInt`, and results are narrowed back to `i64`
//! with an explicit [`Error::Overflow`] when they do not fit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) type BigMatrix = Vec<Vec<BigInt>>;

pub(crate) fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub(crate) fn narrow(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow)
}

pub(crate) fn narrow_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(narrow).collect()
}

pub(crate) fn narrow_matrix(m: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    m.iter().map(|row| narrow_vec(row)).collect()
}

/// Fraction-free Gaussian elimination (Bareiss). Empty matrix has det 1.
pub(crate) fn det_big(mut m: BigMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub(crate) fn det(m: &[Vec<i64>]) -> BigInt {
    det_big(to_big(m))
}

/// Rank over Q.
pub(crate) fn rank(m: &[Vec<i64>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mut a = to_big(m);
    let rows = a.len();
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[r][j] * &g;
                a[i][j] = v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn minor(m: &[Vec<BigInt>], skip_row: usize, skip_col: usize) -> BigMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// For `k = r - 1` rows of length `r`, the vector `w` with
/// `w . x = det[x; rows]` for every `x`.
pub(crate) fn cofactor_vector(rows: &[Vec<i64>], r: usize) -> Vec<BigInt> {
    debug_assert_eq!(rows.len() + 1, r);
    let big = to_big(rows);
    (0..r)
        .map(|i| {
            let sub: BigMatrix = big
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det_big(sub);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub(crate) fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub(crate) fn primitive_big(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub(crate) fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|&x| x / g).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

/// gcd of all `k x k` minors of a `k x r` matrix (the product of its Smith
/// invariant factors).
pub(crate) fn gcd_of_maximal_minors(rows: &[Vec<i64>]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    let r = rows[0].len();
    let big = to_big(rows);
    let mut g = BigInt::zero();
    for cols in combinations(r, k) {
        let sub: BigMatrix = big
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&det_big(sub));
        if g.is_one() {
            break;
        }
    }
    g
}

/// Adjugate and determinant: `m * adj = det * I`.
pub(crate) fn adjugate(m: &[Vec<i64>]) -> (BigMatrix, BigInt) {
    let n = m.len();
    let big = to_big(m);
    let d = det_big(big.clone());
    if n == 1 {
        return (vec![vec![BigInt::one()]], d);
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det_big(minor(&big, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    (adj, d)
}

/// Inverse of a matrix with determinant +-1.
pub(crate) fn inverse_unimodular(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let (adj, d) = adjugate(m);
    if !d.abs().is_one() {
        return Err(Error::InvalidInput(format!(
            "matrix is not unimodular (det {d})"
        )));
    }
    let inv: BigMatrix = adj
        .into_iter()
        .map(|row| row.into_iter().map(|x| x * &d).collect())
        .collect();
    narrow_matrix(&inv)
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s: i128 = 0;
            for (l, bl) in b.iter().enumerate() {
                s += a[i][l] as i128 * bl[j] as i128;
            }
            out[i][j] = i64::try_from(s).map_err(|_| Error::Overflow)?;
        }
    }
    Ok(out)
}

pub(crate) fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Extends `k <= r` rows to an `r x r` integer matrix with determinant +1
/// (or +-1 when `k == r`, where nothing can be adjusted). Returns `None` when
/// the rows cannot be completed, i.e. the gcd of their maximal minors is not 1.
pub(crate) fn complete_to_unimodular(rows: &[Vec<i64>], r: usize) -> Result<Option<Vec<Vec<i64>>>> {
    let k = rows.len();
    if k > r || rows.iter().any(|row| row.len() != r) {
        return Err(Error::InvalidInput(
            "rows do not fit an r x r matrix".into(),
        ));
    }
    if !gcd_of_maximal_minors(rows).is_one() {
        return Ok(None);
    }
    if k == r {
        return Ok(Some(rows.to_vec()));
    }
    // Column operations a -> a * u bring the rows to lower-triangular form
    // [l | 0]; the last r - k rows of u^{-1} complete them.
    let mut a = to_big(rows);
    let mut u: BigMatrix = to_big(&identity(r));
    for i in 0..k {
        for j in i + 1..r {
            if a[i][j].is_zero() {
                continue;
            }
            let (x, y) = (a[i][i].clone(), a[i][j].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (xg, yg) = (&x / &g, &y / &g);
            for mat in [&mut a, &mut u] {
                for row in mat.iter_mut() {
                    let ci = row[i].clone();
                    let cj = row[j].clone();
                    row[i] = &s * &ci + &t * &cj;
                    row[j] = -&yg * &ci + &xg * &cj;
                }
            }
        }
    }
    let u_small = narrow_matrix(&u)?;
    let u_inv = inverse_unimodular(&u_small)?;
    let mut out: Vec<Vec<i64>> = rows.to_vec();
    out.extend(u_inv[k..].iter().cloned());
    let d = det(&out);
    if d.is_negative() {
        for x in out[r - 1].iter_mut() {
            *x = -*x;
        }
    }
    debug_assert!(det(&out).is_one());
    Ok(Some(out))
}

/// Rounds `num / den` to the nearest integer (ties toward +inf).
pub(crate) fn round_ratio(num: &BigInt, den: &BigInt) -> BigInt {
    let (n, d) = if den.is_negative() {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    (BigInt::from(2) * n + &d).div_floor(&(BigInt::from(2) * d))
}

/// Reduces `v` modulo the integer span of `basis`: subtracts the rounded
/// least-squares combination of the basis vectors.
pub(crate) fn reduce_modulo_span(v: &[i64], basis: &[Vec<i64>]) -> Result<Vec<i64>> {
    let k = basis.len();
    if k == 0 {
        return Ok(v.to_vec());
    }
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let gram: Vec<Vec<i64>> = basis
        .iter()
        .map(|bi| basis.iter().map(|bj| dot(bi, bj)).collect())
        .collect();
    let rhs: Vec<i64> = basis.iter().map(|b| dot(b, v)).collect();
    let g_det = det(&gram);
    if g_det.is_zero() {
        return Err(Error::Degenerate);
    }
    let mut out: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    for i in 0..k {
        let mut gi = gram.clone();
        for (row, &b) in gi.iter_mut().zip(&rhs) {
            row[i] = b;
        }
        let c = round_ratio(&det(&gi), &g_det);
        for (o, &b) in out.iter_mut().zip(&basis[i]) {
            *o -= &c * BigInt::from(b);
        }
    }
    narrow_vec(&out)
}
