//! Small dense linear algebra: exact row reduction over ℚ and a few float helpers.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..ncols {
                let delta = &f * &rows[r][j];
                rows[i][j] -= delta;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<BigRational>>) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x ∈ ℚ^ncols : row·x = 0 for every row}`.
pub fn nullspace(rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let (reduced, pivots) = rref(rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::from_integer(1.into());
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn to_f64(v: &[BigRational]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Exact rational value of each float (every finite f64 is a dyadic rational).
pub fn from_f64(v: &[f64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_float(x).unwrap_or_else(BigRational::zero))
        .collect()
}

/// Largest absolute entry, as a float.
pub fn max_abs(v: &[BigRational]) -> f64 {
    use num_traits::ToPrimitive;
    v.iter()
        .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    a.iter().map(|x| x / n).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Removes from `v` its components along the orthonormal `basis`, twice
/// (classical Gram-Schmidt with reorthogonalization).
pub fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}
