//! Linear subspaces of ℝⁿ.
//!
//! A [`Subspace`] keeps an orthonormal float basis for numerics and, alongside
//! it, an exact rational spanning set (in reduced row echelon form) for the
//! symbolic tests. Subspaces built from user vectors keep the exact span of
//! those vectors, so `span{(1,1)}` is represented exactly even though its
//! orthonormal basis vector is irrational.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Orthonormality and independence tolerance.
pub const BASIS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSubspace")]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<f64>>,
    #[serde(skip)]
    span: Vec<Vec<BigRational>>,
}

#[derive(Deserialize)]
struct RawSubspace {
    ambient: usize,
    basis: Vec<Vec<f64>>,
}

impl TryFrom<RawSubspace> for Subspace {
    type Error = Error;

    fn try_from(raw: RawSubspace) -> Result<Self> {
        for (i, b) in raw.basis.iter().enumerate() {
            if b.len() != raw.ambient {
                return Err(Error::DimensionMismatch {
                    expected: raw.ambient,
                    got: b.len(),
                });
            }
            for (j, c) in raw.basis.iter().enumerate().take(i + 1) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (linalg::dot(b, c) - target).abs() > 1e-9 {
                    return Err(Error::InvalidSubspace("basis is not orthonormal".into()));
                }
            }
        }
        Subspace::from_vectors(raw.ambient, &raw.basis)
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.span == other.span
    }
}

impl Subspace {
    pub fn trivial(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            span: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, &(0..ambient).collect::<Vec<_>>())
    }

    /// Span of the standard basis vectors with the given zero-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vecs: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| {
                let mut e = vec![0.0; ambient];
                e[i] = 1.0;
                e
            })
            .collect();
        Self::from_vectors(ambient, &vecs).expect("coordinate vectors are valid")
    }

    /// Span of arbitrary (not necessarily independent) float vectors; each
    /// float is read as the exact rational it encodes.
    pub fn from_vectors(ambient: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        let mut exact = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSubspace("non-finite basis entry".into()));
            }
            exact.push(linalg::from_f64(v));
        }
        Self::from_rational(ambient, exact)
    }

    /// Span of exact rational vectors.
    pub fn from_rational(ambient: usize, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: v.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Self::trivial(ambient));
        }
        let (span, _) = linalg::rref(vectors);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(span.len());
        for row in &span {
            let mut v = linalg::to_f64(row);
            linalg::orthogonalize(&mut v, &basis);
            let n = linalg::norm(&v);
            if n <= BASIS_TOL {
                return Err(Error::InvalidSubspace(
                    "spanning vectors are numerically dependent".into(),
                ));
            }
            basis.push(linalg::scaled(&v, 1.0 / n));
        }
        Ok(Self {
            ambient,
            basis,
            span,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Exact spanning rows (reduced echelon form).
    pub fn rational_span(&self) -> &[Vec<BigRational>] {
        &self.span
    }

    /// Orthogonal complement, computed exactly.
    pub fn complement(&self) -> Self {
        if self.span.is_empty() {
            return Self::full(self.ambient);
        }
        let ns = linalg::nullspace(self.span.clone(), self.ambient);
        Self::from_rational(self.ambient, ns).expect("nullspace rows are independent")
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient];
        for b in &self.basis {
            let c = linalg::dot(v, b);
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Coordinates of the projection of `v` in the orthonormal basis.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| linalg::dot(v, b)).collect()
    }

    /// `Σ y_j b_j`.
    pub fn from_coords(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient];
        for (c, b) in y.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Whether `v` lies in the subspace up to `tol·max(1,|v|)`.
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        let r = linalg::sub(v, &self.project(v));
        linalg::norm(&r) <= tol * linalg::norm(v).max(1.0)
    }

    pub fn contains_subspace(&self, other: &Self, tol: f64) -> bool {
        other.basis.iter().all(|b| self.contains(b, tol))
    }

    /// Exact inclusion test on the rational spans.
    pub fn includes(&self, other: &Self) -> bool {
        if other.ambient != self.ambient {
            return false;
        }
        let mut rows = self.span.clone();
        rows.extend(other.span.iter().cloned());
        linalg::rank(rows) == self.dim()
    }

    pub fn is_orthogonal_to(&self, other: &Self, tol: f64) -> bool {
        self.basis
            .iter()
            .all(|a| other.basis.iter().all(|b| linalg::dot(a, b).abs() <= tol))
    }

    /// `V × {0} ⊂ ℝ^{n+1}`.
    pub fn lift(&self) -> Self {
        let rows = self
            .span
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(BigRational::from_integer(0.into()));
                r
            })
            .collect();
        Self::from_rational(self.ambient + 1, rows).expect("lift preserves independence")
    }

    /// `V × ℝ ⊂ ℝ^{n+1}`.
    pub fn lift_with_line(&self) -> Self {
        let mut rows: Vec<Vec<BigRational>> = self.lift().span;
        let mut e = vec![BigRational::from_integer(0.into()); self.ambient + 1];
        e[self.ambient] = BigRational::from_integer(1.into());
        rows.push(e);
        Self::from_rational(self.ambient + 1, rows).expect("lift preserves independence")
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut rows = self.span.clone();
        rows.extend(other.span.iter().cloned());
        Self::from_rational(self.ambient, rows)
    }

    /// Human-readable span, e.g. `span{e1, e3}` or `span{(0.707, 0.707)}`.
    pub fn describe(&self) -> String {
        if self.is_trivial() {
            return "{0}".into();
        }
        let parts: Vec<String> = self
            .basis
            .iter()
            .map(|b| {
                let nz: Vec<usize> = (0..b.len()).filter(|&i| b[i].abs() > 1e-12).collect();
                if nz.len() == 1 && (b[nz[0]].abs() - 1.0).abs() < 1e-12 {
                    let sign = if b[nz[0]] < 0.0 { "-" } else { "" };
                    format!("{sign}e{}", nz[0] + 1)
                } else {
                    let xs: Vec<String> = b.iter().map(|x| format!("{x:.4}")).collect();
                    format!("({})", xs.join(", "))
                }
            })
            .collect();
        format!("span{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_diagonal() {
        let v = Subspace::from_vectors(2, &[vec![1.0, 1.0]]).unwrap();
        let c = v.complement();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[1.0, -1.0], 1e-12));
        assert!(v.is_orthogonal_to(&c, 1e-12));
        let s = 0.5f64.sqrt();
        assert!((v.basis()[0][0] - s).abs() < 1e-15);
    }

    #[test]
    fn dependent_vectors_collapse() {
        let v = Subspace::from_vectors(3, &[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap();
        assert_eq!(v.dim(), 1);
        assert!(Subspace::full(3).includes(&v));
        assert!(!v.includes(&Subspace::coordinate(3, &[0])));
    }

    #[test]
    fn lifts() {
        let v = Subspace::coordinate(2, &[0]);
        assert_eq!(v.lift(), Subspace::coordinate(3, &[0]));
        assert_eq!(v.lift_with_line(), Subspace::coordinate(3, &[0, 2]));
        assert_eq!(Subspace::trivial(2).complement(), Subspace::full(2));
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let v = Subspace::from_vectors(3, &[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert!(back.contains_subspace(&v, 1e-12) && v.contains_subspace(&back, 1e-12));
        let bad = r#"{"ambient":2,"basis":[[1.0,1.0]]}"#;
        assert!(serde_json::from_str::<Subspace>(bad).is_err());
    }

    #[test]
    fn describe_forms() {
        assert_eq!(Subspace::coordinate(3, &[0, 2]).describe(), "span{e1, e3}");
        assert_eq!(Subspace::trivial(2).describe(), "{0}");
    }
}
