//! Discretized affine slices `(x₀ + W) ∩ X`.

use serde::{Deserialize, Serialize};

use super::domain::Domain;
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Upper bound on the number of cells in one slice.
pub const MAX_CELLS: usize = 4_000_000;

/// Axis-aligned box in `W`-coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Extent {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Extent {
    /// `[-half, half]^k`.
    pub fn cube(k: usize, half: f64) -> Self {
        Self {
            lo: vec![-half; k],
            hi: vec![half; k],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// Lattice coordinates of a cell: its centre is `x₀ + Σ c_j·h·b_j`.
pub type Cell = Vec<i64>;

/// Cells of a slice on the lattice `h·ℤ^k`, stored row-major with the first
/// axis slowest.
#[derive(Clone, Debug, Serialize)]
pub struct SliceGrid {
    pub origin: Vec<f64>,
    pub basis: Subspace,
    pub h: f64,
    pub extent: Extent,
    /// Lattice coordinates of the first cell.
    pub lo: Vec<i64>,
    pub shape: Vec<usize>,
    pub in_x: Vec<bool>,
    /// `d_X` at cell centres (`0` outside `X`, possibly `+∞`).
    pub d: Vec<f64>,
    /// Whether the distances are approximate.
    pub approximate: bool,
}

/// Builds the slice grid of `X` through `x0` along `w`.
pub fn build_slice(domain: &Domain, x0: &[f64], w: &Subspace, h: f64, extent: &Extent) -> Result<SliceGrid> {
    let n = domain.ambient();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if w.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.ambient(),
        });
    }
    let k = w.dim();
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParams(format!("slice dimension must be 1, 2 or 3, got {k}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParams(format!("spacing must be positive, got {h}")));
    }
    if extent.dim() != k || extent.hi.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: extent.dim(),
        });
    }
    let mut lo = Vec::with_capacity(k);
    let mut shape = Vec::with_capacity(k);
    for (&a, &b) in extent.lo.iter().zip(&extent.hi) {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::DegenerateExtent(format!("interval [{a}, {b}] is empty")));
        }
        let first = (a / h - 1e-9).ceil() as i64;
        let last = (b / h + 1e-9).floor() as i64;
        if last < first {
            return Err(Error::DegenerateExtent(format!(
                "interval [{a}, {b}] holds no lattice point at spacing {h}"
            )));
        }
        lo.push(first);
        shape.push((last - first + 1) as usize);
    }
    let total = shape.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    let total = match total {
        Some(t) if t <= MAX_CELLS => t,
        _ => {
            return Err(Error::InvalidParams(format!(
                "slice would have more than {MAX_CELLS} cells; increase h or shrink the extent"
            )))
        }
    };
    let mut grid = SliceGrid {
        origin: x0.to_vec(),
        basis: w.clone(),
        h,
        extent: extent.clone(),
        lo,
        shape,
        in_x: vec![false; total],
        d: vec![0.0; total],
        approximate: domain.is_approximate(),
    };
    let mut p = vec![0.0; n];
    for i in 0..total {
        grid.point_into(i, &mut p);
        let m = domain.margin(&p);
        if m > 0.0 {
            grid.in_x[i] = true;
            grid.d[i] = m;
        }
    }
    Ok(grid)
}

impl SliceGrid {
    pub fn k(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.in_x.iter().any(|&b| b)
    }

    pub fn cell(&self, i: usize) -> Cell {
        let k = self.k();
        let mut c = vec![0i64; k];
        let mut rem = i;
        for j in (0..k).rev() {
            c[j] = self.lo[j] + (rem % self.shape[j]) as i64;
            rem /= self.shape[j];
        }
        c
    }

    pub fn index(&self, c: &[i64]) -> Option<usize> {
        if c.len() != self.k() {
            return None;
        }
        let mut idx = 0usize;
        for j in 0..c.len() {
            let off = c[j] - self.lo[j];
            if off < 0 || off >= self.shape[j] as i64 {
                return None;
            }
            idx = idx * self.shape[j] + off as usize;
        }
        Some(idx)
    }

    /// Coordinates of cell `i` in `W`.
    pub fn coords(&self, i: usize) -> Vec<f64> {
        self.cell(i).iter().map(|&c| c as f64 * self.h).collect()
    }

    fn point_into(&self, i: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.origin);
        let mut rem = i;
        for j in (0..self.k()).rev() {
            let c = self.lo[j] + (rem % self.shape[j]) as i64;
            rem /= self.shape[j];
            let s = c as f64 * self.h;
            for (o, b) in out.iter_mut().zip(&self.basis.basis()[j]) {
                *o += s * b;
            }
        }
    }

    /// Ambient position of cell `i`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.origin.len()];
        self.point_into(i, &mut p);
        p
    }

    /// Ambient position of a lattice cell, inside the extent or not.
    pub fn cell_point(&self, c: &[i64]) -> Vec<f64> {
        let mut p = self.origin.clone();
        for (j, &cj) in c.iter().enumerate() {
            let s = cj as f64 * self.h;
            for (o, b) in p.iter_mut().zip(&self.basis.basis()[j]) {
                *o += s * b;
            }
        }
        p
    }

    /// Whether cell `i` lies on the outer layer of the extent.
    pub fn is_frontier(&self, i: usize) -> bool {
        let mut rem = i;
        for j in (0..self.k()).rev() {
            let c = rem % self.shape[j];
            rem /= self.shape[j];
            if c == 0 || c + 1 == self.shape[j] {
                return true;
            }
        }
        false
    }

    /// Face neighbours (`2k`-neighbourhood) of cell `i` inside the grid.
    pub fn neighbors(&self, i: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut stride = 1usize;
        let mut rem_strides = Vec::with_capacity(self.k());
        for j in (0..self.k()).rev() {
            rem_strides.push((j, stride));
            stride *= self.shape[j];
        }
        for (j, s) in rem_strides {
            let c = (i / s) % self.shape[j];
            if c > 0 {
                out.push(i - s);
            }
            if c + 1 < self.shape[j] {
                out.push(i + s);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_disk() {
        let ball = Domain::ball(vec![0.0, 0.0, 0.0], 1.0).unwrap();
        let w = Subspace::coordinate(3, &[0, 1]);
        let s = build_slice(&ball, &[0.0; 3], &w, 0.1, &Extent::cube(2, 1.5)).unwrap();
        assert_eq!(s.shape, vec![31, 31]);
        let area = s.in_x.iter().filter(|&&b| b).count() as f64 * 0.01;
        assert!((area - std::f64::consts::PI).abs() < 0.1, "{area}");
        for i in 0..s.len() {
            let r = crate::linalg::norm(&s.coords(i));
            assert_eq!(s.in_x[i], r < 1.0);
        }
    }

    #[test]
    fn punctured_line_formula() {
        let x = Domain::punctured(vec![0.0, 0.0]).unwrap();
        let w = Subspace::coordinate(2, &[0]);
        let s = build_slice(&x, &[0.0, 0.5], &w, 0.01, &Extent::cube(1, 2.0)).unwrap();
        assert_eq!(s.len(), 401);
        for i in 0..s.len() {
            assert!(s.in_x[i]);
            let x1 = s.coords(i)[0];
            assert!((s.d[i] - (x1 * x1 + 0.25).sqrt()).abs() < 1e-12);
        }
        assert!(s.is_frontier(0) && s.is_frontier(400) && !s.is_frontier(200));
    }

    #[test]
    fn product_slice_is_constant_in_added_coordinate() {
        let lifted = Domain::Product(Box::new(Domain::ball(vec![0.0, 0.0], 1.0).unwrap()));
        let w = Subspace::coordinate(3, &[2]);
        let s = build_slice(&lifted, &[0.3, 0.1, 0.0], &w, 0.05, &Extent::cube(1, 2.0)).unwrap();
        assert!(s.d.iter().all(|&v| (v - s.d[0]).abs() < 1e-15));
    }

    #[test]
    fn indexing_round_trip() {
        let x = Domain::FullSpace(3);
        let w = Subspace::full(3);
        let s = build_slice(&x, &[0.0; 3], &w, 0.5, &Extent { lo: vec![-1.0, 0.0, 0.2], hi: vec![1.0, 1.0, 1.4] })
            .unwrap();
        assert_eq!(s.shape, vec![5, 3, 2]);
        let mut nb = Vec::new();
        for i in 0..s.len() {
            assert_eq!(s.index(&s.cell(i)), Some(i));
            s.neighbors(i, &mut nb);
            for &j in &nb {
                let d: i64 = s.cell(i).iter().zip(s.cell(j)).map(|(a, b)| (a - b).abs()).sum();
                assert_eq!(d, 1);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let x = Domain::FullSpace(2);
        let w = Subspace::coordinate(2, &[0]);
        assert!(matches!(
            build_slice(&x, &[0.0, 0.0], &w, 0.1, &Extent { lo: vec![1.0], hi: vec![1.0] }),
            Err(Error::DegenerateExtent(_))
        ));
        assert!(matches!(
            build_slice(&x, &[0.0, 0.0], &w, 1.0, &Extent { lo: vec![0.2], hi: vec![0.8] }),
            Err(Error::DegenerateExtent(_))
        ));
        assert!(build_slice(&x, &[0.0, 0.0], &w, 0.0, &Extent::cube(1, 1.0)).is_err());
        assert!(build_slice(&x, &[0.0, 0.0], &Subspace::trivial(2), 0.1, &Extent::cube(0, 1.0)).is_err());
    }
}
