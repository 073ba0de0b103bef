//! Open sets with their boundary distance `d_X(x) = dist(x, X^c)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::subspace::Subspace;

/// Configuration form of a [`Domain`]; tagged by `type`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Full {
        dim: usize,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// `{x : ⟨normal, x⟩ < offset}`.
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
    /// `ℝⁿ` minus the affine subspace `point + span(directions)`.
    ComplementAffine {
        point: Vec<f64>,
        #[serde(default)]
        directions: Vec<Vec<f64>>,
    },
    Intersection {
        members: Vec<DomainSpec>,
    },
    /// Union of the closed cells whose flag is set, on a regular grid with
    /// cell `i` centred at `lo + (i + 1/2)·spacing` (row-major, first axis
    /// slowest).
    Grid {
        lo: Vec<f64>,
        spacing: f64,
        shape: Vec<usize>,
        cells: Vec<bool>,
    },
    /// `base × ℝ`.
    Product {
        base: Box<DomainSpec>,
    },
}

/// An open subset of ℝⁿ with exact boundary distance (approximate for grids).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "DomainSpec", try_from = "DomainSpec")]
pub enum Domain {
    FullSpace(usize),
    OpenBall {
        center: Vec<f64>,
        radius: f64,
    },
    OpenBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    HalfSpace {
        normal: Vec<f64>,
        offset: f64,
    },
    ComplementOfAffine {
        point: Vec<f64>,
        /// Directions of the removed affine subspace.
        subspace: Subspace,
        /// Its orthogonal complement, where the distance is measured.
        normal_space: Subspace,
    },
    FiniteIntersection(Vec<Domain>),
    GridDomain(GridDomain),
    Product(Box<Domain>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridDomain {
    pub lo: Vec<f64>,
    pub spacing: f64,
    pub shape: Vec<usize>,
    pub cells: Vec<bool>,
    /// Distance from each in-cell centre to the nearest out-cell centre
    /// (cells outside the box count as out).
    edt: Vec<f64>,
}

impl GridDomain {
    pub fn new(lo: Vec<f64>, spacing: f64, shape: Vec<usize>, cells: Vec<bool>) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidDomain("grid spacing must be positive".into()));
        }
        if lo.len() != shape.len() || shape.is_empty() {
            return Err(Error::InvalidDomain("grid lo and shape lengths differ".into()));
        }
        if shape.contains(&0) || shape.iter().product::<usize>() != cells.len() {
            return Err(Error::InvalidDomain(
                "grid cell count does not match its shape".into(),
            ));
        }
        let edt = distance_transform(&shape, &cells, spacing);
        Ok(Self {
            lo,
            spacing,
            shape,
            cells,
            edt,
        })
    }

    fn cell_of(&self, x: &[f64]) -> Option<usize> {
        let mut idx = 0;
        for ((&xi, &lo), &s) in x.iter().zip(&self.lo).zip(&self.shape) {
            let c = ((xi - lo) / self.spacing).floor();
            if c < 0.0 || c >= s as f64 {
                return None;
            }
            idx = idx * s + c as usize;
        }
        Some(idx)
    }

    /// Piecewise-constant distance: half a cell less than the centre-to-centre
    /// transform, error at most `spacing·√n`.
    fn distance(&self, x: &[f64]) -> f64 {
        match self.cell_of(x) {
            Some(i) if self.cells[i] => self.edt[i] - 0.5 * self.spacing,
            _ => 0.0,
        }
    }

    fn first_inside(&self) -> Option<Vec<f64>> {
        let i = self.cells.iter().position(|&c| c)?;
        let mut rem = i;
        let mut out = vec![0.0; self.shape.len()];
        for j in (0..self.shape.len()).rev() {
            let c = rem % self.shape[j];
            rem /= self.shape[j];
            out[j] = self.lo[j] + (c as f64 + 0.5) * self.spacing;
        }
        Some(out)
    }
}

/// Squared 1-D distance transform (lower envelope of parabolas).
fn edt_1d(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    let finite: Vec<usize> = (0..n).filter(|&q| f[q].is_finite()).collect();
    if finite.is_empty() {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    v[0] = finite[0];
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for &q in &finite[1..] {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0 and the new parabola dominates everywhere.
                v[0] = q;
                z[1] = f64::INFINITY;
                break;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    let mut j = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let d = q as f64 - v[j] as f64;
        *o = d * d + f[v[j]];
    }
}

/// Euclidean distance from each cell centre to the nearest out-cell centre,
/// on a copy of the grid padded by one out-cell layer.
fn distance_transform(shape: &[usize], cells: &[bool], spacing: f64) -> Vec<f64> {
    let k = shape.len();
    let padded: Vec<usize> = shape.iter().map(|s| s + 2).collect();
    let total: usize = padded.iter().product();
    let mut strides = vec![1usize; k];
    for j in (0..k.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * padded[j + 1];
    }
    let mut g = vec![0.0f64; total];
    for (idx, gi) in g.iter_mut().enumerate() {
        let mut rem = idx;
        let mut inner = 0usize;
        let mut interior = true;
        for j in 0..k {
            let c = rem / strides[j];
            rem %= strides[j];
            if c == 0 || c == padded[j] - 1 {
                interior = false;
                break;
            }
            inner = inner * shape[j] + (c - 1);
        }
        *gi = if interior && cells[inner] { f64::INFINITY } else { 0.0 };
    }
    for axis in 0..k {
        let len = padded[axis];
        let stride = strides[axis];
        let mut line = vec![0.0; len];
        let mut res = vec![0.0; len];
        for start in 0..total {
            if !(start / stride).is_multiple_of(len) {
                continue;
            }
            for (q, l) in line.iter_mut().enumerate() {
                *l = g[start + q * stride];
            }
            edt_1d(&line, &mut res);
            for (q, r) in res.iter().enumerate() {
                g[start + q * stride] = *r;
            }
        }
    }
    let mut out = vec![0.0; cells.len()];
    for (i, o) in out.iter_mut().enumerate() {
        let mut rem = i;
        let mut idx = 0;
        let mut coords = vec![0usize; k];
        for j in (0..k).rev() {
            coords[j] = rem % shape[j];
            rem /= shape[j];
        }
        for j in 0..k {
            idx += (coords[j] + 1) * strides[j];
        }
        *o = g[idx].sqrt() * spacing;
    }
    out
}

impl TryFrom<DomainSpec> for Domain {
    type Error = Error;

    fn try_from(spec: DomainSpec) -> Result<Self> {
        let d = match spec {
            DomainSpec::Full { dim } => Domain::FullSpace(dim),
            DomainSpec::Ball { center, radius } => Domain::OpenBall { center, radius },
            DomainSpec::Box { lo, hi } => Domain::OpenBox { lo, hi },
            DomainSpec::Halfspace { normal, offset } => Domain::HalfSpace { normal, offset },
            DomainSpec::ComplementAffine { point, directions } => {
                let subspace = Subspace::from_vectors(point.len(), &directions)?;
                let normal_space = subspace.complement();
                Domain::ComplementOfAffine {
                    point,
                    subspace,
                    normal_space,
                }
            }
            DomainSpec::Intersection { members } => Domain::FiniteIntersection(
                members
                    .into_iter()
                    .map(Domain::try_from)
                    .collect::<Result<_>>()?,
            ),
            DomainSpec::Grid {
                lo,
                spacing,
                shape,
                cells,
            } => Domain::GridDomain(GridDomain::new(lo, spacing, shape, cells)?),
            DomainSpec::Product { base } => Domain::Product(Box::new(Domain::try_from(*base)?)),
        };
        d.validate()?;
        Ok(d)
    }
}

impl From<Domain> for DomainSpec {
    fn from(d: Domain) -> Self {
        match d {
            Domain::FullSpace(dim) => DomainSpec::Full { dim },
            Domain::OpenBall { center, radius } => DomainSpec::Ball { center, radius },
            Domain::OpenBox { lo, hi } => DomainSpec::Box { lo, hi },
            Domain::HalfSpace { normal, offset } => DomainSpec::Halfspace { normal, offset },
            Domain::ComplementOfAffine {
                point, subspace, ..
            } => DomainSpec::ComplementAffine {
                point,
                directions: subspace.basis().to_vec(),
            },
            Domain::FiniteIntersection(members) => DomainSpec::Intersection {
                members: members.into_iter().map(DomainSpec::from).collect(),
            },
            Domain::GridDomain(g) => DomainSpec::Grid {
                lo: g.lo,
                spacing: g.spacing,
                shape: g.shape,
                cells: g.cells,
            },
            Domain::Product(base) => DomainSpec::Product {
                base: Box::new(DomainSpec::from(*base)),
            },
        }
    }
}

impl Domain {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let d = Domain::OpenBall { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn open_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let d = Domain::OpenBox { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let d = Domain::HalfSpace { normal, offset };
        d.validate()?;
        Ok(d)
    }

    /// `ℝⁿ` minus `point + span(directions)`.
    pub fn complement_of_affine(point: Vec<f64>, directions: &[Vec<f64>]) -> Result<Self> {
        Domain::try_from(DomainSpec::ComplementAffine {
            point,
            directions: directions.to_vec(),
        })
    }

    /// `ℝⁿ \ {p}`.
    pub fn punctured(point: Vec<f64>) -> Result<Self> {
        Self::complement_of_affine(point, &[])
    }

    pub fn intersection(members: Vec<Domain>) -> Result<Self> {
        let d = Domain::FiniteIntersection(members);
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Domain::FullSpace(n) if *n == 0 => Err(Error::InvalidDomain("dimension must be positive".into())),
            Domain::FullSpace(_) => Ok(()),
            Domain::OpenBall { center, radius } => {
                if center.is_empty() || !finite(center) {
                    Err(Error::InvalidDomain("ball centre must be a finite point".into()))
                } else if !(*radius > 0.0) || !radius.is_finite() {
                    Err(Error::InvalidDomain("ball radius must be positive".into()))
                } else {
                    Ok(())
                }
            }
            Domain::OpenBox { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    Err(Error::InvalidDomain("box corners must have equal positive length".into()))
                } else if !finite(lo) || !finite(hi) || lo.iter().zip(hi).any(|(a, b)| a >= b) {
                    Err(Error::InvalidDomain("box needs lo < hi componentwise".into()))
                } else {
                    Ok(())
                }
            }
            Domain::HalfSpace { normal, offset } => {
                if normal.is_empty() || !finite(normal) || linalg::norm(normal) == 0.0 || !offset.is_finite() {
                    Err(Error::InvalidDomain("halfspace needs a nonzero finite normal".into()))
                } else {
                    Ok(())
                }
            }
            Domain::ComplementOfAffine { point, subspace, .. } => {
                if point.is_empty() || !finite(point) {
                    Err(Error::InvalidDomain("affine point must be finite".into()))
                } else if subspace.is_full() {
                    Err(Error::InvalidDomain("complement of the whole space is empty".into()))
                } else {
                    Ok(())
                }
            }
            Domain::FiniteIntersection(members) => {
                let Some(first) = members.first() else {
                    return Err(Error::InvalidDomain("intersection needs at least one member".into()));
                };
                let n = first.ambient();
                for m in members {
                    m.validate()?;
                    if m.ambient() != n {
                        return Err(Error::InvalidDomain("intersection members differ in dimension".into()));
                    }
                }
                Ok(())
            }
            Domain::GridDomain(_) => Ok(()),
            Domain::Product(base) => base.validate(),
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            Domain::FullSpace(n) => *n,
            Domain::OpenBall { center, .. } => center.len(),
            Domain::OpenBox { lo, .. } => lo.len(),
            Domain::HalfSpace { normal, .. } => normal.len(),
            Domain::ComplementOfAffine { point, .. } => point.len(),
            Domain::FiniteIntersection(m) => m.first().map_or(0, Domain::ambient),
            Domain::GridDomain(g) => g.shape.len(),
            Domain::Product(base) => base.ambient() + 1,
        }
    }

    /// Signed margin: `d_X(x)` for `x ∈ X`, a value `≤ 0` otherwise.
    pub fn margin(&self, x: &[f64]) -> f64 {
        match self {
            Domain::FullSpace(_) => f64::INFINITY,
            Domain::OpenBall { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                radius - r2.sqrt()
            }
            Domain::OpenBox { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&xi, (&l, &h))| (xi - l).min(h - xi))
                .fold(f64::INFINITY, f64::min),
            Domain::HalfSpace { normal, offset } => {
                (offset - linalg::dot(normal, x)) / linalg::norm(normal)
            }
            Domain::ComplementOfAffine {
                point,
                normal_space,
                ..
            } => {
                let diff = linalg::sub(x, point);
                linalg::norm(&normal_space.coords(&diff))
            }
            Domain::FiniteIntersection(members) => members
                .iter()
                .map(|m| m.margin(x))
                .fold(f64::INFINITY, f64::min),
            Domain::GridDomain(g) => g.distance(x),
            Domain::Product(base) => base.margin(&x[..x.len() - 1]),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.ambient() && self.margin(x) > 0.0
    }

    /// `d_X(x) = dist(x, X^c)`, `+∞` when the complement is empty.
    pub fn boundary_distance(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.ambient() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient(),
                got: x.len(),
            });
        }
        let d = self.margin(x);
        if d > 0.0 {
            Ok(d)
        } else {
            Err(Error::NotInDomain)
        }
    }

    /// Whether the distance is only approximate (grid-based).
    pub fn is_approximate(&self) -> bool {
        match self {
            Domain::GridDomain(_) => true,
            Domain::FiniteIntersection(m) => m.iter().any(Domain::is_approximate),
            Domain::Product(base) => base.is_approximate(),
            _ => false,
        }
    }

    /// Structural convexity; `false` means "not known to be convex".
    pub fn is_convex(&self) -> bool {
        match self {
            Domain::FullSpace(_) | Domain::OpenBall { .. } | Domain::OpenBox { .. } | Domain::HalfSpace { .. } => true,
            Domain::FiniteIntersection(m) => m.iter().all(Domain::is_convex),
            Domain::Product(base) => base.is_convex(),
            Domain::ComplementOfAffine { .. } | Domain::GridDomain(_) => false,
        }
    }

    pub fn is_bounded(&self) -> Option<bool> {
        match self {
            Domain::OpenBall { .. } | Domain::OpenBox { .. } | Domain::GridDomain(_) => Some(true),
            Domain::FullSpace(_) | Domain::HalfSpace { .. } | Domain::ComplementOfAffine { .. } | Domain::Product(_) => {
                Some(false)
            }
            Domain::FiniteIntersection(m) => {
                if m.iter().any(|d| d.is_bounded() == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// A point of `X` used to centre default slice families. For the
    /// complement of an affine set this is the base point moved by `0.5`
    /// along the first normal direction.
    pub fn anchor(&self) -> Option<Vec<f64>> {
        let candidate = match self {
            Domain::FullSpace(n) => vec![0.0; *n],
            Domain::OpenBall { center, .. } => center.clone(),
            Domain::OpenBox { lo, hi } => lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            Domain::HalfSpace { normal, offset } => {
                let n2 = linalg::dot(normal, normal);
                linalg::scaled(normal, (offset - 1.0) / n2)
            }
            Domain::ComplementOfAffine {
                point,
                normal_space,
                ..
            } => linalg::add(point, &linalg::scaled(&normal_space.basis()[0], 0.5)),
            Domain::FiniteIntersection(members) => {
                return members
                    .iter()
                    .filter_map(Domain::anchor)
                    .find(|p| self.contains(p));
            }
            Domain::GridDomain(g) => return g.first_inside(),
            Domain::Product(base) => {
                let mut p = base.anchor()?;
                p.push(0.0);
                p
            }
        };
        self.contains(&candidate).then_some(candidate)
    }

    /// Short description used in reports.
    pub fn describe(&self) -> String {
        match self {
            Domain::FullSpace(n) => format!("R^{n}"),
            Domain::OpenBall { center, radius } => format!("ball(center={center:?}, radius={radius})"),
            Domain::OpenBox { lo, hi } => format!("box(lo={lo:?}, hi={hi:?})"),
            Domain::HalfSpace { normal, offset } => format!("halfspace(<{normal:?}, x> < {offset})"),
            Domain::ComplementOfAffine { point, subspace, .. } => {
                format!("R^{} minus ({point:?} + {})", point.len(), subspace.describe())
            }
            Domain::FiniteIntersection(m) => {
                let parts: Vec<String> = m.iter().map(Domain::describe).collect();
                format!("intersection[{}]", parts.join(", "))
            }
            Domain::GridDomain(g) => format!("grid(shape={:?}, spacing={})", g.shape, g.spacing),
            Domain::Product(base) => format!("{} x R", base.describe()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let ball = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(ball.boundary_distance(&[0.0, 0.0]).unwrap(), 1.0);
        let axis = Domain::complement_of_affine(vec![0.0; 3], &[vec![0.0, 0.0, 1.0]]).unwrap();
        assert!((axis.boundary_distance(&[3.0, 4.0, 7.0]).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(
            Domain::FullSpace(2).boundary_distance(&[5.0, 5.0]).unwrap(),
            f64::INFINITY
        );
        assert_eq!(ball.boundary_distance(&[2.0, 0.0]), Err(Error::NotInDomain));
        let bx = Domain::open_box(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        assert!((bx.boundary_distance(&[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-15);
        let hs = Domain::halfspace(vec![0.0, 2.0], 2.0).unwrap();
        assert!((hs.boundary_distance(&[7.0, -1.0]).unwrap() - 2.0).abs() < 1e-15);
        let lifted = Domain::Product(Box::new(ball.clone()));
        assert_eq!(lifted.boundary_distance(&[0.5, 0.0, 9.0]).unwrap(), 0.5);
    }

    #[test]
    fn validation() {
        assert!(Domain::ball(vec![0.0], 0.0).is_err());
        assert!(Domain::open_box(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Domain::intersection(vec![]).is_err());
        assert!(Domain::intersection(vec![Domain::FullSpace(2), Domain::FullSpace(3)]).is_err());
        assert!(Domain::complement_of_affine(vec![0.0], &[vec![1.0]]).is_err());
    }

    #[test]
    fn grid_distance_transform() {
        // 5x5 block of in-cells inside a 7x7 grid of unit cells.
        let shape = vec![7, 7];
        let cells: Vec<bool> = (0..49).map(|i| (1..6).contains(&(i / 7)) && (1..6).contains(&(i % 7))).collect();
        let g = GridDomain::new(vec![0.0, 0.0], 1.0, shape, cells).unwrap();
        let d = Domain::GridDomain(g);
        // Centre cell (3,3): nearest out-cell centre 3 away, minus half a cell.
        assert!((d.margin(&[3.5, 3.5]) - 2.5).abs() < 1e-12);
        assert!((d.margin(&[1.5, 3.5]) - 0.5).abs() < 1e-12);
        assert_eq!(d.margin(&[0.5, 0.5]), 0.0);
        assert_eq!(d.margin(&[-3.0, 0.5]), 0.0);
        // Exact distance to the block's complement at the centre is 2.5.
        assert!(d.is_approximate());
    }

    #[test]
    fn grid_edge_cells_see_the_outside() {
        let g = GridDomain::new(vec![0.0], 1.0, vec![4], vec![true; 4]).unwrap();
        let d = Domain::GridDomain(g);
        assert!((d.margin(&[0.5]) - 0.5).abs() < 1e-12);
        assert!((d.margin(&[1.5]) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let text = r#"{"type":"intersection","members":[
            {"type":"ball","center":[0,0],"radius":2},
            {"type":"complement_affine","point":[0,0]}]}"#;
        let d: Domain = serde_json::from_str(text).unwrap();
        assert!(!d.is_convex());
        assert!(d.contains(&[1.0, 0.0]));
        assert!(!d.contains(&[0.0, 0.0]));
        let back: Domain = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back.margin(&[0.5, 0.5]), d.margin(&[0.5, 0.5]));
        assert!(serde_json::from_str::<Domain>(r#"{"type":"ball","center":[0],"radius":-1}"#).is_err());
    }

    #[test]
    fn anchors_are_inside() {
        let doms = vec![
            Domain::FullSpace(2),
            Domain::ball(vec![1.0, 2.0], 0.5).unwrap(),
            Domain::halfspace(vec![1.0, 1.0], -3.0).unwrap(),
            Domain::punctured(vec![0.0, 0.0]).unwrap(),
            Domain::Product(Box::new(Domain::punctured(vec![0.0, 0.0]).unwrap())),
        ];
        for d in doms {
            let a = d.anchor().unwrap();
            assert!(d.contains(&a), "{}", d.describe());
        }
        assert_eq!(Domain::punctured(vec![0.0, 0.0]).unwrap().anchor().unwrap(), vec![0.5, 0.0]);
    }
}
