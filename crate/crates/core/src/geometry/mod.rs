//! Open sets, affine slices and the minimum principle for `d_X`.

pub mod domain;
pub mod minprinciple;
pub mod slice;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use domain::{Domain, DomainSpec, GridDomain};
pub use minprinciple::{
    escape_path, min_principle_slice, replay, Certificate, MinPrincipleReport, ReplayCheck, ReplayReport,
};
pub use slice::{build_slice, Cell, Extent, SliceGrid};

use crate::analysis::{zero_set_structure, ZeroSetReport};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::subspace::Subspace;

/// Discretization parameters for minimum-principle checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeomParams {
    /// Cell spacing.
    pub h: f64,
    /// Half-width of the default cubic extent in slice coordinates.
    pub half_width: f64,
    /// Explicit extent; overrides `half_width` when its dimension matches the slice.
    pub extent: Option<Extent>,
    /// Explicit slice origins; override the default family.
    pub offsets: Option<Vec<Vec<f64>>>,
    /// Size of the default family.
    pub n_offsets: usize,
    pub seed: u64,
}

impl Default for GeomParams {
    fn default() -> Self {
        Self {
            h: 0.05,
            half_width: 2.0,
            extent: None,
            offsets: None,
            n_offsets: 20,
            seed: crate::DEFAULT_SEED,
        }
    }
}

impl GeomParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidParams(format!("h must be positive, got {}", self.h)));
        }
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::InvalidParams("half_width must be positive".into()));
        }
        if self.n_offsets == 0 {
            return Err(Error::InvalidParams("n_offsets must be positive".into()));
        }
        Ok(())
    }

    /// Extent for a `k`-dimensional slice.
    pub fn extent_for(&self, k: usize) -> Result<Extent> {
        match &self.extent {
            Some(e) if e.dim() == k => Ok(e.clone()),
            Some(e) => Err(Error::DimensionMismatch {
                expected: k,
                got: e.dim(),
            }),
            None => Ok(Extent::cube(k, self.half_width)),
        }
    }
}

/// One slice of a family together with its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceOutcome {
    pub slice_id: usize,
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    /// Whether the slice missed the domain entirely (skipped in the aggregate).
    pub empty: bool,
    pub report: MinPrincipleReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub aggregate: MinPrincipleReport,
    pub per_slice: Vec<SliceOutcome>,
}

/// Default slice origins: the anchor of `X`, its shifts by `±1/4, ±1/2, ±1`
/// along each direction of `W^⊥`, then seeded random shifts in `[-1, 1]^n`
/// projected onto `W^⊥`. Slice windows are centred at these origins.
pub fn default_offsets(domain: &Domain, w: &Subspace, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = domain.ambient();
    let perp = w.complement();
    let base = domain.anchor().unwrap_or_else(|| vec![0.0; n]);
    let mut out: Vec<Vec<f64>> = vec![base.clone()];
    let push = |p: Vec<f64>, out: &mut Vec<Vec<f64>>| {
        if out.len() < count && out.iter().all(|q| crate::linalg::norm(&crate::linalg::sub(q, &p)) > 1e-12) {
            out.push(p);
        }
    };
    for v in perp.basis() {
        for s in [0.25, -0.25, 0.5, -0.5, 1.0, -1.0] {
            push(crate::linalg::add(&base, &crate::linalg::scaled(v, s)), &mut out);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while out.len() < count && attempts < 10 * count && !perp.is_trivial() {
        attempts += 1;
        let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        push(crate::linalg::add(&base, &perp.project(&r)), &mut out);
    }
    out
}

fn random_plane(w: &Subspace, rng: &mut ChaCha8Rng) -> Result<Subspace> {
    loop {
        let mut vs = Vec::with_capacity(2);
        for _ in 0..2 {
            let c: Vec<f64> = (0..w.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            vs.push(w.from_coords(&c));
        }
        match Subspace::from_vectors(w.ambient(), &vs) {
            Ok(s) if s.dim() == 2 => return Ok(s),
            Ok(_) | Err(Error::InvalidSubspace(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Checks the minimum principle on the slices `x + W` for a family of
/// origins. The first failure in origin order decides; otherwise any
/// inconclusive slice makes the family inconclusive. Slices that miss `X`
/// are skipped. For `dim W > 3` each origin gets one random 2-D subslice and
/// a pass is only reported as inconclusive.
pub fn min_principle_family(domain: &Domain, w: &Subspace, params: &GeomParams) -> Result<FamilyReport> {
    params.validate()?;
    let n = domain.ambient();
    if w.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: w.ambient(),
        });
    }
    if w.is_trivial() {
        return Err(Error::TrivialSubspace);
    }
    let offsets = match &params.offsets {
        Some(o) => {
            if let Some(bad) = o.iter().find(|p| p.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: bad.len(),
                });
            }
            o.clone()
        }
        None => default_offsets(domain, w, params.n_offsets, params.seed),
    };
    let sub_sampled = w.dim() > 3;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5EED);
    let planes: Vec<Subspace> = offsets
        .iter()
        .map(|_| if sub_sampled { random_plane(w, &mut rng) } else { Ok(w.clone()) })
        .collect::<Result<_>>()?;
    let extent = params.extent_for(w.dim().min(if sub_sampled { 2 } else { 3 }))?;
    let per_slice: Vec<SliceOutcome> = offsets
        .par_iter()
        .zip(planes.par_iter())
        .enumerate()
        .map(|(id, (origin, plane))| -> Result<SliceOutcome> {
            let grid = build_slice(domain, origin, plane, params.h, &extent)?;
            let empty = grid.is_empty();
            Ok(SliceOutcome {
                slice_id: id,
                origin: origin.clone(),
                basis: plane.basis().to_vec(),
                empty,
                report: minprinciple::check_slice(&grid, id),
            })
        })
        .collect::<Result<_>>()?;

    let checked = per_slice.iter().filter(|s| !s.empty).count();
    let aggregate = if let Some(f) = per_slice.iter().find(|s| s.report.certificate().is_some()) {
        f.report.clone()
    } else if checked == 0 {
        MinPrincipleReport::Inconclusive {
            reason: "no slice of the family meets the domain".into(),
        }
    } else if let Some(s) = per_slice
        .iter()
        .find(|s| !s.empty && matches!(s.report, MinPrincipleReport::Inconclusive { .. }))
    {
        match &s.report {
            MinPrincipleReport::Inconclusive { reason } => MinPrincipleReport::Inconclusive {
                reason: format!("slice {}: {reason}", s.slice_id),
            },
            _ => unreachable!(),
        }
    } else if sub_sampled {
        MinPrincipleReport::Inconclusive {
            reason: format!(
                "dim W = {} exceeds 3; only {checked} random 2-D subslices were checked and all passed",
                w.dim()
            ),
        }
    } else {
        MinPrincipleReport::HoldsUpTo {
            h: params.h,
            extent,
            slices_checked: checked,
            note: None,
        }
    };
    Ok(FamilyReport { aggregate, per_slice })
}

/// `±` an orthonormal basis of the real zero set of the principal part; the
/// characteristic hyperplanes are `x + N^⊥`.
pub fn characteristic_directions(p: &Polynomial) -> Result<Vec<Vec<f64>>> {
    let zs = zero_set_structure(&p.principal_part()?)?;
    match zs {
        ZeroSetReport::TrivialZeroSet => Ok(Vec::new()),
        ZeroSetReport::SubspaceZeroSet { subspace } => Ok(subspace
            .basis()
            .iter()
            .flat_map(|b| [b.clone(), crate::linalg::scaled(b, -1.0)])
            .collect()),
        ZeroSetReport::NotSubspace { .. } => Err(Error::ZeroSetNotSubspace),
        ZeroSetReport::Unknown { reason } => Err(Error::InvalidParams(format!(
            "zero set of the principal part could not be decided: {reason}"
        ))),
    }
}

/// `X × ℝ`.
pub fn product_lift(domain: &Domain) -> Domain {
    Domain::Product(Box::new(domain.clone()))
}

/// Image of a cell set under dropping lattice axis `axis`.
pub fn project_cells(cells: &BTreeSet<Cell>, axis: usize) -> BTreeSet<Cell> {
    cells
        .iter()
        .map(|c| {
            let mut p = c.clone();
            p.remove(axis);
            p
        })
        .collect()
}

/// Cells of `K` with a face neighbour outside `K`.
pub fn inner_boundary(cells: &BTreeSet<Cell>) -> BTreeSet<Cell> {
    cells
        .iter()
        .filter(|c| {
            (0..c.len()).any(|j| {
                [-1, 1].iter().any(|s| {
                    let mut q = (*c).clone();
                    q[j] += s;
                    !cells.contains(&q)
                })
            })
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial_in;
    use crate::presets;

    #[test]
    fn punctured_space_fails_off_the_origin() {
        let x = Domain::punctured(vec![0.0; 3]).unwrap();
        let w = Subspace::coordinate(3, &[0, 1]);
        let params = GeomParams {
            offsets: Some(vec![vec![0.0, 0.0, 0.25], vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 1.0]]),
            ..GeomParams::default()
        };
        let fam = min_principle_family(&x, &w, &params).unwrap();
        for (s, z) in fam.per_slice.iter().zip([0.25, 0.5, 1.0]) {
            let c = s.report.certificate().expect("fails");
            assert!((c.interior_min - z).abs() <= 0.1);
        }
        assert_eq!(fam.aggregate.certificate().unwrap().slice_id, 0);
    }

    #[test]
    fn convex_sets_hold() {
        let ball = Domain::ball(vec![0.0, 0.0], 1.0).unwrap();
        let fam = min_principle_family(&ball, &Subspace::coordinate(2, &[0]), &GeomParams::default()).unwrap();
        assert_eq!(fam.aggregate.status(), "holds_up_to", "{:?}", fam.aggregate);
        let full = min_principle_family(&Domain::FullSpace(2), &Subspace::full(2), &GeomParams::default()).unwrap();
        assert_eq!(full.aggregate.status(), "holds_up_to");
    }

    #[test]
    fn default_family_has_requested_size() {
        let x = Domain::punctured(vec![0.0; 3]).unwrap();
        let offs = default_offsets(&x, &Subspace::coordinate(3, &[0]), 20, 1);
        assert_eq!(offs.len(), 20);
        assert_eq!(offs[0], vec![0.5, 0.0, 0.0]);
        assert!(offs.iter().all(|p| p[0] == 0.5));
    }

    #[test]
    fn high_dimensional_pass_is_inconclusive() {
        let x = Domain::ball(vec![0.0; 4], 1.0).unwrap();
        let params = GeomParams {
            n_offsets: 3,
            h: 0.1,
            ..GeomParams::default()
        };
        let fam = min_principle_family(&x, &Subspace::full(4), &params).unwrap();
        assert_eq!(fam.aggregate.status(), "inconclusive");
    }

    #[test]
    fn characteristic_direction_examples() {
        let heat = characteristic_directions(&presets::heat(2)).unwrap();
        assert_eq!(heat.len(), 2);
        assert!((heat[0][0].abs() - 1.0).abs() < 1e-12);
        assert!(characteristic_directions(&presets::laplace(3)).unwrap().is_empty());
        let p = parse_polynomial_in("x1^2 + x2^2", 3).unwrap();
        let d = characteristic_directions(&p).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d[0][2].abs() - 1.0).abs() < 1e-12);
        assert!(characteristic_directions(&presets::wave(2)).is_err());
    }

    #[test]
    fn projection_of_boundary() {
        let k: BTreeSet<Cell> = [[0, 0], [0, 1], [1, 1], [2, 1], [2, 2]].iter().map(|c| c.to_vec()).collect();
        let lhs = inner_boundary(&project_cells(&k, 1));
        let rhs = project_cells(&inner_boundary(&k), 1);
        assert!(lhs.is_subset(&rhs));
    }
}
