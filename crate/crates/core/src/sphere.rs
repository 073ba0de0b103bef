//! Deterministic minimization of functions on the unit sphere `S^{k-1} ⊂ ℝ^k`.
//!
//! Samples come from a uniform grid on the faces of the cube `[-1,1]^k`,
//! projected radially onto the sphere. Neighbouring grid points on a face are
//! at most `2/(N-1)` radians apart, which fixes `N` from the target spacing.
//! The best samples seed a compass search that stays on the sphere.

use rayon::prelude::*;

use crate::linalg;

/// Target angular spacing for sphere dimension `k` (ambient `ℝ^k`).
pub fn spacing_for(k: usize) -> f64 {
    if k <= 3 {
        0.01
    } else {
        0.05
    }
}

/// Upper bound on the number of grid samples.
pub const MAX_SAMPLES: usize = 1_000_000;

/// Grid points per cube-face edge.
fn points_per_edge(k: usize) -> usize {
    let n = (2.0 / spacing_for(k)).ceil() as usize + 1;
    if k <= 1 {
        return 1;
    }
    let faces = 2 * k;
    let budget = (MAX_SAMPLES / faces) as f64;
    let cap = budget.powf(1.0 / (k - 1) as f64).floor() as usize;
    n.min(cap.max(3))
}

/// Unit vectors of the projected cube-face grid, flattened row-major.
pub fn grid(k: usize) -> Vec<f64> {
    assert!(k >= 1, "sphere of dimension 0 is empty");
    if k == 1 {
        return vec![1.0, -1.0];
    }
    let n = points_per_edge(k);
    let per_face = n.pow((k - 1) as u32);
    let step = 2.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(2 * k * per_face * k);
    let mut p = vec![0.0; k];
    for axis in 0..k {
        for sign in [1.0, -1.0] {
            for idx in 0..per_face {
                let mut rem = idx;
                for (j, pj) in p.iter_mut().enumerate() {
                    if j == axis {
                        *pj = sign;
                        continue;
                    }
                    *pj = -1.0 + step * (rem % n) as f64;
                    rem /= n;
                }
                let r = linalg::norm(&p);
                out.extend(p.iter().map(|x| x / r));
            }
        }
    }
    out
}

/// Sampled values of a function on the sphere grid.
pub struct Sampled {
    pub k: usize,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.k..(i + 1) * self.k]
    }

    /// Indices sorted by increasing value (ties by index).
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]).then(a.cmp(&b)));
        idx
    }

    /// Up to `count` low-value sample indices pairwise separated by more than
    /// `min_sep` (Euclidean distance on the sphere).
    pub fn spread_starts(&self, count: usize, min_sep: f64) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for i in self.order() {
            if chosen.len() >= count {
                break;
            }
            let p = self.point(i);
            if chosen
                .iter()
                .all(|&j| linalg::norm(&linalg::sub(p, self.point(j))) > min_sep)
            {
                chosen.push(i);
            }
        }
        chosen
    }
}

pub fn sample<F>(k: usize, f: &F) -> Sampled
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let points = grid(k);
    let values: Vec<f64> = points.par_chunks(k).map(f).collect();
    Sampled { k, points, values }
}

/// Compass search on the sphere starting from the unit vector `start`.
pub fn refine<F>(f: &F, start: &[f64], initial_step: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let k = start.len();
    let mut u = start.to_vec();
    let mut best = f(&u);
    if k == 1 {
        return (u, best);
    }
    let mut step = initial_step;
    let mut trial = vec![0.0; k];
    let mut iters = 0;
    while step > 1e-11 && iters < 4000 {
        iters += 1;
        let mut improved = false;
        for j in 0..k {
            for s in [step, -step] {
                trial.copy_from_slice(&u);
                trial[j] += s;
                let r = linalg::norm(&trial);
                for t in trial.iter_mut() {
                    *t /= r;
                }
                let v = f(&trial);
                if v < best {
                    best = v;
                    u.copy_from_slice(&trial);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (u, best)
}

#[derive(Clone, Debug)]
pub struct SphereMin {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub samples: usize,
}

/// Grid sampling followed by refinement from the best spread-out samples.
pub fn minimize<F>(k: usize, f: &F) -> SphereMin
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let sampled = sample(k, f);
    let starts = sampled.spread_starts(8, 0.1);
    let step = 2.0 * spacing_for(k);
    let refined: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|&i| refine(f, sampled.point(i), step))
        .collect();
    let (argmin, value) = refined
        .into_iter()
        .fold(None::<(Vec<f64>, f64)>, |acc, (u, v)| match acc {
            Some((_, bv)) if bv <= v => acc,
            _ => Some((u, v)),
        })
        .expect("grid is nonempty");
    SphereMin {
        value,
        argmin,
        samples: sampled.len(),
    }
}
