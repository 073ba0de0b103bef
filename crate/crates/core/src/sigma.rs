//! The localization functionals `P̃_V(ξ,t) = sup_{x∈V,|x|≤t} |P(x+ξ)|`,
//! `σ_P(V) = inf_{t≥1} liminf_{ξ→∞} P̃_V(ξ,t)/P̃(ξ,t)` and
//! `σ⁰_P(V) = inf_{t≥1, ξ∈ℝⁿ} P̃_V(ξ,t)/P̃(ξ,t)`.
//!
//! The estimators are heuristic: the liminf becomes a minimum over sampled
//! directions at the largest radius of a schedule, flagged by a convergence
//! check between the last two radii. Only [`sigma_zero_subspace_exact`] is
//! used for decisions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    dependence_subspace, is_elliptic_on, semi_elliptic_weights, zero_set_structure,
    SemiEllipticStatus,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{NumericPoly, Polynomial};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaParams {
    pub t_grid: Vec<f64>,
    /// Radius schedule `|ξ| = R`, strictly increasing.
    pub radii: Vec<f64>,
    pub directions: usize,
    /// Quasi-random samples per ball maximization.
    pub samples: usize,
    pub descent_iters: usize,
    pub seed: u64,
}

impl Default for SigmaParams {
    fn default() -> Self {
        Self {
            t_grid: vec![1.0, 2.0, 4.0, 8.0],
            radii: vec![1e1, 1e2, 1e3, 1e4],
            directions: 200,
            samples: 500,
            descent_iters: 50,
            seed: crate::DEFAULT_SEED,
        }
    }
}

impl SigmaParams {
    pub fn validate(&self) -> Result<()> {
        if self.t_grid.is_empty() || self.t_grid.iter().any(|&t| !(t >= 1.0) || !t.is_finite()) {
            return Err(Error::InvalidParams("t_grid entries must be finite and >= 1".into()));
        }
        if self.radii.is_empty()
            || self.radii.iter().any(|&r| !(r > 0.0) || !r.is_finite())
            || self.radii.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidParams(
                "radii must be positive, finite and strictly increasing".into(),
            ));
        }
        if self.directions == 0 || self.samples == 0 {
            return Err(Error::InvalidParams("directions and samples must be positive".into()));
        }
        Ok(())
    }
}

/// `|P|²` and its gradient, evaluated from precomputed partial derivatives.
struct Evaluator {
    p: NumericPoly,
    grads: Vec<NumericPoly>,
}

impl Evaluator {
    fn new(p: &Polynomial) -> Self {
        let p = p.to_numeric();
        let grads = (0..p.nvars()).map(|j| p.derivative(j)).collect();
        Self { p, grads }
    }

    fn abs2(&self, x: &[f64]) -> f64 {
        self.p.eval(x).norm_sqr()
    }

    /// Writes `∇|P|² = 2 Re(conj(P) ∇P)` into `out`.
    fn grad_abs2(&self, x: &[f64], value: Complex64, out: &mut [f64]) {
        for (o, g) in out.iter_mut().zip(&self.grads) {
            *o = 2.0 * (value.conj() * g.eval(x)).re;
        }
    }
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut f = 1.0 / b;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base as u64) as f64;
        i /= base as u64;
        f /= b;
    }
    r
}

/// Rotated Halton point `index` in `[0,1)^k`.
fn halton(index: u64, shift: &[f64]) -> Vec<f64> {
    shift
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let base = PRIMES[j % PRIMES.len()] + 2 * (j / PRIMES.len()) as u32 * 59;
            (radical_inverse(index + 1, base) + s).fract()
        })
        .collect()
}

/// `count` quasi-uniform points of the closed unit ball of `ℝ^k`, preceded by
/// the centre and the `±e_j`.
fn unit_ball_samples(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBA11);
    let shift: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
    let mut out = vec![vec![0.0; k]];
    for j in 0..k {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; k];
            e[j] = s;
            out.push(e);
        }
    }
    let mut index = 0u64;
    let mut accepted = 0;
    while accepted < count && index < 64 * count as u64 + 64 {
        let p: Vec<f64> = halton(index, &shift).iter().map(|u| 2.0 * u - 1.0).collect();
        index += 1;
        if linalg::norm(&p) <= 1.0 {
            out.push(p);
            accepted += 1;
        }
    }
    out
}

/// `n` quasi-uniform unit vectors of `ℝ^dim` followed by `±e_j`.
pub fn directions(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1);
    let mut out: Vec<Vec<f64>> = match dim {
        0 => return Vec::new(),
        1 => Vec::new(),
        2 => {
            let s: f64 = rng.gen();
            (0..n)
                .map(|i| {
                    let a = std::f64::consts::TAU * (i as f64 + s) / n as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect()
        }
        _ => {
            let pairs = dim.div_ceil(2);
            let shift: Vec<f64> = (0..2 * pairs).map(|_| rng.gen::<f64>()).collect();
            (0..n as u64)
                .map(|i| {
                    let u = halton(i, &shift);
                    let mut g = Vec::with_capacity(2 * pairs);
                    for p in 0..pairs {
                        let r = (-2.0 * (1.0 - u[2 * p]).ln()).sqrt();
                        let a = std::f64::consts::TAU * u[2 * p + 1];
                        g.push(r * a.cos());
                        g.push(r * a.sin());
                    }
                    g.truncate(dim);
                    linalg::normalize(&g)
                })
                .collect()
        }
    };
    for j in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[j] = s;
            out.push(e);
        }
    }
    out
}

/// Ball maximizer bound to one polynomial, subspace and parameter set.
struct BallMax<'a> {
    eval: &'a Evaluator,
    v: &'a Subspace,
    unit: Vec<Vec<f64>>,
    iters: usize,
}

impl<'a> BallMax<'a> {
    fn new(eval: &'a Evaluator, v: &'a Subspace, params: &SigmaParams) -> Self {
        let unit = unit_ball_samples(v.dim(), params.samples, params.seed ^ v.dim() as u64);
        Self {
            eval,
            v,
            unit,
            iters: params.descent_iters,
        }
    }

    /// `out = ξ + Σ y_j b_j`.
    fn point(&self, xi: &[f64], y: &[f64], scale: f64, out: &mut [f64]) {
        out.copy_from_slice(xi);
        for (c, b) in y.iter().zip(self.v.basis()) {
            let c = c * scale;
            for (o, bj) in out.iter_mut().zip(b) {
                *o += c * bj;
            }
        }
    }

    /// Estimate of `sup_{x∈V,|x|≤t} |P(x+ξ)|`.
    fn sup(&self, xi: &[f64], t: f64) -> f64 {
        if self.v.is_trivial() || t == 0.0 {
            return self.eval.abs2(xi).sqrt();
        }
        let mut x = vec![0.0; xi.len()];
        // Five best samples, kept sorted by decreasing value.
        let mut top: Vec<(f64, usize)> = Vec::with_capacity(6);
        for (i, u) in self.unit.iter().enumerate() {
            self.point(xi, u, t, &mut x);
            let f = self.eval.abs2(&x);
            if top.len() < 5 || f > top[top.len() - 1].0 {
                let pos = top.iter().position(|&(g, _)| f > g).unwrap_or(top.len());
                top.insert(pos, (f, i));
                top.truncate(5);
            }
        }
        let mut best = top[0].0;
        for &(f0, i) in &top {
            let y: Vec<f64> = self.unit[i].iter().map(|u| u * t).collect();
            best = best.max(self.ascend(xi, y, f0, t));
        }
        best.sqrt()
    }

    /// Projected gradient ascent on `|P|²` over the ball of radius `t`, with
    /// normalized steps whose length adapts to success.
    fn ascend(&self, xi: &[f64], mut y: Vec<f64>, mut f: f64, t: f64) -> f64 {
        let n = xi.len();
        let k = y.len();
        let mut x = vec![0.0; n];
        let mut gx = vec![0.0; n];
        let mut g = vec![0.0; k];
        let mut cand = vec![0.0; k];
        let mut step = 0.1 * t;
        for _ in 0..self.iters {
            self.point(xi, &y, 1.0, &mut x);
            let value = self.eval.p.eval(&x);
            self.eval.grad_abs2(&x, value, &mut gx);
            for (gj, b) in g.iter_mut().zip(self.v.basis()) {
                *gj = linalg::dot(&gx, b);
            }
            let gn = linalg::norm(&g);
            if gn == 0.0 || !gn.is_finite() {
                break;
            }
            loop {
                for j in 0..k {
                    cand[j] = y[j] + g[j] * step / gn;
                }
                let r = linalg::norm(&cand);
                if r > t {
                    cand.iter_mut().for_each(|c| *c *= t / r);
                }
                self.point(xi, &cand, 1.0, &mut x);
                let fc = self.eval.abs2(&x);
                if fc > f {
                    std::mem::swap(&mut y, &mut cand);
                    let gain = fc - f;
                    f = fc;
                    if gain <= 1e-13 * f {
                        return f;
                    }
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
                if step < 1e-7 * t {
                    return f;
                }
            }
        }
        f
    }
}

fn check(p: &Polynomial, v: &Subspace, xi: Option<&[f64]>) -> Result<()> {
    if v.ambient() != p.nvars() {
        return Err(Error::DimensionMismatch {
            expected: p.nvars(),
            got: v.ambient(),
        });
    }
    if let Some(xi) = xi {
        if xi.len() != p.nvars() {
            return Err(Error::DimensionMismatch {
                expected: p.nvars(),
                got: xi.len(),
            });
        }
    }
    Ok(())
}

/// `P̃_V(ξ,t)` with default sampling parameters.
pub fn p_tilde_sub(p: &Polynomial, v: &Subspace, xi: &[f64], t: f64) -> Result<f64> {
    p_tilde_sub_with(p, v, xi, t, &SigmaParams::default())
}

pub fn p_tilde_sub_with(
    p: &Polynomial,
    v: &Subspace,
    xi: &[f64],
    t: f64,
    params: &SigmaParams,
) -> Result<f64> {
    check(p, v, Some(xi))?;
    if !(t >= 0.0) {
        return Err(Error::NegativeRadius(t));
    }
    let eval = Evaluator::new(p);
    Ok(BallMax::new(&eval, v, params).sup(xi, t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusCell {
    pub t: f64,
    pub radius: f64,
    pub min_ratio: f64,
    /// The `ξ` attaining `min_ratio`.
    pub xi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerT {
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaEstimate {
    pub value: f64,
    pub per_t: Vec<PerT>,
    pub per_radius: Vec<RadiusCell>,
    pub converged: bool,
}

/// Ratio `P̃_V/P̃` at `(ξ,t)`; the denominator is never taken below the
/// numerator since `V ⊆ ℝⁿ`.
struct RatioFn<'a> {
    sub: BallMax<'a>,
    full: BallMax<'a>,
}

impl RatioFn<'_> {
    fn ratio(&self, xi: &[f64], t: f64) -> f64 {
        let num = self.sub.sup(xi, t);
        let den = self.full.sup(xi, t).max(num);
        if den == 0.0 {
            1.0
        } else {
            num / den
        }
    }

    /// Minimum over `R·u` for the sampled directions, refined by a compass
    /// search on the sphere from the three best directions.
    fn min_at_radius(&self, dirs: &[Vec<f64>], radius: f64, t: f64) -> (f64, Vec<f64>) {
        if radius == 0.0 || dirs.is_empty() {
            let xi = vec![0.0; self.full.eval.p.nvars()];
            return (self.ratio(&xi, t), xi);
        }
        let vals: Vec<f64> = dirs
            .par_iter()
            .map(|u| self.ratio(&linalg::scaled(u, radius), t))
            .collect();
        let mut order: Vec<usize> = (0..dirs.len()).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let n = dirs[0].len();
        let step0 = if n >= 2 {
            std::f64::consts::PI / (dirs.len() as f64).powf(1.0 / (n as f64 - 1.0))
        } else {
            0.0
        };
        let starts: Vec<usize> = order.iter().take(3).copied().collect();
        let refined: Vec<(f64, Vec<f64>)> = starts
            .par_iter()
            .map(|&i| self.refine(&dirs[i], vals[i], radius, t, step0))
            .collect();
        refined
            .into_iter()
            .fold((f64::INFINITY, Vec::new()), |acc, (v, u)| if v < acc.0 { (v, u) } else { acc })
    }

    fn refine(&self, start: &[f64], f0: f64, radius: f64, t: f64, step0: f64) -> (f64, Vec<f64>) {
        let n = start.len();
        let mut u = start.to_vec();
        let mut best = f0;
        let mut step = step0;
        let mut budget = 40;
        while n >= 2 && step > 1e-4 && budget > 0 {
            let mut improved = false;
            'axes: for j in 0..n {
                for s in [step, -step] {
                    let mut cand = u.clone();
                    cand[j] += s;
                    let cand = linalg::normalize(&cand);
                    budget -= 1;
                    let v = self.ratio(&linalg::scaled(&cand, radius), t);
                    if v < best {
                        best = v;
                        u = cand;
                        improved = true;
                        break 'axes;
                    }
                    if budget == 0 {
                        break 'axes;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (best, linalg::scaled(&u, radius))
    }
}

fn full_ratio_estimate(params: &SigmaParams, radii: &[f64]) -> SigmaEstimate {
    SigmaEstimate {
        value: 1.0,
        per_t: params.t_grid.iter().map(|&t| PerT { t, value: 1.0 }).collect(),
        per_radius: params
            .t_grid
            .iter()
            .flat_map(|&t| {
                radii.iter().map(move |&r| RadiusCell {
                    t,
                    radius: r,
                    min_ratio: 1.0,
                    xi: Vec::new(),
                })
            })
            .collect(),
        converged: true,
    }
}

/// Radii swept by [`sigma0_estimate`] in addition to the schedule.
pub const SMALL_RADII: [f64; 6] = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];

fn sweep_radii(params: &SigmaParams) -> Vec<f64> {
    let mut radii: Vec<f64> = SMALL_RADII.to_vec();
    radii.extend(params.radii.iter().copied().filter(|&r| r > 4.0));
    radii
}

/// Shared state of the two estimators.
struct Setup {
    eval: Evaluator,
    v: Subspace,
    /// Dependence subspace of `P`: the ratio only depends on the projection
    /// of `ξ` onto it.
    w: Subspace,
}

impl Setup {
    fn new(p: &Polynomial, v: &Subspace) -> Self {
        Self {
            eval: Evaluator::new(p),
            v: v.clone(),
            w: dependence_subspace(p),
        }
    }

    fn ratio_fn<'a>(&'a self, params: &SigmaParams) -> RatioFn<'a> {
        // The full ball projects onto the ball of W, so P̃ is a sup over W.
        RatioFn {
            sub: BallMax::new(&self.eval, &self.v, params),
            full: BallMax::new(&self.eval, &self.w, params),
        }
    }

    /// Directions of `W` expressed in ambient coordinates.
    fn w_directions(&self, params: &SigmaParams) -> Vec<Vec<f64>> {
        directions(self.w.dim(), params.directions, params.seed)
            .iter()
            .map(|y| self.w.from_coords(y))
            .collect()
    }

    /// For each `t`, minimum ratio at `ξ ∈ W` for every sweep radius.
    fn w_sweep(&self, f: &RatioFn, params: &SigmaParams, radii: &[f64]) -> Vec<Vec<(f64, Vec<f64>)>> {
        let dirs = self.w_directions(params);
        params
            .t_grid
            .iter()
            .map(|&t| radii.iter().map(|&r| f.min_at_radius(&dirs, r, t)).collect())
            .collect()
    }
}

/// Estimate of `σ_P(V)`.
///
/// For every `(t, R)` the ratio is minimized over `|ξ| = R`. When `P` does not
/// depend on all variables, the ratio is invariant under shifting `ξ` along
/// `W^⊥`, so every `ξ' ∈ W` with `|ξ'| ≤ R` is also realized at `|ξ| = R`; those
/// points are swept as in [`sigma0_estimate`] and included.
pub fn sigma_estimate(p: &Polynomial, v: &Subspace, params: &SigmaParams) -> Result<SigmaEstimate> {
    check(p, v, None)?;
    params.validate()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if v.is_full() {
        return Ok(full_ratio_estimate(params, &params.radii));
    }
    let setup = Setup::new(p, v);
    let f = setup.ratio_fn(params);
    let n = p.nvars();
    let dirs = directions(n, params.directions, params.seed);
    let transverse = setup.w.complement();
    let inner_radii = sweep_radii(params);
    let inner = if transverse.is_trivial() || setup.w.is_trivial() {
        None
    } else {
        Some(setup.w_sweep(&f, params, &inner_radii))
    };
    let mut per_radius = Vec::new();
    let mut per_t = Vec::new();
    let mut converged = true;
    for (ti, &t) in params.t_grid.iter().enumerate() {
        let mut mins = Vec::new();
        for &r in &params.radii {
            let (mut m, mut xi) = f.min_at_radius(&dirs, r, t);
            if let Some(inner) = &inner {
                for (&ri, (mi, eta)) in inner_radii.iter().zip(&inner[ti]) {
                    if ri <= r && *mi < m {
                        m = *mi;
                        // Same ratio as ξ' = eta, lifted to |ξ| = R along W^⊥.
                        let lift = (r * r - ri * ri).max(0.0).sqrt();
                        xi = linalg::add(eta, &linalg::scaled(&transverse.basis()[0], lift));
                    }
                }
            }
            per_radius.push(RadiusCell {
                t,
                radius: r,
                min_ratio: m,
                xi,
            });
            mins.push(m);
        }
        if let [.., a, b] = mins[..] {
            if (a - b).abs() > (0.1 * a.max(b)).max(1e-3) {
                converged = false;
            }
        }
        per_t.push(PerT {
            t,
            value: *mins.last().unwrap(),
        });
    }
    let value = per_t.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    Ok(SigmaEstimate {
        value: value.clamp(0.0, 1.0),
        per_t,
        per_radius,
        converged,
    })
}

/// Estimate of `σ⁰_P(V)`: the infimum over every sampled `ξ`, including `ξ = 0`.
/// Only the component of `ξ` in the dependence subspace matters, so `ξ` is
/// sampled there.
pub fn sigma0_estimate(p: &Polynomial, v: &Subspace, params: &SigmaParams) -> Result<SigmaEstimate> {
    check(p, v, None)?;
    params.validate()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let radii = sweep_radii(params);
    if v.is_full() {
        return Ok(full_ratio_estimate(params, &radii));
    }
    let setup = Setup::new(p, v);
    let f = setup.ratio_fn(params);
    let sweep = setup.w_sweep(&f, params, &radii);
    let mut per_radius = Vec::new();
    let mut per_t = Vec::new();
    for (&t, cells) in params.t_grid.iter().zip(sweep) {
        let mut best = f64::INFINITY;
        for (&r, (m, xi)) in radii.iter().zip(cells) {
            best = best.min(m);
            per_radius.push(RadiusCell {
                t,
                radius: r,
                min_ratio: m,
                xi,
            });
        }
        per_t.push(PerT { t, value: best });
    }
    let value = per_t.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    Ok(SigmaEstimate {
        value: value.clamp(0.0, 1.0),
        per_t,
        per_radius,
        converged: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaZeroSet {
    /// `{x : σ_P(span{x}) = 0}`.
    pub subspace: Subspace,
    /// `acts_along_elliptic` or `augmented_semi_elliptic`.
    pub rule: String,
    pub detail: String,
}

/// Exact zero set of `x ↦ σ_P(span{x})` for the classes where it is known:
/// (a) `P` acts along `W` and is elliptic there: the set is `W^⊥`;
/// (b) `P = Q⁺` with `Q` semi-elliptic and principal zero set `Z`: the set is `Z × ℝ`.
pub fn sigma_zero_subspace_exact(p: &Polynomial) -> Option<SigmaZeroSet> {
    if p.is_zero() {
        return None;
    }
    let n = p.nvars();
    let w = dependence_subspace(p);
    if w.is_trivial() {
        return Some(SigmaZeroSet {
            subspace: Subspace::trivial(n),
            rule: "acts_along_elliptic".into(),
            detail: "constant symbol".into(),
        });
    }
    if let Ok(e) = is_elliptic_on(p, &w) {
        if e.elliptic {
            return Some(SigmaZeroSet {
                subspace: w.complement(),
                rule: "acts_along_elliptic".into(),
                detail: format!("acts along {} and is elliptic there", w.describe()),
            });
        }
    }
    let q = p.drop_last_variable()?;
    if q.is_constant() {
        return None;
    }
    let se = semi_elliptic_weights(&q).ok()?;
    if se.status != SemiEllipticStatus::SemiElliptic {
        return None;
    }
    let z = zero_set_structure(&q.principal_part().ok()?)
        .ok()?
        .as_subspace(n - 1)?;
    Some(SigmaZeroSet {
        subspace: z.lift_with_line(),
        rule: "augmented_semi_elliptic".into(),
        detail: format!(
            "augmentation of a semi-elliptic symbol with principal zero set {}",
            z.describe()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial_in;
    use crate::presets;

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial_in(s, n).unwrap()
    }

    #[test]
    fn p_tilde_examples() {
        let v = p_tilde_sub(&poly("x1", 1), &Subspace::full(1), &[0.0], 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let v = p_tilde_sub(
            &poly("x1^2+x2^2", 2),
            &Subspace::coordinate(2, &[1]),
            &[10.0, 0.0],
            1.0,
        )
        .unwrap();
        assert!((v - 101.0).abs() < 1e-9);
        let heat2 = presets::heat(2);
        let v = p_tilde_sub(&heat2, &Subspace::full(2), &[3.0, 2.0], 2.0).unwrap();
        // Dense-grid value computed independently.
        assert!((v - 16.2796).abs() / 16.2796 < 0.01, "{v}");
        let trivial = p_tilde_sub(&heat2, &Subspace::trivial(2), &[1.0, 1.0], 3.0).unwrap();
        assert!((trivial - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            p_tilde_sub(&heat2, &Subspace::full(2), &[0.0, 0.0], -1.0),
            Err(Error::NegativeRadius(_))
        ));
    }

    #[test]
    fn directions_are_unit() {
        for d in 1..=4 {
            for u in directions(d, 50, 1) {
                assert!((linalg::norm(&u) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_subspace_ratio_is_one() {
        let e = sigma_estimate(&presets::heat(2), &Subspace::full(2), &SigmaParams::default()).unwrap();
        assert_eq!(e.value, 1.0);
        let e = sigma0_estimate(&presets::heat(2), &Subspace::full(2), &SigmaParams::default()).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn sigma0_trivial_subspace_vanishes_for_heat() {
        let e = sigma0_estimate(&presets::heat(2), &Subspace::trivial(2), &SigmaParams::default()).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn exact_rule_table() {
        assert_eq!(
            sigma_zero_subspace_exact(&presets::laplace(3)).unwrap().subspace,
            Subspace::trivial(3)
        );
        assert_eq!(
            sigma_zero_subspace_exact(&presets::laplace_sub(3)).unwrap().subspace,
            Subspace::coordinate(3, &[2])
        );
        let s = sigma_zero_subspace_exact(&presets::heat(2).augment()).unwrap();
        assert_eq!(s.subspace, Subspace::coordinate(3, &[0, 2]));
        assert_eq!(s.rule, "augmented_semi_elliptic");
        assert!(sigma_zero_subspace_exact(&presets::wave(2)).is_none());
    }

    #[test]
    fn params_validation() {
        let mut p = SigmaParams::default();
        assert!(p.validate().is_ok());
        p.t_grid = vec![0.5];
        assert!(p.validate().is_err());
        let p = SigmaParams {
            radii: vec![10.0, 10.0],
            ..SigmaParams::default()
        };
        assert!(p.validate().is_err());
    }
}
