//! Level-set search for violations of the minimum principle on a slice.
//!
//! A violation is a compact `K ⊂ (x₀ + W) ∩ X` whose interior holds a value of
//! `d_X` below every value on its relative boundary. On the grid, `K` is a
//! union of closed cells. Because `d_X` is 1-Lipschitz, a gap of `2h` between
//! cell-centre values survives passing from centres to the cells themselves.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::domain::Domain;
use super::slice::{Cell, Extent, SliceGrid};
use crate::error::{Error, Result};

/// Number of sublevels scanned per slice.
pub const LEVELS: usize = 32;

/// A replayable violation of the minimum principle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub slice_id: usize,
    pub origin: Vec<f64>,
    /// Orthonormal basis of the slice directions.
    pub basis: Vec<Vec<f64>>,
    pub h: f64,
    pub extent: Extent,
    /// Sublevel at which the failing component was found.
    pub level: f64,
    /// Cells of `K`.
    pub k_cells: Vec<Cell>,
    pub x0_cell: Cell,
    pub x0: Vec<f64>,
    pub interior_min: f64,
    pub boundary_min: f64,
    pub boundary_argmin: Cell,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinPrincipleReport {
    HoldsUpTo {
        h: f64,
        extent: Extent,
        slices_checked: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    FailsCertificate(Certificate),
    Inconclusive {
        reason: String,
    },
}

impl MinPrincipleReport {
    pub fn status(&self) -> &'static str {
        match self {
            MinPrincipleReport::HoldsUpTo { .. } => "holds_up_to",
            MinPrincipleReport::FailsCertificate(_) => "fails_certificate",
            MinPrincipleReport::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            MinPrincipleReport::FailsCertificate(c) => Some(c),
            _ => None,
        }
    }
}

/// Min-heap entry ordered by value, then index.
#[derive(Clone, Copy)]
struct Entry {
    d: f64,
    i: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.d.total_cmp(&self.d).then(other.i.cmp(&self.i))
    }
}

/// Runs the level scan on one slice.
pub fn min_principle_slice(slice: &SliceGrid) -> MinPrincipleReport {
    check_slice(slice, 0)
}

struct Component {
    min: f64,
    argmin: usize,
    near: bool,
    frontier: bool,
    frontier_min: f64,
    inner_min: f64,
    ring_min: f64,
}

pub(crate) fn check_slice(s: &SliceGrid, slice_id: usize) -> MinPrincipleReport {
    let near = 2.0 * s.h;
    let holds = |note: Option<String>| MinPrincipleReport::HoldsUpTo {
        h: s.h,
        extent: s.extent.clone(),
        slices_checked: 1,
        note,
    };
    if s.is_empty() {
        return MinPrincipleReport::Inconclusive {
            reason: "slice does not meet the domain".into(),
        };
    }
    let finite: Vec<f64> = (0..s.len())
        .filter(|&i| s.in_x[i] && s.d[i].is_finite())
        .map(|i| s.d[i])
        .collect();
    if finite.is_empty() {
        return holds(Some("d_X is identically +inf on the slice".into()));
    }
    let dmin = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let dmax = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if dmax - dmin <= 1e-12 * dmax.max(1.0) {
        return holds(Some("d_X is constant on the slice".into()));
    }

    let n = s.len();
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut members = Vec::new();
    let mut nb = Vec::new();
    let mut frontier_issue: Option<String> = None;
    for l in 1..=LEVELS {
        let c = dmin * (dmax / dmin).powf(l as f64 / LEVELS as f64);
        label.iter_mut().for_each(|x| *x = usize::MAX);
        for seed in 0..n {
            if !s.in_x[seed] || s.d[seed] >= c || label[seed] != usize::MAX {
                continue;
            }
            members.clear();
            label[seed] = seed;
            queue.push_back(seed);
            while let Some(i) = queue.pop_front() {
                members.push(i);
                s.neighbors(i, &mut nb);
                for &j in &nb {
                    if s.in_x[j] && s.d[j] < c && label[j] == usize::MAX {
                        label[j] = seed;
                        queue.push_back(j);
                    }
                }
            }
            let mut comp = Component {
                min: f64::INFINITY,
                argmin: seed,
                near: false,
                frontier: false,
                frontier_min: f64::INFINITY,
                inner_min: f64::INFINITY,
                ring_min: f64::INFINITY,
            };
            for &i in &members {
                let d = s.d[i];
                if d < comp.min {
                    comp.min = d;
                    comp.argmin = i;
                }
                comp.near |= d < near;
                if s.is_frontier(i) {
                    comp.frontier = true;
                    comp.frontier_min = comp.frontier_min.min(d);
                } else {
                    comp.inner_min = comp.inner_min.min(d);
                }
                s.neighbors(i, &mut nb);
                for &j in &nb {
                    if label[j] != seed {
                        comp.ring_min = comp.ring_min.min(if s.in_x[j] { s.d[j] } else { 0.0 });
                    }
                }
            }
            if comp.near {
                continue;
            }
            if !comp.frontier {
                if comp.ring_min > comp.min + near {
                    return MinPrincipleReport::FailsCertificate(shape_certificate(s, comp.argmin, slice_id, c));
                }
            } else if comp.inner_min + near < comp.frontier_min && frontier_issue.is_none() {
                frontier_issue = Some(format!(
                    "a sublevel component at level {c:.6} reaches the extent frontier with interior minimum {:.6} below its frontier values; enlarge the extent",
                    comp.inner_min
                ));
            }
        }
    }
    match frontier_issue {
        Some(reason) => MinPrincipleReport::Inconclusive { reason },
        None => holds(None),
    }
}

struct FloodState {
    len: usize,
    kmin: f64,
    ring: Entry,
    radius: f64,
}

/// Grows `K` from `start` by repeatedly absorbing the lowest neighbouring
/// cell, and returns the valid stage (gap above `2h`) whose radius is closest
/// to half of the largest valid radius.
fn shape_certificate(s: &SliceGrid, start: usize, slice_id: usize, level: f64) -> Certificate {
    let near = 2.0 * s.h;
    let n = s.len();
    let mut in_k = vec![false; n];
    let mut queued = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut order = vec![start];
    let mut nb = Vec::new();
    let start_cell = s.cell(start);
    in_k[start] = true;
    let mut kmin = s.d[start];
    let mut radius: f64 = 0.0;
    let mut blocked = false;
    let mut push_neighbors = |i: usize, heap: &mut BinaryHeap<Entry>, in_k: &[bool], blocked: &mut bool| {
        s.neighbors(i, &mut nb);
        for &j in &nb {
            if in_k[j] || queued[j] {
                continue;
            }
            queued[j] = true;
            if !s.in_x[j] {
                *blocked = true;
            }
            heap.push(Entry { d: if s.in_x[j] { s.d[j] } else { 0.0 }, i: j });
        }
    };
    push_neighbors(start, &mut heap, &in_k, &mut blocked);
    let mut states = Vec::new();
    while !blocked {
        let Some(&top) = heap.peek() else { break };
        if top.d > kmin + near {
            states.push(FloodState {
                len: order.len(),
                kmin,
                ring: top,
                radius,
            });
        }
        heap.pop();
        if s.is_frontier(top.i) || top.d < near {
            break;
        }
        in_k[top.i] = true;
        order.push(top.i);
        kmin = kmin.min(top.d);
        let dist2: i64 = s
            .cell(top.i)
            .iter()
            .zip(&start_cell)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        radius = radius.max((dist2 as f64).sqrt() * s.h);
        push_neighbors(top.i, &mut heap, &in_k, &mut blocked);
    }
    let max_r = states.iter().map(|st| st.radius).fold(0.0, f64::max);
    let target = 0.5 * max_r;
    let mut best: Option<&FloodState> = None;
    for st in &states {
        if best.is_none_or(|b| (st.radius - target).abs() < (b.radius - target).abs()) {
            best = Some(st);
        }
    }
    let st = best.expect("the failing component itself is a valid stage");
    let x0_cell = s.cell(start);
    Certificate {
        slice_id,
        origin: s.origin.clone(),
        basis: s.basis.basis().to_vec(),
        h: s.h,
        extent: s.extent.clone(),
        level,
        k_cells: order[..st.len].iter().map(|&i| s.cell(i)).collect(),
        x0: s.point(start),
        x0_cell,
        interior_min: st.kmin,
        boundary_min: st.ring.d,
        boundary_argmin: s.cell(st.ring.i),
        margin: near,
    }
}

/// Outcome of recomputing a certificate's values at one spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayCheck {
    pub h: f64,
    pub cells: usize,
    pub interior_min: f64,
    pub boundary_min: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub coarse: ReplayCheck,
    pub fine: ReplayCheck,
    pub valid: bool,
}

fn cell_position(cert: &Certificate, c: &[i64], h: f64) -> Vec<f64> {
    let mut p = cert.origin.clone();
    for (cj, b) in c.iter().zip(&cert.basis) {
        let s = *cj as f64 * h;
        for (o, bj) in p.iter_mut().zip(b) {
            *o += s * bj;
        }
    }
    p
}

fn replay_at(domain: &Domain, cert: &Certificate, cells: &HashSet<Cell>, h: f64) -> ReplayCheck {
    let margin = 2.0 * h;
    let mut interior_min = f64::INFINITY;
    let mut inside = true;
    let mut boundary_min = f64::INFINITY;
    let mut seen = HashSet::new();
    for c in cells {
        let d = domain.margin(&cell_position(cert, c, h));
        // Closed cells lie within h·√k/2 < h of their centres.
        inside &= d > h;
        interior_min = interior_min.min(d);
        for j in 0..c.len() {
            for step in [-1, 1] {
                let mut q = c.clone();
                q[j] += step;
                if cells.contains(&q) || !seen.insert(q.clone()) {
                    continue;
                }
                boundary_min = boundary_min.min(domain.margin(&cell_position(cert, &q, h)).max(0.0));
            }
        }
    }
    ReplayCheck {
        h,
        cells: cells.len(),
        interior_min,
        boundary_min,
        margin,
        holds: inside && !cells.is_empty() && interior_min + margin < boundary_min,
    }
}

/// Recomputes a certificate from the domain, at its own spacing and with
/// every cell split into `2^k` cells of half the size.
pub fn replay(domain: &Domain, cert: &Certificate) -> Result<ReplayReport> {
    let n = domain.ambient();
    if cert.origin.len() != n || cert.basis.iter().any(|b| b.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: cert.origin.len(),
        });
    }
    if !(cert.h > 0.0) || cert.k_cells.iter().any(|c| c.len() != cert.basis.len()) {
        return Err(Error::InvalidParams("malformed certificate".into()));
    }
    let coarse_cells: HashSet<Cell> = cert.k_cells.iter().cloned().collect();
    let k = cert.basis.len();
    let mut fine_cells = HashSet::new();
    for c in &coarse_cells {
        for mask in 0..(1usize << k) {
            let f: Cell = c
                .iter()
                .enumerate()
                .map(|(j, &cj)| 2 * cj + ((mask >> j) & 1) as i64)
                .collect();
            fine_cells.insert(f);
        }
    }
    let coarse = replay_at(domain, cert, &coarse_cells, cert.h);
    let fine = replay_at(domain, cert, &fine_cells, cert.h / 2.0);
    let valid = coarse.holds && fine.holds;
    Ok(ReplayReport { coarse, fine, valid })
}

/// Breadth-first search from `start` through in-domain cells outside `k`,
/// ending at a cell with `d_X < 2h` or on the extent frontier.
pub fn escape_path(slice: &SliceGrid, start: &[i64], k: &[Cell]) -> Result<Option<Vec<Cell>>> {
    let s0 = slice
        .index(start)
        .ok_or_else(|| Error::InvalidParams(format!("start cell {start:?} lies outside the slice")))?;
    if !slice.in_x[s0] {
        return Err(Error::NotInDomain);
    }
    let mut blocked = vec![false; slice.len()];
    for c in k {
        if let Some(i) = slice.index(c) {
            blocked[i] = true;
        }
    }
    if blocked[s0] {
        return Err(Error::InvalidParams("start cell belongs to K".into()));
    }
    let near = 2.0 * slice.h;
    let goal = |i: usize| slice.d[i] < near || slice.is_frontier(i);
    let mut parent = vec![usize::MAX; slice.len()];
    parent[s0] = s0;
    let mut queue = VecDeque::from([s0]);
    let mut nb = Vec::new();
    while let Some(i) = queue.pop_front() {
        if goal(i) {
            let mut path = vec![slice.cell(i)];
            let mut cur = i;
            while cur != s0 {
                cur = parent[cur];
                path.push(slice.cell(cur));
            }
            path.reverse();
            return Ok(Some(path));
        }
        slice.neighbors(i, &mut nb);
        for &j in &nb {
            if slice.in_x[j] && !blocked[j] && parent[j] == usize::MAX {
                parent[j] = i;
                queue.push_back(j);
            }
        }
    }
    Ok(None)
}
