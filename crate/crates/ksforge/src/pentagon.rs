//! Pentagon inequalities: rings of five rays, each orthogonal to its two
//! neighbours. Noncontextually at most two of the five can be true, so
//! `⟨Σ⟩ ≤ 2` for `Σ` the sum of the five projectors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{cell600, pauli60, two_qubit_id3s};
use crate::ray_engine::{eigenbasis, explicit_states, orthogonal};

pub const RING_TOL: f64 = 1e-9;
pub const CLASS_STEP: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum PentagonError {
    #[error("ray {0} is not normalised (norm {1})")]
    NotNormalised(usize, f64),
    #[error("rays have mixed or unsupported dimension")]
    Dimension,
    #[error("rays {0} and {1} are neighbours in the ring but not orthogonal")]
    NotRing(usize, usize),
    #[error("ray {0} has rank {1}; only rank-1 rays are supported")]
    Rank(usize, usize),
    #[error("coverage scan needs real rays")]
    NotReal,
    #[error("mesh step must be positive")]
    Step,
}

/// A ray system: unit vectors plus the orthogonality relation.
#[derive(Clone, Debug)]
pub struct RaySystem {
    pub name: &'static str,
    pub vectors: Vec<Vec<Complex64>>,
    pub adjacency: Vec<Vec<bool>>,
}

impl RaySystem {
    pub fn is_real(&self) -> bool {
        self.vectors.iter().flatten().all(|c| c.im.abs() < RING_TOL)
    }

    /// Orthogonal 4-cliques (complete bases in d = 4).
    pub fn bases(&self) -> Vec<[usize; 4]> {
        cell600::orthogonal_cliques(&self.adjacency)
    }
}

/// The 600-cell rays; adjacency is exact.
pub fn cell600_system() -> RaySystem {
    let c = cell600::cell600();
    let vectors = c.unit_vectors().into_iter().map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).collect();
    RaySystem { name: "cell600", vectors, adjacency: c.orthogonality() }
}

/// The 60 rank-1 rays of the 2-qubit Pauli group. Adjacency comes from the
/// signatures; vectors from explicit diagonalisation.
pub fn pauli60_system() -> Result<RaySystem, PentagonError> {
    let ids = two_qubit_id3s();
    let rb = pauli60();
    let mut vectors = Vec::with_capacity(rb.rays.len());
    for (i, ray) in rb.rays.iter().enumerate() {
        if ray.rank() != 1 {
            return Err(PentagonError::Rank(i, ray.rank()));
        }
        let id = &ids[rb.origin[i]];
        let k = eigenbasis(id).iter().position(|e| e.ray == *ray).expect("ray comes from its origin's eigenbasis");
        let states = explicit_states(id).map_err(|_| PentagonError::Dimension)?;
        vectors.push(states[k].clone());
    }
    let n = rb.rays.len();
    let adjacency =
        (0..n).map(|i| (0..n).map(|j| i != j && orthogonal(&rb.rays[i], &rb.rays[j])).collect()).collect();
    Ok(RaySystem { name: "pauli60", vectors, adjacency })
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_rays(rays: &[&[Complex64]]) -> Result<usize, PentagonError> {
    let d = rays.first().map_or(0, |r| r.len());
    if !(2..=8).contains(&d) || rays.iter().any(|r| r.len() != d) {
        return Err(PentagonError::Dimension);
    }
    for (i, r) in rays.iter().enumerate() {
        let n = inner(r, r).re.sqrt();
        if (n - 1.0).abs() > RING_TOL {
            return Err(PentagonError::NotNormalised(i, n));
        }
    }
    Ok(d)
}

/// `Σ = Σ_i |ψ_i⟩⟨ψ_i|`.
pub fn sigma_matrix(rays: &[&[Complex64]]) -> DMatrix<Complex64> {
    let d = rays[0].len();
    DMatrix::from_fn(d, d, |a, b| rays.iter().map(|r| r[a] * r[b].conj()).sum())
}

/// Largest eigenvalue of Σ and its eigenvector.
pub fn sigma_spectrum(rays: &[&[Complex64]]) -> Result<(f64, Vec<Complex64>), PentagonError> {
    check_rays(rays)?;
    let eig = SymmetricEigen::new(sigma_matrix(rays));
    let (k, &top) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("d >= 2");
    Ok((top, eig.eigenvectors.column(k).iter().copied().collect()))
}

/// Largest eigenvalue of the projector sum of a five-ray orthogonal ring.
pub fn sigma_max_eig(rays: &[&[Complex64]; 5]) -> Result<f64, PentagonError> {
    check_rays(rays)?;
    for i in 0..5 {
        let j = (i + 1) % 5;
        if inner(rays[i], rays[j]).norm() > RING_TOL {
            return Err(PentagonError::NotRing(i, j));
        }
    }
    Ok(sigma_spectrum(rays)?.0)
}

/// Klyachko's real d = 3 pentagon, `Σ` maximal at √5.
pub fn klyachko_pentagon() -> [Vec<Complex64>; 5] {
    let c = (PI / 5.0).cos();
    let cos_t = (c / (1.0 + c)).sqrt();
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    std::array::from_fn(|j| {
        let a = 4.0 * PI * j as f64 / 5.0;
        [cos_t, sin_t * a.cos(), sin_t * a.sin()].map(|x| Complex64::new(x, 0.0)).to_vec()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonOperator {
    /// Ray indices in ring order, starting from the smallest.
    pub rays: [usize; 5],
    pub sigma_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonClass {
    pub sigma_max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonCensus {
    pub pentagons: Vec<PentagonOperator>,
    pub classes: Vec<PentagonClass>,
    /// Orthogonal 5-rings (by ray set) with `sigma_max ≤ 2`.
    pub rejected: usize,
    /// Distinct Σ matrices among the conflict pentagons; two disjoint rings
    /// can share one.
    pub distinct_operators: usize,
}

/// All orthogonal 5-rings with `sigma_max > 2`, one per ray 5-set,
/// grouped by `sigma_max` to 1e-4 (strongest first).
pub fn find_conflict_pentagons(sys: &RaySystem) -> Result<PentagonCensus, PentagonError> {
    let n = sys.vectors.len();
    if sys.adjacency.len() != n {
        return Err(PentagonError::Dimension);
    }
    let adj = &sys.adjacency;
    // rings s-a-b-c-d-s with s the smallest index and a < d
    let rings: Vec<[usize; 5]> = (0..n)
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut out = vec![];
            let nb = |v: usize| (s + 1..n).filter(move |&w| adj[v][w]);
            for a in nb(s) {
                for b in nb(a) {
                    for c in nb(b).filter(|&c| c != a) {
                        for d in nb(c).filter(|&d| d > a && d != b && adj[d][s]) {
                            out.push([s, a, b, c, d]);
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut by_set: BTreeMap<[usize; 5], [usize; 5]> = BTreeMap::new();
    for r in rings {
        let mut key = r;
        key.sort();
        by_set.entry(key).or_insert(r);
    }
    let evaluated: Vec<Result<PentagonOperator, PentagonError>> = by_set
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|r| {
            let v: [&[Complex64]; 5] = r.map(|i| sys.vectors[i].as_slice());
            Ok(PentagonOperator { rays: r, sigma_max: sigma_max_eig(&v)? })
        })
        .collect();
    let mut pentagons = vec![];
    let mut rejected = 0;
    for p in evaluated {
        let p = p?;
        if p.sigma_max > 2.0 + RING_TOL {
            pentagons.push(p);
        } else {
            rejected += 1;
        }
    }
    let mut classes: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for p in &pentagons {
        let e = classes.entry(-(p.sigma_max / CLASS_STEP).round() as i64).or_insert((p.sigma_max, 0));
        e.1 += 1;
    }
    let classes = classes.into_values().map(|(sigma_max, count)| PentagonClass { sigma_max, count }).collect();
    let operators: std::collections::BTreeSet<Vec<i64>> = pentagons
        .iter()
        .map(|p| {
            let v: Vec<&[Complex64]> = p.rays.iter().map(|&i| sys.vectors[i].as_slice()).collect();
            sigma_matrix(&v).iter().flat_map(|c| [(c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64]).collect()
        })
        .collect();
    Ok(PentagonCensus { pentagons, classes, rejected, distinct_operators: operators.len() })
}

/// `max_p ⟨ψ|Σ_p|ψ⟩` over a list of pentagons.
pub fn max_expectation(sys: &RaySystem, pentagons: &[PentagonOperator], state: &[Complex64]) -> f64 {
    let w: Vec<f64> = sys.vectors.iter().map(|v| inner(v, state).norm_sqr()).collect();
    pentagons.iter().map(|p| p.rays.iter().map(|&i| w[i]).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max)
}

/// The real state `(cos φ sin θ1 sin θ2, sin φ sin θ1 sin θ2, cos θ1 sin θ2, cos θ2)`.
pub fn real_state(phi: f64, t1: f64, t2: f64) -> [f64; 4] {
    [phi.cos() * t1.sin() * t2.sin(), phi.sin() * t1.sin() * t2.sin(), t1.cos() * t2.sin(), t2.cos()]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshPoint {
    pub v: f64,
    pub phi: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl MeshPoint {
    pub fn state(&self) -> [f64; 4] {
        real_state(self.phi, self.theta1, self.theta2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub step: f64,
    pub points: u64,
    /// Minimum over the mesh of `V = max_p ⟨r|Σ_p|r⟩`.
    pub min: MeshPoint,
    /// Minimum after refining around the lowest cells, if requested.
    pub refined: Option<MeshPoint>,
}

struct Evaluator<'a> {
    rays: Vec<[f64; 4]>,
    pentagons: &'a [PentagonOperator],
}

impl Evaluator<'_> {
    fn weights(&self, r: &[f64; 4]) -> Vec<f64> {
        self.rays.iter().map(|v| (v[0] * r[0] + v[1] * r[1] + v[2] * r[2] + v[3] * r[3]).powi(2)).collect()
    }

    fn value(&self, w: &[f64], p: usize) -> f64 {
        self.pentagons[p].rays.iter().map(|&i| w[i]).sum()
    }

    /// `V` at `r`, or `None` once some pentagon reaches `cutoff` (checking
    /// the `hints` first).
    fn v_below(&self, r: &[f64; 4], cutoff: f64, hints: &mut Vec<usize>) -> Option<f64> {
        let w = self.weights(r);
        if hints.iter().any(|&p| self.value(&w, p) >= cutoff) {
            return None;
        }
        let (best, v) = (0..self.pentagons.len())
            .map(|p| (p, self.value(&w, p)))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        if !hints.contains(&best) {
            hints.insert(0, best);
            hints.truncate(8);
        }
        (v < cutoff).then_some(v)
    }
}

/// Keeps the `k` lowest points, ties broken by mesh order.
struct Lowest {
    k: usize,
    pts: Vec<(f64, u64, MeshPoint)>,
}

impl Lowest {
    fn cutoff(&self) -> f64 {
        if self.pts.len() < self.k {
            f64::INFINITY
        } else {
            self.pts.last().expect("k >= 1").0
        }
    }

    fn push(&mut self, v: f64, order: u64, p: MeshPoint) {
        let at = self.pts.partition_point(|q| (q.0, q.1) < (v, order));
        self.pts.insert(at, (v, order, p));
        self.pts.truncate(self.k);
    }
}

fn mesh_len(range: f64, step: f64) -> usize {
    (range / step - 1e-9).ceil() as usize
}

/// Scan `V` over a regular `(φ, θ1, θ2)` mesh. With `refine`, the 100
/// lowest cells are rescanned at a tenth of the step.
pub fn coverage_scan(
    sys: &RaySystem,
    pentagons: &[PentagonOperator],
    step: f64,
    refine: bool,
) -> Result<CoverageReport, PentagonError> {
    if step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(PentagonError::Step);
    }
    if !sys.is_real() || sys.vectors.iter().any(|v| v.len() != 4) {
        return Err(PentagonError::NotReal);
    }
    if pentagons.is_empty() {
        return Err(PentagonError::Dimension);
    }
    let ev = Evaluator {
        rays: sys.vectors.iter().map(|v| [v[0].re, v[1].re, v[2].re, v[3].re]).collect(),
        pentagons,
    };
    let keep = if refine { 100 } else { 1 };
    let (np, nt) = (mesh_len(2.0 * PI, step), mesh_len(PI, step));
    let slabs: Vec<Lowest> = (0..np)
        .into_par_iter()
        .map(|i| {
            let mut low = Lowest { k: keep, pts: vec![] };
            let mut hints = vec![];
            let phi = i as f64 * step;
            for j in 0..nt {
                for k in 0..nt {
                    let (t1, t2) = (j as f64 * step, k as f64 * step);
                    let r = real_state(phi, t1, t2);
                    // `<=` keeps mesh-order ties deterministic
                    if let Some(v) = ev.v_below(&r, low.cutoff() + f64::EPSILON, &mut hints) {
                        let order = ((i * nt + j) * nt + k) as u64;
                        low.push(v, order, MeshPoint { v, phi, theta1: t1, theta2: t2 });
                    }
                }
            }
            low
        })
        .collect();
    let mut all = Lowest { k: keep, pts: vec![] };
    for s in slabs {
        for (v, o, p) in s.pts {
            all.push(v, o, p);
        }
    }
    let min = all.pts[0].2;
    let refined = refine.then(|| {
        let fine = step / 10.0;
        all.pts
            .par_iter()
            .map(|(_, _, c)| {
                let mut best = *c;
                let mut hints = vec![];
                for a in -10i32..=10 {
                    for b in -10i32..=10 {
                        for d in -10i32..=10 {
                            let (phi, t1, t2) =
                                (c.phi + a as f64 * fine, c.theta1 + b as f64 * fine, c.theta2 + d as f64 * fine);
                            if let Some(v) = ev.v_below(&real_state(phi, t1, t2), best.v, &mut hints) {
                                best = MeshPoint { v, phi, theta1: t1, theta2: t2 };
                            }
                        }
                    }
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(min, |m, p| if p.v < m.v { p } else { m })
    });
    let points = (np * nt * nt) as u64;
    Ok(CoverageReport { step, points, min, refined })
}

/// `max_p ⟨r|Σ_p|r⟩` at each ray of the system itself.
pub fn coverage_at_rays(sys: &RaySystem, pentagons: &[PentagonOperator]) -> Vec<f64> {
    sys.vectors.par_iter().map(|r| max_expectation(sys, pentagons, r)).collect()
}

// ---------------------------------------------------------------------------
// Product pentagons

/// Which qubit supplies the orthogonality of each ring edge `(i, i+1)`:
/// `true` for the outer qubit. Up to rotation, reflection and qubit swap
/// these are the only colourings without an odd single-qubit cycle.
pub const PRODUCT_CONFIGS: [[bool; 5]; 3] = [
    // four outer edges, one inner
    [true, true, true, true, false],
    // three outer edges in a row, two inner in a row
    [true, true, true, false, false],
    // outer edges split 2 + 1, inner edges apart
    [true, true, false, true, false],
];

/// Qubit-1 and qubit-2 states of the five corners. Each maximal chain of
/// same-qubit edges alternates `a_j`, `b_j` with its own `θ_j`; corners
/// outside every chain of a qubit get `|0⟩`. Returns the parameter count.
pub fn product_pentagon_states(config: &[bool; 5], theta: &[f64]) -> ([[f64; 2]; 5], [[f64; 2]; 5], usize) {
    let mut sides = [[[1.0, 0.0]; 5]; 2];
    let mut used = 0;
    for (s, outer) in [(0usize, true), (1, false)] {
        // start each chain right after an edge of the other kind
        let start = (0..5).find(|&e| config[(e + 4) % 5] != outer && config[e] == outer);
        let Some(start) = start else { continue };
        let mut e = start;
        for _ in 0..5 {
            if config[e] == outer && (e == start || config[(e + 4) % 5] != outer) {
                let t = theta.get(used).copied().unwrap_or(0.0);
                used += 1;
                let (a, b) = ([t.cos(), t.sin()], [t.sin(), -t.cos()]);
                let mut v = e;
                let mut flip = false;
                sides[s][v] = a;
                while config[v] == outer {
                    v = (v + 1) % 5;
                    flip = !flip;
                    sides[s][v] = if flip { b } else { a };
                    if v == e {
                        break;
                    }
                }
            }
            e = (e + 1) % 5;
        }
    }
    (sides[0], sides[1], used)
}

/// `⟨00|Σ|00⟩` for a product pentagon.
pub fn product_pentagon_value(config: &[bool; 5], theta: &[f64]) -> f64 {
    let (u, v, _) = product_pentagon_states(config, theta);
    (0..5).map(|i| u[i][0].powi(2) * v[i][0].powi(2)).sum()
}

/// Grid over all parameters, then coordinate refinement from the best
/// grid points. Returns the maximum for each configuration.
pub fn product_pentagon_maxima(grid: usize) -> [f64; 3] {
    PRODUCT_CONFIGS.map(|cfg| {
        let k = product_pentagon_states(&cfg, &[]).2;
        let h = PI / grid as f64;
        let total = grid.pow(k as u32);
        let point = |mut idx: usize| -> Vec<f64> {
            (0..k)
                .map(|_| {
                    let t = (idx % grid) as f64 * h;
                    idx /= grid;
                    t
                })
                .collect()
        };
        let mut scored: Vec<(f64, usize)> =
            (0..total).into_par_iter().map(|i| (product_pentagon_value(&cfg, &point(i)), i)).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored
            .iter()
            .take(16)
            .map(|&(_, i)| {
                let mut x = point(i);
                let mut best = product_pentagon_value(&cfg, &x);
                let mut delta = h;
                while delta > 1e-12 {
                    let mut moved = false;
                    for c in 0..k {
                        for s in [delta, -delta] {
                            x[c] += s;
                            let v = product_pentagon_value(&cfg, &x);
                            if v > best {
                                best = v;
                                moved = true;
                            } else {
                                x[c] -= s;
                            }
                        }
                    }
                    if !moved {
                        delta /= 2.0;
                    }
                }
                best
            })
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Global maximum of `⟨00|Σ|00⟩` over all product pentagons.
pub fn product_pentagon_max() -> f64 {
    product_pentagon_maxima(24).into_iter().fold(f64::NEG_INFINITY, f64::max)
}
