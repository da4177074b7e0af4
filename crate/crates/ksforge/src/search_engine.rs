//! Tree searches over ray/basis structures: noncontextual colourings, parity
//! proofs (general search and the complementary-pair fast path), and basis /
//! ray criticality.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, SharedMeter};
use crate::proof_engine::KsProof;
use crate::ray_engine::{orthogonal, BasisKind, RbSet};
use crate::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("fast path needs every observable in exactly two IDs and pairwise intersections of at most one ({0})")]
    FastPathPrecondition(String),
    #[error("selection {0} did not close into a parity proof")]
    FastPathBroken(u64),
}

// ---------------------------------------------------------------------------
// Colouring

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ColorStatus {
    Colorable,
    Uncolorable,
    /// The budget ran out before the tree was exhausted.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringVerdict {
    pub status: ColorStatus,
    /// Each witness lists the rays assigned 1 (all others are 0).
    pub witnesses: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl ColoringVerdict {
    pub fn is_uncolorable(&self) -> bool {
        self.status == ColorStatus::Uncolorable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorOptions {
    /// Collect every witness instead of stopping at the first.
    pub all: bool,
    pub budget: Budget,
}

impl Default for ColorOptions {
    fn default() -> Self {
        ColorOptions { all: false, budget: Budget::UNLIMITED }
    }
}

/// Exact-one-per-basis colouring. `conflicts[r]` lists the rays that may not
/// share the value 1 with `r`.
struct Colorer<'a> {
    bases: &'a [Vec<usize>],
    ray_bases: Vec<Vec<usize>>,
    conflicts: Vec<Vec<usize>>,
    value: Vec<u8>, // 0 = unassigned, 1 = zero, 2 = one
    zeros: Vec<usize>,
    ones: Vec<usize>,
}

const UNSET: u8 = 0;
const ZERO: u8 = 1;
const ONE: u8 = 2;

impl<'a> Colorer<'a> {
    fn new(n_rays: usize, bases: &'a [Vec<usize>], conflicts: Vec<Vec<usize>>) -> Colorer<'a> {
        let mut ray_bases = vec![Vec::new(); n_rays];
        for (b, rs) in bases.iter().enumerate() {
            for &r in rs {
                ray_bases[r].push(b);
            }
        }
        Colorer {
            bases,
            ray_bases,
            conflicts,
            value: vec![UNSET; n_rays],
            zeros: vec![0; bases.len()],
            ones: vec![0; bases.len()],
        }
    }

    fn set(&mut self, r: usize, v: u8, trail: &mut Vec<usize>) {
        self.value[r] = v;
        for &b in &self.ray_bases[r] {
            if v == ZERO {
                self.zeros[b] += 1;
            } else {
                self.ones[b] += 1;
            }
        }
        trail.push(r);
    }

    fn undo(&mut self, trail: &mut Vec<usize>, mark: usize) {
        while trail.len() > mark {
            let r = trail.pop().expect("nonempty");
            let v = self.value[r];
            for &b in &self.ray_bases[r] {
                if v == ZERO {
                    self.zeros[b] -= 1;
                } else {
                    self.ones[b] -= 1;
                }
            }
            self.value[r] = UNSET;
        }
    }

    fn run(&mut self, opts: ColorOptions) -> ColoringVerdict {
        let mut meter = opts.budget.meter();
        let mut witnesses = Vec::new();
        let mut trail = Vec::new();
        self.rec(&mut meter, opts.all, &mut witnesses, &mut trail);
        let status = if meter.exhausted() {
            if witnesses.is_empty() {
                ColorStatus::Unknown
            } else {
                ColorStatus::Colorable
            }
        } else if witnesses.is_empty() {
            ColorStatus::Uncolorable
        } else {
            ColorStatus::Colorable
        };
        ColoringVerdict { status, witnesses, nodes: meter.nodes() }
    }

    /// Returns true to stop the search.
    fn rec(&mut self, meter: &mut crate::budget::Meter, all: bool, out: &mut Vec<Vec<usize>>, trail: &mut Vec<usize>) -> bool {
        if !meter.tick() {
            return true;
        }
        // basis without a 1 and with the most zeros (lowest index on ties)
        let mut pick: Option<usize> = None;
        for (b, rs) in self.bases.iter().enumerate() {
            if self.ones[b] > 0 {
                continue;
            }
            if self.zeros[b] == rs.len() {
                return false;
            }
            if pick.is_none_or(|p| self.zeros[b] > self.zeros[p]) {
                pick = Some(b);
            }
        }
        let Some(b) = pick else {
            out.push((0..self.value.len()).filter(|&r| self.value[r] == ONE).collect());
            return !all;
        };
        for &r in &self.bases[b] {
            if self.value[r] != UNSET {
                continue;
            }
            let mark = trail.len();
            self.set(r, ONE, trail);
            let mut ok = true;
            for k in 0..self.conflicts[r].len() {
                let c = self.conflicts[r][k];
                match self.value[c] {
                    UNSET => self.set(c, ZERO, trail),
                    ONE => {
                        ok = false;
                        break;
                    }
                    _ => {}
                }
            }
            if ok && self.rec(meter, all, out, trail) {
                self.undo(trail, mark);
                return true;
            }
            self.undo(trail, mark);
        }
        false
    }
}

fn co_basis_conflicts(n_rays: usize, bases: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut c = vec![Vec::new(); n_rays];
    for rs in bases {
        for &a in rs {
            for &b in rs {
                if a != b {
                    c[a].push(b);
                }
            }
        }
    }
    for v in &mut c {
        v.sort_unstable();
        v.dedup();
    }
    c
}

/// Colourability of a list of bases over `n_rays` rays, treating rays as
/// orthogonal only when they share a listed basis.
pub fn bases_colorable(n_rays: usize, bases: &[Vec<usize>], opts: ColorOptions) -> ColoringVerdict {
    Colorer::new(n_rays, bases, co_basis_conflicts(n_rays, bases)).run(opts)
}

pub fn basis_colorable(rb: &RbSet, opts: ColorOptions) -> ColoringVerdict {
    let bases: Vec<Vec<usize>> = rb.bases.iter().map(|b| b.rays.clone()).collect();
    bases_colorable(rb.rays.len(), &bases, opts)
}

/// A general orthogonality structure: ray ranks, the space dimension and the
/// full orthogonality graph.
#[derive(Clone, Debug)]
pub struct OrthoGraph {
    pub dim: usize,
    pub ranks: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

impl OrthoGraph {
    pub fn from_rb_set(rb: &RbSet) -> OrthoGraph {
        let k = rb.rays.len();
        let adj = (0..k).map(|i| (0..k).filter(|&j| j != i && orthogonal(&rb.rays[i], &rb.rays[j])).collect()).collect();
        OrthoGraph { dim: 1 << rb.n, ranks: rb.rays.iter().map(|r| r.rank()).collect(), adj }
    }

    /// All complete bases: sets of pairwise orthogonal rays whose ranks sum
    /// to the dimension.
    pub fn complete_bases(&self) -> Vec<Vec<usize>> {
        let k = self.ranks.len();
        let mut is_adj = vec![vec![false; k]; k];
        for (i, a) in self.adj.iter().enumerate() {
            for &j in a {
                is_adj[i][j] = true;
            }
        }
        let mut out = Vec::new();
        fn rec(g: &OrthoGraph, is_adj: &[Vec<bool>], cands: Vec<usize>, cur: &mut Vec<usize>, rank: usize, out: &mut Vec<Vec<usize>>) {
            if rank == g.dim {
                out.push(cur.clone());
                return;
            }
            for (x, &i) in cands.iter().enumerate() {
                if rank + g.ranks[i] > g.dim {
                    continue;
                }
                let next: Vec<usize> = cands[x + 1..].iter().copied().filter(|&j| is_adj[i][j]).collect();
                cur.push(i);
                rec(g, is_adj, next, cur, rank + g.ranks[i], out);
                cur.pop();
            }
        }
        rec(self, &is_adj, (0..k).collect(), &mut Vec::new(), 0, &mut out);
        out
    }

    /// The same structure with one ray removed (indices above it shift down).
    pub fn without(&self, ray: usize) -> OrthoGraph {
        let map = |j: usize| if j > ray { j - 1 } else { j };
        OrthoGraph {
            dim: self.dim,
            ranks: self.ranks.iter().enumerate().filter(|(i, _)| *i != ray).map(|(_, &r)| r).collect(),
            adj: self
                .adj
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != ray)
                .map(|(_, a)| a.iter().copied().filter(|&j| j != ray).map(map).collect())
                .collect(),
        }
    }
}

/// Colourability with every orthogonality enforced: no two orthogonal rays
/// both 1, exactly one 1 in every complete basis.
pub fn ray_colorable(g: &OrthoGraph, opts: ColorOptions) -> ColoringVerdict {
    let bases = g.complete_bases();
    Colorer::new(g.ranks.len(), &bases, g.adj.clone()).run(opts)
}

/// Every single-basis deletion of an uncolourable basis list is colourable.
pub fn bases_critical(n_rays: usize, bases: &[Vec<usize>], budget: Budget) -> bool {
    let opts = ColorOptions { all: false, budget };
    if !bases_colorable(n_rays, bases, opts).is_uncolorable() {
        return false;
    }
    (0..bases.len()).into_par_iter().all(|skip| {
        let sub: Vec<Vec<usize>> = bases.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, b)| b.clone()).collect();
        bases_colorable(n_rays, &sub, opts).status == ColorStatus::Colorable
    })
}

/// Basis-criticality of a subset of an R−B set's bases.
pub fn is_basis_critical(rb: &RbSet, subset: &[usize]) -> bool {
    let bases: Vec<Vec<usize>> = subset.iter().map(|&i| rb.bases[i].rays.clone()).collect();
    bases_critical(rb.rays.len(), &bases, Budget::UNLIMITED)
}

/// Every single-ray deletion of a ray-uncolourable set is ray-colourable.
pub fn is_ray_critical(g: &OrthoGraph) -> bool {
    let opts = ColorOptions::default();
    ray_colorable(g, opts).is_uncolorable()
        && (0..g.ranks.len()).into_par_iter().all(|r| ray_colorable(&g.without(r), opts).status == ColorStatus::Colorable)
}

// ---------------------------------------------------------------------------
// Parity proofs

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ParityProof {
    /// Sorted basis indices into the R−B set.
    pub bases: Vec<u32>,
}

impl ParityProof {
    pub fn new(mut bases: Vec<u32>) -> ParityProof {
        bases.sort_unstable();
        ParityProof { bases }
    }

    /// Ray multiplicities restricted to this proof (zero for absent rays).
    pub fn multiplicities(&self, rb: &RbSet) -> Vec<usize> {
        let mut m = vec![0; rb.rays.len()];
        for &b in &self.bases {
            for &r in &rb.bases[b as usize].rays {
                m[r] += 1;
            }
        }
        m
    }

    pub fn symbol(&self, rb: &RbSet) -> Symbol {
        let m = self.multiplicities(rb);
        let rays: Vec<(usize, usize)> =
            m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(r, &k)| (rb.rays[r].rank(), k)).collect();
        let sizes: Vec<usize> = self.bases.iter().map(|&b| rb.bases[b as usize].rays.len()).collect();
        Symbol::from_rays(&rays, &sizes)
    }

    /// Odd basis count and every ray even.
    pub fn is_parity(&self, rb: &RbSet) -> bool {
        self.bases.len() % 2 == 1 && self.multiplicities(rb).iter().all(|m| m % 2 == 0)
    }

    pub fn basis_lists(&self, rb: &RbSet) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| rb.bases[b as usize].rays.clone()).collect()
    }

    /// The bases of the set not in this proof.
    pub fn complement(&self, rb: &RbSet) -> ParityProof {
        ParityProof { bases: (0..rb.bases.len() as u32).filter(|b| self.bases.binary_search(b).is_err()).collect() }
    }

    /// No proper subset of the bases is itself a parity proof: the only
    /// nonempty even-cover inside is the whole proof (GF(2) nullity 1).
    pub fn is_minimal(&self, rb: &RbSet) -> bool {
        let words = rb.rays.len().div_ceil(64);
        let mut rows: Vec<Vec<u64>> = self
            .bases
            .iter()
            .map(|&b| {
                let mut v = vec![0u64; words];
                for &r in &rb.bases[b as usize].rays {
                    v[r / 64] |= 1 << (r % 64);
                }
                v
            })
            .collect();
        let mut rank = 0;
        for bit in 0..rb.rays.len() {
            let (w, m) = (bit / 64, 1u64 << (bit % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & m != 0) else { continue };
            rows.swap(rank, p);
            let piv = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[w] & m != 0 {
                    row.iter_mut().zip(&piv).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
        }
        self.bases.len() - rank == 1
    }
}

/// The basis-critical proofs among `proofs`, order kept. Critical proofs are
/// minimal, so the cheap rank test runs first.
pub fn critical_parity_proofs(rb: &RbSet, proofs: &[ParityProof]) -> Vec<ParityProof> {
    proofs
        .par_iter()
        .filter(|p| {
            p.is_minimal(rb) && is_basis_critical(rb, &p.bases.iter().map(|&b| b as usize).collect::<Vec<_>>())
        })
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParityOptions {
    /// Only explore subsets of at most this many bases (scan mode).
    pub max_bases: Option<usize>,
    /// Stop after this many proofs.
    pub max_count: Option<usize>,
    /// Visit root bases starting from this offset (cyclically), for sampling.
    pub root_offset: usize,
    /// Only the roots at these positions of the visiting order. Root subtrees
    /// are disjoint, so consecutive ranges can be searched separately.
    pub roots: Option<(usize, usize)>,
    pub budget: Budget,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParitySearch {
    pub proofs: Vec<ParityProof>,
    /// True when the budget or the count limit cut the search short.
    pub partial: bool,
    pub nodes: u64,
}

struct ParityState<'a> {
    bases: &'a [Vec<usize>],
    ray_bases: &'a [Vec<usize>],
    count: Vec<u32>,
    odd: usize,
    chosen: Vec<u32>,
    used: Vec<bool>,
    forbidden: Vec<bool>,
}

impl ParityState<'_> {
    fn add(&mut self, b: usize) {
        for &r in &self.bases[b] {
            self.count[r] += 1;
            if self.count[r] % 2 == 1 {
                self.odd += 1;
            } else {
                self.odd -= 1;
            }
        }
        self.used[b] = true;
        self.chosen.push(b as u32);
    }

    fn remove(&mut self, b: usize) {
        for &r in &self.bases[b] {
            self.count[r] -= 1;
            if self.count[r] % 2 == 1 {
                self.odd += 1;
            } else {
                self.odd -= 1;
            }
        }
        self.used[b] = false;
        self.chosen.pop();
    }
}

struct ParityCtx<'a> {
    opts: ParityOptions,
    meter: &'a SharedMeter,
    found: &'a AtomicUsize,
}

fn parity_rec(st: &mut ParityState, ctx: &ParityCtx, out: &mut Vec<ParityProof>) {
    if !ctx.meter.tick() || ctx.opts.max_count.is_some_and(|m| ctx.found.load(Ordering::Relaxed) >= m) {
        return;
    }
    if st.odd == 0 {
        if st.chosen.len() % 2 == 1 {
            ctx.found.fetch_add(1, Ordering::Relaxed);
            out.push(ParityProof::new(st.chosen.clone()));
        }
        return;
    }
    if ctx.opts.max_bases.is_some_and(|m| st.chosen.len() >= m) {
        return;
    }
    // ray with the largest odd multiplicity, lowest index on ties
    let mut ray = usize::MAX;
    for (r, &c) in st.count.iter().enumerate() {
        if c % 2 == 1 && (ray == usize::MAX || c > st.count[ray]) {
            ray = r;
        }
    }
    let cands: Vec<usize> = st.ray_bases[ray].iter().copied().filter(|&b| !st.used[b] && !st.forbidden[b]).collect();
    for (k, &b) in cands.iter().enumerate() {
        st.add(b);
        parity_rec(st, ctx, out);
        st.remove(b);
        st.forbidden[b] = true;
        if k + 1 == cands.len() {
            break;
        }
    }
    for &b in &cands {
        st.forbidden[b] = false;
    }
}

/// Exhaustive parity-proof search: repeatedly pick the ray with the largest
/// odd multiplicity and branch on the bases containing it; branch `i` forbids
/// the earlier alternatives, so every basis subset is reached at most once.
/// A branch ends as soon as every ray is even, and is emitted if the basis
/// count is odd.
pub fn find_parity_proofs_in(n_rays: usize, bases: &[Vec<usize>], opts: ParityOptions) -> ParitySearch {
    let mut ray_bases = vec![Vec::new(); n_rays];
    for (b, rs) in bases.iter().enumerate() {
        for &r in rs {
            ray_bases[r].push(b);
        }
    }
    let meter = SharedMeter::new(opts.budget);
    let found = AtomicUsize::new(0);
    let ctx = ParityCtx { opts, meter: &meter, found: &found };
    let nb = bases.len();
    let (lo, hi) = opts.roots.map_or((0, nb), |(a, b)| (a.min(nb), b.min(nb)));
    let per_root: Vec<Vec<ParityProof>> = (lo..hi)
        .into_par_iter()
        .map(|k| {
            let root = (k + opts.root_offset) % nb;
            let mut st = ParityState {
                bases,
                ray_bases: &ray_bases,
                count: vec![0; n_rays],
                odd: 0,
                chosen: Vec::new(),
                used: vec![false; nb],
                forbidden: vec![false; nb],
            };
            for b in 0..root {
                st.forbidden[b] = true;
            }
            let mut out = Vec::new();
            st.add(root);
            parity_rec(&mut st, &ctx, &mut out);
            out
        })
        .collect();
    let mut proofs: Vec<ParityProof> = per_root.into_iter().flatten().collect();
    let mut partial = meter.exhausted();
    if let Some(m) = opts.max_count {
        if proofs.len() >= m {
            proofs.truncate(m);
            partial = true;
        }
    }
    ParitySearch { proofs, partial, nodes: meter.nodes() }
}

pub fn find_parity_proofs(rb: &RbSet, opts: ParityOptions) -> ParitySearch {
    let bases: Vec<Vec<usize>> = rb.bases.iter().map(|b| b.rays.clone()).collect();
    find_parity_proofs_in(rb.rays.len(), &bases, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct FastPath {
    /// Number of complementary hybrid pairs `O`; the construction yields 2^O proofs.
    pub pairs: usize,
    pub total: u64,
    pub proofs: Vec<ParityProof>,
}

/// One hybrid from each complementary pair, then the eigenbasis of every ID
/// whose rays ended up odd. Generates the first `limit` of the 2^O proofs
/// (all of them when `limit` is `None`).
pub fn fast_path_parity(rb: &RbSet, proof: &KsProof, limit: Option<u64>) -> Result<FastPath, SearchError> {
    for o in 0..proof.observables().len() {
        let m = proof.multiplicity(o);
        if m != 2 {
            return Err(SearchError::FastPathPrecondition(format!("{} occurs {m} times", proof.observables()[o])));
        }
    }
    let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut eigen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, b) in rb.bases.iter().enumerate() {
        match b.kind {
            BasisKind::Hybrid(x, y) => pairs.entry((x, y)).or_default().push(i),
            BasisKind::Eigen(x) => {
                eigen.insert(x, i);
            }
        }
    }
    if let Some(((x, y), v)) = pairs.iter().find(|(_, v)| v.len() != 2) {
        return Err(SearchError::FastPathPrecondition(format!("IDs {x} and {y} give {} hybrids", v.len())));
    }
    let pair_list: Vec<[usize; 2]> = pairs.values().map(|v| [v[0], v[1]]).collect();
    let o = pair_list.len();
    assert!(o < 64, "too many complementary pairs");
    let total = 1u64 << o;
    let count = limit.map_or(total, |l| l.min(total));
    let eig: Vec<(usize, usize)> = eigen.into_iter().collect();
    let proofs = (0..count)
        .into_par_iter()
        .map(|sel| {
            let mut parity = vec![false; rb.rays.len()];
            let mut chosen: Vec<u32> = Vec::with_capacity(o + eig.len());
            for (k, p) in pair_list.iter().enumerate() {
                let b = p[(sel >> k & 1) as usize];
                chosen.push(b as u32);
                for &r in &rb.bases[b].rays {
                    parity[r] ^= true;
                }
            }
            for &(_, b) in &eig {
                let rs = &rb.bases[b].rays;
                if rs.iter().all(|&r| parity[r]) {
                    chosen.push(b as u32);
                    for &r in rs {
                        parity[r] = false;
                    }
                }
            }
            let p = ParityProof::new(chosen);
            if parity.iter().any(|&x| x) || p.bases.len() % 2 == 0 {
                return Err(SearchError::FastPathBroken(sel));
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FastPath { pairs: o, total, proofs })
}

// ---------------------------------------------------------------------------
// Histograms

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    pub compact: String,
    pub expanded: String,
    pub count: usize,
}

/// Counts keyed by compact symbol (`18-9`) and expanded symbol, ordered by
/// ray count, then basis count, then expanded symbol.
pub fn classify_proofs(rb: &RbSet, proofs: &[ParityProof]) -> Vec<HistogramRow> {
    let mut map: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
    for p in proofs {
        let s = p.symbol(rb);
        let (r, b) = s.totals();
        *map.entry((r, b, s.to_string())).or_default() += 1;
    }
    map.into_iter().map(|((r, b, e), count)| HistogramRow { compact: format!("{r}-{b}"), expanded: e, count }).collect()
}

/// Counts by compact symbol only.
pub fn compact_histogram(rb: &RbSet, proofs: &[ParityProof]) -> BTreeMap<(usize, usize), usize> {
    let mut map = BTreeMap::new();
    for row in classify_proofs(rb, proofs) {
        let (r, b) = row.compact.split_once('-').map(|(a, b)| (a.parse().unwrap(), b.parse().unwrap())).unwrap();
        *map.entry((r, b)).or_default() += row.count;
    }
    map
}

// ---------------------------------------------------------------------------
// Standalone verification

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParityError {
    #[error("basis {0} has non-orthogonal rays {1} and {2}")]
    NotOrthogonal(usize, usize, usize),
    #[error("basis {0} has total rank {1}, expected {2}")]
    Incomplete(usize, usize, usize),
    #[error("ray {0} appears {1} times")]
    OddRay(usize, usize),
    #[error("even number of bases ({0})")]
    EvenBases(usize),
}

/// Parity check on explicit rays: every basis complete and pairwise
/// orthogonal in dimension `2^n`, every ray even, an odd number of bases.
/// Returns the expanded symbol.
pub fn verify_ray_parity(n: usize, rays: &[crate::ray_engine::Ray], bases: &[Vec<usize>]) -> Result<Symbol, ParityError> {
    let dim = 1usize << n;
    for (b, basis) in bases.iter().enumerate() {
        for (x, &i) in basis.iter().enumerate() {
            if let Some(&j) = basis[x + 1..].iter().find(|&&j| !orthogonal(&rays[i], &rays[j])) {
                return Err(ParityError::NotOrthogonal(b, i, j));
            }
        }
        let total: usize = basis.iter().map(|&r| rays[r].rank()).sum();
        if total != dim {
            return Err(ParityError::Incomplete(b, total, dim));
        }
    }
    let mut m = vec![0; rays.len()];
    for basis in bases {
        for &r in basis {
            m[r] += 1;
        }
    }
    if let Some(r) = m.iter().position(|k| k % 2 == 1) {
        return Err(ParityError::OddRay(r, m[r]));
    }
    if bases.len() % 2 == 0 {
        return Err(ParityError::EvenBases(bases.len()));
    }
    let rr: Vec<(usize, usize)> = rays.iter().zip(&m).filter(|(_, &k)| k > 0).map(|(r, &k)| (r.rank(), k)).collect();
    Ok(Symbol::from_rays(&rr, &bases.iter().map(|b| b.len()).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id_engine::{verify_id_text, IdentityProduct};
    use crate::proof_engine::verify_ks_proof;
    use crate::ray_engine::generate_rb_set;

    fn id(rows: &[&str]) -> IdentityProduct {
        verify_id_text(rows).unwrap()
    }

    fn mermin() -> KsProof {
        verify_ks_proof(&[
            id(&["ZI", "IZ", "ZZ"]),
            id(&["IX", "XI", "XX"]),
            id(&["ZX", "XZ", "YY"]),
            id(&["ZI", "IX", "ZX"]),
            id(&["IZ", "XI", "XZ"]),
            id(&["ZZ", "XX", "YY"]),
        ])
        .unwrap()
    }

    #[test]
    fn single_basis_has_four_colourings() {
        let v = bases_colorable(4, &[vec![0, 1, 2, 3]], ColorOptions { all: true, budget: Budget::UNLIMITED });
        assert_eq!(v.status, ColorStatus::Colorable);
        assert_eq!(v.witnesses.len(), 4);
        let g = OrthoGraph {
            dim: 4,
            ranks: vec![1; 4],
            adj: (0..4).map(|i| (0..4).filter(|&j| j != i).collect()).collect(),
        };
        assert_eq!(g.complete_bases(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(ray_colorable(&g, ColorOptions::default()).status, ColorStatus::Colorable);
    }

    #[test]
    fn peres_set() {
        let proof = mermin();
        let rb = generate_rb_set(&proof).unwrap();
        assert!(basis_colorable(&rb, ColorOptions::default()).is_uncolorable());
        assert!(ray_colorable(&OrthoGraph::from_rb_set(&rb), ColorOptions::default()).is_uncolorable());
        let all: Vec<usize> = (0..rb.bases.len()).collect();
        assert!(!is_basis_critical(&rb, &all));

        let s = find_parity_proofs(&rb, ParityOptions::default());
        assert!(!s.partial);
        assert_eq!(s.proofs.len(), 512);
        let h = compact_histogram(&rb, &s.proofs);
        let expect: BTreeMap<(usize, usize), usize> =
            [((18, 9), 16), ((20, 11), 240), ((22, 13), 240), ((24, 15), 16)].into_iter().collect();
        assert_eq!(h, expect);
        for p in &s.proofs {
            assert!(p.is_parity(&rb));
        }
        for p in s.proofs.iter().step_by(16) {
            assert!(is_basis_critical(&rb, &p.bases.iter().map(|&b| b as usize).collect::<Vec<_>>()));
        }
        assert!(s.proofs.iter().all(|p| p.is_minimal(&rb)));
        assert_eq!(critical_parity_proofs(&rb, &s.proofs[..64]), s.proofs[..64].to_vec());
        assert!(!ParityProof::new((0..24).collect()).is_minimal(&rb));
        // 18-9 complements are 24-15 proofs
        for p in s.proofs.iter().filter(|p| p.bases.len() == 9) {
            let c = p.complement(&rb);
            assert!(c.is_parity(&rb));
            assert_eq!(c.symbol(&rb).short(), "24-15");
        }

        let fp = fast_path_parity(&rb, &proof, None).unwrap();
        assert_eq!(fp.total, 512);
        let mut a = fp.proofs.clone();
        let mut b = s.proofs.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn search_is_deterministic_and_budgeted() {
        let rb = generate_rb_set(&mermin()).unwrap();
        let a = find_parity_proofs(&rb, ParityOptions::default());
        let b = find_parity_proofs(&rb, ParityOptions::default());
        assert_eq!(a.proofs, b.proofs);
        let c = find_parity_proofs(&rb, ParityOptions { max_count: Some(5), ..Default::default() });
        assert!(c.partial && c.proofs.len() == 5);
        let d = find_parity_proofs(&rb, ParityOptions { max_bases: Some(9), ..Default::default() });
        assert_eq!(d.proofs.len(), 16);
        let e = find_parity_proofs(&rb, ParityOptions { budget: Budget::nodes(10), ..Default::default() });
        let mut pieces = vec![];
        for lo in (0..rb.bases.len()).step_by(7) {
            let r = find_parity_proofs(&rb, ParityOptions { roots: Some((lo, lo + 7)), ..Default::default() });
            pieces.extend(r.proofs);
        }
        assert_eq!(pieces, a.proofs);
        assert!(e.partial);
    }

    #[test]
    fn histogram_of_nothing_is_empty() {
        let rb = generate_rb_set(&mermin()).unwrap();
        assert!(classify_proofs(&rb, &[]).is_empty());
    }
}
