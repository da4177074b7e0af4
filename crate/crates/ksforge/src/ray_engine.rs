//! Rays as eigenvalue signatures over the closure group of an ID, eigenbases,
//! hybrid bases between intersecting IDs, and complete ray/basis (R−B) sets.
//!
//! A ray of an ID assigns ±1 to every nonidentity element of the group
//! generated by the ID's rows, consistently with operator products. Two rays
//! are orthogonal iff some common element gets opposite eigenvalues.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::id_engine::IdentityProduct;
use crate::pauli_core::{product, PauliObservable};
use crate::proof_engine::KsProof;
use crate::symbol::Symbol;

/// Largest closure-intersection dimension handled when forming hybrids
/// (2^(2^t) − 2 hybrids per pair).
pub const MAX_SHARED_DIM: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayError {
    #[error("IDs {0} and {1} share a closure subgroup of dimension {2}; too many hybrids")]
    Intractable(usize, usize, usize),
    #[error("explicit states need M = N + 1 independent rows and N <= 10 (got M={m}, N={n})")]
    NotMaximal { m: usize, n: usize },
}

// ---------------------------------------------------------------------------
// Closure

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureElement {
    pub word: PauliObservable,
    /// Which independent generators multiply to this element.
    pub generators: u32,
    /// Operator-product sign: product of the generators = sign · word.
    pub sign: i8,
}

/// Independent rows (by index) of an ID, chosen greedily in row order.
pub fn independent_rows(id: &IdentityProduct) -> Vec<usize> {
    let mut basis: Vec<u128> = Vec::new();
    let mut out = Vec::new();
    for (i, r) in id.rows().iter().enumerate() {
        let mut v = (r.z_mask() as u128) << 64 | r.x_mask() as u128;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            out.push(i);
        }
    }
    out
}

/// All nonidentity products of the independent rows, with signs.
pub fn closure(id: &IdentityProduct) -> Vec<ClosureElement> {
    let gens = independent_rows(id);
    let rows = id.rows();
    let mut out: Vec<ClosureElement> = (1u32..1 << gens.len())
        .map(|mask| {
            let sel: Vec<PauliObservable> =
                gens.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &g)| rows[g]).collect();
            let (word, phase) = product(&sel).expect("same width");
            ClosureElement { word, generators: mask, sign: phase.sign().expect("commuting rows give a real sign") }
        })
        .collect();
    out.sort_by_key(|e| word_key(&e.word));
    out
}

fn word_key(w: &PauliObservable) -> (u64, u64) {
    (w.z_mask(), w.x_mask())
}

// ---------------------------------------------------------------------------
// Rays

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    n: usize,
    /// (word, eigenvalue), sorted by word.
    elements: Vec<(PauliObservable, i8)>,
    /// log2 of the projector rank.
    rank_log: u32,
}

impl Ray {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        1 << self.rank_log
    }

    pub fn elements(&self) -> &[(PauliObservable, i8)] {
        &self.elements
    }

    pub fn eigenvalue(&self, w: &PauliObservable) -> Option<i8> {
        self.elements.binary_search_by_key(&word_key(w), |(e, _)| word_key(e)).ok().map(|i| self.elements[i].1)
    }

    /// Compact signature text: `+ZZ +XX -YY`.
    pub fn signature_text(&self) -> String {
        self.elements
            .iter()
            .map(|(w, v)| format!("{}{}", if *v > 0 { '+' } else { '-' }, w))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Serialize for Ray {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, i8> = self.elements.iter().map(|(w, v)| (w.to_text(), *v)).collect();
        #[derive(Serialize)]
        struct R {
            rank: usize,
            signature: BTreeMap<String, i8>,
        }
        R { rank: self.rank(), signature: map }.serialize(s)
    }
}

/// Orthogonal iff some shared closure element has opposite eigenvalues.
pub fn orthogonal(a: &Ray, b: &Ray) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.elements.len() && j < b.elements.len() {
        let (ka, kb) = (word_key(&a.elements[i].0), word_key(&b.elements[j].0));
        match ka.cmp(&kb) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a.elements[i].1 != b.elements[j].1 {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// A ray of `id` together with its eigenvalue on each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenRay {
    pub ray: Ray,
    pub row_values: Vec<i8>,
}

/// The joint eigenbasis: one ray per assignment of ±1 to the independent
/// rows (`+` before `-`, first row most significant); dependent rows follow.
pub fn eigenbasis(id: &IdentityProduct) -> Vec<EigenRay> {
    let n = id.n();
    let gens = independent_rows(id);
    let g = gens.len();
    let elems = closure(id);
    let index: HashMap<(u64, u64), &ClosureElement> = elems.iter().map(|e| (word_key(&e.word), e)).collect();
    let rows = id.rows();
    (0u32..1 << g)
        .map(|pattern| {
            // bit j of pattern set => generator j has eigenvalue -1
            let gen_val = |j: usize| if pattern >> (g - 1 - j) & 1 == 1 { -1i8 } else { 1 };
            let value = |e: &ClosureElement| {
                (0..g).filter(|&j| e.generators >> j & 1 == 1).fold(e.sign, |acc, j| acc * gen_val(j))
            };
            let elements: Vec<(PauliObservable, i8)> = elems.iter().map(|e| (e.word, value(e))).collect();
            let row_values = rows
                .iter()
                .map(|r| if r.is_identity() { 1 } else { value(index[&word_key(r)]) })
                .collect();
            EigenRay { ray: Ray { n, elements, rank_log: (n - g) as u32 }, row_values }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Hybrid bases

fn closure_words(id: &IdentityProduct) -> HashSet<(u64, u64)> {
    closure(id).iter().map(|e| word_key(&e.word)).collect()
}

/// Dimension of the intersection of two closure groups.
pub fn shared_dimension(a: &IdentityProduct, b: &IdentityProduct) -> usize {
    let wa = closure_words(a);
    let common = closure_words(b).iter().filter(|w| wa.contains(w)).count();
    (common + 1).trailing_zeros() as usize
}

/// Hybrid bases of two eigenbases: sets of pairwise orthogonal rays drawn
/// from both eigenbases whose ranks fill the space, excluding the two
/// eigenbases themselves. Returned as sorted index lists into `a` followed
/// by `b` (indices `>= a.len()` refer to `b`), in lexicographic order.
///
/// Rays split into components of the non-orthogonality graph. A ray of `b`
/// is orthogonal to every ray of `a` outside its component, so it lies in
/// the span of the component's `a` rays; every basis is therefore a product
/// of per-component fillings, each found by a small backtrack.
pub fn hybrid_bases(a: &[Ray], b: &[Ray]) -> Vec<Vec<usize>> {
    let pool: Vec<&Ray> = a.iter().chain(b.iter()).collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let k = pool.len();
    let orth: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| i != j && orthogonal(pool[i], pool[j])).collect()).collect();
    let mut comp = vec![usize::MAX; k];
    let mut comps: Vec<Vec<usize>> = vec![];
    for s in 0..k {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = comps.len();
        let mut stack = vec![s];
        comp[s] = c;
        let mut members = vec![];
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..k {
                if j != i && !orth[i][j] && comp[j] == usize::MAX {
                    comp[j] = c;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    let la = a.len();
    let local: Vec<Vec<Vec<usize>>> = comps
        .iter()
        .map(|m| {
            let want: usize = m.iter().filter(|&&i| i < la).map(|&i| pool[i].rank()).sum();
            let mut f = Filler { pool: &pool, orth: &orth, la, members: m, want, out: vec![] };
            f.branch(&mut vec![], &mut vec![false; k], 0);
            f.out
        })
        .collect();
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for options in &local {
        out = out.iter().flat_map(|p| options.iter().map(move |o| [p.as_slice(), o].concat())).collect();
    }
    out.retain(|bs| bs.iter().any(|&i| i < la) && bs.iter().any(|&i| i >= la));
    for bs in &mut out {
        bs.sort_unstable();
    }
    out.sort();
    out
}

/// Fillings of one component. Every `a` ray of the component is either
/// chosen or overlaps a chosen `b` ray (the chosen rays span it), so the
/// search branches on the first unaccounted `a` ray: take it, or take the
/// `k`-th overlapping `b` ray with the earlier ones forbidden. Once every
/// `a` ray is accounted for, the remaining rank comes from further `b` rays
/// in increasing order. Each filling is reached exactly once.
struct Filler<'p> {
    pool: &'p [&'p Ray],
    orth: &'p [Vec<bool>],
    la: usize,
    members: &'p [usize],
    want: usize,
    out: Vec<Vec<usize>>,
}

impl Filler<'_> {
    fn rank(&self, cur: &[usize]) -> usize {
        cur.iter().map(|&i| self.pool[i].rank()).sum()
    }

    fn fits(&self, cur: &[usize], i: usize) -> bool {
        cur.iter().all(|&c| self.orth[c][i])
    }

    fn branch(&mut self, cur: &mut Vec<usize>, forbidden: &mut Vec<bool>, from: usize) {
        if self.rank(cur) > self.want {
            return;
        }
        let open = self.members[from..]
            .iter()
            .position(|&x| x < self.la && !cur.contains(&x) && cur.iter().all(|&c| self.orth[c][x]))
            .map(|p| p + from);
        let Some(pos) = open else {
            self.complete(cur, forbidden, 0);
            return;
        };
        let x = self.members[pos];
        let mut undo = vec![];
        if !forbidden[x] && self.fits(cur, x) {
            cur.push(x);
            self.branch(cur, forbidden, pos + 1);
            cur.pop();
        }
        if !forbidden[x] {
            forbidden[x] = true;
            undo.push(x);
        }
        let ys: Vec<usize> = self.members.iter().copied().filter(|&y| y >= self.la && !self.orth[x][y]).collect();
        for y in ys {
            if forbidden[y] || !self.fits(cur, y) {
                continue;
            }
            cur.push(y);
            self.branch(cur, forbidden, pos + 1);
            cur.pop();
            forbidden[y] = true;
            undo.push(y);
        }
        for u in undo {
            forbidden[u] = false;
        }
    }

    fn complete(&mut self, cur: &mut Vec<usize>, forbidden: &[bool], at: usize) {
        let rank = self.rank(cur);
        if rank == self.want {
            self.out.push(cur.clone());
            return;
        }
        for x in at..self.members.len() {
            let y = self.members[x];
            if y < self.la || forbidden[y] || cur.contains(&y) || rank + self.pool[y].rank() > self.want || !self.fits(cur, y) {
                continue;
            }
            cur.push(y);
            self.complete(cur, forbidden, x + 1);
            cur.pop();
        }
    }
}

// ---------------------------------------------------------------------------
// R−B sets

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Eigen(usize),
    Hybrid(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Basis {
    /// Sorted ray indices.
    pub rays: Vec<usize>,
    pub kind: BasisKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct RbSet {
    pub n: usize,
    pub rays: Vec<Ray>,
    /// Index of the first ID whose eigenbasis contains each ray.
    pub origin: Vec<usize>,
    pub bases: Vec<Basis>,
    pub symbol: Symbol,
}

impl RbSet {
    /// Number of bases containing each ray.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.rays.len()];
        for b in &self.bases {
            for &r in &b.rays {
                m[r] += 1;
            }
        }
        m
    }

    pub fn symbol_of(rays: &[Ray], bases: &[Basis]) -> Symbol {
        let mut m = vec![0; rays.len()];
        for b in bases {
            for &r in &b.rays {
                m[r] += 1;
            }
        }
        let rr: Vec<(usize, usize)> = rays.iter().zip(&m).map(|(r, &k)| (r.rank(), k)).collect();
        let sizes: Vec<usize> = bases.iter().map(|b| b.rays.len()).collect();
        Symbol::from_rays(&rr, &sizes)
    }

    /// Orthogonal ray pairs that share no basis (should be empty).
    pub fn unsaturated_pairs(&self) -> Vec<(usize, usize)> {
        let mut together: HashSet<(usize, usize)> = HashSet::new();
        for b in &self.bases {
            for (x, &i) in b.rays.iter().enumerate() {
                for &j in &b.rays[x + 1..] {
                    together.insert((i.min(j), i.max(j)));
                }
            }
        }
        let k = self.rays.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| !together.contains(&(i, j)) && orthogonal(&self.rays[i], &self.rays[j]))
            .collect()
    }
}

/// The eigenbases of all IDs of a proof plus the hybrid bases of every pair
/// of IDs whose closures intersect. Rays and bases are deduplicated; rays
/// are numbered by origin ID, then by eigenvalue pattern.
pub fn generate_rb_set(proof: &KsProof) -> Result<RbSet, RayError> {
    rb_set_from_ids(proof.ids())
}

pub fn rb_set_from_ids(ids: &[IdentityProduct]) -> Result<RbSet, RayError> {
    let n = ids.first().map_or(0, |i| i.n());
    let eig: Vec<Vec<Ray>> = ids.iter().map(|id| eigenbasis(id).into_iter().map(|e| e.ray).collect()).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut origin = Vec::new();
    let mut index: HashMap<Ray, usize> = HashMap::new();
    let mut local: Vec<Vec<usize>> = Vec::new();
    for (i, e) in eig.iter().enumerate() {
        local.push(
            e.iter()
                .map(|r| {
                    *index.entry(r.clone()).or_insert_with(|| {
                        rays.push(r.clone());
                        origin.push(i);
                        rays.len() - 1
                    })
                })
                .collect(),
        );
    }
    let mut pairs = Vec::new();
    for a in 0..ids.len() {
        for b in a + 1..ids.len() {
            let t = shared_dimension(&ids[a], &ids[b]);
            if t > MAX_SHARED_DIM {
                return Err(RayError::Intractable(a, b, t));
            }
            if t > 0 {
                pairs.push((a, b));
            }
        }
    }
    let hybrids: Vec<Vec<Basis>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let la = eig[a].len();
            hybrid_bases(&eig[a], &eig[b])
                .into_iter()
                .map(|h| {
                    let mut rs: Vec<usize> =
                        h.iter().map(|&i| if i < la { local[a][i] } else { local[b][i - la] }).collect();
                    rs.sort_unstable();
                    Basis { rays: rs, kind: BasisKind::Hybrid(a, b) }
                })
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut bases = Vec::new();
    for (i, l) in local.iter().enumerate() {
        let mut rs = l.clone();
        rs.sort_unstable();
        if seen.insert(rs.clone()) {
            bases.push(Basis { rays: rs, kind: BasisKind::Eigen(i) });
        }
    }
    for b in hybrids.into_iter().flatten() {
        if seen.insert(b.rays.clone()) {
            bases.push(b);
        }
    }
    let symbol = RbSet::symbol_of(&rays, &bases);
    Ok(RbSet { n, rays, origin, bases, symbol })
}

// ---------------------------------------------------------------------------
// Explicit states

/// Apply a Pauli word to a state vector. Qubit 0 is the most significant
/// bit of the basis index.
pub fn apply_pauli(w: &PauliObservable, v: &[Complex64]) -> Vec<Complex64> {
    let n = w.n_qubits();
    let rev = |m: u64| (0..n).fold(0usize, |a, q| if m >> q & 1 == 1 { a | 1 << (n - 1 - q) } else { a });
    let (z, x) = (rev(w.z_mask()), rev(w.x_mask()));
    let ys = (z & x).count_ones();
    let iy = Complex64::i().powu(ys);
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (b, amp) in v.iter().enumerate() {
        // Z^z X^x |b> with Y = i X Z: Y|b> = i (-1)^b |1-b>
        let s = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[b ^ x] += amp * iy * s;
    }
    out
}

/// The 2^N simultaneous eigenvectors of an ID with N independent rows,
/// by projector splitting: apply Π (I + λ_g g)/2 to the basis vector with
/// the largest overlap and normalise. Order follows [`eigenbasis`].
pub fn explicit_states(id: &IdentityProduct) -> Result<Vec<Vec<Complex64>>, RayError> {
    let n = id.n();
    let gens = independent_rows(id);
    if gens.len() != n || n > 10 {
        return Err(RayError::NotMaximal { m: id.m(), n });
    }
    let rows = id.rows();
    let dim = 1usize << n;
    let states = eigenbasis(id)
        .into_iter()
        .map(|er| {
            let project = |mut v: Vec<Complex64>| {
                for &g in &gens {
                    let gv = apply_pauli(&rows[g], &v);
                    let lam = f64::from(er.row_values[g]);
                    v = v.iter().zip(&gv).map(|(a, b)| (a + b * lam) * 0.5).collect();
                }
                v
            };
            let best = (0..dim)
                .map(|k| {
                    let mut e = vec![Complex64::new(0.0, 0.0); dim];
                    e[k] = Complex64::new(1.0, 0.0);
                    project(e)
                })
                .max_by(|a, b| norm(a).total_cmp(&norm(b)))
                .expect("nonempty");
            let nb = norm(&best);
            // fix the global phase: first significant amplitude real positive
            let lead = best.iter().find(|c| c.norm() > 1e-9).copied().unwrap_or(Complex64::new(1.0, 0.0));
            let phase = lead.conj() / lead.norm();
            best.iter().map(|c| c * phase / nb).collect()
        })
        .collect();
    Ok(states)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id_engine::verify_id_text;
    use crate::kernel_engine::verify_kernel;
    use crate::proof_engine::{generate_proof_from_kernel, verify_ks_proof};

    fn id(rows: &[&str]) -> IdentityProduct {
        verify_id_text(rows).unwrap()
    }

    fn mermin_square() -> KsProof {
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

    /// Dense matrix of a Pauli word, column by column.
    fn dense(w: &PauliObservable) -> Vec<Vec<Complex64>> {
        let d = 1 << w.n_qubits();
        (0..d)
            .map(|k| {
                let mut e = vec![Complex64::new(0.0, 0.0); d];
                e[k] = Complex64::new(1.0, 0.0);
                apply_pauli(w, &e)
            })
            .collect()
    }

    #[test]
    fn apply_pauli_matches_kronecker() {
        // Y on one qubit: columns (0, i) and (-i, 0)
        let y: PauliObservable = "Y".parse().unwrap();
        let m = dense(&y);
        assert_eq!(m[0], vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert_eq!(m[1], vec![Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)]);
        // ZI acts on the most significant bit
        let zi: PauliObservable = "ZI".parse().unwrap();
        let m = dense(&zi);
        assert_eq!(m[2][2], Complex64::new(-1.0, 0.0));
        assert_eq!(m[1][1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn closure_examples() {
        let c = closure(&id(&["ZZ", "XX", "YY"]));
        let words: HashSet<String> = c.iter().map(|e| e.word.to_text()).collect();
        assert_eq!(words, ["ZZ", "XX", "YY"].iter().map(|s| s.to_string()).collect());
        assert_eq!(closure(&id(&["ZZZ", "ZXX", "XZX", "XXZ"])).len(), 7);
        assert_eq!(closure(&id(&["ZZI", "XXI", "YYI"])).len(), 3);
    }

    #[test]
    fn closure_signs_match_dense_products() {
        // brute-force oracle: multiply the dense generator matrices
        for rows in [vec!["ZZZ", "ZXX", "XZX", "XXZ"], vec!["ZIZ", "IZZ", "XXX", "YYX"], vec!["ZZ", "XX", "YY"]] {
            let i = id(&rows);
            let gens = independent_rows(&i);
            for e in closure(&i) {
                let d = 1 << i.n();
                let mut v: Vec<Complex64> = (0..d).map(|k| Complex64::new(1.0 + k as f64, 0.5 * k as f64)).collect();
                let orig = v.clone();
                for (j, &g) in gens.iter().enumerate().rev() {
                    if e.generators >> j & 1 == 1 {
                        v = apply_pauli(&i.rows()[g], &v);
                    }
                }
                let w = apply_pauli(&e.word, &orig);
                for (a, b) in v.iter().zip(&w) {
                    assert!((a - b * f64::from(e.sign)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenbasis_sizes_and_ranks() {
        let cases = [
            (vec!["ZZ", "XX", "YY"], 4, 1),
            (vec!["ZZZ", "ZXX", "XZX", "XXZ"], 8, 1),
            (vec!["ZZI", "XXI", "YYI"], 4, 2),
            (vec!["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"], 16, 1),
        ];
        for (rows, count, rank) in cases {
            let i = id(&rows);
            let e = eigenbasis(&i);
            assert_eq!(e.len(), count);
            assert!(e.iter().all(|r| r.ray.rank() == rank));
            assert_eq!(e.iter().map(|r| r.ray.rank()).sum::<usize>(), 1 << i.n());
            for a in 0..e.len() {
                // product of row eigenvalues equals the ID sign
                assert_eq!(e[a].row_values.iter().product::<i8>(), i.sign());
                for b in 0..e.len() {
                    assert_eq!(orthogonal(&e[a].ray, &e[b].ray), a != b);
                }
            }
        }
    }

    #[test]
    fn orthogonality_example() {
        let e = eigenbasis(&id(&["ZZ", "XX", "YY"]));
        let find = |zz: i8, xx: i8| e.iter().find(|r| r.row_values[0] == zz && r.row_values[1] == xx).unwrap();
        let a = find(1, 1);
        let b = find(1, -1);
        assert_eq!(a.row_values[2], -1);
        assert_eq!(b.row_values[2], 1);
        assert!(orthogonal(&a.ray, &b.ray));
        assert!(!orthogonal(&a.ray, &a.ray));
    }

    fn block_formula(t: usize) -> usize {
        (1usize << (1 << t)) - 2
    }

    /// Every orthogonal full-rank subset of the pool, by plain subset scan.
    fn brute_hybrids(a: &[Ray], b: &[Ray]) -> Vec<Vec<usize>> {
        let pool: Vec<&Ray> = a.iter().chain(b).collect();
        let full = 1usize << pool[0].n;
        let mut out = vec![];
        for mask in 1u32..(1 << pool.len()) {
            let idx: Vec<usize> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).collect();
            let rank: usize = idx.iter().map(|&i| pool[i].rank()).sum();
            let orth = idx.iter().all(|&i| idx.iter().all(|&j| i == j || orthogonal(pool[i], pool[j])));
            if rank == full && orth && idx.iter().any(|&i| i < a.len()) && idx.iter().any(|&i| i >= a.len()) {
                out.push(idx);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn hybrids_match_brute_force() {
        let rays = |rows: &[&str]| -> Vec<Ray> { eigenbasis(&id(rows)).into_iter().map(|e| e.ray).collect() };
        let cases = [
            (vec!["ZIZ", "IZZ", "XXX", "YYX"], vec!["ZIZ", "IXZ", "XZX", "YYX"]),
            (vec!["ZIZ", "IZZ", "XXX", "YYX"], vec!["XXX", "XIX", "IXI"]),
            (vec!["ZZ", "XX", "YY"], vec!["ZI", "IZ", "ZZ"]),
            (vec!["ZZZ", "ZXX", "XZX", "XXZ"], vec!["ZZZ", "ZII", "IZI", "IIZ"]),
            (vec!["ZZZ", "ZII", "IZI", "IIZ"], vec!["ZII", "IXI", "ZXI"]),
        ];
        for (x, y) in cases {
            let (ra, rb) = (rays(&x), rays(&y));
            assert_eq!(hybrid_bases(&ra, &rb), brute_hybrids(&ra, &rb), "{x:?} {y:?}");
        }
    }

    #[test]
    fn hybrid_counts_on_kite_tail() {
        let a = id(&["ZIZ", "IZZ", "XXX", "YYX"]);
        let b = id(&["ZIZ", "IXZ", "XZX", "YYX"]);
        assert_eq!(shared_dimension(&a, &b), 2);
        let ra: Vec<Ray> = eigenbasis(&a).into_iter().map(|e| e.ray).collect();
        let rb: Vec<Ray> = eigenbasis(&b).into_iter().map(|e| e.ray).collect();
        assert_eq!(hybrid_bases(&ra, &rb).len(), block_formula(2));
        let c = id(&["XXX", "XIX", "IXI"]);
        assert_eq!(shared_dimension(&a, &c), 1);
        let rc: Vec<Ray> = eigenbasis(&c).into_iter().map(|e| e.ray).collect();
        assert_eq!(hybrid_bases(&ra, &rc).len(), block_formula(1));
    }

    #[test]
    fn rb_set_goldens() {
        let m = generate_rb_set(&mermin_square()).unwrap();
        assert_eq!(m.symbol.to_string(), "24_4 - 24_4");
        assert!(m.unsaturated_pairs().is_empty());

        let star = generate_proof_from_kernel(&verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap()).unwrap();
        let s = generate_rb_set(&star).unwrap();
        assert_eq!(s.symbol.to_string(), "40_5 - 25_8");

        let kite = verify_kernel(&[id(&["ZIZ", "IZZ", "XXX", "YYX"]), id(&["ZIZ", "IXZ", "XZX", "YYX"])]).unwrap();
        let k = generate_rb_set(&generate_proof_from_kernel(&kite).unwrap()).unwrap();
        assert!(k.symbol.same_terms(&"16^1_{10} 16^2_4 - 16_8 8_6 12_4".parse().unwrap()), "{}", k.symbol);
        assert!(k.unsaturated_pairs().is_empty());
        for b in &k.bases {
            assert_eq!(b.rays.iter().map(|&r| k.rays[r].rank()).sum::<usize>(), 8);
        }
    }

    #[test]
    fn ray_count_formula() {
        // R = sum over IDs of 2^(y-1) when every ID is critical
        let star = generate_proof_from_kernel(&verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap()).unwrap();
        let s = generate_rb_set(&star).unwrap();
        assert_eq!(s.rays.len(), star.ids().iter().map(|i| 1 << (i.m() - 1)).sum::<usize>());
    }

    #[test]
    fn explicit_state_checks() {
        for rows in [vec!["ZZ", "XX", "YY"], vec!["ZZZ", "ZXX", "XZX", "XXZ"], vec!["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"]] {
            let i = id(&rows);
            let states = explicit_states(&i).unwrap();
            let eb = eigenbasis(&i);
            assert_eq!(states.len(), 1 << i.n());
            for (v, er) in states.iter().zip(&eb) {
                for (r, &lam) in i.rows().iter().zip(&er.row_values) {
                    let mv = apply_pauli(r, v);
                    let err: f64 = mv.iter().zip(v).map(|(a, b)| (a - b * f64::from(lam)).norm_sqr()).sum();
                    assert!(err.sqrt() < 1e-10);
                }
            }
            for a in 0..states.len() {
                for b in 0..states.len() {
                    let ip = inner(&states[a], &states[b]).norm();
                    assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10);
                }
            }
        }
        assert!(explicit_states(&id(&["ZZI", "XXI", "YYI"])).is_err());
    }

    #[test]
    fn bell_states() {
        let states = explicit_states(&id(&["ZZ", "XX", "YY"])).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // ZZ=+1, XX=+1 is (|00> + |11>)/sqrt 2
        let v = &states[0];
        assert!((v[0].re - h).abs() < 1e-12 && (v[3].re - h).abs() < 1e-12);
        assert!(v[1].norm() < 1e-12 && v[2].norm() < 1e-12);
    }

    #[test]
    fn peres_rays_are_real() {
        // the 24 Mermin-square rays can all be chosen real
        let m = mermin_square();
        let mut count = 0;
        for i in m.ids() {
            for v in explicit_states(i).unwrap() {
                assert!(v.iter().all(|c| c.im.abs() < 1e-12));
                count += 1;
            }
        }
        assert_eq!(count, 24);
    }
}
