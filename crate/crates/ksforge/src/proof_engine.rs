//! Observable-based KS proofs: sets of IDs in which every observable occurs
//! an even number of times and an odd number of IDs are negative.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::id_engine::{verify_id, IdError, IdentityProduct};
use crate::kernel_engine::{verify_kernel, Kernel};
use crate::pauli_core::PauliObservable;
use crate::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("a proof needs at least one ID")]
    Empty,
    #[error("ID {index} acts on {found} qubits, expected {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("ODD_MULTIPLICITY: {0} occurs in an odd number of IDs")]
    OddMultiplicity(String),
    #[error("EVEN_NEGATIVE_COUNT: {0} negative IDs")]
    EvenNegativeCount(usize),
    #[error("{0} IDs exceed the subset-scan limit")]
    TooManyIds(usize),
    #[error(transparent)]
    Id(#[from] IdError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KsProof {
    n: usize,
    ids: Vec<IdentityProduct>,
    /// Distinct observables in display order.
    observables: Vec<PauliObservable>,
    /// For each ID, the indices of its observables.
    incidence: Vec<Vec<usize>>,
    symbol: Symbol,
}

impl KsProof {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[IdentityProduct] {
        &self.ids
    }

    pub fn observables(&self) -> &[PauliObservable] {
        &self.observables
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn negative_count(&self) -> usize {
        self.ids.iter().filter(|i| i.is_negative()).count()
    }

    pub fn multiplicity(&self, obs_index: usize) -> usize {
        self.incidence.iter().filter(|row| row.contains(&obs_index)).count()
    }

    /// Product of all IDs: quantum value −1, noncontextual value +1.
    pub fn strong_ks(&self) -> crate::kernel_engine::StrongKs {
        crate::kernel_engine::StrongKs { quantum: -1, noncontextual: 1 }
    }

    /// Largest number of observables shared by two IDs.
    pub fn max_pair_intersection(&self) -> usize {
        let mut best = 0;
        for i in 0..self.incidence.len() {
            for j in i + 1..self.incidence.len() {
                best = best.max(self.incidence[i].iter().filter(|o| self.incidence[j].contains(o)).count());
            }
        }
        best
    }
}

impl fmt::Display for KsProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PROOF {} {}", self.ids.len(), self.n)?;
        for id in &self.ids {
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

/// Distinct observables (display order) and per-ID incidence lists.
fn incidence_of(ids: &[IdentityProduct]) -> (Vec<PauliObservable>, Vec<Vec<usize>>) {
    let mut obs: Vec<PauliObservable> = ids.iter().flat_map(|i| i.rows().iter().copied()).collect();
    obs.sort_by_key(|o| o.display_key());
    obs.dedup();
    let index: HashMap<PauliObservable, usize> = obs.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let inc = ids.iter().map(|i| i.rows().iter().map(|r| index[r]).collect()).collect();
    (obs, inc)
}

pub fn verify_ks_proof(ids: &[IdentityProduct]) -> Result<KsProof, ProofError> {
    let first = ids.first().ok_or(ProofError::Empty)?;
    let n = first.n();
    for (index, id) in ids.iter().enumerate() {
        if id.n() != n {
            return Err(ProofError::Dimension { index, expected: n, found: id.n() });
        }
    }
    let (observables, incidence) = incidence_of(ids);
    let mut mult = vec![0usize; observables.len()];
    for row in &incidence {
        for &o in row {
            mult[o] += 1;
        }
    }
    if let Some(o) = mult.iter().position(|m| m % 2 == 1) {
        return Err(ProofError::OddMultiplicity(observables[o].to_text()));
    }
    let neg = ids.iter().filter(|i| i.is_negative()).count();
    if neg % 2 == 0 {
        return Err(ProofError::EvenNegativeCount(neg));
    }
    let sizes: Vec<usize> = ids.iter().map(|i| i.m()).collect();
    let symbol = Symbol::from_counts(&mult, &sizes);
    Ok(KsProof { n, ids: ids.to_vec(), observables, incidence, symbol })
}

// ---------------------------------------------------------------------------
// Generation

/// Letters on which two words agree (identity elsewhere).
fn common_portion(a: &PauliObservable, b: &PauliObservable) -> PauliObservable {
    let agree = !(a.z_mask() ^ b.z_mask()) & !(a.x_mask() ^ b.x_mask()) & a.support();
    PauliObservable::from_masks(a.n_qubits(), a.z_mask() & agree, a.x_mask() & agree).expect("same width")
}

/// Give every odd-multiplicity observable of weight ≥ 2 a new Positive ID:
/// the observable, its shared portion (if any) and single-qubit factors of
/// the rest. Portions are assigned greedily to disjoint pairs, largest first.
fn decompose_odd(ids: &[IdentityProduct]) -> Result<Vec<IdentityProduct>, ProofError> {
    let mut order: Vec<PauliObservable> = Vec::new();
    let mut mult: HashMap<PauliObservable, usize> = HashMap::new();
    for id in ids {
        for r in id.rows() {
            let m = mult.entry(*r).or_default();
            if *m == 0 {
                order.push(*r);
            }
            *m += 1;
        }
    }
    let odd: Vec<PauliObservable> = order.into_iter().filter(|o| mult[o] % 2 == 1 && o.weight() >= 2).collect();
    let mut pairs = Vec::new();
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            let c = common_portion(&odd[i], &odd[j]);
            if c.weight() >= 2 && c != odd[i] && c != odd[j] && !mult.contains_key(&c) {
                pairs.push((c.weight(), i, j, c));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut portion: Vec<Option<PauliObservable>> = vec![None; odd.len()];
    for (_, i, j, c) in pairs {
        if portion[i].is_none() && portion[j].is_none() {
            portion[i] = Some(c);
            portion[j] = Some(c);
        }
    }
    let mut out = Vec::new();
    for (a, p) in odd.iter().zip(portion) {
        let mut rows = vec![*a];
        let covered = p.map_or(0, |p| p.support());
        rows.extend(p);
        for q in 0..a.n_qubits() {
            if a.support() >> q & 1 == 1 && covered >> q & 1 == 0 {
                rows.push(PauliObservable::single(a.n_qubits(), q, a.letter(q)));
            }
        }
        out.push(verify_id(&rows)?);
    }
    Ok(out)
}

/// The general method: the Kernel plus one Positive decomposition ID per
/// odd-multiplicity observable.
pub fn generate_proof_from_kernel(kernel: &Kernel) -> Result<KsProof, ProofError> {
    let mut ids = kernel.ids().to_vec();
    ids.extend(decompose_odd(kernel.ids())?);
    verify_ks_proof(&ids)
}

/// Set partitions of the support of `w` into at least two blocks, as lists
/// of restricted words; fewer blocks first.
fn support_splits(w: &PauliObservable) -> Vec<Vec<PauliObservable>> {
    let qs: Vec<usize> = (0..w.n_qubits()).filter(|&q| w.support() >> q & 1 == 1).collect();
    let k = qs.len();
    let mut out = Vec::new();
    // restricted growth strings
    let mut a = vec![0usize; k];
    loop {
        let blocks = a.iter().max().map_or(0, |m| m + 1);
        if blocks >= 2 {
            let parts = (0..blocks)
                .map(|b| {
                    let q: Vec<usize> = (0..k).filter(|&i| a[i] == b).map(|i| qs[i]).collect();
                    let mask = q.iter().fold(0u64, |m, &q| m | 1 << q);
                    PauliObservable::from_masks(w.n_qubits(), w.z_mask() & mask, w.x_mask() & mask).expect("width")
                })
                .collect();
            out.push(parts);
        }
        // next string
        let mut i = k;
        loop {
            if i <= 1 {
                out.sort_by_key(|p: &Vec<PauliObservable>| p.len());
                return out;
            }
            i -= 1;
            let max_prefix = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= max_prefix {
                a[i] += 1;
                for x in a[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Like [`generate_proof_from_kernel`], but each odd-multiplicity observable
/// may be split along any partition of its support, and the split is chosen
/// to minimise the number of new observables (then the number of rows).
/// Falls back to the greedy decomposition when `budget` runs out first.
pub fn generate_compact_proof(kernel: &Kernel, budget: crate::budget::Budget) -> Result<KsProof, ProofError> {
    let mut mult: HashMap<PauliObservable, usize> = HashMap::new();
    let mut order = Vec::new();
    for id in kernel.ids() {
        for r in id.rows() {
            let m = mult.entry(*r).or_default();
            if *m == 0 {
                order.push(*r);
            }
            *m += 1;
        }
    }
    let odd: Vec<PauliObservable> = order.into_iter().filter(|o| mult[o] % 2 == 1 && o.weight() >= 2).collect();
    let splits: Vec<Vec<Vec<PauliObservable>>> = odd.iter().map(support_splits).collect();

    struct Search<'a> {
        odd: &'a [PauliObservable],
        splits: &'a [Vec<Vec<PauliObservable>>],
        kernel_words: &'a HashMap<PauliObservable, usize>,
        count: HashMap<PauliObservable, usize>,
        choice: Vec<usize>,
        best: Option<(usize, usize, Vec<usize>)>,
        meter: crate::budget::Meter,
    }
    impl Search<'_> {
        fn new_words(&self) -> usize {
            self.count.iter().filter(|(w, &c)| c > 0 && !self.kernel_words.contains_key(*w)).count()
        }
        fn rec(&mut self, i: usize, rows: usize) {
            if !self.meter.tick() {
                return;
            }
            let distinct = self.new_words();
            if let Some((b, r, _)) = &self.best {
                if (distinct, rows) >= (*b, *r) {
                    return;
                }
            }
            // every odd word needs a later observable that restricts to it
            for (w, &c) in &self.count {
                if c % 2 == 1
                    && !self.odd[i..].iter().any(|o| {
                        w.support() & !o.support() == 0 && common_portion(o, w) == *w
                    })
                {
                    return;
                }
            }
            if i == self.odd.len() {
                self.best = Some((distinct, rows, self.choice.clone()));
                return;
            }
            for s in 0..self.splits[i].len() {
                for w in &self.splits[i][s] {
                    *self.count.entry(*w).or_default() += 1;
                }
                self.choice.push(s);
                self.rec(i + 1, rows + self.splits[i][s].len());
                self.choice.pop();
                for w in &self.splits[i][s] {
                    *self.count.get_mut(w).expect("counted") -= 1;
                }
                if self.meter.exhausted() {
                    return;
                }
            }
        }
    }
    let mut search = Search {
        odd: &odd,
        splits: &splits,
        kernel_words: &mult,
        count: HashMap::new(),
        choice: Vec::new(),
        best: None,
        meter: budget.meter(),
    };
    search.rec(0, 0);
    let Some((_, _, choice)) = search.best.filter(|_| !search.meter.exhausted()) else {
        return generate_proof_from_kernel(kernel);
    };
    let mut ids = kernel.ids().to_vec();
    for ((a, sp), c) in odd.iter().zip(&splits).zip(choice) {
        let mut rows = vec![*a];
        rows.extend(sp[c].iter().copied());
        ids.push(verify_id(&rows)?);
    }
    verify_ks_proof(&ids)
}

/// Transversal IDs: one observable taken from each Kernel ID, mutually
/// commuting with product `+I`. As many disjoint ones as possible are added
/// (the rim of a Wheel); anything still odd is decomposed as usual.
pub fn generate_wheel_closure(kernel: &Kernel) -> Result<KsProof, ProofError> {
    let kids = kernel.ids();
    let mut transversals: Vec<Vec<PauliObservable>> = Vec::new();
    fn rec(kids: &[IdentityProduct], cur: &mut Vec<PauliObservable>, out: &mut Vec<Vec<PauliObservable>>) {
        if cur.len() == kids.len() {
            if let Ok(id) = verify_id(cur) {
                if id.sign() > 0 {
                    out.push(cur.clone());
                }
            }
            return;
        }
        for r in kids[cur.len()].rows() {
            if cur.contains(r) || cur.iter().any(|c| c.anticommuting_positions(r) % 2 == 1) {
                continue;
            }
            cur.push(*r);
            rec(kids, cur, out);
            cur.pop();
        }
    }
    rec(kids, &mut Vec::new(), &mut transversals);
    // maximum set of pairwise disjoint transversals
    fn pack(ts: &[Vec<PauliObservable>], start: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for i in start..ts.len() {
            if cur.iter().all(|&j| ts[j].iter().all(|o| !ts[i].contains(o))) {
                cur.push(i);
                pack(ts, i + 1, cur, best);
                cur.pop();
            }
        }
    }
    let mut best = Vec::new();
    pack(&transversals, 0, &mut Vec::new(), &mut best);
    let mut ids = kids.to_vec();
    for i in best {
        ids.push(verify_id(&transversals[i])?);
    }
    let extra = decompose_odd(&ids)?;
    ids.extend(extra);
    verify_ks_proof(&ids)
}

// ---------------------------------------------------------------------------
// Isomorphism

struct Incidence {
    n_obs: usize,
    adj: Vec<Vec<usize>>,
}

impl Incidence {
    fn of(p: &KsProof) -> Incidence {
        let n_obs = p.observables.len();
        let mut adj = vec![Vec::new(); n_obs + p.incidence.len()];
        for (i, row) in p.incidence.iter().enumerate() {
            for &o in row {
                adj[o].push(n_obs + i);
                adj[n_obs + i].push(o);
            }
        }
        Incidence { n_obs, adj }
    }
}

/// Joint colour refinement of two graphs so that colour names agree.
fn refine(g: &Incidence, h: &Incidence, cg: &mut Vec<usize>, ch: &mut Vec<usize>) -> bool {
    loop {
        let sig = |adj: &[Vec<usize>], c: &[usize], v: usize| {
            let mut nb: Vec<usize> = adj[v].iter().map(|&u| c[u]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sg: Vec<_> = (0..g.adj.len()).map(|v| sig(&g.adj, cg, v)).collect();
        let sh: Vec<_> = (0..h.adj.len()).map(|v| sig(&h.adj, ch, v)).collect();
        let mut names: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in sg.iter().chain(sh.iter()) {
            names.insert(s, 0);
        }
        for (k, v) in names.values_mut().enumerate() {
            *v = k;
        }
        let ng: Vec<usize> = sg.iter().map(|s| names[s]).collect();
        let nh: Vec<usize> = sh.iter().map(|s| names[s]).collect();
        let mut hg = ng.clone();
        let mut hh = nh.clone();
        hg.sort_unstable();
        hh.sort_unstable();
        if hg != hh {
            return false;
        }
        let before = cg.iter().collect::<std::collections::HashSet<_>>().len();
        *cg = ng;
        *ch = nh;
        if cg.iter().collect::<std::collections::HashSet<_>>().len() == before {
            return true;
        }
    }
}

fn iso_search(g: &Incidence, h: &Incidence, cg: Vec<usize>, ch: Vec<usize>) -> bool {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &c in &cg {
        *count.entry(c).or_default() += 1;
    }
    let Some(target) = count.iter().filter(|(_, &k)| k > 1).map(|(&c, &k)| (k, c)).min().map(|(_, c)| c) else {
        // discrete: colours give the bijection
        let mut pos = vec![0; ch.len()];
        for (v, &c) in ch.iter().enumerate() {
            pos[c] = v;
        }
        let map: Vec<usize> = cg.iter().map(|&c| pos[c]).collect();
        return (0..g.adj.len()).all(|v| {
            let mut a: Vec<usize> = g.adj[v].iter().map(|&u| map[u]).collect();
            let mut b = h.adj[map[v]].clone();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        });
    };
    let fresh = cg.len() + ch.len() + 1;
    let v = cg.iter().position(|&c| c == target).expect("present");
    for w in (0..ch.len()).filter(|&w| ch[w] == target) {
        let (mut cg2, mut ch2) = (cg.clone(), ch.clone());
        cg2[v] = fresh;
        ch2[w] = fresh;
        if refine(g, h, &mut cg2, &mut ch2) && iso_search(g, h, cg2, ch2) {
            return true;
        }
    }
    false
}

/// Isomorphism of the observable/ID incidence structures, ignoring signs.
pub fn proofs_isomorphic(a: &KsProof, b: &KsProof) -> bool {
    let (g, h) = (Incidence::of(a), Incidence::of(b));
    if g.n_obs != h.n_obs || g.adj.len() != h.adj.len() {
        return false;
    }
    let mut cg: Vec<usize> = (0..g.adj.len()).map(|v| usize::from(v >= g.n_obs)).collect();
    let mut ch: Vec<usize> = (0..h.adj.len()).map(|v| usize::from(v >= h.n_obs)).collect();
    refine(&g, &h, &mut cg, &mut ch) && iso_search(&g, &h, cg, ch)
}

// ---------------------------------------------------------------------------
// Contextuality bound, diagrams, embedded kernels

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub quantum_value: i64,
    pub classical_bound: i64,
    /// `None` when the proof has more than [`ALPHA_MAX_OBSERVABLES`] observables.
    pub brute_force_max: Option<i64>,
}

pub const ALPHA_MAX_OBSERVABLES: usize = 24;

/// α = Σ(positive ID products) − Σ(negative ID products). QM gives `I`;
/// noncontextual ±1 values give at most `I − 2`, which the brute force checks.
pub fn alpha_bound(proof: &KsProof) -> AlphaReport {
    let i = proof.ids.len() as i64;
    let o = proof.observables.len();
    let brute_force_max = (o <= ALPHA_MAX_OBSERVABLES).then(|| {
        let terms: Vec<(u32, i64)> = proof
            .incidence
            .iter()
            .zip(&proof.ids)
            .map(|(row, id)| (row.iter().fold(0u32, |m, &k| m | 1 << k), i64::from(id.sign())))
            .collect();
        (0u64..1 << o)
            .into_par_iter()
            .map(|a| {
                let a = a as u32;
                terms.iter().map(|&(m, s)| if (a & m).count_ones() % 2 == 0 { s } else { -s }).sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    });
    AlphaReport { quantum_value: i, classical_bound: i - 2, brute_force_max }
}

/// Graph-description text: circles for observables, one box per ID joined
/// to its members; negative IDs are bold.
pub fn export_dot(proof: &KsProof) -> String {
    let mut s = String::from("graph proof {\n  node [shape=circle, fontname=\"monospace\"];\n");
    for (k, o) in proof.observables.iter().enumerate() {
        let _ = writeln!(s, "  o{k} [label=\"{o}\"];");
    }
    for (k, id) in proof.ids.iter().enumerate() {
        if id.is_negative() {
            let _ = writeln!(s, "  i{k} [shape=box, label=\"-\", style=bold, penwidth=3];");
        } else {
            let _ = writeln!(s, "  i{k} [shape=box, label=\"+\", penwidth=1];");
        }
        let style = if id.is_negative() { " [style=bold, penwidth=3]" } else { "" };
        for &o in &proof.incidence[k] {
            let _ = writeln!(s, "  i{k} -- o{o}{style};");
        }
    }
    s.push_str("}\n");
    s
}

pub const EMBEDDED_KERNEL_MAX_IDS: usize = 12;

/// Every subset of the proof's IDs that is itself a Kernel.
pub fn find_embedded_kernels(proof: &KsProof) -> Result<Vec<(Vec<usize>, Kernel)>, ProofError> {
    let k = proof.ids.len();
    if k > EMBEDDED_KERNEL_MAX_IDS {
        return Err(ProofError::TooManyIds(k));
    }
    Ok((1u32..1 << k)
        .filter_map(|mask| {
            let sel: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let ids: Vec<IdentityProduct> = sel.iter().map(|&i| proof.ids[i].clone()).collect();
            verify_kernel(&ids).ok().map(|kern| (sel, kern))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id_engine::verify_id_text;

    fn id(rows: &[&str]) -> IdentityProduct {
        verify_id_text(rows).unwrap()
    }

    fn mermin_square() -> Vec<IdentityProduct> {
        vec![
            id(&["ZI", "IZ", "ZZ"]),
            id(&["IX", "XI", "XX"]),
            id(&["ZX", "XZ", "YY"]),
            id(&["ZI", "IX", "ZX"]),
            id(&["IZ", "XI", "XZ"]),
            id(&["ZZ", "XX", "YY"]),
        ]
    }

    fn wheel3() -> KsProof {
        let k = verify_kernel(&[id(&["ZZI", "XXI", "YYI"]), id(&["IZZ", "IXX", "IYY"]), id(&["ZIZ", "XIX", "YIY"])])
            .unwrap();
        generate_wheel_closure(&k).unwrap()
    }

    #[test]
    fn mermin_square_verifies() {
        let p = verify_ks_proof(&mermin_square()).unwrap();
        assert_eq!(p.symbol().to_string(), "9_2 - 6_3");
        assert_eq!(p.negative_count(), 1);
        let mut short = mermin_square();
        short.remove(0);
        assert!(matches!(verify_ks_proof(&short), Err(ProofError::OddMultiplicity(_))));
        let doubled = [id(&["ZZ", "XX", "YY"]), id(&["ZZ", "XX", "YY"])];
        assert_eq!(verify_ks_proof(&doubled), Err(ProofError::EvenNegativeCount(2)));
    }

    #[test]
    fn generation_examples() {
        let star = verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap();
        let p = generate_proof_from_kernel(&star).unwrap();
        assert_eq!(p.symbol().to_string(), "10_2 - 5_4");

        let kite = verify_kernel(&[id(&["ZIZ", "IZZ", "XXX", "YYX"]), id(&["ZIZ", "IXZ", "XZX", "YYX"])]).unwrap();
        let p = generate_proof_from_kernel(&kite).unwrap();
        assert_eq!(p.symbol().to_string(), "10_2 - 2_4 4_3");
        assert!(p.ids().contains(&id(&["XXX", "XIX", "IXI"])));
        assert!(p.ids().contains(&id(&["IZZ", "IZI", "IIZ"])));

        let web = verify_kernel(&[id(&["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"])]).unwrap();
        let p = generate_proof_from_kernel(&web).unwrap();
        assert_eq!(p.symbol().to_string(), "12_2 - 1_5 4_4 1_3");
        assert_eq!(p.max_pair_intersection(), 1);
    }

    #[test]
    fn compact_generation() {
        assert_eq!(support_splits(&"ZXY".parse().unwrap()).len(), 4);
        assert_eq!(support_splits(&"ZXYZ".parse().unwrap()).len(), 14);
        let web = verify_kernel(&[id(&["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"])]).unwrap();
        let greedy = generate_proof_from_kernel(&web).unwrap();
        let compact = generate_compact_proof(&web, crate::budget::Budget::UNLIMITED).unwrap();
        assert!(proofs_isomorphic(&greedy, &compact));
        // the whole ID5^5: the greedy pairing leaves an extra observable
        let k = verify_kernel(&[id(&["ZZZZI", "ZZXXZ", "XXZIX", "XIXZZ", "IXIXX"])]).unwrap();
        assert_eq!(generate_proof_from_kernel(&k).unwrap().symbol().to_string(), "13_2 - 3_5 2_4 1_3");
        let p = generate_compact_proof(&k, crate::budget::Budget::UNLIMITED).unwrap();
        assert_eq!(p.symbol().to_string(), "12_2 - 1_5 4_4 1_3");
        assert!(proofs_isomorphic(&p, &greedy));
    }

    #[test]
    fn shared_portion_example() {
        // ZZZIX and ZZZIY share ZZZII, which stays whole
        let a: PauliObservable = "ZZZIX".parse().unwrap();
        let b: PauliObservable = "ZZZIY".parse().unwrap();
        assert_eq!(common_portion(&a, &b).to_text(), "ZZZII");
    }

    #[test]
    fn wheel_closure_and_isomorphism() {
        let w = wheel3();
        assert_eq!(w.symbol().to_string(), "9_2 - 6_3");
        let m = verify_ks_proof(&mermin_square()).unwrap();
        assert!(proofs_isomorphic(&m, &w));
        assert!(proofs_isomorphic(&w, &m));
        let star = generate_proof_from_kernel(&verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap()).unwrap();
        assert!(!proofs_isomorphic(&m, &star));
        assert!(proofs_isomorphic(&star, &star));
    }

    #[test]
    fn alpha_examples() {
        let m = verify_ks_proof(&mermin_square()).unwrap();
        assert_eq!(alpha_bound(&m), AlphaReport { quantum_value: 6, classical_bound: 4, brute_force_max: Some(4) });
        let star = generate_proof_from_kernel(&verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap()).unwrap();
        assert_eq!(alpha_bound(&star).brute_force_max, Some(3));
    }

    #[test]
    fn dot_export() {
        let m = verify_ks_proof(&mermin_square()).unwrap();
        let d = export_dot(&m);
        assert_eq!(d.matches("shape=box").count(), 6);
        assert_eq!(d.lines().filter(|l| l.contains("label=\"") && !l.contains("box")).count(), 9);
        assert_eq!(d.lines().filter(|l| l.contains("box") && l.contains("bold")).count(), 1);
        assert_eq!(d, export_dot(&verify_ks_proof(&mermin_square()).unwrap()));
    }

    #[test]
    fn embedded_kernels() {
        let m = verify_ks_proof(&mermin_square()).unwrap();
        let ks = find_embedded_kernels(&m).unwrap();
        // the two ID3^2 that carry the Odd SQPs
        assert!(ks.iter().any(|(sel, _)| sel == &vec![2, 5]));
        let star = generate_proof_from_kernel(&verify_kernel(&[id(&["ZZZ", "ZXX", "XZX", "XXZ"])]).unwrap()).unwrap();
        let ks = find_embedded_kernels(&star).unwrap();
        assert!(ks.iter().any(|(sel, k)| sel.len() == 1 && k.ids()[0] == star.ids()[0]));
    }
}
