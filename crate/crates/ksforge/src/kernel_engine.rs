//! Kernels, Composite Kernel Structures (CKSs) and their criticality.
//!
//! A Kernel is a set of IDs with an odd number of negative members in which
//! every single-qubit letter occurs an even number of times per qubit. A CKS
//! is the O/I skeleton of a Composite Kernel restricted to its Odd qubits.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, SharedMeter};
use crate::id_engine::{canonicalize_grid, embed_id, transpose_letters, verify_id, IdError, IdentityProduct, SqpClass};
use crate::pauli_core::{Letter, PauliObservable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("a kernel needs at least one ID")]
    Empty,
    #[error("ID {index} acts on {found} qubits, expected {expected}")]
    Dimension { index: usize, expected: usize, found: usize },
    #[error("EVEN_NEGATIVE_COUNT: {0} negative IDs")]
    EvenNegativeCount(usize),
    #[error("LETTER_PARITY_VIOLATION: letter {letter} occurs an odd number of times on qubit {qubit}")]
    LetterParity { qubit: usize, letter: char },
    #[error("ODDNESS_MISMATCH: row {0}")]
    OddnessMismatch(usize),
    #[error("{found} IDs supplied for a CKS with {expected} rows")]
    RowCount { expected: usize, found: usize },
    #[error("qubit map of row {0} is not injective or has the wrong length")]
    BadMap(usize),
    #[error("internal: no Partial ID available for sign fixing")]
    SignFixImpossible,
    #[error("invalid CKS: {0}")]
    InvalidCks(String),
    #[error(transparent)]
    Id(#[from] IdError),
}

// ---------------------------------------------------------------------------
// CKS

/// Rows are bit masks over the `n` Odd qubits (bit q set = `O`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cks {
    n: usize,
    rows: Vec<u64>,
}

impl Cks {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Cks, KernelError> {
        if n == 0 || n > 64 {
            return Err(KernelError::InvalidCks(format!("{n} columns")));
        }
        if rows.is_empty() {
            return Err(KernelError::InvalidCks("no rows".into()));
        }
        let full = full_mask(n);
        let mut acc = 0;
        for (i, &r) in rows.iter().enumerate() {
            if r & !full != 0 || r == 0 || r.count_ones() % 2 == 1 {
                return Err(KernelError::InvalidCks(format!("row {i} needs an even, nonzero number of O")));
            }
            acc ^= r;
        }
        if acc != 0 {
            let q = acc.trailing_zeros();
            return Err(KernelError::InvalidCks(format!("column {q} has an odd number of O")));
        }
        Ok(Cks { n, rows })
    }

    /// Parse rows of `O`/`I` characters (one row per line or `/`-separated).
    pub fn parse(text: &str) -> Result<Cks, KernelError> {
        let lines: Vec<&str> =
            text.split(['\n', '/']).map(|l| l.trim()).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        let lines: Vec<String> = lines.iter().map(|l| l.split_whitespace().collect::<String>()).collect();
        let n = lines.first().map(|l| l.chars().count()).unwrap_or(0);
        let mut rows = Vec::new();
        for l in &lines {
            if l.chars().count() != n {
                return Err(KernelError::InvalidCks("ragged rows".into()));
            }
            let mut m = 0u64;
            for (q, c) in l.chars().enumerate() {
                match c {
                    'O' | 'o' => m |= 1 << q,
                    'I' | 'i' | '.' => {}
                    _ => return Err(KernelError::InvalidCks(format!("illegal character {c:?}"))),
                }
            }
            rows.push(m);
        }
        Cks::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Number of O entries in each row, i.e. the oddness each row demands.
    pub fn oddnesses(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn row_text(&self, r: usize) -> String {
        (0..self.n).map(|q| if self.rows[r] >> q & 1 == 1 { 'O' } else { 'I' }).collect()
    }

    /// Canonical form up to row and column permutation.
    pub fn canonical(&self) -> Cks {
        Cks { n: self.n, rows: canonical_rows(self.n, &self.rows) }
    }
}

impl fmt::Display for Cks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows.len() {
            writeln!(f, "{}", self.row_text(r))?;
        }
        Ok(())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Canonical rows of a binary matrix, via the ID canonicaliser with `O`
/// coded as the first letter and `I` as identity.
fn canonical_rows(n: usize, rows: &[u64]) -> Vec<u64> {
    let m = rows.len();
    let cols: Vec<Vec<u8>> =
        (0..n).map(|q| rows.iter().map(|r| if r >> q & 1 == 1 { 0 } else { 3 }).collect()).collect();
    let key = canonicalize_grid(&cols, m);
    (0..m)
        .map(|i| {
            let shift = 2 * (m - 1 - i);
            key.iter().enumerate().fold(0u64, |acc, (q, c)| if (c >> shift) & 3 == 0 { acc | 1 << q } else { acc })
        })
        .collect()
}

fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A CKS is critical when no set of rows and/or qubits can be deleted to
/// leave a smaller CKS. Deleting a qubit destroys every row with an `O` there,
/// so the surviving structures are exactly the row subsets whose columns sum
/// to zero. Criticality therefore means: the rows form a minimal dependent
/// set over GF(2) (rank `R - 1`) and every column carries an `O`.
pub fn is_critical_cks(cks: &Cks) -> bool {
    let cover = cks.rows.iter().fold(0, |a, r| a | r);
    cover == full_mask(cks.n) && gf2_rank(&cks.rows) + 1 == cks.rows.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct CksSearch {
    pub items: Vec<Cks>,
    pub truncated: bool,
    pub nodes: u64,
}

/// All critical CKSs on `n` Odd qubits, one per row/column permutation class.
///
/// A critical CKS with more than two rows is an independent set plus its sum,
/// so independent sets are grown level by level (deduplicated up to
/// permutation) and each covering one is closed into a circuit. The only
/// two-row CKS is the all-`O` row doubled, for even `n`.
pub fn enumerate_cks(n: usize, budget: Budget) -> CksSearch {
    assert!((2..=16).contains(&n), "CKS enumeration supports 2..=16 qubits");
    let meter = SharedMeter::new(budget);
    let full = full_mask(n);
    let vectors: Vec<u64> = (1..=full).filter(|v: &u64| v.count_ones() % 2 == 0).collect();
    let mut found: HashSet<Vec<u64>> = HashSet::new();
    if n % 2 == 0 {
        found.insert(canonical_rows(n, &[full, full]));
    }
    // Level 1: one vector of each even weight.
    let mut level: HashSet<Vec<u64>> = (1..=n / 2).map(|w| vec![full_mask(2 * w)]).collect();
    for size in 2..n {
        let next: Vec<(Vec<u64>, Option<Vec<u64>>)> = level
            .par_iter()
            .flat_map_iter(|set| {
                let mut out = Vec::new();
                for &v in &vectors {
                    if !meter.tick() {
                        break;
                    }
                    if set.contains(&v) {
                        continue;
                    }
                    let mut grown = set.clone();
                    grown.push(v);
                    if gf2_rank(&grown) < size {
                        continue;
                    }
                    let cover = grown.iter().fold(0, |a, r| a | r);
                    let circuit = (cover == full).then(|| {
                        let mut c = grown.clone();
                        c.push(grown.iter().fold(0, |a, r| a ^ r));
                        canonical_rows(n, &c)
                    });
                    out.push((canonical_rows(n, &grown), circuit));
                }
                out
            })
            .collect();
        level = HashSet::new();
        for (set, circuit) in next {
            level.insert(set);
            if let Some(c) = circuit {
                found.insert(c);
            }
        }
        if meter.exhausted() {
            break;
        }
    }
    let mut items: Vec<Cks> = found.into_iter().map(|rows| Cks { n, rows }).collect();
    items.sort_by(|a, b| a.rows.len().cmp(&b.rows.len()).then_with(|| a.rows.cmp(&b.rows)));
    CksSearch { items, truncated: meter.exhausted(), nodes: meter.nodes() }
}

// ---------------------------------------------------------------------------
// Kernels

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    SingleId,
    Composite,
}

/// The two incompatible values of the product of all IDs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrongKs {
    pub quantum: i8,
    pub noncontextual: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kernel {
    n: usize,
    ids: Vec<IdentityProduct>,
    kind: KernelKind,
}

impl Kernel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[IdentityProduct] {
        &self.ids
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn negative_count(&self) -> usize {
        self.ids.iter().filter(|i| i.is_negative()).count()
    }

    /// Quantum mechanics multiplies the ID signs; a noncontextual assignment
    /// squares every single-qubit value.
    pub fn strong_ks(&self) -> StrongKs {
        StrongKs { quantum: if self.negative_count() % 2 == 1 { -1 } else { 1 }, noncontextual: 1 }
    }

    pub fn profiles(&self) -> Vec<String> {
        self.ids.iter().map(|i| i.profile()).collect()
    }

    /// The CKS of a Composite Kernel: Odd masks restricted to the Odd qubits.
    pub fn cks(&self) -> Option<Cks> {
        let masks: Vec<u64> = self.ids.iter().map(odd_mask).filter(|&m| m != 0).collect();
        let odd_cols: Vec<usize> = (0..self.n).filter(|q| masks.iter().any(|m| m >> q & 1 == 1)).collect();
        if odd_cols.is_empty() {
            return None;
        }
        let rows = masks
            .iter()
            .map(|m| odd_cols.iter().enumerate().fold(0u64, |a, (j, &q)| if m >> q & 1 == 1 { a | 1 << j } else { a }))
            .collect();
        Cks::new(odd_cols.len(), rows).ok()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KERNEL {} {}", self.ids.len(), self.n)?;
        for id in &self.ids {
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

fn odd_mask(id: &IdentityProduct) -> u64 {
    id.classes().iter().enumerate().fold(0, |a, (q, c)| if *c == SqpClass::Odd { a | 1 << q } else { a })
}

/// Parity of the Z, X and Y counts per qubit over a list of rows.
fn letter_parity<'a>(rows: impl IntoIterator<Item = &'a PauliObservable>) -> [u64; 3] {
    let mut p = [0u64; 3];
    for r in rows {
        let (z, x) = (r.z_mask(), r.x_mask());
        p[0] ^= z & !x;
        p[1] ^= x & !z;
        p[2] ^= z & x;
    }
    p
}

pub fn verify_kernel(ids: &[IdentityProduct]) -> Result<Kernel, KernelError> {
    let first = ids.first().ok_or(KernelError::Empty)?;
    let n = first.n();
    for (index, id) in ids.iter().enumerate() {
        if id.n() != n {
            return Err(KernelError::Dimension { index, expected: n, found: id.n() });
        }
    }
    let neg = ids.iter().filter(|i| i.is_negative()).count();
    if neg % 2 == 0 {
        return Err(KernelError::EvenNegativeCount(neg));
    }
    let p = letter_parity(ids.iter().flat_map(|i| i.rows()));
    for q in 0..n {
        for (k, letter) in ['Z', 'X', 'Y'].into_iter().enumerate() {
            if p[k] >> q & 1 == 1 {
                return Err(KernelError::LetterParity { qubit: q, letter });
            }
        }
    }
    let kind = if ids.len() == 1 { KernelKind::SingleId } else { KernelKind::Composite };
    Ok(Kernel { n, ids: ids.to_vec(), kind })
}

/// An ID placed on a CKS row: ID qubit `q` goes to kernel qubit `map[q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub id: IdentityProduct,
    pub map: Vec<usize>,
}

impl Assignment {
    /// Odd qubits in increasing order onto `odd_targets`, the remaining
    /// qubits in increasing order onto `other_targets`.
    pub fn align(id: &IdentityProduct, odd_targets: &[usize], other_targets: &[usize]) -> Assignment {
        let (mut odd, mut other) = (odd_targets.iter(), other_targets.iter());
        let map = id
            .classes()
            .iter()
            .map(|c| {
                let t = if *c == SqpClass::Odd { odd.next() } else { other.next() };
                *t.expect("not enough target qubits")
            })
            .collect();
        Assignment { id: id.clone(), map }
    }
}

fn id_display_key(id: &IdentityProduct) -> Vec<Vec<Letter>> {
    id.rows().iter().map(|r| r.display_key()).collect()
}

/// Place IDs on the rows of a CKS. If the negative count comes out even, the
/// first Odd SQP of the lexicographically last ID has its Z and X swapped,
/// which flips that ID's sign and nothing else.
pub fn assemble_kernel(cks: &Cks, assignments: &[Assignment]) -> Result<Kernel, KernelError> {
    if assignments.len() != cks.rows.len() {
        return Err(KernelError::RowCount { expected: cks.rows.len(), found: assignments.len() });
    }
    let mut n = cks.n;
    for (r, a) in assignments.iter().enumerate() {
        let mut seen = HashSet::new();
        if a.map.len() != a.id.n() || !a.map.iter().all(|&t| seen.insert(t)) {
            return Err(KernelError::BadMap(r));
        }
        n = n.max(a.map.iter().max().map_or(0, |m| m + 1));
    }
    let mut ids = Vec::with_capacity(assignments.len());
    for (r, a) in assignments.iter().enumerate() {
        let odd = a.map.iter().zip(a.id.classes()).fold(0u64, |m, (&t, c)| if *c == SqpClass::Odd { m | 1 << t } else { m });
        if odd != cks.rows[r] {
            return Err(KernelError::OddnessMismatch(r));
        }
        ids.push(embed_id(&a.id, n, &a.map));
    }
    if ids.iter().filter(|i| i.is_negative()).count() % 2 == 0 {
        let (idx, _) = ids
            .iter()
            .enumerate()
            .filter(|(_, i)| i.oddness() > 0)
            .max_by(|a, b| id_display_key(a.1).cmp(&id_display_key(b.1)).then(a.0.cmp(&b.0)))
            .ok_or(KernelError::SignFixImpossible)?;
        let q = ids[idx].classes().iter().position(|c| *c == SqpClass::Odd).expect("partial ID");
        ids[idx] = transpose_letters(&ids[idx], q, Letter::Z, Letter::X)?;
        if !ids[idx].is_negative() && ids.iter().filter(|i| i.is_negative()).count() % 2 == 0 {
            return Err(KernelError::SignFixImpossible);
        }
    }
    verify_kernel(&ids)
}

// ---------------------------------------------------------------------------
// Kernel criticality

/// The restriction of an ID to the qubit mask `keep`, with identity rows
/// dropped. Returns its sign bit and letter parities when it is still an ID.
fn restricted(id: &IdentityProduct, keep: u64) -> Option<(bool, [u64; 3])> {
    let rows: Vec<PauliObservable> = id
        .rows()
        .iter()
        .map(|r| PauliObservable::from_masks(r.n_qubits(), r.z_mask() & keep, r.x_mask() & keep).expect("masked"))
        .filter(|r| !r.is_identity())
        .collect();
    if rows.is_empty() {
        return None;
    }
    let sub = verify_id(&rows).ok()?;
    Some((sub.is_negative(), letter_parity(&rows)))
}

/// Brute-force criticality: no deletion of IDs and/or qubits leaves a smaller
/// Kernel. Qubit deletions are shared by all IDs; an ID whose rows all become
/// trivial counts as deleted.
pub fn is_critical_kernel(kernel: &Kernel) -> bool {
    let k = kernel.ids.len();
    let n = kernel.n;
    assert!(k <= 24 && n <= 24, "brute-force kernel criticality is limited to 24 IDs and 24 qubits");
    let full = full_mask(n);
    let all_ids = (1u32 << k) - 1;
    !(1..=full).into_par_iter().any(|keep| {
        let parts: Vec<Option<(bool, [u64; 3])>> = kernel.ids.iter().map(|id| restricted(id, keep)).collect();
        let avail = parts.iter().enumerate().fold(0u32, |a, (i, p)| if p.is_some() { a | 1 << i } else { a });
        // Gray-code walk over the subsets of the surviving IDs.
        let mut sel = 0u32;
        let (mut neg, mut par) = (false, [0u64; 3]);
        for step in 1u32..(1 << k) {
            let i = step.trailing_zeros() as usize;
            sel ^= 1 << i;
            if let Some((ng, p)) = parts[i] {
                neg ^= ng;
                for t in 0..3 {
                    par[t] ^= p[t];
                }
            }
            if sel & !avail != 0 || (sel == all_ids && keep == full) {
                continue;
            }
            if neg && par == [0; 3] {
                return true;
            }
        }
        false
    })
}

/// Groups of Critically Linked qubits of an ID: its nontrivial qubits,
/// split wherever the ID factors side by side into two IDs.
pub fn critical_link_groups(id: &IdentityProduct) -> Vec<u64> {
    let nontrivial: Vec<usize> =
        (0..id.n()).filter(|&q| matches!(id.classes()[q], SqpClass::Odd | SqpClass::Even)).collect();
    let t = nontrivial.len();
    assert!(t <= 20, "link analysis is limited to 20 nontrivial qubits");
    let mask_of = |sel: u32| nontrivial.iter().enumerate().fold(0u64, |a, (j, &q)| if sel >> j & 1 == 1 { a | 1 << q } else { a });
    let all = if t == 0 { 0 } else { (1u32 << t) - 1 };
    let mut class: Vec<u32> = vec![0; t];
    for sel in 1..all {
        // each split is seen twice; only take the one containing the first qubit
        if sel & 1 == 0 {
            continue;
        }
        let valid = |m: u64| {
            let rows: Vec<PauliObservable> = id
                .rows()
                .iter()
                .map(|r| PauliObservable::from_masks(r.n_qubits(), r.z_mask() & m, r.x_mask() & m).expect("masked"))
                .filter(|r| !r.is_identity())
                .collect();
            !rows.is_empty() && verify_id(&rows).is_ok()
        };
        if valid(mask_of(sel)) && valid(mask_of(all & !sel)) {
            let mut relabel: HashMap<(u32, bool), u32> = HashMap::new();
            for (j, c) in class.iter_mut().enumerate() {
                let next = relabel.len() as u32;
                *c = *relabel.entry((*c, sel >> j & 1 == 1)).or_insert(next);
            }
        }
    }
    let groups = class.iter().copied().max().map_or(0, |m| m as usize + 1);
    (0..groups)
        .map(|g| nontrivial.iter().zip(&class).filter(|(_, &c)| c as usize == g).fold(0u64, |a, (&q, _)| a | 1 << q))
        .collect()
}

/// Grow the Criticality Network from the first Odd SQP: an Odd SQP connects
/// to the other Odd SQPs of its qubit, and Critically Linked SQPs of one ID
/// connect to each other. Returns whether every ID and qubit is reached.
pub fn criticality_network(kernel: &Kernel, links: &[Vec<u64>]) -> bool {
    if kernel.ids.len() == 1 {
        return true;
    }
    assert_eq!(links.len(), kernel.ids.len(), "one link list per ID");
    let k = kernel.ids.len();
    let odd: Vec<u64> = kernel.ids.iter().map(odd_mask).collect();
    let Some(start) = (0..k).find(|&i| odd[i] != 0) else {
        return false;
    };
    // reached[i] = qubit mask of the reached SQPs of ID i
    let mut reached = vec![0u64; k];
    let mut stack = vec![(start, odd[start].trailing_zeros() as usize)];
    while let Some((i, q)) = stack.pop() {
        if reached[i] >> q & 1 == 1 {
            continue;
        }
        reached[i] |= 1 << q;
        if odd[i] >> q & 1 == 1 {
            for (j, m) in odd.iter().enumerate() {
                if j != i && m >> q & 1 == 1 {
                    stack.push((j, q));
                }
            }
        }
        for g in links[i].iter().filter(|g| *g >> q & 1 == 1) {
            for p in 0..kernel.n {
                if g >> p & 1 == 1 {
                    stack.push((i, p));
                }
            }
        }
    }
    let qubits = reached.iter().fold(0, |a, m| a | m);
    reached.iter().all(|&m| m != 0) && qubits == full_mask(kernel.n)
}

/// Criticality Network with link groups computed by [`critical_link_groups`].
pub fn criticality_network_auto(kernel: &Kernel) -> bool {
    let links: Vec<Vec<u64>> = kernel.ids.iter().map(critical_link_groups).collect();
    criticality_network(kernel, &links)
}
