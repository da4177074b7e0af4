//! Single-qubit products (SQPs) and identity products (IDs).
//!
//! An ID is a list of mutually commuting observables whose product is `±I`.
//! Its columns are SQPs, classified Odd / Even / Trivial by letter parity.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::Budget;
use crate::pauli_core::{letter_product, product, Letter, PauliError, PauliObservable, Phase};

/// Largest row count handled by the bit-packed pair masks.
pub const MAX_ROWS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SqpClass {
    Odd,
    Even,
    Trivial,
    /// Letter counts of mixed parity: the product is not proportional to `I`,
    /// so the column cannot belong to an ID.
    Unbalanced,
}

impl SqpClass {
    pub fn code(self) -> char {
        match self {
            SqpClass::Odd => 'O',
            SqpClass::Even => 'E',
            SqpClass::Trivial => 'I',
            SqpClass::Unbalanced => '?',
        }
    }
}

/// Parity class of a column together with the phase of its ordered product.
pub fn classify_sqp(col: &[Letter]) -> (SqpClass, Phase) {
    let mut counts = [0usize; 3];
    for l in col {
        if let Some(k) = l.nontrivial_index() {
            counts[k] += 1;
        }
    }
    let (_, phase) = letter_product(col);
    let distinct = counts.iter().filter(|&&c| c > 0).count();
    let parities = counts.map(|c| c & 1);
    let class = if parities[0] != parities[1] || parities[1] != parities[2] {
        SqpClass::Unbalanced
    } else if distinct <= 1 {
        SqpClass::Trivial
    } else if parities[0] == 1 {
        SqpClass::Odd
    } else {
        SqpClass::Even
    };
    (class, phase)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdError {
    #[error("rows {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("product is {phase}·{word}, not ±I")]
    ProductNotIdentity { word: String, phase: Phase },
    #[error("an ID needs at least one row")]
    Empty,
    #[error("{0} rows exceeds the supported maximum of 16")]
    TooManyRows(usize),
    #[error("permutation does not match the ID shape")]
    BadPermutation,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdKind {
    /// Oddness 0, negative.
    Whole,
    /// Oddness > 0.
    Partial,
    /// Oddness 0, positive: never reported by enumeration.
    Null,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdentityProduct {
    n: usize,
    rows: Vec<PauliObservable>,
    sign: i8,
    classes: Vec<SqpClass>,
}

impl IdentityProduct {
    pub fn rows(&self) -> &[PauliObservable] {
        &self.rows
    }
    pub fn m(&self) -> usize {
        self.rows.len()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn sign(&self) -> i8 {
        self.sign
    }
    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }
    pub fn oddness(&self) -> usize {
        self.classes.iter().filter(|&&c| c == SqpClass::Odd).count()
    }
    pub fn classes(&self) -> &[SqpClass] {
        &self.classes
    }
    pub fn kind(&self) -> IdKind {
        match (self.oddness(), self.sign) {
            (0, s) if s < 0 => IdKind::Whole,
            (0, _) => IdKind::Null,
            _ => IdKind::Partial,
        }
    }
    pub fn column(&self, q: usize) -> Vec<Letter> {
        self.rows.iter().map(|r| r.letter(q)).collect()
    }
    /// Oddness profile, e.g. `OOE`.
    pub fn profile(&self) -> String {
        self.classes.iter().map(|c| c.code()).collect()
    }
    /// `ID M^N_O`, written `ID4^3_2`.
    pub fn symbol(&self) -> String {
        format!("ID{}^{}_{}", self.m(), self.n, self.oddness())
    }
    pub fn letter_grid(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.to_text()).collect()
    }
    pub fn contains(&self, obs: &PauliObservable) -> bool {
        self.rows.contains(obs)
    }
}

impl fmt::Display for IdentityProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ID {} {} {} {}", self.m(), self.n, self.oddness(), if self.sign < 0 { "-1" } else { "+1" })?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct IdJson {
    m: usize,
    n: usize,
    oddness: usize,
    sign: i8,
    rows: Vec<String>,
}

impl Serialize for IdentityProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IdJson { m: self.m(), n: self.n, oddness: self.oddness(), sign: self.sign, rows: self.letter_grid() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdentityProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = IdJson::deserialize(d)?;
        let rows: Vec<&str> = j.rows.iter().map(|s| s.as_str()).collect();
        let id = verify_id_text(&rows).map_err(serde::de::Error::custom)?;
        if id.sign != j.sign || id.oddness() != j.oddness {
            return Err(serde::de::Error::custom("recorded sign/oddness disagree with the rows"));
        }
        Ok(id)
    }
}

/// Check that the rows form an ID and type it.
pub fn verify_id(rows: &[PauliObservable]) -> Result<IdentityProduct, IdError> {
    if rows.is_empty() {
        return Err(IdError::Empty);
    }
    if rows.len() > MAX_ROWS {
        return Err(IdError::TooManyRows(rows.len()));
    }
    let n = rows[0].n_qubits();
    for r in rows {
        if r.n_qubits() != n {
            return Err(PauliError::Dimension { left: n, right: r.n_qubits() }.into());
        }
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if !rows[i].commutes_unchecked(&rows[j]) {
                return Err(IdError::NonCommuting(i, j));
            }
        }
    }
    let (word, phase) = product(rows)?;
    let sign = match (word.is_identity(), phase.sign()) {
        (true, Some(s)) => s,
        _ => return Err(IdError::ProductNotIdentity { word: word.to_text(), phase }),
    };
    let classes =
        (0..n).map(|q| classify_sqp(&rows.iter().map(|r| r.letter(q)).collect::<Vec<_>>()).0).collect();
    Ok(IdentityProduct { n, rows: rows.to_vec(), sign, classes })
}

pub fn verify_id_text(lines: &[&str]) -> Result<IdentityProduct, IdError> {
    let rows = lines.iter().map(|l| l.parse()).collect::<Result<Vec<PauliObservable>, _>>()?;
    verify_id(&rows)
}

// ---------------------------------------------------------------------------
// Letter permutations

/// Images of `Z, X, Y` under a relabelling.
pub type LetterPerm = [Letter; 3];

/// The six relabellings; the first three are cyclic and preserve the sign of
/// an Odd SQP, the last three are transpositions and flip it.
pub const LETTER_PERMS: [LetterPerm; 6] = [
    [Letter::Z, Letter::X, Letter::Y],
    [Letter::X, Letter::Y, Letter::Z],
    [Letter::Y, Letter::Z, Letter::X],
    [Letter::Z, Letter::Y, Letter::X],
    [Letter::Y, Letter::X, Letter::Z],
    [Letter::X, Letter::Z, Letter::Y],
];

#[inline]
pub fn apply_letter_perm(p: &LetterPerm, l: Letter) -> Letter {
    match l.nontrivial_index() {
        Some(k) => p[k],
        None => Letter::I,
    }
}

/// New column `j` is old column `qubit_perm[j]` relabelled by `letter_perms[j]`.
pub fn permute_id(
    id: &IdentityProduct,
    qubit_perm: &[usize],
    letter_perms: &[LetterPerm],
) -> Result<IdentityProduct, IdError> {
    let n = id.n;
    let mut seen = vec![false; n];
    if qubit_perm.len() != n || letter_perms.len() != n {
        return Err(IdError::BadPermutation);
    }
    for &q in qubit_perm {
        if q >= n || std::mem::replace(&mut seen[q], true) {
            return Err(IdError::BadPermutation);
        }
    }
    for p in letter_perms {
        let mut s = [p[0], p[1], p[2]];
        s.sort();
        if s != [Letter::Z, Letter::X, Letter::Y] {
            return Err(IdError::BadPermutation);
        }
    }
    let rows: Vec<PauliObservable> = id
        .rows
        .iter()
        .map(|r| {
            let letters: Vec<Letter> =
                (0..n).map(|j| apply_letter_perm(&letter_perms[j], r.letter(qubit_perm[j]))).collect();
            PauliObservable::from_letters(&letters).expect("same qubit count")
        })
        .collect();
    verify_id(&rows)
}

/// Swap two letters in one column (a transposition of that SQP).
pub fn transpose_letters(id: &IdentityProduct, qubit: usize, a: Letter, b: Letter) -> Result<IdentityProduct, IdError> {
    let rows: Vec<PauliObservable> = id
        .rows
        .iter()
        .map(|r| {
            let mut r = *r;
            let l = r.letter(qubit);
            if l == a {
                r.set(qubit, b);
            } else if l == b {
                r.set(qubit, a);
            }
            r
        })
        .collect();
    verify_id(&rows)
}

/// Reorder rows (the sign is order independent for commuting rows).
pub fn reorder_rows(id: &IdentityProduct, order: &[usize]) -> IdentityProduct {
    let rows: Vec<PauliObservable> = order.iter().map(|&i| id.rows[i]).collect();
    verify_id(&rows).expect("row permutation of an ID is an ID")
}

/// Embed into a larger register: old qubit `q` goes to `map[q]`.
pub fn embed_id(id: &IdentityProduct, n_new: usize, map: &[usize]) -> IdentityProduct {
    let rows: Vec<PauliObservable> = id
        .rows
        .iter()
        .map(|r| {
            let mut w = PauliObservable::identity(n_new);
            for (q, &t) in map.iter().enumerate() {
                w.set(t, r.letter(q));
            }
            w
        })
        .collect();
    verify_id(&rows).expect("embedding preserves the ID")
}

// ---------------------------------------------------------------------------
// SQP census

fn letter_code(l: Letter) -> u8 {
    match l {
        Letter::Z => 0,
        Letter::X => 1,
        Letter::Y => 2,
        Letter::I => 3,
    }
}

const CODE_LETTER: [Letter; 4] = [Letter::Z, Letter::X, Letter::Y, Letter::I];

/// One representative of every nontrivial SQP of length `m`, up to letter
/// relabelling, oriented so that letters first appear in the order Z, X, Y.
pub fn enumerate_unique_sqps(m: usize) -> Vec<Vec<Letter>> {
    fn rec(m: usize, cur: &mut Vec<Letter>, used: usize, out: &mut Vec<Vec<Letter>>) {
        if cur.len() == m {
            let (c, _) = classify_sqp(cur);
            if matches!(c, SqpClass::Odd | SqpClass::Even) {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=used.min(2) {
            cur.push(CODE_LETTER[k]);
            rec(m, cur, used.max(k + 1), out);
            cur.pop();
        }
        cur.push(Letter::I);
        rec(m, cur, used, out);
        cur.pop();
    }
    let mut out = vec![];
    rec(m, &mut Vec::with_capacity(m), 0, &mut out);
    out
}

/// Bit `pair_index(i, j)` is set when rows `i` and `j` carry different
/// non-identity letters.
fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

fn anticommutation_mask(col: &[Letter]) -> u128 {
    let m = col.len();
    let mut mask = 0u128;
    for i in 0..m {
        for j in i + 1..m {
            if col[i] != Letter::I && col[j] != Letter::I && col[i] != col[j] {
                mask |= 1u128 << pair_index(m, i, j);
            }
        }
    }
    mask
}

// ---------------------------------------------------------------------------
// Criticality

/// True iff no deletion of rows and/or qubits leaves a smaller ID. Null
/// remnants (positive with no Odd SQP, e.g. two equal letters) are not IDs.
pub fn is_critical_id(id: &IdentityProduct) -> bool {
    find_sub_id(id).is_none()
}

/// A proper sub-ID (row mask, qubit mask), if one exists.
pub fn find_sub_id(id: &IdentityProduct) -> Option<(u32, u64)> {
    let m = id.m();
    let n = id.n;
    let full_rows = (1u32 << m) - 1;
    let full_cols = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let grid: Vec<Vec<Letter>> = (0..n).map(|q| id.column(q)).collect();
    for s in 1..=full_rows {
        if s.count_ones() < 3 {
            continue;
        }
        let sel: Vec<usize> = (0..m).filter(|&i| s >> i & 1 == 1).collect();
        let k = sel.len();
        // Restricted column data for balanced columns only.
        let mut cols: Vec<(usize, u128, bool, u8, u32)> = vec![];
        for (q, col) in grid.iter().enumerate() {
            let sub: Vec<Letter> = sel.iter().map(|&i| col[i]).collect();
            let (class, phase) = classify_sqp(&sub);
            if class == SqpClass::Unbalanced {
                continue;
            }
            let rowmask = sub.iter().enumerate().fold(0u32, |a, (t, &l)| if l != Letter::I { a | 1 << t } else { a });
            if rowmask == 0 {
                continue;
            }
            cols.push((q, anticommutation_mask(&sub), class == SqpClass::Odd, phase.exponent(), rowmask));
        }
        let all_rows = (1u32 << k) - 1;
        let c = cols.len();
        if c > 30 {
            panic!("criticality check limited to 30 qubits");
        }
        // Gray-code walk over column subsets.
        let mut xor = 0u128;
        let mut odd = 0usize;
        let mut ph = 0u32;
        let mut cur = 0u64;
        for g in 1u64..(1u64 << c) {
            let bit = g.trailing_zeros() as usize;
            cur ^= 1 << bit;
            let (_, mask, is_odd, e, _) = cols[bit];
            xor ^= mask;
            let adding = cur >> bit & 1 == 1;
            if is_odd {
                if adding {
                    odd += 1
                } else {
                    odd -= 1
                }
            }
            ph = if adding { ph + e as u32 } else { ph + 4 - e as u32 } & 3;
            if xor != 0 || odd % 2 == 1 {
                continue;
            }
            let negative = ph == 2;
            if odd == 0 && !negative {
                continue;
            }
            let mut rows_cov = 0u32;
            let mut qmask = 0u64;
            for (t, col) in cols.iter().enumerate() {
                if cur >> t & 1 == 1 {
                    rows_cov |= col.4;
                    qmask |= 1 << col.0;
                }
            }
            if rows_cov != all_rows {
                continue;
            }
            if s == full_rows && qmask == full_cols {
                continue;
            }
            return Some((s, qmask));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Canonical keys

/// Canonical form of an ID up to row order, qubit order and per-column letter
/// relabelling. Column codes are base-4 digits, row 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub m: usize,
    pub n: usize,
    pub columns: Vec<u64>,
}

impl CanonicalKey {
    /// The canonical grid as an ID (relabelled representative).
    pub fn to_rows(&self) -> Vec<PauliObservable> {
        (0..self.m)
            .map(|r| {
                let letters: Vec<Letter> = self
                    .columns
                    .iter()
                    .map(|&c| CODE_LETTER[((c >> (2 * (self.m - 1 - r))) & 3) as usize])
                    .collect();
                PauliObservable::from_letters(&letters).expect("nonempty")
            })
            .collect()
    }
}

/// Branch-and-bound over row orders. For a fixed row order each column is
/// relabelled to first-appearance order and the columns are sorted; the
/// order is scored by the row-major digit string, whose first `d` rows are
/// already fixed once `d` rows are placed, which makes prefix pruning exact.
/// Returns the sorted column codes of the winning order.
pub fn canonicalize_grid(grid_cols: &[Vec<u8>], m: usize) -> Vec<u64> {
    struct St<'a> {
        cols: &'a [Vec<u8>],
        m: usize,
        best_rows: Vec<u8>,
        best: Option<Vec<u64>>,
    }
    fn row_major(sorted: &[u64], depth: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(depth * sorted.len());
        for i in 0..depth {
            let shift = 2 * (depth - 1 - i);
            out.extend(sorted.iter().map(|c| ((c >> shift) & 3) as u8));
        }
        out
    }
    fn rec(st: &mut St, used: u32, depth: usize, maps: &mut Vec<[u8; 4]>, codes: &mut Vec<u64>) {
        if depth > 0 {
            let mut sorted = codes.clone();
            sorted.sort_unstable();
            let rm = row_major(&sorted, depth);
            if st.best.is_some() {
                let cmp = rm.as_slice().cmp(&st.best_rows[..rm.len()]);
                if cmp == std::cmp::Ordering::Greater {
                    return;
                }
                if depth == st.m {
                    if cmp == std::cmp::Ordering::Less {
                        st.best_rows = rm;
                        st.best = Some(sorted);
                    }
                    return;
                }
            } else if depth == st.m {
                st.best_rows = rm;
                st.best = Some(sorted);
                return;
            }
        }
        for r in 0..st.m {
            if used >> r & 1 == 1 {
                continue;
            }
            let saved_maps = maps.clone();
            for (c, col) in st.cols.iter().enumerate() {
                let l = col[r];
                let d = if l == 3 {
                    3
                } else {
                    let map = &mut maps[c];
                    if map[l as usize] == 255 {
                        map[l as usize] = map[3];
                        map[3] += 1;
                    }
                    map[l as usize]
                };
                codes[c] = codes[c] << 2 | d as u64;
            }
            rec(st, used | 1 << r, depth + 1, maps, codes);
            for c in codes.iter_mut() {
                *c >>= 2;
            }
            *maps = saved_maps;
        }
    }
    // maps[c][letter] = relabelled digit; slot 3 holds the next free digit.
    let mut maps = vec![[255u8, 255, 255, 0]; grid_cols.len()];
    let mut codes = vec![0u64; grid_cols.len()];
    let mut st = St { cols: grid_cols, m, best_rows: vec![], best: None };
    rec(&mut st, 0, 0, &mut maps, &mut codes);
    st.best.unwrap_or_default()
}

pub fn canonicalize_id(id: &IdentityProduct) -> CanonicalKey {
    let cols: Vec<Vec<u8>> = (0..id.n).map(|q| id.column(q).into_iter().map(letter_code).collect()).collect();
    CanonicalKey { m: id.m(), n: id.n, columns: canonicalize_grid(&cols, id.m()) }
}

// ---------------------------------------------------------------------------
// Enumeration

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdFilter {
    pub oddness: Option<usize>,
    pub sign: Option<i8>,
    pub whole_only: bool,
    pub critical_only: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdSearch {
    /// Every matching ID found by the search, one per choice of SQP set.
    pub raw: Vec<IdentityProduct>,
    /// One representative per canonical key, in discovery order.
    pub unique: Vec<IdentityProduct>,
    pub truncated: bool,
    pub nodes: u64,
}

/// Build IDs from `n` distinct unique SQPs of length `m` whose anticommuting
/// pairs cancel. A repeated SQP is only allowed for `m = 3` (the ID3^2).
pub fn enumerate_ids(m: usize, n: usize, filter: IdFilter, budget: Budget) -> IdSearch {
    assert!((3..=MAX_ROWS).contains(&m) && n >= 1 && n <= 64);
    let sqps = enumerate_unique_sqps(m);
    let masks: Vec<u128> = sqps.iter().map(|c| anticommutation_mask(c)).collect();
    let mut by_mask: HashMap<u128, Vec<usize>> = HashMap::new();
    for (i, &mk) in masks.iter().enumerate() {
        by_mask.entry(mk).or_default().push(i);
    }
    let allow_repeat = m == 3;
    let mut meter = budget.meter();
    let mut raw = vec![];
    let mut chosen: Vec<usize> = vec![];

    let emit = |cols: &[usize], raw: &mut Vec<IdentityProduct>| {
        let rows: Vec<PauliObservable> = (0..m)
            .map(|r| PauliObservable::from_letters(&cols.iter().map(|&c| sqps[c][r]).collect::<Vec<_>>()).unwrap())
            .collect();
        if rows.iter().any(|r| r.is_identity()) {
            return;
        }
        let Ok(id) = verify_id(&rows) else { return };
        if id.kind() == IdKind::Null {
            return;
        }
        if let Some(o) = filter.oddness {
            if id.oddness() != o {
                return;
            }
        }
        if let Some(s) = filter.sign {
            if id.sign != s {
                return;
            }
        }
        if filter.whole_only && id.kind() != IdKind::Whole {
            return;
        }
        if filter.critical_only && !is_critical_id(&id) {
            return;
        }
        raw.push(id);
    };

    fn rec(
        min_next: usize,
        acc: u128,
        n: usize,
        allow_repeat: bool,
        masks: &[u128],
        by_mask: &HashMap<u128, Vec<usize>>,
        chosen: &mut Vec<usize>,
        meter: &mut crate::budget::Meter,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if !meter.tick() {
            return;
        }
        if chosen.len() + 1 == n {
            // The last column is forced: its pair mask must cancel the rest.
            if let Some(list) = by_mask.get(&acc) {
                for &c in list.iter().filter(|&&c| c >= min_next) {
                    chosen.push(c);
                    emit(chosen);
                    chosen.pop();
                }
            }
            return;
        }
        for c in min_next..masks.len() {
            chosen.push(c);
            let next = if allow_repeat { c } else { c + 1 };
            rec(next, acc ^ masks[c], n, allow_repeat, masks, by_mask, chosen, meter, emit);
            chosen.pop();
            if meter.exhausted() {
                return;
            }
        }
    }

    {
        let mut sink = |cols: &[usize]| emit(cols, &mut raw);
        rec(0, 0, n, allow_repeat, &masks, &by_mask, &mut chosen, &mut meter, &mut sink);
    }

    let mut seen = HashSet::new();
    let mut unique = vec![];
    for id in &raw {
        if seen.insert(canonicalize_id(id)) {
            unique.push(id.clone());
        }
    }
    IdSearch { raw, unique, truncated: meter.exhausted(), nodes: meter.nodes() }
}

/// Group IDs by canonical key (stable order of first appearance).
pub fn unique_by_key(ids: &[IdentityProduct]) -> BTreeMap<CanonicalKey, Vec<usize>> {
    let mut out: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        out.entry(canonicalize_id(id)).or_default().push(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn id(rows: &[&str]) -> IdentityProduct {
        verify_id_text(rows).unwrap()
    }

    fn letters(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_sqp(&letters("ZXY")), (SqpClass::Odd, Phase::I));
        let (c, ph) = classify_sqp(&letters("ZZXX"));
        assert_eq!(c, SqpClass::Even);
        assert!(ph.is_real());
        assert_eq!(classify_sqp(&letters("IZZI")), (SqpClass::Trivial, Phase::ONE));
        assert_eq!(classify_sqp(&letters("ZXI")).0, SqpClass::Unbalanced);
        // All six orderings of ZXY: cyclic ones +i, the rest -i.
        for (s, e) in [("ZXY", 1), ("XYZ", 1), ("YZX", 1), ("ZYX", 3), ("YXZ", 3), ("XZY", 3)] {
            assert_eq!(classify_sqp(&letters(s)).1.exponent(), e, "{s}");
        }
    }

    #[test]
    fn verify_examples() {
        let upper = id(&["ZZ", "XX", "YY"]);
        assert_eq!((upper.m(), upper.n(), upper.oddness(), upper.sign()), (3, 2, 2, -1));
        assert_eq!(upper.symbol(), "ID3^2_2");
        let t10b = id(&["ZIZ", "IZZ", "XXX", "YYX"]);
        assert_eq!(t10b.symbol(), "ID4^3_2");
        assert_eq!(t10b.profile(), "OOE");
        // ZZ/XZ is the first anticommuting pair found; XX/XZ also fails.
        assert_eq!(verify_id_text(&["ZZ", "XX", "XZ"]), Err(IdError::NonCommuting(0, 2)));
        assert!(matches!(verify_id_text(&["XX", "XZ", "ZZ"]), Err(IdError::NonCommuting(0, 1))));
        assert!(matches!(verify_id_text(&["ZZ", "XX"]), Err(IdError::ProductNotIdentity { .. })));
        let ghz = id(&["ZZZ", "ZXX", "XZX", "XXZ"]);
        assert_eq!(ghz.kind(), IdKind::Whole);
        assert_eq!(ghz.profile(), "EEE");
        assert_eq!(id(&["ZZ", "ZZ"]).kind(), IdKind::Null);
    }

    #[test]
    fn sqp_census() {
        // Orbits under the six relabellings; these are the Gaussian binomials
        // [M-1 choose 2]_2.
        let counts: Vec<usize> = (3..=8).map(|m| enumerate_unique_sqps(m).len()).collect();
        assert_eq!(counts, vec![1, 7, 35, 155, 651, 2667]);
        assert!(enumerate_unique_sqps(5).iter().all(|c| classify_sqp(c).0 != SqpClass::Trivial));
        let m4: Vec<String> =
            enumerate_unique_sqps(4).iter().map(|c| c.iter().map(|l| l.to_char()).collect()).collect();
        for s in ["ZXYI", "ZXIY", "ZIXY", "IZXY", "ZZXX", "ZXZX", "ZXXZ"] {
            assert!(m4.contains(&s.to_string()), "{s}");
        }
    }

    /// Independent oracle: count length-m strings over {Z,X,Y,I} with a
    /// nontrivial balanced class, grouped into orbits under the 6 relabellings.
    fn sqp_orbit_count(m: usize) -> usize {
        let mut seen = HashSet::new();
        let mut orbits = 0;
        for code in 0..4usize.pow(m as u32) {
            let col: Vec<Letter> = (0..m).map(|i| CODE_LETTER[(code >> (2 * i)) & 3]).collect();
            if !matches!(classify_sqp(&col).0, SqpClass::Odd | SqpClass::Even) || seen.contains(&col) {
                continue;
            }
            orbits += 1;
            for p in &LETTER_PERMS {
                seen.insert(col.iter().map(|&l| apply_letter_perm(p, l)).collect::<Vec<_>>());
            }
        }
        orbits
    }

    #[test]
    fn sqp_census_matches_orbit_oracle() {
        for m in 3..=8 {
            assert_eq!(enumerate_unique_sqps(m).len(), sqp_orbit_count(m));
        }
    }

    #[test]
    fn criticality_examples() {
        assert!(is_critical_id(&id(&["ZZZ", "ZXX", "XZX", "XXZ"])));
        assert!(is_critical_id(&id(&["ZIZ", "IZZ", "XXX", "YYX"])));
        assert!(!is_critical_id(&id(&["ZZI", "XXI", "YYI"])));
        assert!(!is_critical_id(&id(&["ZZZ", "XXZ", "YYI"])));
        assert!(is_critical_id(&id(&["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"])));
        assert!(is_critical_id(&id(&["ZZ", "XX", "YY"])));
    }

    /// Brute-force orbit of a small ID under all qubit orders, letter
    /// relabellings and row orders; keys must agree across it.
    fn orbit_keys(idp: &IdentityProduct) -> HashSet<CanonicalKey> {
        let n = idp.n();
        let mut keys = HashSet::new();
        let qperms = permutations(n);
        let rperms = permutations(idp.m());
        for qp in &qperms {
            for code in 0..6usize.pow(n as u32) {
                let lp: Vec<LetterPerm> = (0..n).map(|j| LETTER_PERMS[(code / 6usize.pow(j as u32)) % 6]).collect();
                let p = permute_id(idp, qp, &lp).unwrap();
                for rp in rperms.iter().take(6) {
                    keys.insert(canonicalize_id(&reorder_rows(&p, rp)));
                }
            }
        }
        keys
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn canonical_key_examples() {
        let upper = id(&["ZZ", "XX", "YY"]);
        let lower = id(&["ZX", "XZ", "YY"]);
        let relabelled = id(&["XX", "ZZ", "YY"]);
        assert_eq!(canonicalize_id(&upper), canonicalize_id(&relabelled));
        assert_eq!(canonicalize_id(&upper), canonicalize_id(&lower));
        assert_eq!(orbit_keys(&upper).len(), 1);
        let a = id(&["ZZZ", "ZXX", "XZX", "XXZ"]);
        let b = id(&["ZIZ", "IZZ", "XXX", "YYX"]);
        assert_ne!(canonicalize_id(&a), canonicalize_id(&b));
        assert_eq!(orbit_keys(&b).len(), 1);
        // Canonical rows form an ID of the same shape.
        let k = canonicalize_id(&b);
        let rep = verify_id(&k.to_rows()).unwrap();
        assert_eq!(canonicalize_id(&rep), k);
    }

    #[test]
    fn permute_examples() {
        let t10b = id(&["ZIZ", "IZZ", "XXX", "YYX"]);
        let same = permute_id(&t10b, &[0, 1, 2], &[LETTER_PERMS[0]; 3]).unwrap();
        assert_eq!(same, t10b);
        // Z<->X on the first qubit (an Odd SQP) gives the positive Kite partner.
        let swapped = permute_id(&t10b, &[0, 1, 2], &[LETTER_PERMS[5], LETTER_PERMS[0], LETTER_PERMS[0]]).unwrap();
        assert_eq!(swapped.letter_grid(), vec!["XIZ", "IZZ", "ZXX", "YYX"]);
        assert_eq!(swapped.sign(), -t10b.sign());
        // Relabelling the Even column never changes the sign.
        for p in LETTER_PERMS {
            let q = permute_id(&t10b, &[0, 1, 2], &[LETTER_PERMS[0], LETTER_PERMS[0], p]).unwrap();
            assert_eq!(q.sign(), t10b.sign());
        }
        assert!(permute_id(&t10b, &[0, 0, 2], &[LETTER_PERMS[0]; 3]).is_err());
    }

    #[test]
    fn small_enumerations() {
        let crit = IdFilter { critical_only: true, ..Default::default() };
        let s32 = enumerate_ids(3, 2, crit, Budget::UNLIMITED);
        assert_eq!(s32.unique.len(), 1);
        let s43 = enumerate_ids(4, 3, crit, Budget::UNLIMITED);
        assert_eq!(s43.unique.len(), 2);
        for idp in s43.raw.iter().chain(s32.raw.iter()) {
            assert!(idp.oddness() % 2 == 0);
            assert!(idp.m() <= idp.n() + 1);
        }
    }

    #[test]
    fn budget_truncates() {
        let s = enumerate_ids(5, 4, IdFilter::default(), Budget::nodes(10));
        assert!(s.truncated);
    }

    fn small_id() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
        (0usize..4, Just(vec![0usize, 1, 2, 3]).prop_shuffle(), proptest::collection::vec(0usize..6, 4))
    }

    proptest! {
        #[test]
        fn key_and_criticality_are_permutation_invariant((pick, qp, lp) in small_id()) {
            let pool = [
                id(&["ZZZZ", "XXXX", "YIZX", "IYXZ"]),
                id(&["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"]),
                id(&["ZZZZ", "XXZZ", "YIXI", "IYIX", "IIXX"]),
                id(&["ZZZI", "XXIZ", "YIXX", "IYYY"]),
            ];
            let base = &pool[pick];
            let lps: Vec<LetterPerm> = lp.iter().map(|&k| LETTER_PERMS[k]).collect();
            let p = permute_id(base, &qp, &lps).unwrap();
            let mut order: Vec<usize> = (0..p.m()).collect();
            order.reverse();
            let p = reorder_rows(&p, &order);
            let k = canonicalize_id(base);
            prop_assert_eq!(canonicalize_id(&p), k.clone());
            prop_assert_eq!(is_critical_id(&p), is_critical_id(base));
            let rep = verify_id(&k.to_rows()).unwrap();
            prop_assert_eq!(canonicalize_id(&rep), k);
        }
    }
}
