//! Kites: a partial ID and its one-transposition partner as the tail, four
//! ID3s as the head, and the nine-basis parity proofs inside.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::id_engine::{transpose_letters, verify_id, IdentityProduct};
use crate::kernel_engine::{verify_kernel, Kernel};
use crate::pauli_core::{Letter, PauliObservable};
use crate::proof_engine::{verify_ks_proof, KsProof};
use crate::ray_engine::{eigenbasis, EigenRay, Ray};
use crate::search_engine::verify_ray_parity;
use crate::symbol::Symbol;

use super::families::grid;
use super::CatalogError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KiteVariant {
    /// ID(N+1)^N_N for odd N.
    OddNp1,
    /// ID(N+1)^N_2 for even N.
    EvenNp1,
    /// ID(N/2+2)^N_N for even N.
    EvenHalfN,
    ExemplarM5N7,
    ExemplarM6N11,
    ExemplarM7N16,
}

impl KiteVariant {
    pub const ALL: [KiteVariant; 6] = [
        KiteVariant::OddNp1,
        KiteVariant::EvenNp1,
        KiteVariant::EvenHalfN,
        KiteVariant::ExemplarM5N7,
        KiteVariant::ExemplarM6N11,
        KiteVariant::ExemplarM7N16,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KiteVariant::OddNp1 => "odd_Np1",
            KiteVariant::EvenNp1 => "even_Np1",
            KiteVariant::EvenHalfN => "even_halfN",
            KiteVariant::ExemplarM5N7 => "exemplar_M5N7",
            KiteVariant::ExemplarM6N11 => "exemplar_M6N11",
            KiteVariant::ExemplarM7N16 => "exemplar_M7N16",
        }
    }
}

impl fmt::Display for KiteVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KiteVariant {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<KiteVariant, CatalogError> {
        KiteVariant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| CatalogError::UnknownName(s.to_string()))
    }
}

/// The eight head/tail observables: `A = X_q`, `D = Z_q`, `B`/`C` the rest
/// of the two bold rows, `E, F` those rows in the Positive tail ID and `G, H`
/// in the Negative one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KiteLabels {
    pub obs: [PauliObservable; 8],
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;
const F: usize = 5;
const G: usize = 6;
const H: usize = 7;

/// Head IDs by label.
const HEADS: [[usize; 3]; 4] = [[A, B, G], [A, C, F], [B, D, E], [C, D, H]];

#[derive(Clone, Debug)]
pub struct Kite {
    pub variant: Option<KiteVariant>,
    pub partial: IdentityProduct,
    /// Qubit and rows of the transposed `Z`/`X` pair in `partial`.
    pub bold: (usize, usize, usize),
    pub kernel: Kernel,
    pub positive_tail: IdentityProduct,
    pub negative_tail: IdentityProduct,
    /// Rows of the positive tail holding `E` and `F`.
    pub tail_rows: (usize, usize),
    pub labels: KiteLabels,
    pub heads: Vec<IdentityProduct>,
    pub proof: KsProof,
}

impl Kite {
    pub fn m(&self) -> usize {
        self.partial.m()
    }

    pub fn n(&self) -> usize {
        self.partial.n()
    }
}

fn from_grid(m: usize, n: usize, cells: &[(usize, usize, Letter)]) -> IdentityProduct {
    let mut rows = vec![PauliObservable::identity(n); m];
    for &(r, q, l) in cells {
        rows[r].set(q, l);
    }
    verify_id(&rows).expect("family ID")
}

fn partial_for(variant: KiteVariant, n: usize) -> Result<(IdentityProduct, (usize, usize, usize)), CatalogError> {
    use Letter::*;
    let bad = || CatalogError::OutOfRange(format!("{variant} has no member with N = {n}"));
    Ok(match variant {
        KiteVariant::OddNp1 => {
            if n < 3 || n % 2 == 0 {
                return Err(bad());
            }
            let mut cells = vec![];
            for i in 0..n - 1 {
                cells.push((i, i, Z));
                cells.push((i, n - 1, Z));
            }
            for q in 0..n {
                cells.push((n - 1, q, X));
                cells.push((n, q, if q == n - 1 { X } else { Y }));
            }
            (from_grid(n + 1, n, &cells), (0, 0, n - 1))
        }
        KiteVariant::EvenNp1 => {
            if n < 2 || n % 2 == 1 {
                return Err(bad());
            }
            let mut cells = vec![];
            for q in 0..n {
                cells.push((0, q, Z));
                cells.push((1, q, if q < 2 { Y } else { Z }));
            }
            for j in 0..n.saturating_sub(2) {
                cells.push((2 + j, j, X));
                cells.push((2 + j, j + 2, X));
            }
            cells.push((n, n - 2, X));
            cells.push((n, n - 1, X));
            (from_grid(n + 1, n, &cells), (0, 0, 2))
        }
        KiteVariant::EvenHalfN => {
            if n < 4 || n % 2 == 1 {
                return Err(bad());
            }
            // Column q holds Z, Y, X on rows (a, b, c); each step in M
            // replaces the last triple (a,b,c) by (a,b,c+1), (a,c,c+1), (b,c,c+1).
            let mut triples = vec![(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
            while triples.len() < n {
                let (a, b, c) = triples.pop().expect("nonempty");
                triples.extend([(a, b, c + 1), (a, c, c + 1), (b, c, c + 1)]);
            }
            let m = n / 2 + 2;
            let cells: Vec<(usize, usize, Letter)> = triples
                .iter()
                .enumerate()
                .flat_map(|(q, &(a, b, c))| [(a, q, Z), (b, q, Y), (c, q, X)])
                .collect();
            (from_grid(m, n, &cells), (0, 0, 2))
        }
        KiteVariant::ExemplarM5N7 => {
            if n != 7 {
                return Err(bad());
            }
            (grid(&["ZZZZZII", "XXZXXZZ", "YIXZZXX", "IYIXIZX", "IIXIXXZ"]), (0, 0, 1))
        }
        KiteVariant::ExemplarM6N11 => {
            if n != 11 {
                return Err(bad());
            }
            let rows = ["IIZZZZZZZZZ", "ZIZZZXXIXXI", "IZXXIZZZIII", "XIXIXXIXZXX", "IXIXIIXIIZZ", "YYIIXIIXXIX"];
            (grid(&rows), (0, 1, 3))
        }
        KiteVariant::ExemplarM7N16 => {
            if n != 16 {
                return Err(bad());
            }
            let rows = [
                "ZZZZZZZZIIIIIIII",
                "XXXXIIIIZZZZIIII",
                "YIIIXXXIXIIIZZII",
                "IYIIYIIIIXXXXIZI",
                "IIIIIYIXYYIIIIXZ",
                "IIYIIIIYIIYIYXIX",
                "IIIYIIYIIIIYIYYY",
            ];
            (grid(&rows), (0, 0, 1))
        }
    })
}

/// Kite from a partial ID whose column `q` has a single `Z` (row `rz`) and a
/// single `X` (row `rx`).
pub fn kite_from_partial(partial: &IdentityProduct, q: usize, rz: usize, rx: usize) -> Result<Kite, CatalogError> {
    let col = partial.column(q);
    let count = |l: Letter| col.iter().filter(|&&c| c == l).count();
    if col[rz] != Letter::Z || col[rx] != Letter::X || count(Letter::Z) != 1 || count(Letter::X) != 1 {
        return Err(CatalogError::Construction(format!("column {q} has no single Z/X pair on rows {rz}, {rx}")));
    }
    let flipped = transpose_letters(partial, q, Letter::Z, Letter::X)?;
    let kernel = verify_kernel(&[partial.clone(), flipped.clone()])?;
    let (pos, neg, a, b) =
        if partial.is_negative() { (flipped, partial.clone(), rx, rz) } else { (partial.clone(), flipped, rz, rx) };
    let n = partial.n();
    let strip = |w: &PauliObservable| {
        let mut w = *w;
        w.set(q, Letter::I);
        w
    };
    let (e, f, g, h) = (pos.rows()[a], pos.rows()[b], neg.rows()[a], neg.rows()[b]);
    let obs = [
        PauliObservable::single(n, q, Letter::X),
        strip(&e),
        strip(&f),
        PauliObservable::single(n, q, Letter::Z),
        e,
        f,
        g,
        h,
    ];
    let heads: Vec<IdentityProduct> =
        HEADS.iter().map(|h| verify_id(&h.map(|l| obs[l]))).collect::<Result<_, _>>()?;
    let mut ids = vec![pos.clone(), neg.clone()];
    ids.extend(heads.iter().cloned());
    let proof = verify_ks_proof(&ids)?;
    Ok(Kite {
        variant: None,
        partial: partial.clone(),
        bold: (q, rz, rx),
        kernel,
        positive_tail: pos,
        negative_tail: neg,
        tail_rows: (a, b),
        labels: KiteLabels { obs },
        heads,
        proof,
    })
}

pub fn kite_family(variant: KiteVariant, n: usize) -> Result<Kite, CatalogError> {
    let (partial, (q, rz, rx)) = partial_for(variant, n)?;
    let mut k = kite_from_partial(&partial, q, rz, rx)?;
    k.variant = Some(variant);
    Ok(k)
}

/// The smallest family Kite with a tail of `m` observables (`N = m − 1`).
pub fn kite_with_tail(m: usize) -> Result<Kite, CatalogError> {
    if m < 3 {
        return Err(CatalogError::OutOfRange(format!("kite tails have M >= 3, got {m}")));
    }
    let n = m - 1;
    kite_family(if n % 2 == 1 { KiteVariant::OddNp1 } else { KiteVariant::EvenNp1 }, n)
}

// ---------------------------------------------------------------------------
// Nine-basis proofs

/// Base eigenvalues of rays 1–12 on their head ID (label order of `HEADS`).
const HEAD_RAYS: [(usize, [i8; 3]); 12] = [
    (0, [1, 1, 1]),
    (0, [1, -1, -1]),
    (0, [-1, 1, -1]),
    (1, [1, 1, 1]),
    (1, [-1, 1, -1]),
    (1, [-1, -1, 1]),
    (2, [1, 1, 1]),
    (2, [-1, 1, -1]),
    (2, [-1, -1, 1]),
    (3, [1, -1, -1]),
    (3, [-1, 1, -1]),
    (3, [-1, -1, 1]),
];

/// Ray groups 13–18: (negative tail?, values on the two bold rows).
const TAIL_GROUPS: [(bool, [i8; 2]); 6] =
    [(false, [1, -1]), (false, [-1, 1]), (false, [-1, -1]), (true, [1, 1]), (true, [1, -1]), (true, [-1, 1])];

/// 1-based group indices of the nine bases.
const NINE_BASES: [[usize; 4]; 9] = [
    [1, 2, 5, 6],
    [1, 3, 8, 9],
    [4, 5, 11, 12],
    [7, 8, 10, 12],
    [2, 3, 16, 17],
    [4, 6, 13, 15],
    [7, 9, 14, 15],
    [10, 11, 16, 18],
    [13, 14, 17, 18],
];

#[derive(Clone, Debug, Serialize)]
pub struct NineBasisProof {
    pub n: usize,
    /// Label-flip set (bit `i` flips label `A + i`).
    pub flips: u8,
    pub rays: Vec<Ray>,
    /// Ray indices of the 18 groups (rays 13–18 split as the tail grows).
    pub groups: Vec<Vec<usize>>,
    pub bases: Vec<Vec<usize>>,
    pub symbol: Symbol,
}

/// Flip sets that keep every head ID's product: an even number of flipped
/// labels in each head. There are 16.
pub fn nine_basis_flips() -> Vec<u8> {
    (0u16..256)
        .map(|f| f as u8)
        .filter(|&f| HEADS.iter().all(|h| h.iter().filter(|&&l| f >> l & 1 == 1).count() % 2 == 0))
        .collect()
}

fn pick<'a>(basis: &'a [EigenRay], rows: &[usize], want: &[i8]) -> Vec<&'a EigenRay> {
    basis.iter().filter(|e| rows.iter().zip(want).all(|(&r, &v)| e.row_values[r] == v)).collect()
}

/// The 18−9 pattern lifted to any tail length, at signature level, for one
/// flip set.
pub fn nine_basis_proof(kite: &Kite, flips: u8) -> Result<NineBasisProof, CatalogError> {
    let sign = |l: usize| if flips >> l & 1 == 1 { -1i8 } else { 1 };
    let heads: Vec<Vec<EigenRay>> = kite.heads.iter().map(eigenbasis).collect();
    let tails = [eigenbasis(&kite.positive_tail), eigenbasis(&kite.negative_tail)];
    let (ra, rb) = kite.tail_rows;
    let mut rays: Vec<Ray> = vec![];
    let mut groups: Vec<Vec<usize>> = vec![];
    let mut push = |sel: Vec<&EigenRay>| {
        let start = rays.len();
        rays.extend(sel.into_iter().map(|e| e.ray.clone()));
        groups.push((start..rays.len()).collect());
    };
    for &(h, vals) in &HEAD_RAYS {
        let want: Vec<i8> = (0..3).map(|i| vals[i] * sign(HEADS[h][i])).collect();
        push(pick(&heads[h], &[0, 1, 2], &want));
    }
    for &(negative, vals) in &TAIL_GROUPS {
        let (l1, l2) = if negative { (G, H) } else { (E, F) };
        let want = [vals[0] * sign(l1), vals[1] * sign(l2)];
        push(pick(&tails[negative as usize], &[ra, rb], &want));
    }
    let expected_tail = 1usize << (kite.m() - 3);
    if groups[..12].iter().any(|g| g.len() != 1) || groups[12..].iter().any(|g| g.len() != expected_tail) {
        return Err(CatalogError::Construction("kite ray groups have the wrong sizes".into()));
    }
    let bases: Vec<Vec<usize>> =
        NINE_BASES.iter().map(|b| b.iter().flat_map(|&g| groups[g - 1].iter().copied()).collect()).collect();
    let symbol = verify_ray_parity(kite.n(), &rays, &bases).map_err(|e| CatalogError::Construction(e.to_string()))?;
    Ok(NineBasisProof { n: kite.n(), flips, rays, groups, bases, symbol })
}

/// The unflipped proof in the smallest family Kite with tail length `m`.
pub fn kite_nine_basis_proof(m: usize) -> Result<NineBasisProof, CatalogError> {
    nine_basis_proof(&kite_with_tail(m)?, 0)
}

/// All 16 replicas under eigenvalue reflection.
pub fn nine_basis_replicas(kite: &Kite) -> Result<Vec<NineBasisProof>, CatalogError> {
    nine_basis_flips().into_iter().map(|f| nine_basis_proof(kite, f)).collect()
}
