//! Wheels, Whorls, Stars and the other generated structures.

use crate::id_engine::{verify_id, IdentityProduct};
use crate::kernel_engine::{assemble_kernel, verify_kernel, Assignment, Cks, Kernel};
use crate::pauli_core::{Letter, PauliObservable};
use crate::proof_engine::{generate_proof_from_kernel, proofs_isomorphic, verify_ks_proof, KsProof};
use crate::ray_engine::{rb_set_from_ids, RbSet};

use super::CatalogError;

/// A Kernel together with one proof built on it.
#[derive(Clone, Debug)]
pub struct Family {
    pub kernel: Kernel,
    pub proof: KsProof,
}

pub(crate) fn word(n: usize, letters: &[(usize, Letter)]) -> PauliObservable {
    let mut w = PauliObservable::identity(n);
    for &(q, l) in letters {
        w.set(q, l);
    }
    w
}

pub(crate) fn grid(rows: &[&str]) -> IdentityProduct {
    crate::id_engine::verify_id_text(rows).expect("embedded ID")
}

fn pair(n: usize, i: usize, j: usize, a: Letter, b: Letter) -> PauliObservable {
    word(n, &[(i, a), (j, b)])
}

/// `{P, its single-qubit factors}`.
fn split_id(p: PauliObservable) -> Result<IdentityProduct, CatalogError> {
    let n = p.n_qubits();
    let mut rows = vec![p];
    rows.extend((0..n).filter(|&q| p.letter(q) != Letter::I).map(|q| PauliObservable::single(n, q, p.letter(q))));
    Ok(verify_id(&rows)?)
}

fn ring(n: usize, l: Letter) -> Vec<PauliObservable> {
    (0..n).map(|i| pair(n, i, (i + 1) % n, l, l)).collect()
}

const ZXY: [Letter; 3] = [Letter::Z, Letter::X, Letter::Y];

/// Wheel for odd `n`: `n` Negative ID3 spokes and three rims (Z, X, Y
/// rings). The first `expanded` rims are replaced by rings of ID3s.
pub fn wheel(n: usize, expanded: usize) -> Result<Family, CatalogError> {
    if n < 3 || n % 2 == 0 {
        return Err(CatalogError::Parity { family: "wheel", n });
    }
    if expanded > 3 {
        return Err(CatalogError::OutOfRange(format!("a wheel has 3 rims, not {expanded}")));
    }
    let spokes: Vec<IdentityProduct> = (0..n)
        .map(|i| verify_id(&ZXY.map(|l| pair(n, i, (i + 1) % n, l, l))))
        .collect::<Result<_, _>>()?;
    let kernel = verify_kernel(&spokes)?;
    let mut ids = spokes;
    for (k, &l) in ZXY.iter().enumerate() {
        if k < expanded {
            for p in ring(n, l) {
                ids.push(split_id(p)?);
            }
        } else {
            ids.push(verify_id(&ring(n, l))?);
        }
    }
    Ok(Family { kernel, proof: verify_ks_proof(&ids)? })
}

/// Whorl for even `n`: `n−1` Negative spokes, one Positive twisted spoke on
/// qubits `(n−1, 0)`, the Y rim, and a möbius ring of `2n` ID3s.
pub fn whorl(n: usize, expanded: bool) -> Result<Family, CatalogError> {
    if n < 4 || n % 2 == 1 {
        return Err(CatalogError::Parity { family: "whorl", n });
    }
    use Letter::*;
    let last = n - 1;
    let mut spokes: Vec<IdentityProduct> =
        (0..last).map(|i| verify_id(&ZXY.map(|l| pair(n, i, i + 1, l, l)))).collect::<Result<_, _>>()?;
    spokes.push(verify_id(&[pair(n, last, 0, Z, X), pair(n, last, 0, X, Z), pair(n, last, 0, Y, Y)])?);
    let kernel = verify_kernel(&spokes)?;
    let mut ids = spokes;
    if expanded {
        for p in ring(n, Y) {
            ids.push(split_id(p)?);
        }
    } else {
        ids.push(verify_id(&ring(n, Y))?);
    }
    for i in 0..last {
        ids.push(split_id(pair(n, i, i + 1, Z, Z))?);
        ids.push(split_id(pair(n, i, i + 1, X, X))?);
    }
    ids.push(split_id(pair(n, last, 0, Z, X))?);
    ids.push(split_id(pair(n, last, 0, X, Z))?);
    Ok(Family { kernel, proof: verify_ks_proof(&ids)? })
}

/// Single-ID Star Kernel: circulant `X Z X` rows under `Z…Z` for odd `n`;
/// the head/tail pattern for even `n`.
pub fn star_kernel(n: usize) -> Result<Kernel, CatalogError> {
    if n < 3 {
        return Err(CatalogError::OutOfRange(format!("star needs n >= 3, got {n}")));
    }
    use Letter::*;
    let mut rows = vec![word(n, &(0..n).map(|q| (q, Z)).collect::<Vec<_>>())];
    if n % 2 == 1 {
        for k in 1..=n {
            let c = k % n;
            rows.push(word(n, &[((c + n - 1) % n, X), (c, Z), ((c + 1) % n, X)]));
        }
    } else {
        let mut r1 = vec![(0, X), (1, X)];
        r1.extend((2..n).map(|q| (q, Z)));
        rows.push(word(n, &r1));
        rows.push(word(n, &[(0, Z), (1, X), (2, X)]));
        rows.push(word(n, &[(0, X), (1, Z), (3, X)]));
        for j in 3..n - 1 {
            rows.push(word(n, &[(j, X), (j + 1, X)]));
        }
        rows.push(word(n, &[(2, X), (n - 1, X)]));
    }
    Ok(verify_kernel(&[verify_id(&rows)?])?)
}

pub fn star(n: usize) -> Result<Family, CatalogError> {
    let kernel = star_kernel(n)?;
    let proof = generate_proof_from_kernel(&kernel)?;
    Ok(Family { kernel, proof })
}

/// The critical partial ID4^3_2 used by the Kite-3, Saw and Pinwheel.
pub fn partial_id4() -> IdentityProduct {
    grid(&["ZIZ", "IZZ", "XXX", "YYX"])
}

/// Two copies of the partial ID4^3_2 on the all-`O` 2-row CKS, each Even
/// SQP on its own qubit.
pub fn saw() -> Result<Family, CatalogError> {
    let p = partial_id4();
    let cks = Cks::parse("OO/OO")?;
    let kernel = assemble_kernel(&cks, &[Assignment::align(&p, &[0, 1], &[2]), Assignment::align(&p, &[0, 1], &[3])])?;
    let proof = generate_proof_from_kernel(&kernel)?;
    Ok(Family { kernel, proof })
}

/// Three copies of the partial ID4^3_2 on the 3-qubit wheel CKS, each Even
/// SQP on its own qubit.
pub fn pinwheel() -> Result<Family, CatalogError> {
    let p = partial_id4();
    let cks = Cks::parse("OOI/IOO/OIO")?;
    let a = [
        Assignment::align(&p, &[0, 1], &[3]),
        Assignment::align(&p, &[1, 2], &[4]),
        Assignment::align(&p, &[0, 2], &[5]),
    ];
    let kernel = assemble_kernel(&cks, &a)?;
    // Closing the kernel three IDs at a time beats the pairwise shared-portion
    // decomposition: rows 2 and 3 of the three IDs each close with one new
    // word, and the Z rows close through a triangle.
    let n = kernel.n();
    let mul = |ws: &[PauliObservable]| {
        let (z, x) = ws.iter().fold((0, 0), |(z, x), w| (z ^ w.z_mask(), x ^ w.x_mask()));
        PauliObservable::from_masks(n, z, x)
    };
    let rows: Vec<&[PauliObservable]> = kernel.ids().iter().map(|id| id.rows()).collect();
    let mut ids = kernel.ids().to_vec();
    for r in [2, 3] {
        let mut w: Vec<PauliObservable> = rows.iter().map(|id| id[r]).collect();
        w.push(mul(&w)?);
        ids.push(verify_id(&w)?);
    }
    // Z pairs meeting on an Odd qubit; their products live on the Even qubits.
    let zs: Vec<PauliObservable> = rows.iter().flat_map(|id| [id[0], id[1]]).collect();
    let mut tri = vec![];
    for q in 0..cks.n() {
        let pair: Vec<PauliObservable> = zs.iter().filter(|w| w.letter(q) != Letter::I).copied().collect();
        let p = mul(&pair)?;
        ids.push(verify_id(&[pair[0], pair[1], p])?);
        tri.push(p);
    }
    ids.push(verify_id(&tri)?);
    Ok(Family { kernel, proof: verify_ks_proof(&ids)? })
}

/// Negative ID3 hub plus the ID4^4_2 rim; the rim observables are split
/// so that single-qubit factors are shared between blades.
pub fn windmill() -> Result<Family, CatalogError> {
    let hub = grid(&["ZZII", "XXII", "YYII"]);
    let rim = grid(&["ZZZZ", "XXXX", "YIZX", "IYXZ"]);
    let kernel = verify_kernel(&[hub.clone(), rim.clone()])?;
    let ids = vec![
        hub,
        rim,
        grid(&["ZZZZ", "ZZII", "IIZI", "IIIZ"]),
        grid(&["XXXX", "XXII", "IIXI", "IIIX"]),
        grid(&["YIZX", "YIII", "IIZI", "IIIX"]),
        grid(&["IYXZ", "IYII", "IIXI", "IIIZ"]),
        grid(&["YYII", "YIII", "IYII"]),
    ];
    Ok(Family { kernel, proof: verify_ks_proof(&ids)? })
}

pub fn mermin_square() -> KsProof {
    verify_ks_proof(&[
        grid(&["ZI", "IX", "ZX"]),
        grid(&["IZ", "XI", "XZ"]),
        grid(&["ZZ", "XX", "YY"]),
        grid(&["ZI", "IZ", "ZZ"]),
        grid(&["IX", "XI", "XX"]),
        grid(&["ZX", "XZ", "YY"]),
    ])
    .expect("the Mermin square")
}

pub fn mermin_kernel() -> Kernel {
    verify_kernel(&[grid(&["ZZ", "XX", "YY"]), grid(&["ZX", "XZ", "YY"])]).expect("2-qubit kernel")
}

pub fn ghz_kernel() -> Kernel {
    verify_kernel(&[grid(&["ZZZ", "ZXX", "XZX", "XXZ"])]).expect("GHZ kernel")
}

/// A 3-qubit square on the 2-qubit Kernel `{IZZ, IYY, IXX}`, `{IYY, IZX,
/// IXZ}` (qubit 0 trivial in both). The four free cells are the first words
/// (in mask order) that close the square and carry qubit 0.
///
/// Every line holds exactly one Kernel observable, so the four free cells
/// share their qubit-0 letter and deleting qubit 0 leaves the 2-qubit square.
pub fn special_square() -> Result<KsProof, CatalogError> {
    let n = 3;
    let w = |s: &str| -> PauliObservable { s.parse().expect("word") };
    let (c1, c2, c3) = (w("IZZ"), w("IYY"), w("IXX"));
    let (m2, m3) = (w("IZX"), w("IXZ"));
    let mul = |a: &PauliObservable, b: &PauliObservable| {
        PauliObservable::from_masks(n, a.z_mask() ^ b.z_mask(), a.x_mask() ^ b.x_mask()).expect("width")
    };
    let col1 = verify_id(&[c1, c2, c3])?;
    let row2 = verify_id(&[c2, m2, m3])?;
    for z in 0u64..8 {
        for x in 0u64..8 {
            let a = PauliObservable::from_masks(n, z, x)?;
            if a.letter(0) == Letter::I {
                continue;
            }
            let b = mul(&a, &c1);
            let c = mul(&a, &m2);
            let d = mul(&b, &m3);
            let lines = [vec![c1, a, b], vec![c3, c, d], vec![a, m2, c], vec![b, m3, d]];
            let Ok(ids) = lines.iter().map(|l| verify_id(l)).collect::<Result<Vec<_>, _>>() else { continue };
            let mut all = vec![col1.clone(), row2.clone()];
            all.extend(ids);
            let Ok(p) = verify_ks_proof(&all) else { continue };
            if proofs_isomorphic(&p, &mermin_square()) {
                return Ok(p);
            }
        }
    }
    Err(CatalogError::Construction("no special square".into()))
}

// ---------------------------------------------------------------------------
// The 2-qubit Pauli group

/// The 15 commuting triples of 2-qubit observables, all ID3^2s.
pub fn two_qubit_id3s() -> Vec<IdentityProduct> {
    let words: Vec<PauliObservable> = (1u64..16)
        .map(|m| PauliObservable::from_masks(2, m & 3, m >> 2).expect("2-qubit word"))
        .collect();
    let mut out = vec![];
    for i in 0..15 {
        for j in i + 1..15 {
            for k in j + 1..15 {
                let (a, b, c) = (words[i], words[j], words[k]);
                if a.z_mask() ^ b.z_mask() ^ c.z_mask() == 0 && a.x_mask() ^ b.x_mask() ^ c.x_mask() == 0 {
                    if let Ok(id) = verify_id(&[a, b, c]) {
                        out.push(id);
                    }
                }
            }
        }
    }
    out
}

/// The 60 rays and 105 bases generated by all 15 ID3^2s.
pub fn pauli60() -> RbSet {
    rb_set_from_ids(&two_qubit_id3s()).expect("2-qubit rays")
}

/// `k`-subsets of `ids` forming a proof in which every used observable
/// appears exactly twice.
pub fn doubled_subsets(ids: &[IdentityProduct], k: usize) -> Vec<Vec<usize>> {
    fn rec(ids: &[IdentityProduct], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let sel: Vec<IdentityProduct> = cur.iter().map(|&i| ids[i].clone()).collect();
            if let Ok(p) = verify_ks_proof(&sel) {
                if (0..p.observables().len()).all(|o| p.multiplicity(o) == 2) {
                    out.push(cur.clone());
                }
            }
            return;
        }
        for i in start..ids.len() {
            if ids.len() - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(ids, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(ids, k, 0, &mut vec![], &mut out);
    out
}

/// The 2-qubit Whorl: ten ID3^2s covering all 15 observables twice
/// (the first such subset).
pub fn whorl_2() -> KsProof {
    let ids = two_qubit_id3s();
    let sel = doubled_subsets(&ids, 10).into_iter().next().expect("a 15_2-10_3 subset exists");
    verify_ks_proof(&sel.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>()).expect("verified above")
}
