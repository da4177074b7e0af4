//! Built-in structures: named Kernels and proofs, the generated families,
//! the 600-cell and graph-state IDs.

pub mod cell600;
pub mod families;
pub mod graph;
pub mod kite;

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::budget::Budget;
use crate::id_engine::{enumerate_ids, IdError, IdFilter, IdentityProduct};
use crate::kernel_engine::{verify_kernel, Kernel, KernelError};
use crate::pauli_core::PauliError;
use crate::proof_engine::{generate_compact_proof, KsProof, ProofError};
use crate::ray_engine::generate_rb_set;

pub use cell600::{cell600, orthogonal_cliques, Cell600, GoldenNumber, RealRay4};
pub use families::{
    doubled_subsets, ghz_kernel, mermin_kernel, mermin_square, partial_id4, pauli60, pinwheel, saw, special_square,
    star, star_kernel, two_qubit_id3s, wheel, whorl, whorl_2, windmill, Family,
};
pub use graph::{
    connected_graphs_4, graph_state_id, partition_by_content, stabilizer_scan, stabilizer_words, Graph, StabilizerScan,
};
pub use kite::{
    kite_family, kite_from_partial, kite_nine_basis_proof, kite_with_tail, nine_basis_flips, nine_basis_proof,
    nine_basis_replicas, Kite, KiteVariant, NineBasisProof,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown structure {0:?}")]
    UnknownName(String),
    #[error("no {family} with N = {n}")]
    Parity { family: &'static str, n: usize },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Id(#[from] IdError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Debug)]
pub enum Structure {
    Id(IdentityProduct),
    Kernel(Kernel),
    Proof(KsProof),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Id(_) => "id",
            Structure::Kernel(_) => "kernel",
            Structure::Proof(_) => "proof",
        }
    }

    /// The IDs making up the structure.
    pub fn ids(&self) -> Vec<IdentityProduct> {
        match self {
            Structure::Id(id) => vec![id.clone()],
            Structure::Kernel(k) => k.ids().to_vec(),
            Structure::Proof(p) => p.ids().to_vec(),
        }
    }

    pub fn as_proof(&self) -> Option<&KsProof> {
        match self {
            Structure::Proof(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NameInfo {
    pub name: &'static str,
    pub kind: &'static str,
    pub description: &'static str,
}

const fn info(name: &'static str, kind: &'static str, description: &'static str) -> NameInfo {
    NameInfo { name, kind, description }
}

pub const NAMES: &[NameInfo] = &[
    info("mermin_square", "proof", "2-qubit Mermin square, 9_2 - 6_3"),
    info("mermin_kernel", "kernel", "2-qubit Kernel: ID3^2 and its transposed partner"),
    info("whorl_2", "proof", "2-qubit Whorl, 15_2 - 10_3"),
    info("ghz_kernel", "kernel", "3-qubit single-ID Kernel of the Mermin star"),
    info("mermin_star", "proof", "Mermin star, 10_2 - 5_4"),
    info("kite_3_kernel", "kernel", "3-qubit Kite Kernel"),
    info("kite_3", "proof", "3-qubit Kite, 10_2 - 2_4 4_3"),
    info("wheel_3_kernel", "kernel", "3-qubit Wheel Kernel"),
    info("wheel_3", "proof", "3-qubit Wheel, 9_2 - 6_3"),
    info("wheel_3_expanded", "proof", "expanded 3-qubit Wheel, 18_2 - 12_3"),
    info("special_square", "proof", "3-qubit square isomorphic to the Mermin square"),
    info("q4_id_a", "id", "critical ID4^4"),
    info("q4_id_b", "id", "critical ID4^4"),
    info("q4_id_c", "id", "critical ID5^4, whole"),
    info("q4_id_d", "id", "critical ID5^4"),
    info("q4_id_e", "id", "critical ID5^4"),
    info("q4_id_f", "id", "critical ID5^4"),
    info("q4_id_g", "id", "critical ID5^4"),
    info("q4_id_h", "id", "critical ID5^4"),
    info("q4_id_i", "id", "critical ID5^4"),
    info("star_4", "proof", "4-qubit Star, 12_2 - 1_5 4_4 1_3"),
    info("whorl_4", "proof", "4-qubit Whorl, 20_2 - 1_4 12_3"),
    info("whorl_4_expanded", "proof", "expanded 4-qubit Whorl, 24_2 - 16_3"),
    info("windmill_4", "proof", "4-qubit Windmill, 13_2 - 5_4 2_3"),
    info("saw_4", "proof", "Saw, 17_2 - 4_4 6_3"),
    info("pinwheel_6", "proof", "Pinwheel, 16_2 - 5_4 4_3"),
    info("star_5", "proof", "5-qubit Star, 16_2 - 2_6 5_4"),
    info("star_6", "proof", "6-qubit Star, 16_2 - 1_7 4_4 3_3"),
    info("wheel_5", "proof", "5-qubit Wheel, 15_2 - 3_5 5_3"),
    info("whorl_6", "proof", "6-qubit Whorl, 30_2 - 1_6 18_3"),
    info("alt_star_5", "proof", "alternate 5-qubit Star, 12_2 - 1_5 4_4 1_3"),
    info("arch_6", "proof", "6-qubit Arch, 11_2 - 1_5 2_4 3_3"),
    info("arrow_6", "proof", "6-qubit Arrow, 13_2 - 2_5 4_4"),
];

const Q4_IDS: [[&str; 5]; 9] = [
    ["ZZZZ", "XXXX", "YIZX", "IYXZ", ""],
    ["ZZZI", "XXIZ", "YIXX", "IYYY", ""],
    ["ZZZZ", "ZZXX", "XXII", "XIZX", "IXXZ"],
    ["ZZZZ", "XXZZ", "YIXI", "IYIX", "IIXX"],
    ["ZZZZ", "XIXI", "YIZX", "IXXZ", "IYIX"],
    ["ZZZI", "XXIZ", "YIXX", "IYXX", "IIZZ"],
    ["ZZZI", "XXZZ", "YZXX", "IZIX", "IYXZ"],
    ["ZZZI", "XXIZ", "YZXZ", "IZZX", "IYXX"],
    ["ZZZI", "ZXXZ", "ZYXX", "XXZZ", "YXIX"],
];

/// The nine unique critical 4-qubit IDs.
pub fn q4_ids() -> Vec<IdentityProduct> {
    Q4_IDS.iter().map(|rows| families::grid(&rows.iter().copied().filter(|r| !r.is_empty()).collect::<Vec<_>>())).collect()
}

/// Proofs generated from the whole ID5^5 and the two whole ID5^6s, tagged
/// by their ray-basis totals.
fn whole_id_proofs(n: usize) -> Result<Vec<(KsProof, (usize, usize))>, CatalogError> {
    let filter = IdFilter { whole_only: true, critical_only: true, ..IdFilter::default() };
    let search = enumerate_ids(5, n, filter, Budget::UNLIMITED);
    search
        .unique
        .iter()
        .map(|id| {
            let kernel = verify_kernel(std::slice::from_ref(id))?;
            let proof = generate_compact_proof(&kernel, Budget::seconds(60.0))?;
            let rb = generate_rb_set(&proof).map_err(|e| CatalogError::Construction(e.to_string()))?;
            Ok((proof, rb.symbol.totals()))
        })
        .collect()
}

fn whole_id_proof(n: usize, totals: (usize, usize)) -> Result<KsProof, CatalogError> {
    static FIVE: OnceLock<Vec<(KsProof, (usize, usize))>> = OnceLock::new();
    static SIX: OnceLock<Vec<(KsProof, (usize, usize))>> = OnceLock::new();
    let cell = if n == 5 { &FIVE } else { &SIX };
    if cell.get().is_none() {
        let v = whole_id_proofs(n)?;
        let _ = cell.set(v);
    }
    cell.get()
        .expect("initialised")
        .iter()
        .find(|(_, t)| *t == totals)
        .map(|(p, _)| p.clone())
        .ok_or_else(|| CatalogError::Construction(format!("no whole ID5^{n} proof with a {}-{} set", totals.0, totals.1)))
}

pub fn named(name: &str) -> Result<Structure, CatalogError> {
    use Structure::*;
    let proof = |f: Family| Proof(f.proof);
    Ok(match name {
        "mermin_square" => Proof(mermin_square()),
        "mermin_kernel" => Kernel(mermin_kernel()),
        "whorl_2" => Proof(whorl_2()),
        "ghz_kernel" => Kernel(ghz_kernel()),
        "mermin_star" => proof(star(3)?),
        "kite_3_kernel" => Kernel(kite_family(KiteVariant::OddNp1, 3)?.kernel),
        "kite_3" => Proof(kite_family(KiteVariant::OddNp1, 3)?.proof),
        "wheel_3_kernel" => Kernel(wheel(3, 0)?.kernel),
        "wheel_3" => proof(wheel(3, 0)?),
        "wheel_3_expanded" => proof(wheel(3, 3)?),
        "special_square" => Proof(special_square()?),
        "star_4" => proof(star(4)?),
        "whorl_4" => proof(whorl(4, false)?),
        "whorl_4_expanded" => proof(whorl(4, true)?),
        "windmill_4" => proof(windmill()?),
        "saw_4" => proof(saw()?),
        "pinwheel_6" => proof(pinwheel()?),
        "star_5" => proof(star(5)?),
        "star_6" => proof(star(6)?),
        "wheel_5" => proof(wheel(5, 0)?),
        "whorl_6" => proof(whorl(6, false)?),
        "alt_star_5" => Proof(whole_id_proof(5, (52, 30))?),
        "arch_6" => Proof(whole_id_proof(6, (44, 28))?),
        "arrow_6" => Proof(whole_id_proof(6, (64, 32))?),
        _ => match name.strip_prefix("q4_id_").and_then(|s| s.chars().next().filter(|_| s.len() == 1)) {
            Some(c @ 'a'..='i') => Id(q4_ids().swap_remove(c as usize - 'a' as usize)),
            _ => return Err(CatalogError::UnknownName(name.to_string())),
        },
    })
}
