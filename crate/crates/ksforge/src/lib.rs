//! Identity products, kernels and Kochen-Specker parity proofs in the
//! N-qubit Pauli group, plus the 600-cell ray system and pentagon
//! inequalities.

pub mod budget;
pub mod catalog;
pub mod pauli_core;
pub mod pentagon;
pub mod id_engine;
pub mod kernel_engine;
pub mod proof_engine;
pub mod ray_engine;
pub mod search_engine;
pub mod symbol;
pub mod textio;
