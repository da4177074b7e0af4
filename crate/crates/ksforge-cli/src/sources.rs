//! Where structures come from: a text file or a catalog name.

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use ksforge::catalog::{cell600, named, pauli60};
use ksforge::id_engine::IdentityProduct;
use ksforge::proof_engine::{verify_ks_proof, KsProof};
use ksforge::ray_engine::{generate_rb_set, RbSet};
use ksforge::textio::parse_id_blocks;

use crate::Failure;

#[derive(Args, Debug, Clone)]
pub struct IdSource {
    /// Text file of IDs (blank-line separated blocks, `#` comments).
    pub file: Option<PathBuf>,
    /// Use a built-in structure instead (see `catalog list`).
    #[arg(long, conflicts_with = "file")]
    pub catalog: Option<String>,
}

impl IdSource {
    pub fn label(&self) -> String {
        match (&self.catalog, &self.file) {
            (Some(c), _) => c.clone(),
            (None, Some(f)) => f.display().to_string(),
            (None, None) => "-".into(),
        }
    }

    pub fn load(&self) -> Result<Vec<IdentityProduct>, Failure> {
        match (&self.catalog, &self.file) {
            (Some(name), _) => Ok(named(name).map_err(|e| Failure::Usage(e.to_string()))?.ids()),
            (None, Some(path)) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                parse_id_blocks(&text).map_err(|e| Failure::Invalid(e.to_string()))
            }
            (None, None) => Err(Failure::Usage("give a FILE or --catalog NAME".into())),
        }
    }

    pub fn proof(&self) -> Result<KsProof, Failure> {
        verify_ks_proof(&self.load()?).map_err(|e| Failure::Invalid(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinSet {
    /// The 60 rays and 105 bases of the 2-qubit Pauli group.
    Pauli60,
    /// The 60 rays and 75 bases of the 600-cell.
    Cell600,
}

#[derive(Args, Debug, Clone)]
pub struct SetSource {
    #[command(flatten)]
    pub ids: IdSource,
    /// A built-in ray set instead of a proof.
    #[arg(long, conflicts_with_all = ["file", "catalog"])]
    pub set: Option<BuiltinSet>,
}

/// Rays and bases to search, with the generating proof when there is one.
pub struct RaySet {
    pub label: String,
    pub n_rays: usize,
    pub bases: Vec<Vec<usize>>,
    pub rb: Option<RbSet>,
    pub proof: Option<KsProof>,
}

impl SetSource {
    pub fn load(&self) -> Result<RaySet, Failure> {
        match self.set {
            Some(BuiltinSet::Pauli60) => Ok(from_rb("pauli60".into(), pauli60(), None)),
            Some(BuiltinSet::Cell600) => {
                let c = cell600();
                Ok(RaySet {
                    label: "cell600".into(),
                    n_rays: c.rays.len(),
                    bases: c.bases.iter().map(|b| b.to_vec()).collect(),
                    rb: None,
                    proof: None,
                })
            }
            None => {
                let proof = self.ids.proof()?;
                let rb = generate_rb_set(&proof).map_err(|e| Failure::Usage(e.to_string()))?;
                Ok(from_rb(self.ids.label(), rb, Some(proof)))
            }
        }
    }
}

fn from_rb(label: String, rb: RbSet, proof: Option<KsProof>) -> RaySet {
    RaySet {
        label,
        n_rays: rb.rays.len(),
        bases: rb.bases.iter().map(|b| b.rays.clone()).collect(),
        rb: Some(rb),
        proof,
    }
}
