use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ksforge::budget::Budget;
use ksforge::catalog::{graph_state_id, named, Graph, NAMES};
use ksforge::id_engine::{enumerate_ids, enumerate_unique_sqps, is_critical_id, IdFilter, IdentityProduct};
use ksforge::kernel_engine::{enumerate_cks, is_critical_cks, is_critical_kernel, verify_kernel, Cks};
use ksforge::pentagon::{
    cell600_system, coverage_at_rays, coverage_scan, find_conflict_pentagons, pauli60_system, product_pentagon_maxima,
    RaySystem,
};
use ksforge::proof_engine::{
    alpha_bound, export_dot, generate_compact_proof, generate_proof_from_kernel, generate_wheel_closure, KsProof,
    ALPHA_MAX_OBSERVABLES,
};
use ksforge::search_engine::{
    bases_colorable, classify_proofs, critical_parity_proofs, fast_path_parity, find_parity_proofs_in,
    ray_colorable, ColorOptions, ColorStatus, HistogramRow, OrthoGraph, ParityOptions, ParityProof,
};
use ksforge::symbol::Symbol;
use ksforge::textio::format_id_blocks;

use crate::report::{histogram_table, Outcome, Status};
use crate::sources::{IdSource, RaySet, SetSource};
use crate::{Command, Failure, JobArgs};

pub fn dispatch(cmd: &Command, job: &JobArgs) -> Result<Outcome, Failure> {
    match cmd {
        Command::Ids(c) => ids(c, job),
        Command::Cks(c) => cks(c, job),
        Command::Kernel(c) => kernel(c, job),
        Command::Proof(c) => proof(c),
        Command::Rays(a) => rays(a),
        Command::Parity(c) => parity(c, job),
        Command::Color(a) => color(a, job),
        Command::Catalog(c) => catalog(c),
        Command::Pentagon(c) => pentagon(c),
    }
}

fn blocks_with_headers(ids: &[IdentityProduct]) -> String {
    ids.iter()
        .map(|id| format!("# {}\n{}", id.symbol(), format_id_blocks(std::slice::from_ref(id))))
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------------------------------------------------------------------------
// ids

#[derive(Subcommand, Debug)]
pub enum IdsCmd {
    /// Enumerate IDs with M rows on N qubits, one per canonical class.
    Enumerate {
        #[arg(short = 'M')]
        m: usize,
        #[arg(short = 'N')]
        n: usize,
        /// Critical IDs only.
        #[arg(long)]
        critical: bool,
        /// Whole (oddness 0, negative) IDs only.
        #[arg(long)]
        whole: bool,
        /// Restrict to this oddness.
        #[arg(long)]
        oddness: Option<usize>,
    },
    /// Check every ID in a file.
    Verify(IdSource),
    /// Unique single-qubit products of length M.
    Sqp {
        #[arg(short = 'M')]
        m: usize,
        /// Print them, not just the count.
        #[arg(long)]
        list: bool,
    },
    /// The graph-state ID of a connected graph.
    Graph {
        #[arg(short = 'N')]
        n: usize,
        /// Edges as `a-b` pairs, comma separated (vertices from 0).
        #[arg(long, default_value = "")]
        edges: String,
    },
}

fn ids(c: &IdsCmd, job: &JobArgs) -> Result<Outcome, Failure> {
    match c {
        IdsCmd::Enumerate { m, n, critical, whole, oddness } => {
            if !(3..=16).contains(m) || !(1..=64).contains(n) {
                return Err(Failure::Usage("need 3 <= M <= 16 and 1 <= N <= 64".into()));
            }
            let filter = IdFilter { oddness: *oddness, sign: None, whole_only: *whole, critical_only: *critical };
            let s = enumerate_ids(*m, *n, filter, job.budget());
            let mut text = format!("# M={m} N={n}: {} unique, {} raw\n", s.unique.len(), s.raw.len());
            if s.unique.is_empty() {
                text.push_str("0 results\n");
            } else {
                text.push('\n');
                text.push_str(&blocks_with_headers(&s.unique));
            }
            if s.truncated {
                text.push_str("# truncated by budget\n");
            }
            let j = json!({"m": m, "n": n, "raw_count": s.raw.len(), "unique": s.unique, "truncated": s.truncated, "nodes": s.nodes});
            Ok(Outcome::new("ids enumerate", text, j).truncated_if(s.truncated))
        }
        IdsCmd::Verify(src) => {
            let ids = src.load()?;
            let mut text = String::new();
            let mut rows = vec![];
            for (i, id) in ids.iter().enumerate() {
                let crit = is_critical_id(id);
                let _ = writeln!(
                    text,
                    "{i}: {} {} {:?} critical={crit}",
                    id.symbol(),
                    if id.is_negative() { "negative" } else { "positive" },
                    id.kind()
                );
                rows.push(json!({"id": id, "kind": id.kind(), "critical": crit, "profile": id.profile()}));
            }
            Ok(Outcome::new("ids verify", text, rows))
        }
        IdsCmd::Sqp { m, list } => {
            if !(3..=12).contains(m) {
                return Err(Failure::Usage("need 3 <= M <= 12".into()));
            }
            let sqps = enumerate_unique_sqps(*m);
            let words: Vec<String> = sqps.iter().map(|c| c.iter().map(|l| l.to_char()).collect()).collect();
            let mut text = format!("M={m}: {} unique SQPs\n", sqps.len());
            if *list {
                for w in &words {
                    let _ = writeln!(text, "{w}");
                }
            }
            Ok(Outcome::new("ids sqp", text, json!({"m": m, "count": sqps.len(), "sqps": words})))
        }
        IdsCmd::Graph { n, edges } => {
            let mut list = vec![];
            for e in edges.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                let (a, b) = e
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Failure::Usage(format!("bad edge {e:?}")))?;
                list.push((a, b));
            }
            let g = Graph::new(*n, &list).map_err(|e| Failure::Usage(e.to_string()))?;
            let id = graph_state_id(&g).map_err(|e| Failure::Invalid(e.to_string()))?;
            let text = blocks_with_headers(std::slice::from_ref(&id));
            Ok(Outcome::new("ids graph", text, json!({"graph": g, "id": id, "critical": is_critical_id(&id)})))
        }
    }
}

// ---------------------------------------------------------------------------
// cks

#[derive(Subcommand, Debug)]
pub enum CksCmd {
    /// All critical CKSs on N Odd qubits.
    Enumerate {
        #[arg(short = 'N')]
        n: usize,
    },
    /// Check a CKS given as `O`/`I` rows separated by `/`.
    Verify { rows: String },
}

fn cks(c: &CksCmd, job: &JobArgs) -> Result<Outcome, Failure> {
    match c {
        CksCmd::Enumerate { n } => {
            if !(2..=16).contains(n) {
                return Err(Failure::Usage("need 2 <= N <= 16".into()));
            }
            let s = enumerate_cks(*n, job.budget());
            let rows: Vec<String> = s.items.iter().map(cks_text).collect();
            let mut text = format!("# N={n}: {} critical CKSs\n", s.items.len());
            for r in &rows {
                let _ = writeln!(text, "{r}");
            }
            if s.truncated {
                text.push_str("# truncated by budget\n");
            }
            let j = json!({"n": n, "count": rows.len(), "items": rows, "truncated": s.truncated});
            Ok(Outcome::new("cks enumerate", text, j).truncated_if(s.truncated))
        }
        CksCmd::Verify { rows } => {
            let cks = Cks::parse(rows).map_err(|e| Failure::Invalid(e.to_string()))?;
            let crit = is_critical_cks(&cks);
            let text = format!("{}: {}\n", cks_text(&cks), if crit { "critical" } else { "NOT critical" });
            let out = Outcome::new("cks verify", text, json!({"cks": cks_text(&cks), "critical": crit}));
            Ok(if crit { out } else { out.status(Status::Invalid) })
        }
    }
}

fn cks_text(c: &Cks) -> String {
    (0..c.rows().len()).map(|r| c.row_text(r)).collect::<Vec<_>>().join("/")
}

// ---------------------------------------------------------------------------
// kernel

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Shared portions assigned greedily.
    Greedy,
    /// Fewest new observables (branch and bound, budgeted).
    Compact,
    /// Disjoint transversal rims first.
    Wheel,
}

#[derive(Subcommand, Debug)]
pub enum KernelCmd {
    /// Check that a set of IDs is a Kernel.
    Verify(IdSource),
    /// Complete a Kernel into an observable-based proof.
    Proof {
        #[command(flatten)]
        src: IdSource,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
    },
}

fn kernel(c: &KernelCmd, job: &JobArgs) -> Result<Outcome, Failure> {
    match c {
        KernelCmd::Verify(src) => {
            let k = verify_kernel(&src.load()?).map_err(|e| Failure::Invalid(e.to_string()))?;
            let crit = (k.ids().len() <= 24 && k.n() <= 24).then(|| is_critical_kernel(&k));
            let text = format!(
                "Kernel on {} qubits: {} IDs, {} negative, {:?}, critical={}\n",
                k.n(),
                k.ids().len(),
                k.negative_count(),
                k.kind(),
                crit.map_or("unchecked".to_string(), |c| c.to_string())
            );
            let j = json!({"n": k.n(), "ids": k.ids(), "negative": k.negative_count(), "kind": k.kind(),
                "critical": crit, "profiles": k.profiles(), "strong_ks": k.strong_ks()});
            Ok(Outcome::new("kernel verify", text, j))
        }
        KernelCmd::Proof { src, method } => {
            let k = verify_kernel(&src.load()?).map_err(|e| Failure::Invalid(e.to_string()))?;
            let p = match method {
                Method::Greedy => generate_proof_from_kernel(&k),
                Method::Compact => generate_compact_proof(&k, job.budget()),
                Method::Wheel => generate_wheel_closure(&k),
            }
            .map_err(|e| Failure::Invalid(e.to_string()))?;
            let text = format!("# proof {}\n\n{}", p.symbol(), format_id_blocks(p.ids()));
            let mut out = Outcome::new("kernel proof", text, proof_json(&p));
            out.dot = Some(export_dot(&p));
            Ok(out)
        }
    }
}

fn proof_json(p: &KsProof) -> serde_json::Value {
    json!({"symbol": p.symbol(), "ids": p.ids(), "observables": p.observables().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "negative": p.negative_count()})
}

// ---------------------------------------------------------------------------
// proof

#[derive(Subcommand, Debug)]
pub enum ProofCmd {
    /// Check an observable-based proof and print its symbol.
    Verify(IdSource),
}

fn proof(c: &ProofCmd) -> Result<Outcome, Failure> {
    match c {
        ProofCmd::Verify(src) => {
            let p = src.proof()?;
            let mut text = format!("{}\n", p.symbol());
            let alpha = alpha_bound(&p);
            let _ = writeln!(
                text,
                "IDs {} ({} negative), observables {}; alpha: quantum {}, classical bound {}{}",
                p.ids().len(),
                p.negative_count(),
                p.observables().len(),
                alpha.quantum_value,
                alpha.classical_bound,
                match alpha.brute_force_max {
                    Some(m) => format!(", brute force {m}"),
                    None => format!(", brute force skipped (> {ALPHA_MAX_OBSERVABLES} observables)"),
                }
            );
            let mut j = proof_json(&p);
            j["alpha"] = json!(alpha);
            let mut out = Outcome::new("proof verify", text, j);
            out.dot = Some(export_dot(&p));
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// rays

#[derive(Args, Debug)]
pub struct RaysArgs {
    #[command(flatten)]
    pub src: SetSource,
    /// List every ray signature and basis.
    #[arg(long)]
    pub list: bool,
}

fn set_symbol(set: &RaySet) -> String {
    match &set.rb {
        Some(rb) => rb.symbol.to_string(),
        None => {
            let mut m = vec![0; set.n_rays];
            set.bases.iter().flatten().for_each(|&r| m[r] += 1);
            let rays: Vec<(usize, usize)> = m.iter().map(|&k| (1, k)).collect();
            Symbol::from_rays(&rays, &set.bases.iter().map(|b| b.len()).collect::<Vec<_>>()).to_string()
        }
    }
}

fn rays(a: &RaysArgs) -> Result<Outcome, Failure> {
    let set = a.src.load()?;
    let sym = set_symbol(&set);
    let mut text = format!("{}: {sym}\n", set.label);
    if a.list {
        if let Some(rb) = &set.rb {
            for (i, r) in rb.rays.iter().enumerate() {
                let _ = writeln!(text, "ray {i} rank {}: {}", r.rank(), r.signature_text());
            }
        }
        for (i, b) in set.bases.iter().enumerate() {
            let _ = writeln!(text, "basis {i}: {b:?}");
        }
    }
    let j = json!({"label": set.label, "symbol": sym, "rays": set.n_rays, "bases": set.bases,
        "signatures": set.rb.as_ref().map(|rb| &rb.rays)});
    Ok(Outcome::new("rays", text, j))
}

// ---------------------------------------------------------------------------
// parity

#[derive(Subcommand, Debug)]
pub enum ParityCmd {
    /// Exhaustive (or budgeted) parity-proof search.
    Search {
        #[command(flatten)]
        src: SetSource,
        /// Print the histogram by symbol instead of the proofs.
        #[arg(long)]
        histogram: bool,
        /// Keep only basis-critical proofs.
        #[arg(long)]
        critical: bool,
        /// Stop after this many proofs.
        #[arg(long)]
        max_count: Option<usize>,
        /// Only subsets of at most this many bases.
        #[arg(long)]
        max_bases: Option<usize>,
        /// Save progress here after every block of root bases, and resume from
        /// it if it exists.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Root bases per checkpoint block. A block cut short by the budget
        /// is redone from its start on resume.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        checkpoint_every: u32,
    },
    /// The 2^O construction from complementary hybrid pairs.
    Fastpath {
        #[command(flatten)]
        src: IdSource,
        #[arg(long)]
        histogram: bool,
        /// Generate only the first L proofs (the count is still reported).
        #[arg(long)]
        limit: Option<u64>,
    },
}

const CHECKPOINT_SCHEMA: &str = "ksforge-checkpoint/1";

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    schema: String,
    source: String,
    n_bases: usize,
    max_bases: Option<usize>,
    next_root: usize,
    nodes: u64,
    proofs: Vec<Vec<u32>>,
}

fn load_checkpoint(path: &Path, set: &RaySet, max_bases: Option<usize>) -> Result<Option<Checkpoint>, Failure> {
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let c: Checkpoint =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if c.schema != CHECKPOINT_SCHEMA || c.source != set.label || c.n_bases != set.bases.len() || c.max_bases != max_bases {
        return Err(Failure::Usage(format!("{} belongs to a different search", path.display())));
    }
    Ok(Some(c))
}

fn save_checkpoint(path: &Path, c: &Checkpoint) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(c).expect("json"))
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Remaining budget after `used` nodes and the time since `start`.
fn remaining(b: Budget, start: Instant, used: u64) -> Budget {
    Budget {
        max_nodes: b.max_nodes.map(|n| n.saturating_sub(used).max(1)),
        wall: b.wall.map(|w| w.saturating_sub(start.elapsed()).max(Duration::from_millis(1))),
    }
}

fn histogram_rows(set: &RaySet, proofs: &[ParityProof]) -> Vec<HistogramRow> {
    match &set.rb {
        Some(rb) => classify_proofs(rb, proofs),
        None => {
            let mut map: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
            for p in proofs {
                let mut m = vec![0; set.n_rays];
                for &b in &p.bases {
                    set.bases[b as usize].iter().for_each(|&r| m[r] += 1);
                }
                let rays: Vec<(usize, usize)> = m.iter().filter(|&&k| k > 0).map(|&k| (1, k)).collect();
                let sizes: Vec<usize> = p.bases.iter().map(|&b| set.bases[b as usize].len()).collect();
                let s = Symbol::from_rays(&rays, &sizes);
                let (r, b) = s.totals();
                *map.entry((r, b, s.to_string())).or_default() += 1;
            }
            map.into_iter()
                .map(|((r, b, e), count)| HistogramRow { compact: format!("{r}-{b}"), expanded: e, count })
                .collect()
        }
    }
}

fn proofs_report(command: &'static str, set: &RaySet, proofs: &[ParityProof], histogram: bool, extra: serde_json::Value) -> Outcome {
    let rows = histogram_rows(set, proofs);
    let mut text = format!("{}: {} parity proofs\n", set.label, proofs.len());
    if histogram {
        text.push_str(&histogram_table(&rows));
    } else if proofs.is_empty() {
        text.push_str("0 results\n");
    } else {
        for p in proofs {
            let _ = writeln!(text, "{}", p.bases.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "));
        }
    }
    let mut j = json!({"label": set.label, "count": proofs.len(), "histogram": rows});
    if !histogram {
        j["proofs"] = json!(proofs.iter().map(|p| &p.bases).collect::<Vec<_>>());
    }
    if let serde_json::Value::Object(m) = extra {
        for (k, v) in m {
            j[k] = v;
        }
    }
    Outcome::new(command, text, j)
}

fn parity(c: &ParityCmd, job: &JobArgs) -> Result<Outcome, Failure> {
    match c {
        ParityCmd::Search { src, histogram, critical, max_count, max_bases, checkpoint, checkpoint_every } => {
            let set = src.load()?;
            let budget = job.budget();
            let start = Instant::now();
            let nb = set.bases.len();
            let mut truncated = false;
            let (mut proofs, nodes);
            match checkpoint {
                None => {
                    let opts = ParityOptions { max_bases: *max_bases, max_count: *max_count, budget, ..Default::default() };
                    let s = find_parity_proofs_in(set.n_rays, &set.bases, opts);
                    truncated = s.partial && max_count.is_none_or(|m| s.proofs.len() < m);
                    proofs = s.proofs;
                    nodes = s.nodes;
                }
                Some(path) => {
                    let mut ck = load_checkpoint(path, &set, *max_bases)?.unwrap_or(Checkpoint {
                        schema: CHECKPOINT_SCHEMA.into(),
                        source: set.label.clone(),
                        n_bases: nb,
                        max_bases: *max_bases,
                        next_root: 0,
                        nodes: 0,
                        proofs: vec![],
                    });
                    let resumed_nodes = ck.nodes;
                    while ck.next_root < nb && max_count.is_none_or(|m| ck.proofs.len() < m) {
                        let hi = (ck.next_root + *checkpoint_every as usize).min(nb);
                        let opts = ParityOptions {
                            max_bases: *max_bases,
                            roots: Some((ck.next_root, hi)),
                            budget: remaining(budget, start, ck.nodes - resumed_nodes),
                            ..Default::default()
                        };
                        let s = find_parity_proofs_in(set.n_rays, &set.bases, opts);
                        if s.partial {
                            // the unfinished block is redone on resume
                            truncated = true;
                            save_checkpoint(path, &ck)?;
                            break;
                        }
                        ck.proofs.extend(s.proofs.into_iter().map(|p| p.bases));
                        ck.nodes += s.nodes;
                        ck.next_root = hi;
                        save_checkpoint(path, &ck)?;
                    }
                    proofs = ck.proofs.into_iter().map(ParityProof::new).collect();
                    if let Some(m) = max_count {
                        proofs.truncate(*m);
                    }
                    nodes = ck.nodes;
                }
            }
            if *critical {
                let Some(rb) = &set.rb else {
                    return Err(Failure::Usage("--critical needs a proof-generated set".into()));
                };
                proofs = critical_parity_proofs(rb, &proofs);
            }
            let out = proofs_report("parity search", &set, &proofs, *histogram, json!({"truncated": truncated, "nodes": nodes}));
            Ok(out.truncated_if(truncated))
        }
        ParityCmd::Fastpath { src, histogram, limit } => {
            let set = SetSource { ids: src.clone(), set: None }.load()?;
            let (rb, p) = (set.rb.as_ref().expect("proof set"), set.proof.as_ref().expect("proof set"));
            let fp = fast_path_parity(rb, p, *limit).map_err(|e| Failure::Invalid(e.to_string()))?;
            let mut out = proofs_report(
                "parity fastpath",
                &set,
                &fp.proofs,
                *histogram,
                json!({"pairs": fp.pairs, "total": fp.total}),
            );
            out.text = format!("{} complementary pairs, 2^{} = {} proofs\n{}", fp.pairs, fp.pairs, fp.total, out.text);
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// color

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[command(flatten)]
    pub src: SetSource,
    /// Colour rays of the orthogonality graph (every clique of full rank is
    /// a basis) rather than the listed bases.
    #[arg(long)]
    pub rays: bool,
}

fn color(a: &ColorArgs, job: &JobArgs) -> Result<Outcome, Failure> {
    let set = a.src.load()?;
    let opts = ColorOptions { all: false, budget: job.budget() };
    let v = if a.rays {
        let rb = set.rb.as_ref().ok_or_else(|| Failure::Usage("--rays needs a proof-generated set".into()))?;
        ray_colorable(&OrthoGraph::from_rb_set(rb), opts)
    } else {
        bases_colorable(set.n_rays, &set.bases, opts)
    };
    let word = match v.status {
        ColorStatus::Colorable => "COLORABLE",
        ColorStatus::Uncolorable => "UNCOLORABLE",
        ColorStatus::Unknown => "UNKNOWN (budget exhausted)",
    };
    let mut text = format!("{}: {word}\n", set.label);
    if let Some(w) = v.witnesses.first() {
        let _ = writeln!(text, "rays assigned 1: {w:?}");
    }
    Ok(Outcome::new("color", text, &v).truncated_if(v.status == ColorStatus::Unknown))
}

// ---------------------------------------------------------------------------
// catalog

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// Names of the built-in structures.
    List,
    /// Print a structure as re-readable text.
    Emit { name: String },
}

fn catalog(c: &CatalogCmd) -> Result<Outcome, Failure> {
    match c {
        CatalogCmd::List => {
            let w = NAMES.iter().map(|n| n.name.len()).max().unwrap_or(0);
            let text = NAMES.iter().map(|n| format!("{:<w$}  {:<6}  {}\n", n.name, n.kind, n.description)).collect();
            Ok(Outcome::new("catalog list", text, NAMES))
        }
        CatalogCmd::Emit { name } => {
            let s = named(name).map_err(|e| Failure::Usage(e.to_string()))?;
            let ids = s.ids();
            let desc = NAMES.iter().find(|n| n.name == name).map_or("", |n| n.description);
            let text = format!("# {name} ({}): {desc}\n\n{}", s.kind(), format_id_blocks(&ids));
            let mut out = Outcome::new("catalog emit", text, json!({"name": name, "kind": s.kind(), "ids": ids}));
            if let Some(p) = s.as_proof() {
                out.dot = Some(export_dot(p));
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// pentagon

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PentagonSet {
    Cell600,
    Pauli60,
}

#[derive(Subcommand, Debug)]
pub enum PentagonCmd {
    /// Conflict pentagons by largest eigenvalue.
    Scan {
        #[arg(long, value_enum)]
        set: PentagonSet,
    },
    /// `min over states of max over pentagons of ⟨Σ⟩`. Real sets scan a
    /// (φ, θ1, θ2) mesh; complex sets are evaluated at their own rays.
    Coverage {
        #[arg(long, value_enum, default_value_t = PentagonSet::Cell600)]
        set: PentagonSet,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        /// Rescan the 100 lowest cells at a tenth of the step.
        #[arg(long)]
        refine: bool,
    },
    /// Maximum of `⟨00|Σ|00⟩` over product-state pentagons.
    Product {
        #[arg(long, default_value_t = 24)]
        grid: usize,
    },
}

fn system(s: PentagonSet) -> Result<RaySystem, Failure> {
    match s {
        PentagonSet::Cell600 => Ok(cell600_system()),
        PentagonSet::Pauli60 => pauli60_system().map_err(|e| Failure::Invalid(e.to_string())),
    }
}

fn pentagon(c: &PentagonCmd) -> Result<Outcome, Failure> {
    match c {
        PentagonCmd::Scan { set } => {
            let sys = system(*set)?;
            let census = find_conflict_pentagons(&sys).map_err(|e| Failure::Invalid(e.to_string()))?;
            let mut text = format!(
                "{}: {} conflict pentagons ({} distinct operators)\n",
                sys.name,
                census.pentagons.len(),
                census.distinct_operators
            );
            for k in &census.classes {
                let _ = writeln!(text, "  {:>6} @ {:.4}", k.count, k.sigma_max);
            }
            let j = json!({"set": sys.name, "total": census.pentagons.len(), "classes": census.classes,
                "distinct_operators": census.distinct_operators, "rejected_rings": census.rejected});
            Ok(Outcome::new("pentagon scan", text, j))
        }
        PentagonCmd::Coverage { set, step, refine } => {
            let sys = system(*set)?;
            let census = find_conflict_pentagons(&sys).map_err(|e| Failure::Invalid(e.to_string()))?;
            if sys.is_real() {
                let r = coverage_scan(&sys, &census.pentagons, *step, *refine).map_err(|e| Failure::Usage(e.to_string()))?;
                let mut text = format!(
                    "{}: {} mesh points at step {}; min V = {:.6} at (φ, θ1, θ2) = ({:.4}, {:.4}, {:.4})\n",
                    sys.name, r.points, r.step, r.min.v, r.min.phi, r.min.theta1, r.min.theta2
                );
                if let Some(f) = r.refined {
                    let _ = writeln!(text, "refined min V = {:.6} at ({:.5}, {:.5}, {:.5})", f.v, f.phi, f.theta1, f.theta2);
                }
                let _ = writeln!(text, "covered: {}", r.refined.unwrap_or(r.min).v > 2.0);
                Ok(Outcome::new("pentagon coverage", text, &r))
            } else {
                let at = coverage_at_rays(&sys, &census.pentagons);
                let worst = at.iter().copied().fold(f64::INFINITY, f64::min);
                let text = format!(
                    "{}: max over pentagons of ⟨Σ⟩ at each of the {} rays: min {:.9}, max {:.9}; covered: {}\n",
                    sys.name,
                    at.len(),
                    worst,
                    at.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    worst > 2.0 + 1e-9
                );
                Ok(Outcome::new("pentagon coverage", text, json!({"set": sys.name, "at_rays": at})))
            }
        }
        PentagonCmd::Product { grid } => {
            if *grid < 2 {
                return Err(Failure::Usage("--grid must be at least 2".into()));
            }
            let m = product_pentagon_maxima(*grid);
            let text = format!(
                "product pentagon maxima: {:.9} {:.9} {:.9}; global {:.9}\n",
                m[0],
                m[1],
                m[2],
                m.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            );
            Ok(Outcome::new("pentagon product", text, json!({"configurations": m})))
        }
    }
}
