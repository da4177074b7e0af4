//! Graph-state IDs: generators `A_i = X_i Π_{j∈N(i)} Z_j` plus their product,
//! and a scan of the stabilizer group for critical IDs.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget::Budget;
use crate::id_engine::{canonicalize_id, is_critical_id, verify_id, CanonicalKey, IdentityProduct};
use crate::pauli_core::PauliObservable;

use super::CatalogError;

pub const MAX_GRAPH_VERTICES: usize = 6;

/// Simple undirected graph on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, CatalogError> {
        if n < 2 || n > MAX_GRAPH_VERTICES {
            return Err(CatalogError::OutOfRange(format!("graphs have 2..={MAX_GRAPH_VERTICES} vertices, got {n}")));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(CatalogError::Construction(format!("bad edge ({a}, {b})")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set.into_iter().collect() })
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.edges.iter().fold(0, |m, &(a, b)| {
            if a == v {
                m | 1 << b
            } else if b == v {
                m | 1 << a
            } else {
                m
            }
        })
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in 0..self.n {
                if frontier >> v & 1 == 1 {
                    next |= self.neighbours(v);
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    pub fn generator(&self, v: usize) -> PauliObservable {
        PauliObservable::from_masks(self.n, self.neighbours(v), 1 << v).expect("n <= 6")
    }
}

/// The connected 4-vertex graphs, up to isomorphism.
pub fn connected_graphs_4() -> Vec<(&'static str, Graph)> {
    let g = |e: &[(usize, usize)]| Graph::new(4, e).expect("static graph");
    vec![
        ("path", g(&[(0, 1), (1, 2), (2, 3)])),
        ("star", g(&[(0, 1), (0, 2), (0, 3)])),
        ("cycle", g(&[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("paw", g(&[(0, 1), (1, 2), (2, 0), (2, 3)])),
        ("diamond", g(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])),
        ("complete", g(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
    ]
}

/// `ID(N+1)^N`: the N generators followed by their product.
pub fn graph_state_id(graph: &Graph) -> Result<IdentityProduct, CatalogError> {
    if !graph.is_connected() {
        return Err(CatalogError::Disconnected);
    }
    let mut rows: Vec<PauliObservable> = (0..graph.n).map(|v| graph.generator(v)).collect();
    let (z, x) = rows.iter().fold((0, 0), |(z, x), r| (z ^ r.z_mask(), x ^ r.x_mask()));
    rows.push(PauliObservable::from_masks(graph.n, z, x)?);
    Ok(verify_id(&rows)?)
}

/// The `2^N − 1` nontrivial stabilizer words (sign dropped).
pub fn stabilizer_words(graph: &Graph) -> Vec<PauliObservable> {
    let gens: Vec<PauliObservable> = (0..graph.n).map(|v| graph.generator(v)).collect();
    (1u64..1 << graph.n)
        .map(|s| {
            let (z, x) = (0..graph.n)
                .filter(|&v| s >> v & 1 == 1)
                .fold((0, 0), |(z, x), v| (z ^ gens[v].z_mask(), x ^ gens[v].x_mask()));
            PauliObservable::from_masks(graph.n, z, x).expect("n <= 6")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerScan {
    /// One representative per unique type, keyed canonically.
    pub types: Vec<(CanonicalKey, IdentityProduct)>,
    pub candidates: u64,
    pub truncated: bool,
}

impl StabilizerScan {
    pub fn keys(&self) -> BTreeSet<CanonicalKey> {
        self.types.iter().map(|(k, _)| k.clone()).collect()
    }
}

/// Critical IDs with full qubit support made of at most `max_rows`
/// stabilizer words.
pub fn stabilizer_scan(graph: &Graph, max_rows: usize, budget: Budget) -> Result<StabilizerScan, CatalogError> {
    if !graph.is_connected() {
        return Err(CatalogError::Disconnected);
    }
    let words = stabilizer_words(graph);
    let full = (1u64 << graph.n) - 1;
    let index_of = |w: (u64, u64)| words.iter().position(|p| (p.z_mask(), p.x_mask()) == w);
    let mut meter = budget.meter();
    let mut found = std::collections::BTreeMap::new();
    let mut candidates = 0u64;
    let mut truncated = false;
    // Choose rows in increasing index order; the last row is forced by the
    // zero-product condition on the masks.
    let mut stack: Vec<usize> = vec![];
    fn rec(
        start: usize,
        stack: &mut Vec<usize>,
        ctx: &mut dyn FnMut(&[usize]) -> bool,
        len: usize,
        max_rows: usize,
    ) -> bool {
        if !ctx(stack) {
            return false;
        }
        if stack.len() + 1 >= max_rows {
            return true;
        }
        for i in start..len {
            stack.push(i);
            let ok = rec(i + 1, stack, ctx, len, max_rows);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut visit = |sel: &[usize]| -> bool {
        if !meter.tick() {
            truncated = true;
            return false;
        }
        if sel.len() < 2 {
            return true;
        }
        let (z, x) = sel.iter().fold((0, 0), |(z, x), &i| (z ^ words[i].z_mask(), x ^ words[i].x_mask()));
        let Some(last) = index_of((z, x)) else { return true };
        if last <= *sel.last().expect("nonempty") {
            return true;
        }
        let mut rows: Vec<PauliObservable> = sel.iter().map(|&i| words[i]).collect();
        rows.push(words[last]);
        if rows.iter().fold(0, |s, r| s | r.support()) != full {
            return true;
        }
        candidates += 1;
        if let Ok(id) = verify_id(&rows) {
            if is_critical_id(&id) {
                found.entry(canonicalize_id(&id)).or_insert(id);
            }
        }
        true
    };
    rec(0, &mut stack, &mut visit, words.len(), max_rows);
    Ok(StabilizerScan { types: found.into_iter().collect(), candidates, truncated })
}

/// Partition graphs by the set of critical-ID types in their stabilizers.
pub fn partition_by_content(scans: &[StabilizerScan]) -> Vec<Vec<usize>> {
    let mut classes: Vec<(BTreeSet<CanonicalKey>, Vec<usize>)> = vec![];
    for (i, s) in scans.iter().enumerate() {
        let k = s.keys();
        match classes.iter_mut().find(|(c, _)| *c == k) {
            Some((_, members)) => members.push(i),
            None => classes.push((k, vec![i])),
        }
    }
    classes.into_iter().map(|(_, m)| m).collect()
}
