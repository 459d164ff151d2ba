//! Certificates and their validators: edge permutations for the path/cycle
//! problems and dominating Eulerian subgraphs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSystem, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Path,
    Cycle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Path => "path",
            Mode::Cycle => "cycle",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "path" => Ok(Mode::Path),
            "cycle" => Ok(Mode::Cycle),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A claimed edge-Hamiltonian path or cycle: an ordering of all edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSeq {
    pub order: Vec<usize>,
    pub mode: Mode,
}

impl EdgeSeq {
    pub fn path(order: Vec<usize>) -> Self {
        EdgeSeq { order, mode: Mode::Path }
    }

    pub fn cycle(order: Vec<usize>) -> Self {
        EdgeSeq { order, mode: Mode::Cycle }
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        EdgeSeq { order, mode: self.mode }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("edge order is not a permutation of 0..{m}")]
pub struct NotAPermutation {
    pub m: usize,
}

pub fn is_permutation(order: &[usize], m: usize) -> bool {
    if order.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &e in order {
        if e >= m || seen[e] {
            return false;
        }
        seen[e] = true;
    }
    true
}

/// Whether consecutive edges of `order` pairwise intersect (and, for a cycle,
/// the last and first as well). Sequences of length ≤ 1 always pass; a cycle of
/// length 2 passes iff its two edges intersect.
pub fn is_edge_walk<G: EdgeSystem + ?Sized>(g: &G, order: &[usize], mode: Mode) -> bool {
    if order.windows(2).any(|w| !g.edges_share(w[0], w[1])) {
        return false;
    }
    if mode == Mode::Cycle && order.len() > 2 {
        return g.edges_share(order[order.len() - 1], order[0]);
    }
    true
}

pub fn validate_edge_sequence<G: EdgeSystem + ?Sized>(g: &G, s: &EdgeSeq) -> Result<bool, NotAPermutation> {
    let m = g.edge_count();
    if !is_permutation(&s.order, m) {
        return Err(NotAPermutation { m });
    }
    Ok(is_edge_walk(g, &s.order, s.mode))
}

/// A dominating Eulerian subgraph: vertex set `v0` and edge set `e0`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DesSolution {
    pub v0: BTreeSet<usize>,
    pub e0: BTreeSet<usize>,
}

impl DesSolution {
    /// The solution spanned by an edge set: `v0` is the set of endpoints.
    pub fn from_edges(g: &Graph, edges: impl IntoIterator<Item = usize>) -> Self {
        let e0: BTreeSet<usize> = edges.into_iter().collect();
        let v0 = e0
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edge(e);
                [u, v]
            })
            .collect();
        DesSolution { v0, e0 }
    }

    pub fn single_vertex(v: usize) -> Self {
        DesSolution {
            v0: BTreeSet::from([v]),
            e0: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesViolation {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} has no endpoint in the vertex set")]
    NotACover(usize),
    #[error("an empty edge set requires exactly one vertex, got {0}")]
    EmptyNeedsSingleVertex(usize),
    #[error("vertex set differs from the endpoints of the edge set")]
    VertexSetMismatch,
    #[error("vertex {0} has odd degree")]
    OddDegree(usize),
    #[error("subgraph is disconnected")]
    Disconnected,
}

pub fn check_des(g: &Graph, d: &DesSolution) -> Result<(), DesViolation> {
    if let Some(&v) = d.v0.iter().find(|&&v| v >= g.n()) {
        return Err(DesViolation::VertexOutOfRange(v));
    }
    if let Some(&e) = d.e0.iter().find(|&&e| e >= g.m()) {
        return Err(DesViolation::EdgeOutOfRange(e));
    }
    if let Some(e) = (0..g.m()).find(|&e| {
        let (u, v) = g.edge(e);
        !d.v0.contains(&u) && !d.v0.contains(&v)
    }) {
        return Err(DesViolation::NotACover(e));
    }
    if d.e0.is_empty() {
        return match d.v0.len() {
            1 => Ok(()),
            k => Err(DesViolation::EmptyNeedsSingleVertex(k)),
        };
    }
    let mut degree = vec![0usize; g.n()];
    for &e in &d.e0 {
        let (u, v) = g.edge(e);
        degree[u] += 1;
        degree[v] += 1;
    }
    let spanned: BTreeSet<usize> = (0..g.n()).filter(|&v| degree[v] > 0).collect();
    if spanned != d.v0 {
        return Err(DesViolation::VertexSetMismatch);
    }
    if let Some(v) = spanned.iter().copied().find(|&v| degree[v] % 2 == 1) {
        return Err(DesViolation::OddDegree(v));
    }
    let (sub, _) = g.edge_subgraph(|e| d.e0.contains(&e));
    let verts: Vec<usize> = spanned.into_iter().collect();
    if !sub.is_connected_on(&verts) {
        return Err(DesViolation::Disconnected);
    }
    Ok(())
}

pub fn validate_des(g: &Graph, d: &DesSolution) -> bool {
    check_des(g, d).is_ok()
}
