//! Edge kernel for Edge Hamiltonian Path parameterized by vertex cover, and
//! lifting of kernel certificates back to the input graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::{is_edge_walk, is_permutation, EdgeSeq, Mode};
use crate::graph::Graph;
use crate::typing::{classify_types, insertion_point, normalize_order, TypeAssignment, TypingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("the given set is not a vertex cover")]
    NotAVertexCover,
    #[error("edge {0} does not contain the cover vertex of its type")]
    EdgeNotIncidentToItsType(usize),
    #[error("kernel certificate is not an edge-Hamiltonian path of the kernel")]
    InvalidKernelCertificate,
    #[error("no place to reinsert edge {edge} of type {ty}")]
    NoLargeGroup { edge: usize, ty: usize },
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error(transparent)]
    Typing(#[from] TypingError),
}

/// Greedy maximal matching in edge order; both ends of each matched edge.
pub fn two_approx_vc(g: &Graph) -> Vec<usize> {
    let mut taken = vec![false; g.n()];
    for &(u, v) in g.edges() {
        if !taken[u] && !taken[v] {
            taken[u] = true;
            taken[v] = true;
        }
    }
    (0..g.n()).filter(|&v| taken[v]).collect()
}

/// Current adjacency during kernelization.
struct Live {
    adj: Vec<BTreeSet<usize>>,
    type_count: Vec<usize>,
    in_cover: Vec<bool>,
}

impl Live {
    fn new(g: &Graph, t: &TypeAssignment) -> Self {
        let mut in_cover = vec![false; g.n()];
        for &u in &t.hitting_set {
            in_cover[u] = true;
        }
        Live {
            adj: (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect(),
            type_count: t.counts(),
            in_cover,
        }
    }

    fn applies(&self, t: &TypeAssignment, ty: usize, hub: usize, w: usize) -> bool {
        let k = t.k();
        if self.in_cover[w] || self.type_count[ty] < k + 1 {
            return false;
        }
        self.adj[w]
            .iter()
            .filter(|&&uj| self.in_cover[uj] && uj != hub)
            .all(|&uj| {
                let common = self.adj[hub]
                    .intersection(&self.adj[uj])
                    .filter(|&&x| !self.in_cover[x])
                    .count();
                common > 4 * k
            })
    }
}

fn split_edge(g: &Graph, t: &TypeAssignment, e: usize) -> Result<(usize, usize, usize), KernelError> {
    let ty = t.type_of[e];
    let hub = t.hub(ty);
    let (a, b) = g.edge(e);
    let w = match hub {
        h if h == a => b,
        h if h == b => a,
        _ => return Err(KernelError::EdgeNotIncidentToItsType(e)),
    };
    Ok((ty, hub, w))
}

/// Whether the reduction rule may delete edge `e = (u_i, w)` of type `i`:
/// `w` is outside the cover, type `i` has at least `k + 1` edges, and every
/// other cover vertex adjacent to `w` shares more than `4k` non-cover
/// neighbours with `u_i`.
pub fn rule_applies(g: &Graph, t: &TypeAssignment, e: usize) -> Result<bool, KernelError> {
    let (ty, hub, w) = split_edge(g, t, e)?;
    Ok(Live::new(g, t).applies(t, ty, hub, w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deletion {
    /// Index in the original graph.
    pub edge: usize,
    pub endpoints: (usize, usize),
    pub ty: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTrace {
    pub original: Graph,
    pub vertex_cover: Vec<usize>,
    pub deletions: Vec<Deletion>,
    pub kernel: Graph,
    /// Original index of each kernel edge.
    pub kept: Vec<usize>,
}

impl KernelTrace {
    pub fn k(&self) -> usize {
        self.vertex_cover.len()
    }

    /// Per type, the number of kernel edges of that type with an end outside the cover.
    pub fn outside_counts(&self) -> Result<Vec<usize>, KernelError> {
        let t = classify_types(&self.original, &self.vertex_cover)?;
        let mut in_cover = vec![false; self.original.n()];
        for &u in &self.vertex_cover {
            in_cover[u] = true;
        }
        let mut counts = vec![0; self.k()];
        for &e in &self.kept {
            let (a, b) = self.original.edge(e);
            if !in_cover[a] || !in_cover[b] {
                counts[t.type_of[e]] += 1;
            }
        }
        Ok(counts)
    }

    /// `4k³ + k(k−1)/2`.
    pub fn edge_bound(&self) -> usize {
        let k = self.k();
        4 * k * k * k + k * k.saturating_sub(1) / 2
    }

    pub fn within_bounds(&self) -> Result<bool, KernelError> {
        let k = self.k();
        let per_type = self.outside_counts()?.iter().all(|&c| c <= 4 * k * k);
        Ok(per_type && self.kernel.m() <= self.edge_bound())
    }

    /// Checks that replaying the deletions on the original yields the kernel.
    pub fn check_consistency(&self) -> Result<(), KernelError> {
        let bad = |m: &str| Err(KernelError::MalformedTrace(m.to_string()));
        let mut alive = vec![true; self.original.m()];
        for d in &self.deletions {
            if d.edge >= alive.len() || !alive[d.edge] || self.original.edge(d.edge) != d.endpoints {
                return bad("deletion does not match an edge of the original graph");
            }
            alive[d.edge] = false;
        }
        let kept: Vec<usize> = (0..alive.len()).filter(|&e| alive[e]).collect();
        if kept != self.kept {
            return bad("kept edges do not match the deletions");
        }
        if self.kernel.n() != self.original.n()
            || self.kernel.edges() != kept.iter().map(|&e| self.original.edge(e)).collect::<Vec<_>>()
        {
            return bad("kernel graph does not match the kept edges");
        }
        Ok(())
    }
}

/// Applies the reduction rule to the lowest-index applicable edge until none
/// applies. Deletions only shrink type counts and neighbourhoods, so an edge
/// rejected once stays rejected and a single pass reaches the same fixpoint as
/// restarting the scan after every deletion.
pub fn kernelize(g: &Graph, cover: &[usize]) -> Result<KernelTrace, KernelError> {
    if cover.iter().any(|&u| u >= g.n()) || !g.is_vertex_cover(cover) {
        return Err(KernelError::NotAVertexCover);
    }
    let t = classify_types(g, cover)?;
    let mut live = Live::new(g, &t);
    let mut deletions = Vec::new();
    for e in 0..g.m() {
        let (ty, hub, w) = split_edge(g, &t, e)?;
        if live.applies(&t, ty, hub, w) {
            live.adj[hub].remove(&w);
            live.adj[w].remove(&hub);
            live.type_count[ty] -= 1;
            deletions.push(Deletion {
                edge: e,
                endpoints: g.edge(e),
                ty,
            });
        }
    }
    let mut alive = vec![true; g.m()];
    for d in &deletions {
        alive[d.edge] = false;
    }
    let (kernel, kept) = g.edge_subgraph(|e| alive[e]);
    Ok(KernelTrace {
        original: g.clone(),
        vertex_cover: cover.to_vec(),
        deletions,
        kernel,
        kept,
    })
}

/// Turns an edge-Hamiltonian path of the kernel into one of the original
/// graph by reinserting deleted edges in reverse order, each next to an edge of
/// its own type after normalizing the current path.
pub fn lift_certificate(trace: &KernelTrace, kernel_path: &EdgeSeq) -> Result<EdgeSeq, KernelError> {
    trace.check_consistency()?;
    let kernel = &trace.kernel;
    if !is_permutation(&kernel_path.order, kernel.m()) || !is_edge_walk(kernel, &kernel_path.order, Mode::Path) {
        return Err(KernelError::InvalidKernelCertificate);
    }
    let g = &trace.original;
    let t = classify_types(g, &trace.vertex_cover)?;
    let ty = |e: usize| t.type_of[e];
    let mut order: Vec<usize> = kernel_path.order.iter().map(|&e| trace.kept[e]).collect();
    for d in trace.deletions.iter().rev() {
        normalize_order(&mut order, ty);
        let at = insertion_point(&order, ty, d.ty).ok_or(KernelError::NoLargeGroup { edge: d.edge, ty: d.ty })?;
        order.insert(at, d.edge);
    }
    debug_assert!(is_edge_walk(g, &order, Mode::Path));
    Ok(EdgeSeq::path(order))
}
