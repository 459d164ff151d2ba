//! Gadgets converting between the path and cycle variants.
//!
//! Fresh vertices go after the original ones and gadget edges after the
//! original edges, so original indices stay valid in the gadget graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::Mode;
use crate::graph::Graph;
use crate::tw::TreeDecomposition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("gadget endpoints must differ (got {0} twice)")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchor {
    Pair(usize, usize),
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetTrace {
    pub base_vertex_count: usize,
    pub added_vertices: Vec<usize>,
    pub added_edges: Vec<usize>,
    pub anchor: Anchor,
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), TransformError> {
    if v >= g.n() {
        return Err(TransformError::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

fn extend(g: &Graph, fresh: usize, extra: &[(usize, usize)], anchor: Anchor) -> (Graph, GadgetTrace) {
    let n = g.n();
    let h = Graph::new(n + fresh, g.edges().iter().copied().chain(extra.iter().copied()))
        .expect("gadget edges touch fresh vertices only");
    let trace = GadgetTrace {
        base_vertex_count: n,
        added_vertices: (n..n + fresh).collect(),
        added_edges: (g.m()..g.m() + extra.len()).collect(),
        anchor,
    };
    (h, trace)
}

/// `g` plus the path `u–x–y–v`: an edge-Hamiltonian cycle of the result is an
/// edge-Hamiltonian path of `g` running from an edge at `u` to an edge at `v`.
pub fn ehp_to_ehc_gadget(g: &Graph, u: usize, v: usize) -> Result<(Graph, GadgetTrace), TransformError> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v {
        return Err(TransformError::SameVertex(u));
    }
    let (x, y) = (g.n(), g.n() + 1);
    Ok(extend(g, 2, &[(u, x), (x, y), (y, v)], Anchor::Pair(u, v)))
}

/// `g` plus two pendant paths `u–a–b` and `u–c–d`.
pub fn ehc_to_ehp_gadget(g: &Graph, u: usize) -> Result<(Graph, GadgetTrace), TransformError> {
    check_vertex(g, u)?;
    let n = g.n();
    let (a, b, c, d) = (n, n + 1, n + 2, n + 3);
    Ok(extend(g, 4, &[(u, a), (a, b), (u, c), (c, d)], Anchor::Vertex(u)))
}

impl GadgetTrace {
    /// Extends a decomposition of the base graph to one of the gadget graph.
    /// The pendant gadget keeps the width (or raises it to 1); the path gadget
    /// adds at most one.
    pub fn extend_td(&self, td: &TreeDecomposition) -> TreeDecomposition {
        let mut bags = td.bags.clone();
        let mut tree_edges = td.tree_edges.clone();
        let holding = |bags: &[Vec<usize>], v: usize| {
            bags.iter()
                .position(|b| b.binary_search(&v).is_ok())
                .expect("every vertex lies in a bag")
        };
        let mut attach = |bags: &mut Vec<Vec<usize>>, at: usize, mut bag: Vec<usize>| {
            bag.sort_unstable();
            bags.push(bag);
            tree_edges.push((at, bags.len() - 1));
            bags.len() - 1
        };
        let fresh = &self.added_vertices;
        match self.anchor {
            Anchor::Vertex(u) => {
                let at = holding(&bags, u);
                let a = attach(&mut bags, at, vec![u, fresh[0]]);
                attach(&mut bags, a, vec![fresh[0], fresh[1]]);
                let c = attach(&mut bags, at, vec![u, fresh[2]]);
                attach(&mut bags, c, vec![fresh[2], fresh[3]]);
            }
            Anchor::Pair(u, v) => {
                let (x, y) = (fresh[0], fresh[1]);
                let (bu, bv) = (holding(&bags, u), holding(&bags, v));
                for b in tree_path(td, bu, bv) {
                    let at = bags[b].binary_search(&y).unwrap_err();
                    bags[b].insert(at, y);
                }
                attach(&mut bags, bu, vec![u, x, y]);
            }
        }
        TreeDecomposition { bags, tree_edges }
    }
}

/// Bag indices on the tree path from `from` to `to`, inclusive.
fn tree_path(td: &TreeDecomposition, from: usize, to: usize) -> Vec<usize> {
    let adj = td.adjacency();
    let mut prev = vec![usize::MAX; td.bags.len()];
    prev[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut x = to;
    while x != from {
        x = prev[x];
        path.push(x);
    }
    path
}

/// Decides `want` on `g` by running `inner`, a decision procedure for the
/// opposite variant, on every gadget graph. Stops at the first yes.
///
/// The edgeless graph is a yes-instance of both variants and is answered
/// directly: it has no pair of distinct edge endpoints to anchor a path gadget.
pub fn decide_via_transform<E>(
    g: &Graph,
    want: Mode,
    mut inner: impl FnMut(&Graph) -> Result<bool, E>,
) -> Result<bool, E> {
    if g.m() == 0 {
        return Ok(true);
    }
    match want {
        Mode::Path => {
            for u in 0..g.n() {
                for v in (0..g.n()).filter(|&v| v != u) {
                    let (h, _) = ehp_to_ehc_gadget(g, u, v).expect("valid anchors");
                    if inner(&h)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        Mode::Cycle => {
            for u in 0..g.n() {
                let (h, _) = ehc_to_ehp_gadget(g, u).expect("valid anchor");
                if inner(&h)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
