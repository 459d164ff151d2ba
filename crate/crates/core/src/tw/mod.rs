//! Tree decompositions and the dominating-Eulerian-subgraph DP over them.

mod dp;
mod nice;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use dp::{decide_ehc_tw, des_dp, des_dp_profiled, state_bound, DpProfile};
pub use nice::{make_nice, validate_nice, NiceDecomposition, NiceKind, NiceNode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdError {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("tree edges do not form a tree over the bags")]
    NotATree,
    #[error("bag {bag} mentions vertex {vertex} outside the graph")]
    VertexOutOfRange { bag: usize, vertex: usize },
    #[error("vertex {0} appears in no bag")]
    VertexMissing(usize),
    #[error("edge {0} is contained in no bag")]
    EdgeUncovered(usize),
    #[error("bags containing vertex {0} are not connected")]
    DisconnectedOccurrences(usize),
    #[error("invalid nice decomposition: {0}")]
    InvalidNiceDecomposition(String),
    #[error("reconstructed certificate rejected: {0}")]
    Certificate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Each bag sorted ascending.
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Builds the decomposition induced by eliminating vertices in `order`: the
/// bag of `v` is `v` plus its neighbours at elimination time, and hangs below
/// the bag of the earliest-eliminated of those neighbours.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
            adj[x].remove(&v);
        }
        match later.iter().map(|&w| pos[w]).min() {
            Some(p) => tree_edges.push((i, p)),
            None => roots.push(i),
        }
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, tree_edges)
}

/// Min-fill elimination ordering (ties toward the lowest vertex id).
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let fill = |v: usize| -> usize {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (a, &x) in nb.iter().enumerate() {
                missing += nb[a + 1..].iter().filter(|&&y| !adj[x].contains(&y)).count();
            }
            missing
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill(v), v))
            .expect("a live vertex remains");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
            adj[x].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    decomposition_from_order(g, &min_fill_order(g))
}

/// Checks the tree shape and the three decomposition axioms.
pub fn check_td(g: &Graph, td: &TreeDecomposition) -> Result<(), TdError> {
    let b = td.bags.len();
    if b == 0 {
        return Err(TdError::NoBags);
    }
    if td.tree_edges.len() != b - 1 || td.tree_edges.iter().any(|&(x, y)| x >= b || y >= b || x == y) {
        return Err(TdError::NotATree);
    }
    let adj = td.adjacency();
    let mut seen = vec![false; b];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(TdError::NotATree);
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return Err(TdError::VertexOutOfRange { bag: i, vertex: v });
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| holders[v].is_empty()) {
        return Err(TdError::VertexMissing(v));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !holders[u].iter().any(|&i| td.bags[i].binary_search(&v).is_ok()) {
            return Err(TdError::EdgeUncovered(e));
        }
    }
    let mut inside = vec![false; b];
    for (v, hold) in holders.iter().enumerate() {
        for &i in hold {
            inside[i] = true;
        }
        let mut reached = 1;
        let mut stack = vec![hold[0]];
        let mut mark = vec![false; b];
        mark[hold[0]] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if inside[y] && !mark[y] {
                    mark[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        for &i in hold {
            inside[i] = false;
        }
        if reached != hold.len() {
            return Err(TdError::DisconnectedOccurrences(v));
        }
    }
    Ok(())
}

pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> bool {
    check_td(g, td).is_ok()
}
