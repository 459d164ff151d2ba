//! Simple undirected graphs and hypergraphs with indexed edges.
//!
//! Edge identity is the position in the edge list. Every certificate in the
//! crate (edge permutations, Eulerian subgraphs, kernel traces) refers to
//! edges by index, so constructors never reorder edges.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("empty hyperedge at index {0}")]
    EmptyHyperedge(usize),
}

/// Common view over graphs and hypergraphs: a vertex count and a list of
/// edges, each a sorted slice of member vertices.
pub trait EdgeSystem {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn members(&self, e: usize) -> &[usize];

    fn edges_share(&self, e: usize, f: usize) -> bool {
        let (a, b) = (self.members(e), self.members(f));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    fn contains(&self, e: usize, v: usize) -> bool {
        self.members(e).binary_search(&v).is_ok()
    }

    /// A vertex common to edges `e` and `f`, if any (smallest id).
    fn common_vertex(&self, e: usize, f: usize) -> Option<usize> {
        let b = self.members(f);
        self.members(e)
            .iter()
            .copied()
            .find(|v| b.binary_search(v).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    /// Endpoints as supplied by the caller (orientation preserved).
    edges: Vec<(usize, usize)>,
    /// Sorted endpoint pairs, used as member slices.
    sorted: Vec<[usize; 2]>,
    neighbors: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        Graph::new(raw.n, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges,
        }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Graph {
            n,
            edges: Vec::new(),
            sorted: Vec::new(),
            neighbors: vec![Vec::new(); n],
            incident: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        for (u, v) in pairs {
            g.push_edge(u, v)?;
        }
        for list in &mut g.neighbors {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, []).expect("edgeless graph")
    }

    fn push_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let k = key(u, v);
        if self.index.contains_key(&k) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let idx = self.edges.len();
        self.index.insert(k, idx);
        self.edges.push((u, v));
        self.sorted.push([k.0, k.1]);
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.incident[u].push(idx);
        self.incident[v].push(idx);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Indices of edges incident on `v`, in increasing order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    /// The endpoint of `e` other than `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        let mut mark = vec![false; self.n];
        for &v in cover {
            if v < self.n {
                mark[v] = true;
            }
        }
        self.edges.iter().all(|&(u, v)| mark[u] || mark[v])
    }

    /// Same vertex set, keeping only edges for which `keep` holds; edge order
    /// is preserved. Returns the new graph and the original index of each kept edge.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> (Graph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.m()).filter(|&e| keep(e)).collect();
        let g = Graph::new(self.n, kept.iter().map(|&e| self.edges[e])).expect("subgraph of a simple graph");
        (g, kept)
    }

    /// Whether the subgraph induced by `vertices` is connected.
    pub fn is_connected_on(&self, vertices: &[usize]) -> bool {
        if vertices.is_empty() {
            return true;
        }
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![vertices[0]];
        seen[vertices[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == vertices.len()
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.n, self.sorted.iter().map(|e| e.to_vec())).expect("graph edges are valid hyperedges")
    }
}

impl EdgeSystem for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn edge_count(&self) -> usize {
        self.edges.len()
    }
    fn members(&self, e: usize) -> &[usize] {
        &self.sorted[e]
    }
}

/// Hypergraph with an ordered list of non-empty hyperedges. Duplicate
/// hyperedges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self, GraphError> {
        let mut out = Vec::new();
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(GraphError::EmptyHyperedge(i));
            }
            if let Some(&v) = e.last() {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            out.push(e);
        }
        Ok(Hypergraph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }
}

impl EdgeSystem for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn edge_count(&self) -> usize {
        self.edges.len()
    }
    fn members(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }
}

/// Line graph: one vertex per edge of `g`, adjacent iff the edges intersect.
pub fn line_graph<G: EdgeSystem + ?Sized>(g: &G) -> Graph {
    let m = g.edge_count();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if g.edges_share(i, j) {
                pairs.push((i, j));
            }
        }
    }
    Graph::new(m, pairs).expect("line graph is simple")
}
