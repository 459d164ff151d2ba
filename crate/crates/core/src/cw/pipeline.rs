//! Expression in, answer out: rewrite, evaluate, decompose, run the DP.

use super::rewrite::{eliminate_big_joins_traced, eliminate_gradual_bicliques_traced, RewriteRecord};
use super::{CwError, CwExpr, CwOp};
use crate::graph::Graph;
use crate::oracle::{exact_treewidth_small, smallest_excluded_biclique, DEFAULT_BICLIQUE_BUDGET, DEFAULT_TREEWIDTH_CAP};
use crate::tw::{decide_ehc_tw, min_fill_decomposition};

#[derive(Debug, Clone)]
pub struct PipelineReport {
    /// Label budget of the input expression.
    pub k: usize,
    pub original: CwExpr,
    pub after_big_joins: CwExpr,
    pub after_bicliques: CwExpr,
    pub original_graph: Graph,
    pub final_graph: Graph,
    /// Edges of the original, post-big-join and final graphs.
    pub edge_counts: [usize; 3],
    pub big_join_rewrites: Vec<RewriteRecord>,
    pub gradual_rewrites: Vec<RewriteRecord>,
    pub decomposition_width: usize,
    /// Only computed when the final graph has at most 15 vertices.
    pub exact_treewidth: Option<usize>,
    /// Smallest `t` with no `K_{t,t}` in the final graph, same size limit.
    pub biclique_t: Option<usize>,
    pub answer: bool,
}

impl PipelineReport {
    /// `3 (k + 4) t`, when `t` is known.
    pub fn gw_bound(&self) -> Option<usize> {
        self.biclique_t.map(|t| 3 * (self.k + 4) * t)
    }

    pub fn rewrites(&self) -> impl Iterator<Item = &RewriteRecord> {
        self.big_join_rewrites.iter().chain(&self.gradual_rewrites)
    }

    /// Multi-line `key: value` summary.
    pub fn to_text(&self) -> String {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let mut out = String::new();
        out += &format!("answer: {}\n", if self.answer { "yes" } else { "no" });
        out += &format!("budget: {} -> {} -> {}\n", self.k, self.after_big_joins.k, self.after_bicliques.k);
        out += &format!(
            "edges: {} -> {} -> {}\n",
            self.edge_counts[0], self.edge_counts[1], self.edge_counts[2]
        );
        out += &format!("vertices: {} -> {}\n", self.original_graph.n(), self.final_graph.n());
        for r in self.rewrites() {
            out += &format!(
                "rewrite: {:?} |A|={} |B|={} edges {} -> {}\n",
                r.stage, r.a_size, r.b_size, r.edges_before, r.edges_after
            );
        }
        out += &format!("decomposition width: {}\n", self.decomposition_width);
        out += &format!("exact treewidth: {}\n", opt(self.exact_treewidth));
        out += &format!("biclique t: {}\n", opt(self.biclique_t));
        out += &format!("gw bound: {}\n", opt(self.gw_bound()));
        out
    }
}

/// Decides whether the graph of `e` has an edge-Hamiltonian cycle.
pub fn decide_ehc_cw(e: &CwExpr) -> Result<(bool, PipelineReport), CwError> {
    let original_graph = e.eval()?.graph;
    let (after_big_joins, big_join_rewrites) = eliminate_big_joins_traced(e);
    let mid = after_big_joins.eval()?.graph.m();
    let (after_bicliques, gradual_rewrites) = eliminate_gradual_bicliques_traced(&after_big_joins);
    let final_graph = after_bicliques.eval()?.graph;

    let small = final_graph.n() <= DEFAULT_TREEWIDTH_CAP;
    let (td, exact_treewidth) = if small {
        let exact = exact_treewidth_small(&final_graph, DEFAULT_TREEWIDTH_CAP)?;
        (exact.decomposition(&final_graph), Some(exact.width))
    } else {
        (min_fill_decomposition(&final_graph), None)
    };
    let biclique_t = if small {
        Some(smallest_excluded_biclique(&final_graph, DEFAULT_BICLIQUE_BUDGET)?)
    } else {
        None
    };
    let answer = decide_ehc_tw(&final_graph, &td)?;
    let report = PipelineReport {
        k: e.k,
        original: e.clone(),
        edge_counts: [original_graph.m(), mid, final_graph.m()],
        after_big_joins,
        after_bicliques,
        original_graph,
        final_graph,
        big_join_rewrites,
        gradual_rewrites,
        decomposition_width: td.width(),
        exact_treewidth,
        biclique_t,
        answer,
    };
    Ok((answer, report))
}

/// Expression for the graph of `e` plus a path `u - x - y - v` through two
/// fresh vertices, using labels `k + 1` and `k + 2`. Vertex ids follow the
/// new expression's intro order, so `x` directly follows `u` and `y` follows `v`.
pub fn ehp_gadget_expr(e: &CwExpr, u: usize, v: usize) -> Result<CwExpr, CwError> {
    e.validate()?;
    let intros: Vec<usize> = e.post_order().into_iter().filter(|&x| matches!(e.nodes[x], CwOp::Intro(_))).collect();
    let n = intros.len();
    if u == v || u >= n || v >= n {
        return Err(CwError::PreconditionViolated(format!("gadget needs distinct vertices below {n}, got {u} and {v}")));
    }
    let (lx, ly) = (e.k + 1, e.k + 2);
    let mut out = e.clone();
    out.k = e.k + 2;
    for (vertex, fresh) in [(u, lx), (v, ly)] {
        let node = intros[vertex];
        let CwOp::Intro(l) = out.nodes[node] else { unreachable!() };
        let own = out.push(CwOp::Intro(l));
        let extra = out.push(CwOp::Intro(fresh));
        let both = out.push(CwOp::Union(own, extra));
        out.nodes[node] = CwOp::Join {
            a: l,
            b: fresh,
            child: both,
        };
    }
    let root = out.root;
    out.push_root(CwOp::Join { a: lx, b: ly, child: root });
    out.compact();
    Ok(out)
}

/// Edge-Hamiltonian path through the cycle pipeline on gadget expressions.
pub fn decide_ehp_cw(e: &CwExpr) -> Result<bool, CwError> {
    let g = e.eval()?.graph;
    if g.m() == 0 {
        return Ok(true);
    }
    let used: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
    for (i, &u) in used.iter().enumerate() {
        for &v in &used[i + 1..] {
            if decide_ehc_cw(&ehp_gadget_expr(e, u, v)?)?.0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
