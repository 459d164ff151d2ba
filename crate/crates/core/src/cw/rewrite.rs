//! Big-join elimination and gradual-biclique elimination.

use std::ops::Range;

use super::reduce::{ReductionSite, Stage};
use super::{CwExpr, CwOp, SPLICE_MIN};
use crate::cert::DesSolution;
use crate::graph::Graph;

/// One fired rewrite. Vertex ids in `site`, `before` and `after` are those of
/// the rewritten expression: the three new vertices sit at `insert_at..insert_at + 3`
/// and older ids from `insert_at` on moved up by three.
#[derive(Debug, Clone)]
pub struct RewriteRecord {
    pub stage: Stage,
    pub a_size: usize,
    pub b_size: usize,
    pub edges_before: usize,
    pub edges_after: usize,
    pub insert_at: usize,
    pub site: ReductionSite,
    /// The graph before the rewrite, renumbered, with `C` isolated.
    pub before: Graph,
    pub after: Graph,
}

impl RewriteRecord {
    /// New id of a vertex of the graph before the rewrite.
    pub fn map_old(&self, v: usize) -> usize {
        if v >= self.insert_at {
            v + 3
        } else {
            v
        }
    }

    /// Moves a solution of the unrenumbered pre-rewrite graph onto `before`.
    /// Edge indices are shared, so only the vertex ids change.
    pub fn embed(&self, sol: &DesSolution) -> DesSolution {
        if sol.e0.is_empty() {
            DesSolution::single_vertex(self.map_old(sol.v0.iter().next().copied().unwrap_or(0)))
        } else {
            DesSolution::from_edges(&self.before, sol.e0.iter().copied())
        }
    }
}

fn renumbered(g: &Graph, insert_at: usize) -> Graph {
    let map = |v: usize| if v >= insert_at { v + 3 } else { v };
    Graph::new(g.n() + 3, g.edges().iter().map(|&(u, v)| (map(u), map(v)))).expect("renumbering keeps simplicity")
}

struct Site {
    node: usize,
    range: Range<usize>,
    a: Vec<usize>,
    b: Vec<usize>,
    label: usize,
}

/// Joins whose two label classes both have at least [`SPLICE_MIN`] vertices:
/// `(node, |class a|, |class b|)`.
pub fn big_joins(e: &CwExpr) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let _ = e.eval_with(|view| {
        if let CwOp::Join { a, b, .. } = e.nodes[view.node] {
            let ca = view.labels.iter().filter(|&&l| l == a).count();
            let cb = view.labels.iter().filter(|&&l| l == b).count();
            if ca >= SPLICE_MIN && cb >= SPLICE_MIN {
                out.push((view.node, ca, cb));
            }
        }
    });
    out
}

fn first_big_join(e: &CwExpr) -> Option<Site> {
    let mut found = None;
    e.eval_with(|view| {
        if found.is_some() {
            return;
        }
        if let CwOp::Join { a, b, .. } = e.nodes[view.node] {
            let class = |l: usize| -> Vec<usize> { view.range.clone().filter(|&v| view.labels[v - view.range.start] == l).collect() };
            let (ca, cb) = (class(a), class(b));
            if ca.len() >= SPLICE_MIN && cb.len() >= SPLICE_MIN {
                found = Some(Site {
                    node: view.node,
                    range: view.range.clone(),
                    a: ca,
                    b: cb,
                    label: a,
                });
            }
        }
    })
    .expect("expression validated by caller");
    found
}

/// Rewrites every join whose classes both have at least 7 vertices; the
/// output uses labels up to `k + 2`. Redundant joins are dropped first so
/// that each rewrite removes its whole biclique.
pub fn eliminate_big_joins(e: &CwExpr) -> CwExpr {
    eliminate_big_joins_traced(e).0
}

/// Removes joins that add no pair another join does not also add. Leaves the
/// graph unchanged; afterwards every edge comes from exactly one join.
pub fn drop_redundant_joins(e: &CwExpr) -> CwExpr {
    let mut cur = e.clone();
    cur.compact();
    let m = cur.eval().expect("input expression must be valid").graph.m();
    let mut x = 0;
    while x < cur.nodes.len() {
        if let CwOp::Join { child, .. } = cur.nodes[x] {
            let mut trial = cur.clone();
            trial.splice(x, |_, _| child);
            if trial.eval().expect("dropping a join keeps validity").graph.m() == m {
                // Compaction keeps post-order, so everything before `x` is already checked.
                cur = trial;
                continue;
            }
        }
        x += 1;
    }
    cur
}

pub fn eliminate_big_joins_traced(e: &CwExpr) -> (CwExpr, Vec<RewriteRecord>) {
    let k = e.k;
    let (work, dead) = (k + 1, k + 2);
    let mut cur = drop_redundant_joins(e);
    cur.k = k + 2;
    let mut records = Vec::new();
    let mut g = cur.eval().expect("input expression must be valid").graph;
    while let Some(site) = first_big_join(&cur) {
        let CwOp::Join { a: i, b: j, child } = cur.nodes[site.node] else {
            unreachable!()
        };
        cur.splice(site.node, |ex, _| {
            let c = three_intros(ex, work);
            let u = ex.push(CwOp::Union(child, c));
            let j1 = ex.push(CwOp::Join { a: i, b: work, child: u });
            let j2 = ex.push(CwOp::Join { a: j, b: work, child: j1 });
            ex.push(CwOp::Rename {
                from: work,
                to: dead,
                child: j2,
            })
        });
        let after = cur.eval().expect("rewrite keeps the expression valid").graph;
        records.push(record(Stage::BigJoin, &g, &after, site.range.end, &site.a, &site.b));
        g = after;
    }
    (cur, records)
}

fn three_intros(ex: &mut CwExpr, label: usize) -> usize {
    let x = ex.push(CwOp::Intro(label));
    let y = ex.push(CwOp::Intro(label));
    let xy = ex.push(CwOp::Union(x, y));
    let z = ex.push(CwOp::Intro(label));
    ex.push(CwOp::Union(xy, z))
}

fn record(stage: Stage, g: &Graph, after: &Graph, insert_at: usize, a: &[usize], b: &[usize]) -> RewriteRecord {
    let map = |v: usize| if v >= insert_at { v + 3 } else { v };
    let mut sa: Vec<usize> = a.iter().map(|&v| map(v)).collect();
    let mut sb: Vec<usize> = b.iter().map(|&v| map(v)).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    RewriteRecord {
        stage,
        a_size: a.len(),
        b_size: b.len(),
        edges_before: g.m(),
        edges_after: after.m(),
        insert_at,
        site: ReductionSite {
            a: sa,
            b: sb,
            c: (insert_at..insert_at + 3).collect(),
            stage,
        },
        before: renumbered(g, insert_at),
        after: after.clone(),
    }
}

fn common_outside(g: &Graph, class: &[usize], range: &Range<usize>) -> Vec<usize> {
    let Some(&first) = class.first() else {
        return Vec::new();
    };
    g.neighbors(first)
        .iter()
        .copied()
        .filter(|v| !range.contains(v) && class[1..].iter().all(|&u| g.has_edge(u, *v)))
        .collect()
}

fn gradual_scan(e: &CwExpr, g: &Graph, first_only: bool) -> Vec<Site> {
    let mut out = Vec::new();
    e.eval_with(|view| {
        if first_only && !out.is_empty() {
            return;
        }
        let mut labels: Vec<usize> = view.labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        for l in labels {
            let class: Vec<usize> = view.range.clone().filter(|&v| view.labels[v - view.range.start] == l).collect();
            if class.len() < SPLICE_MIN {
                continue;
            }
            let b = common_outside(g, &class, &view.range);
            if b.len() >= SPLICE_MIN {
                out.push(Site {
                    node: view.node,
                    range: view.range.clone(),
                    a: class,
                    b,
                    label: l,
                });
                if first_only {
                    return;
                }
            }
        }
    })
    .expect("expression validated by caller");
    out
}

/// Pairs (node, label) whose class has at least 7 vertices and at least 7
/// common neighbours outside the node: `(node, label, |class|, |neighbours|)`.
pub fn gradual_sites(e: &CwExpr) -> Vec<(usize, usize, usize, usize)> {
    let Ok(lg) = e.eval() else {
        return Vec::new();
    };
    gradual_scan(e, &lg.graph, false)
        .into_iter()
        .map(|s| (s.node, s.label, s.a.len(), s.b.len()))
        .collect()
}

/// Replaces each large label class with a large common neighbourhood by three
/// stand-ins; the output uses two labels more than the input.
pub fn eliminate_gradual_bicliques(e: &CwExpr) -> CwExpr {
    eliminate_gradual_bicliques_traced(e).0
}

pub fn eliminate_gradual_bicliques_traced(e: &CwExpr) -> (CwExpr, Vec<RewriteRecord>) {
    let (work, garbage) = (e.k + 1, e.k + 2);
    let mut cur = e.clone();
    cur.k = e.k + 2;
    cur.compact();
    let mut records = Vec::new();
    let mut g = cur.eval().expect("input expression must be valid").graph;
    while let Some(site) = gradual_scan(&cur, &g, true).into_iter().next() {
        let i = site.label;
        cur.splice(site.node, |ex, x| {
            let c = three_intros(ex, work);
            let u = ex.push(CwOp::Union(x, c));
            let j = ex.push(CwOp::Join { a: i, b: work, child: u });
            let r = ex.push(CwOp::Rename {
                from: i,
                to: garbage,
                child: j,
            });
            ex.push(CwOp::Rename {
                from: work,
                to: i,
                child: r,
            })
        });
        let after = cur.eval().expect("splice keeps the expression valid").graph;
        records.push(record(Stage::Gradual, &g, &after, site.range.end, &site.a, &site.b));
        g = after;
    }
    (cur, records)
}
