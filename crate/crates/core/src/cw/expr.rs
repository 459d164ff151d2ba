use std::collections::HashSet;
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CwError;
use crate::graph::Graph;
use crate::rng::stream_rng;

/// Labels are 1-based, `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CwOp {
    Intro(usize),
    Union(usize, usize),
    Rename { from: usize, to: usize, child: usize },
    Join { a: usize, b: usize, child: usize },
}

impl CwOp {
    pub fn children(&self) -> Vec<usize> {
        match *self {
            CwOp::Intro(_) => Vec::new(),
            CwOp::Union(l, r) => vec![l, r],
            CwOp::Rename { child, .. } | CwOp::Join { child, .. } => vec![child],
        }
    }
}

/// A clique-width expression stored as an arena. Equality compares the trees,
/// not the arena layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CwExpr {
    pub k: usize,
    pub nodes: Vec<CwOp>,
    pub root: usize,
}

impl PartialEq for CwExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.k != other.k {
            return false;
        }
        let mut stack = vec![(self.root, other.root)];
        while let Some((x, y)) = stack.pop() {
            let (Some(a), Some(b)) = (self.nodes.get(x), other.nodes.get(y)) else {
                return false;
            };
            match (*a, *b) {
                (CwOp::Intro(l), CwOp::Intro(m)) if l == m => {}
                (CwOp::Union(l1, r1), CwOp::Union(l2, r2)) => {
                    stack.push((l1, l2));
                    stack.push((r1, r2));
                }
                (CwOp::Rename { from, to, child }, CwOp::Rename { from: f, to: t, child: c }) if from == f && to == t => {
                    stack.push((child, c))
                }
                (CwOp::Join { a, b, child }, CwOp::Join { a: a2, b: b2, child: c }) if a == a2 && b == b2 => {
                    stack.push((child, c))
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for CwExpr {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// Label of each vertex after the whole expression.
    pub labels: Vec<usize>,
}

/// What the evaluator reports after finishing a node.
pub struct NodeView<'a> {
    pub node: usize,
    /// Vertex ids created inside the node's subtree.
    pub range: Range<usize>,
    /// Current labels of those vertices.
    pub labels: &'a [usize],
}

impl CwExpr {
    /// Single-node expression.
    pub fn intro(k: usize, label: usize) -> Self {
        CwExpr {
            k,
            nodes: vec![CwOp::Intro(label)],
            root: 0,
        }
    }

    pub fn push(&mut self, op: CwOp) -> usize {
        self.nodes.push(op);
        self.nodes.len() - 1
    }

    /// Pushes `op` and makes it the root.
    pub fn push_root(&mut self, op: CwOp) -> usize {
        self.root = self.push(op);
        self.root
    }

    /// Adds `other` next to this expression's root under a union.
    pub fn union_with(mut self, other: &CwExpr) -> Self {
        let offset = self.nodes.len();
        self.nodes.extend(other.nodes.iter().map(|op| shift(*op, offset)));
        let l = self.root;
        self.push_root(CwOp::Union(l, other.root + offset));
        self
    }

    pub fn rename(mut self, from: usize, to: usize) -> Self {
        let child = self.root;
        self.push_root(CwOp::Rename { from, to, child });
        self
    }

    pub fn join(mut self, a: usize, b: usize) -> Self {
        let child = self.root;
        self.push_root(CwOp::Join { a, b, child });
        self
    }

    /// Reachable nodes, children before parents, left subtree first.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
                continue;
            }
            stack.push((x, true));
            for c in self.nodes[x].children().into_iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for x in self.post_order() {
            for c in self.nodes[x].children() {
                parent[c] = Some(x);
            }
        }
        parent
    }

    /// Rebuilds the arena with only reachable nodes, in post-order.
    pub fn compact(&mut self) {
        let order = self.post_order();
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let nodes = order
            .iter()
            .map(|&x| match self.nodes[x] {
                CwOp::Intro(l) => CwOp::Intro(l),
                CwOp::Union(l, r) => CwOp::Union(new_id[l], new_id[r]),
                CwOp::Rename { from, to, child } => CwOp::Rename {
                    from,
                    to,
                    child: new_id[child],
                },
                CwOp::Join { a, b, child } => CwOp::Join {
                    a,
                    b,
                    child: new_id[child],
                },
            })
            .collect();
        self.nodes = nodes;
        self.root = order.len() - 1;
    }

    /// Replaces the subtree at `x` by `wrap(x)` in place.
    pub(crate) fn splice(&mut self, x: usize, wrap: impl FnOnce(&mut Self, usize) -> usize) {
        let parent = self.parents()[x];
        let top = wrap(self, x);
        match parent {
            None => self.root = top,
            Some(p) => {
                self.nodes[p] = match self.nodes[p] {
                    CwOp::Union(l, r) => CwOp::Union(if l == x { top } else { l }, if r == x { top } else { r }),
                    CwOp::Rename { from, to, .. } => CwOp::Rename { from, to, child: top },
                    CwOp::Join { a, b, .. } => CwOp::Join { a, b, child: top },
                    CwOp::Intro(_) => unreachable!("intro has no children"),
                }
            }
        }
        self.compact();
    }

    /// Checks arena shape, labels and joins.
    pub fn validate(&self) -> Result<(), CwError> {
        let bad = |msg: &str| Err(CwError::Malformed(msg.to_string()));
        if self.root >= self.nodes.len() {
            return bad("root out of range");
        }
        let mut indegree = vec![0usize; self.nodes.len()];
        for op in &self.nodes {
            for c in op.children() {
                match indegree.get_mut(c) {
                    Some(d) => *d += 1,
                    None => return bad("child out of range"),
                }
            }
        }
        if indegree[self.root] != 0 || indegree.iter().any(|&d| d > 1) {
            return bad("nodes do not form a tree");
        }
        // With in-degrees at most one, a walk from the root cannot revisit a node.
        let mut seen = 0;
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            seen += 1;
            if seen > self.nodes.len() {
                return bad("cycle");
            }
            stack.extend(self.nodes[x].children());
        }
        let label_ok = |l: usize| (1..=self.k).contains(&l);
        for op in &self.nodes {
            match *op {
                CwOp::Intro(l) if !label_ok(l) => return Err(CwError::LabelOutOfBudget { label: l, k: self.k }),
                CwOp::Rename { from, to, .. } if !label_ok(from) || !label_ok(to) => {
                    return Err(CwError::LabelOutOfBudget {
                        label: if label_ok(from) { to } else { from },
                        k: self.k,
                    })
                }
                CwOp::Join { a, b, .. } if !label_ok(a) || !label_ok(b) => {
                    return Err(CwError::LabelOutOfBudget {
                        label: if label_ok(a) { b } else { a },
                        k: self.k,
                    })
                }
                CwOp::Join { a, b, .. } if a == b => return Err(CwError::JoinSameLabel(a)),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.post_order().iter().filter(|&&x| matches!(self.nodes[x], CwOp::Intro(_))).count()
    }

    /// Largest label used anywhere.
    pub fn max_label(&self) -> usize {
        self.post_order()
            .iter()
            .map(|&x| match self.nodes[x] {
                CwOp::Intro(l) => l,
                CwOp::Rename { from, to, .. } => from.max(to),
                CwOp::Join { a, b, .. } => a.max(b),
                CwOp::Union(..) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Evaluates bottom-up, calling `visit` after each node is complete.
    pub fn eval_with(&self, mut visit: impl FnMut(&NodeView<'_>)) -> Result<LabeledGraph, CwError> {
        self.validate()?;
        let mut labels: Vec<usize> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut present: HashSet<(usize, usize)> = HashSet::new();
        let mut range: Vec<Range<usize>> = vec![0..0; self.nodes.len()];
        for x in self.post_order() {
            let r = match self.nodes[x] {
                CwOp::Intro(l) => {
                    labels.push(l);
                    labels.len() - 1..labels.len()
                }
                CwOp::Union(l, r) => range[l].start..range[r].end,
                CwOp::Rename { from, to, child } => {
                    let r = range[child].clone();
                    for v in r.clone() {
                        if labels[v] == from {
                            labels[v] = to;
                        }
                    }
                    r
                }
                CwOp::Join { a, b, child } => {
                    let r = range[child].clone();
                    let side = |l: usize| r.clone().filter(|&v| labels[v] == l).collect::<Vec<_>>();
                    let (sa, sb) = (side(a), side(b));
                    for &u in &sa {
                        for &v in &sb {
                            let key = (u.min(v), u.max(v));
                            if present.insert(key) {
                                edges.push(key);
                            }
                        }
                    }
                    r
                }
            };
            visit(&NodeView {
                node: x,
                range: r.clone(),
                labels: &labels[r.clone()],
            });
            range[x] = r;
        }
        let graph = Graph::new(labels.len(), edges).expect("joins add each pair once");
        Ok(LabeledGraph { graph, labels })
    }

    pub fn eval(&self) -> Result<LabeledGraph, CwError> {
        self.eval_with(|_| {})
    }
}

fn shift(op: CwOp, by: usize) -> CwOp {
    match op {
        CwOp::Intro(l) => CwOp::Intro(l),
        CwOp::Union(l, r) => CwOp::Union(l + by, r + by),
        CwOp::Rename { from, to, child } => CwOp::Rename {
            from,
            to,
            child: child + by,
        },
        CwOp::Join { a, b, child } => CwOp::Join { a, b, child: child + by },
    }
}

pub fn eval_cwe(e: &CwExpr) -> Result<LabeledGraph, CwError> {
    e.eval()
}

/// `K_{a,b}` built by one join of two label classes.
pub fn biclique_expr(a: usize, b: usize) -> CwExpr {
    let side = |count: usize, label: usize| {
        (1..count).fold(CwExpr::intro(2, label), |acc, _| acc.union_with(&CwExpr::intro(2, label)))
    };
    side(a, 1).union_with(&side(b, 2)).join(1, 2)
}

/// `K_{a,b}` grown one vertex of the first side at a time, each join small.
pub fn gradual_biclique_expr(a: usize, b: usize) -> CwExpr {
    let mut e = (1..b).fold(CwExpr::intro(3, 2), |acc, _| acc.union_with(&CwExpr::intro(3, 2)));
    for _ in 0..a {
        e = e.union_with(&CwExpr::intro(3, 3)).join(3, 2).rename(3, 1);
    }
    e
}

/// Path on `n ≥ 1` vertices with three labels.
pub fn path_expr(n: usize) -> CwExpr {
    let mut e = CwExpr::intro(3, 1);
    for _ in 1..n {
        e = e.union_with(&CwExpr::intro(3, 2)).join(1, 2).rename(1, 3).rename(2, 1);
    }
    e
}

/// Cycle on `n ≥ 3` vertices with four labels: the first vertex keeps label 4.
pub fn cycle_expr(n: usize) -> CwExpr {
    let mut e = CwExpr::intro(4, 4).union_with(&CwExpr::intro(4, 1)).join(4, 1);
    for _ in 2..n {
        e = e.union_with(&CwExpr::intro(4, 2)).join(1, 2).rename(1, 3).rename(2, 1);
    }
    e.join(1, 4)
}

/// Deterministic random expression on `size` vertices with labels `1..=k`.
/// Retries with derived seeds until the evaluated graph is connected.
pub fn random_cwe(k: usize, size: usize, seed: u64) -> Result<CwExpr, CwError> {
    if k < 2 || size == 0 {
        return Err(CwError::GenerationFailed(format!("need k ≥ 2 and size ≥ 1, got k={k} size={size}")));
    }
    for attempt in 0..64 {
        let mut rng = stream_rng(seed, attempt);
        let e = random_tree(k, size, &mut rng);
        let g = e.eval()?.graph;
        if g.is_connected_on(&(0..g.n()).collect::<Vec<_>>()) {
            return Ok(e);
        }
    }
    Err(CwError::GenerationFailed(format!("no connected expression for k={k} size={size} seed={seed}")))
}

fn random_tree(k: usize, size: usize, rng: &mut impl Rng) -> CwExpr {
    if size == 1 {
        return CwExpr::intro(k, rng.gen_range(1..=k));
    }
    let left = rng.gen_range(1..size);
    let l = random_tree(k, left, rng);
    let r = random_tree(k, size - left, rng);
    let labels_of = |e: &CwExpr| -> Vec<usize> {
        let mut ls = e.eval().expect("well formed").labels;
        ls.sort_unstable();
        ls.dedup();
        ls
    };
    let (ll, rl) = (labels_of(&l), labels_of(&r));
    let mut e = l.union_with(&r);
    if rng.gen_bool(0.85) {
        let a = ll[rng.gen_range(0..ll.len())];
        let b = rl[rng.gen_range(0..rl.len())];
        if a != b {
            e = e.join(a, b);
        } else {
            let other = (1..=k).filter(|&x| x != a).nth(rng.gen_range(0..k - 1)).expect("k ≥ 2");
            e = e.join(a, other);
        }
    }
    if rng.gen_bool(0.3) {
        let from = rng.gen_range(1..=k);
        let to = rng.gen_range(1..=k);
        if from != to {
            e = e.rename(from, to);
        }
    }
    e
}
