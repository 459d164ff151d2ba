use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{check_td, TdError, TreeDecomposition};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    ForgetVertex(usize),
    /// Edge index into the graph.
    IntroduceEdge(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted ascending.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node indices with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
            } else {
                stack.push((x, true));
                for &c in self.nodes[x].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn count(&self, pred: impl Fn(&NiceKind) -> bool) -> usize {
        self.nodes.iter().filter(|x| pred(&x.kind)).count()
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Morphs the bag of node `x` into `target` by forgets, then introduces.
    fn morph(&mut self, mut x: usize, target: &[usize]) -> usize {
        let from = self.nodes[x].bag.clone();
        let mut bag = from.clone();
        for &v in from.iter().filter(|v| target.binary_search(v).is_err()) {
            bag.retain(|&w| w != v);
            x = self.push(NiceKind::ForgetVertex(v), bag.clone(), vec![x]);
        }
        for &v in target.iter().filter(|v| from.binary_search(v).is_err()) {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            x = self.push(NiceKind::IntroduceVertex(v), bag.clone(), vec![x]);
        }
        x
    }
}

/// Converts a valid decomposition into nice form rooted at bag 0, then adds one
/// introduce-edge node per graph edge directly above the topmost node whose
/// bag holds both endpoints.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceDecomposition, TdError> {
    check_td(g, td)?;
    let adj = td.adjacency();
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut order = vec![0];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let b = order[i];
        for &c in &adj[b] {
            if parent[c] == usize::MAX {
                parent[c] = b;
                order.push(c);
            }
        }
        i += 1;
    }

    let mut builder = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.bags.len()];
    for &b in order.iter().rev() {
        let kids: Vec<usize> = adj[b].iter().copied().filter(|&c| c != 0 && parent[c] == b).collect();
        let target = &td.bags[b];
        let x = if kids.is_empty() {
            let leaf = builder.push(NiceKind::Leaf, Vec::new(), Vec::new());
            builder.morph(leaf, target)
        } else {
            let mut branches = kids.iter().map(|&c| builder.morph(top[c], target));
            let first = branches.next().expect("non-empty");
            let rest: Vec<usize> = branches.collect();
            rest.into_iter()
                .fold(first, |acc, r| builder.push(NiceKind::Join, target.clone(), vec![acc, r]))
        };
        top[b] = x;
    }
    let root = builder.morph(top[0], &[]);
    let mut nodes = builder.nodes;

    // Topmost node per edge: the first node, in breadth-first order from the
    // root, whose bag contains both endpoints.
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut done = vec![false; g.m()];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &v in &nodes[x].bag {
            for &e in g.incident(v) {
                if !done[e] && nodes[x].bag.binary_search(&g.other_end(e, v)).is_ok() {
                    done[e] = true;
                    assigned[x].push(e);
                }
            }
        }
        queue.extend(nodes[x].children.iter().copied());
    }
    debug_assert!(done.iter().all(|&d| d));

    let mut parent_of = vec![usize::MAX; nodes.len()];
    for (x, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            parent_of[c] = x;
        }
    }
    let mut root = root;
    for (x, mut edges) in assigned.into_iter().enumerate() {
        if edges.is_empty() {
            continue;
        }
        edges.sort_unstable();
        let p = parent_of[x];
        let mut cur = x;
        for e in edges {
            nodes.push(NiceNode {
                kind: NiceKind::IntroduceEdge(e),
                bag: nodes[x].bag.clone(),
                children: vec![cur],
            });
            cur = nodes.len() - 1;
        }
        if p == usize::MAX {
            root = cur;
        } else {
            for c in nodes[p].children.iter_mut() {
                if *c == x {
                    *c = cur;
                }
            }
        }
    }
    Ok(NiceDecomposition { nodes, root })
}

/// Structural check of a nice decomposition against `g`.
pub fn validate_nice(g: &Graph, nice: &NiceDecomposition) -> Result<(), TdError> {
    let bad = |msg: String| Err(TdError::InvalidNiceDecomposition(msg));
    if nice.root >= nice.nodes.len() {
        return bad("root out of range".into());
    }
    if !nice.nodes[nice.root].bag.is_empty() {
        return bad("root bag is not empty".into());
    }
    let mut indegree = vec![0usize; nice.nodes.len()];
    for node in &nice.nodes {
        for &c in &node.children {
            match indegree.get_mut(c) {
                Some(d) => *d += 1,
                None => return bad(format!("child {c} out of range")),
            }
        }
    }
    if (0..nice.nodes.len()).any(|x| indegree[x] != usize::from(x != nice.root)) {
        return bad("nodes do not form a rooted tree".into());
    }
    if nice.post_order().len() != nice.nodes.len() {
        return bad("unreachable nodes".into());
    }
    let mut introduced = vec![0usize; g.m()];
    let mut forgotten = vec![0usize; g.n()];
    for (x, node) in nice.nodes.iter().enumerate() {
        let bag = &node.bag;
        if bag.windows(2).any(|w| w[0] >= w[1]) || bag.iter().any(|&v| v >= g.n()) {
            return bad(format!("node {x} has a malformed bag"));
        }
        let child_bag = |i: usize| node.children.get(i).and_then(|&c| nice.nodes.get(c)).map(|c| &c.bag);
        let ok = match node.kind {
            NiceKind::Leaf => node.children.is_empty() && bag.is_empty(),
            NiceKind::IntroduceVertex(v) => {
                node.children.len() == 1
                    && child_bag(0).is_some_and(|cb| {
                        cb.binary_search(&v).is_err() && {
                            let mut want = cb.clone();
                            want.push(v);
                            want.sort_unstable();
                            &want == bag
                        }
                    })
            }
            NiceKind::ForgetVertex(v) => {
                if let Some(f) = forgotten.get_mut(v) {
                    *f += 1;
                }
                node.children.len() == 1
                    && bag.binary_search(&v).is_err()
                    && child_bag(0).is_some_and(|cb| {
                        let mut want = bag.clone();
                        want.push(v);
                        want.sort_unstable();
                        &want == cb
                    })
            }
            NiceKind::IntroduceEdge(e) => {
                if e >= g.m() {
                    return bad(format!("node {x} introduces unknown edge {e}"));
                }
                introduced[e] += 1;
                let (u, v) = g.edge(e);
                node.children.len() == 1
                    && child_bag(0) == Some(bag)
                    && bag.binary_search(&u).is_ok()
                    && bag.binary_search(&v).is_ok()
            }
            NiceKind::Join => node.children.len() == 2 && child_bag(0) == Some(bag) && child_bag(1) == Some(bag),
        };
        if !ok {
            return bad(format!("node {x} ({:?}) violates its shape", node.kind));
        }
    }
    if let Some(e) = introduced.iter().position(|&c| c != 1) {
        return bad(format!("edge {e} introduced {} times", introduced[e]));
    }
    if let Some(v) = forgotten.iter().position(|&c| c != 1) {
        return bad(format!("vertex {v} forgotten {} times", forgotten[v]));
    }
    Ok(())
}
