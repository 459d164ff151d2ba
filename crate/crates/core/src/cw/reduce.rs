//! Replacing a large biclique `A × B` by three vertices adjacent to `A ∪ B`,
//! and moving dominating Eulerian subgraphs across that surgery.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CwError, CONTAIN_MIN, REDUCE_MIN};
use crate::cert::{check_des, DesSolution};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    Direct,
    BigJoin,
    Gradual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSite {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub stage: Stage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

fn check_sides(g: &Graph, a: &[usize], b: &[usize], min: usize) -> Result<(), CwError> {
    if a.len() < min || b.len() < min {
        return Err(CwError::SetsTooSmall {
            a: a.len(),
            b: b.len(),
            min,
        });
    }
    let mut seen = vec![false; g.n()];
    for &v in a.iter().chain(b) {
        if v >= g.n() || seen[v] {
            return Err(CwError::BadSides(v));
        }
        seen[v] = true;
    }
    for &x in a {
        for &y in b {
            if !g.has_edge(x, y) {
                return Err(CwError::NotABiclique(x, y));
            }
        }
    }
    Ok(())
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Removes `A × B` and adds three fresh vertices `C` adjacent to all of `A ∪ B`.
pub fn reduce_biclique_graph(g: &Graph, a: &[usize], b: &[usize]) -> Result<(Graph, ReductionSite), CwError> {
    check_sides(g, a, b, REDUCE_MIN)?;
    let (a, b) = (sorted(a), sorted(b));
    let mut side = vec![0u8; g.n()];
    for &x in &a {
        side[x] = 1;
    }
    for &y in &b {
        side[y] = 2;
    }
    let n = g.n();
    let c: Vec<usize> = (n..n + 3).collect();
    let kept = g.edges().iter().copied().filter(|&(u, v)| side[u] == 0 || side[v] == 0 || side[u] == side[v]);
    let star = a.iter().chain(&b).flat_map(|&x| c.iter().map(move |&z| (x, z)));
    let reduced = Graph::new(n + 3, kept.chain(star)).expect("fresh vertices keep the graph simple");
    Ok((
        reduced,
        ReductionSite {
            a,
            b,
            c,
            stage: Stage::Direct,
        },
    ))
}

/// Edge set under construction, keyed by endpoints.
struct EdgeSet<'g> {
    g: &'g Graph,
    on: BTreeSet<usize>,
}

impl<'g> EdgeSet<'g> {
    fn new(g: &'g Graph, on: impl IntoIterator<Item = usize>) -> Self {
        EdgeSet {
            g,
            on: on.into_iter().collect(),
        }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.g.edge_index(u, v).is_some_and(|e| self.on.contains(&e))
    }

    fn toggle(&mut self, u: usize, v: usize) {
        let e = self.g.edge_index(u, v).expect("toggled pairs are edges");
        if !self.on.remove(&e) {
            self.on.insert(e);
        }
    }

    fn toggle_square(&mut self, a1: usize, b1: usize, a2: usize, b2: usize) {
        for (x, y) in [(a1, b1), (a1, b2), (a2, b1), (a2, b2)] {
            self.toggle(x, y);
        }
    }

    fn covered(&self) -> Vec<bool> {
        let mut cov = vec![false; self.g.n()];
        for &e in &self.on {
            let (u, v) = self.g.edge(e);
            cov[u] = true;
            cov[v] = true;
        }
        cov
    }

    fn solution(&self) -> DesSolution {
        DesSolution::from_edges(self.g, self.on.iter().copied())
    }
}

/// Flips 2×2 squares of `A × B` until every vertex of `A ∪ B` lies on the
/// solution and at least one `A × B` edge is used. Parities never change and
/// each flip keeps the solution connected.
pub fn repair_contain(g: &Graph, a: &[usize], b: &[usize], sol: &DesSolution) -> Result<DesSolution, CwError> {
    check_sides(g, a, b, CONTAIN_MIN)?;
    check_des(g, sol).map_err(|e| CwError::PreconditionViolated(format!("input is not a solution: {e}")))?;
    if sol.e0.is_empty() {
        return Err(CwError::PreconditionViolated("a single vertex cannot cover a biclique".into()));
    }
    let (a, b) = (sorted(a), sorted(b));
    let mut es = EdgeSet::new(g, sol.e0.iter().copied());
    loop {
        let cov = es.covered();
        let miss_a: Vec<usize> = a.iter().copied().filter(|&x| !cov[x]).collect();
        let miss_b: Vec<usize> = b.iter().copied().filter(|&x| !cov[x]).collect();
        let (missing, same, other) = match (miss_a.is_empty(), miss_b.is_empty()) {
            (true, true) => break,
            (false, false) => return Err(CwError::PreconditionViolated("solution misses both sides".into())),
            (false, true) => (miss_a, &a, &b),
            (true, false) => (miss_b, &b, &a),
        };
        let (y1, y2) = (other[0], other[1]);
        if missing.len() >= 2 {
            es.toggle_square(missing[0], y1, missing[1], y2);
            continue;
        }
        let x = missing[0];
        let present: Vec<usize> = same.iter().copied().filter(|&s| s != x).collect();
        // Prefer a square that does not remove two edges at the same vertex.
        let mut choice = None;
        'search: for &s in &present {
            for (i, &p) in other.iter().enumerate() {
                for &q in &other[i + 1..] {
                    if !(es.has(s, p) && es.has(s, q)) {
                        choice = Some((s, p, q));
                        break 'search;
                    }
                }
            }
        }
        let (s, p, q) = choice.unwrap_or((present[0], y1, y2));
        es.toggle_square(x, p, s, q);
    }
    if !a.iter().any(|&x| b.iter().any(|&y| es.has(x, y))) {
        es.toggle_square(a[0], b[0], a[1], b[1]);
    }
    let out = es.solution();
    check_des(g, &out).map_err(|e| CwError::InvalidSolution(format!("repair produced an invalid solution: {e}")))?;
    Ok(out)
}

/// Moves a solution of `g` to the reduced graph `g2` (forward) or back
/// (backward). `g2` must be `g` with some subset of `A × B` removed and `C`
/// joined to `A ∪ B`, on the same vertex ids.
pub fn transfer_des_across_reduction(
    direction: Direction,
    site: &ReductionSite,
    g: &Graph,
    g2: &Graph,
    sol: &DesSolution,
) -> Result<DesSolution, CwError> {
    match direction {
        Direction::Forward => forward(site, g, g2, sol),
        Direction::Backward => backward(site, g, g2, sol),
    }
}

fn forward(site: &ReductionSite, g: &Graph, g2: &Graph, sol: &DesSolution) -> Result<DesSolution, CwError> {
    let d = repair_contain(g, &site.a, &site.b, sol)?;
    let mut kept = BTreeSet::new();
    let mut odd = vec![false; g.n()];
    let mut touched = BTreeSet::new();
    for &e in &d.e0 {
        let (u, v) = g.edge(e);
        match g2.edge_index(u, v) {
            Some(f) => {
                kept.insert(f);
            }
            None => {
                odd[u] = !odd[u];
                odd[v] = !odd[v];
                touched.insert(u);
                touched.insert(v);
            }
        }
    }
    if !touched.is_empty() {
        // Removed edges are replaced through C: two vertices of C reconnect
        // every touched vertex (dropping one each when their number is odd),
        // the third restores the parities.
        let w: Vec<usize> = touched.into_iter().collect();
        let (t1, t2, mut t3): (Vec<usize>, Vec<usize>, BTreeSet<usize>) = {
            let odd_set: BTreeSet<usize> = (0..g.n()).filter(|&x| odd[x]).collect();
            if w.len().is_multiple_of(2) {
                (w.clone(), w.clone(), odd_set)
            } else {
                (w[1..].to_vec(), [&w[..1], &w[2..]].concat(), odd_set)
            }
        };
        if w.len() % 2 == 1 {
            for x in [w[0], w[1]] {
                if !t3.remove(&x) {
                    t3.insert(x);
                }
            }
        }
        for (&c, part) in site.c.iter().zip([t1, t2, t3.into_iter().collect()]) {
            for x in part {
                let f = g2
                    .edge_index(x, c)
                    .ok_or_else(|| CwError::InvalidSolution(format!("vertex {x} is not joined to {c}")))?;
                kept.insert(f);
            }
        }
    }
    let out = DesSolution::from_edges(g2, kept);
    check_des(g2, &out).map_err(|e| CwError::InvalidSolution(format!("forward transfer: {e}")))?;
    Ok(out)
}

fn components(g: &Graph, es: &EdgeSet<'_>, required: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut present = vec![false; g.n()];
    for &v in required {
        present[v] = true;
    }
    for &e in &es.on {
        let (u, v) = g.edge(e);
        present[u] = true;
        present[v] = true;
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        parent[ru] = rv;
    }
    (0..g.n()).filter(|&v| present[v] && find(&mut parent, v) == v).count()
}

fn backward(site: &ReductionSite, g: &Graph, g2: &Graph, sol: &DesSolution) -> Result<DesSolution, CwError> {
    let ab: Vec<usize> = site.a.iter().chain(&site.b).copied().collect();
    let d = repair_contain(g2, &ab, &site.c, sol)?;
    let mut is_c = vec![false; g2.n()];
    for &c in &site.c {
        is_c[c] = true;
    }
    let mut on = Vec::new();
    for &e in &d.e0 {
        let (u, v) = g2.edge(e);
        if is_c[u] || is_c[v] {
            continue;
        }
        let f = g
            .edge_index(u, v)
            .ok_or_else(|| CwError::InvalidSolution(format!("edge ({u}, {v}) missing from the original graph")))?;
        on.push(f);
    }
    let mut es = EdgeSet::new(g, on);

    let mut odd = vec![false; g.n()];
    for &e in &es.on {
        let (u, v) = g.edge(e);
        odd[u] = !odd[u];
        odd[v] = !odd[v];
    }
    let mut odd_a: Vec<usize> = site.a.iter().copied().filter(|&x| odd[x]).collect();
    let mut odd_b: Vec<usize> = site.b.iter().copied().filter(|&x| odd[x]).collect();
    if (0..g.n()).filter(|&v| odd[v]).count() != odd_a.len() + odd_b.len() {
        return Err(CwError::InvalidSolution("odd vertex outside the biclique".into()));
    }
    while !odd_a.is_empty() && !odd_b.is_empty() {
        es.toggle(odd_a.pop().unwrap(), odd_b.pop().unwrap());
    }
    for (rest, other) in [(odd_a, &site.b), (odd_b, &site.a)] {
        for pair in rest.chunks(2) {
            es.toggle(pair[0], other[0]);
            es.toggle(pair[1], other[0]);
        }
    }

    // Merge components with parity-preserving square flips.
    let mut count = components(g, &es, &ab);
    while count > 1 {
        let mut improved = false;
        'search: for (i, &a1) in site.a.iter().enumerate() {
            for &a2 in &site.a[i + 1..] {
                for (j, &b1) in site.b.iter().enumerate() {
                    for &b2 in &site.b[j + 1..] {
                        es.toggle_square(a1, b1, a2, b2);
                        let next = components(g, &es, &ab);
                        if next < count {
                            count = next;
                            improved = true;
                            break 'search;
                        }
                        es.toggle_square(a1, b1, a2, b2);
                    }
                }
            }
        }
        if !improved {
            return Err(CwError::AugmentationStuck);
        }
    }
    let out = es.solution();
    check_des(g, &out).map_err(|e| CwError::InvalidSolution(format!("backward transfer: {e}")))?;
    Ok(out)
}
