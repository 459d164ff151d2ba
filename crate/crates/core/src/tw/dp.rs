//! Connectivity DP for dominating Eulerian subgraphs over a nice decomposition.
//!
//! A state at a node records, for the current bag: the selected vertices, the
//! partition of them into components of the partial solution, the vertices of
//! odd partial degree, and whether a finished component was already forgotten.

use std::collections::HashMap;
use std::time::Instant;

use super::nice::{validate_nice, NiceDecomposition, NiceKind};
use super::{make_nice, TdError, TreeDecomposition};
use crate::cert::DesSolution;
use crate::graph::Graph;
use crate::oracle::{SolveResult, Stats};

const NONE: u8 = u8::MAX;
const MAX_BAG: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    sel: u64,
    odd: u64,
    /// Component label per bag position, `NONE` when unselected.
    class: Vec<u8>,
    done: bool,
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Leaf,
    /// Child state and whether this node's vertex/edge was taken.
    Unary(u32, bool),
    Join(u32, u32),
}

#[derive(Default)]
struct Table {
    states: Vec<State>,
    back: Vec<Back>,
    index: HashMap<State, u32>,
}

impl Table {
    fn add(&mut self, mut s: State, back: Back) {
        canonicalize(&mut s.class);
        if !self.index.contains_key(&s) {
            self.index.insert(s.clone(), self.states.len() as u32);
            self.states.push(s);
            self.back.push(back);
        }
    }
}

/// Relabels components by first occurrence so equal partitions compare equal.
fn canonicalize(class: &mut [u8]) {
    let mut map = [NONE; 256];
    let mut next = 0u8;
    for c in class.iter_mut().filter(|c| **c != NONE) {
        if map[*c as usize] == NONE {
            map[*c as usize] = next;
            next += 1;
        }
        *c = map[*c as usize];
    }
}

fn insert_bit(x: u64, p: usize) -> u64 {
    let low = x & ((1u64 << p) - 1);
    ((x >> p) << (p + 1)) | low
}

fn remove_bit(x: u64, p: usize) -> u64 {
    let low = x & ((1u64 << p) - 1);
    ((x >> (p + 1)) << p) | low
}

/// Per-node state counts with bag sizes, for checking the state bound.
#[derive(Debug, Clone, Default)]
pub struct DpProfile {
    pub per_node: Vec<(usize, usize)>,
}

impl DpProfile {
    pub fn total_states(&self) -> usize {
        self.per_node.iter().map(|&(_, c)| c).sum()
    }

    pub fn within_bound(&self) -> bool {
        self.per_node.iter().all(|&(w, c)| c as u128 <= state_bound(w))
    }
}

fn bell(w: usize) -> u128 {
    // Bell triangle.
    let mut row = vec![1u128];
    for _ in 0..w {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(x));
        }
        row = next;
    }
    row[0]
}

/// `2^w · B(w) · 2^w · 2` for a bag of `w` vertices.
pub fn state_bound(w: usize) -> u128 {
    let pow = if w >= 63 { u128::MAX } else { 1u128 << w };
    pow.saturating_mul(bell(w)).saturating_mul(pow).saturating_mul(2)
}

pub fn des_dp(g: &Graph, nice: &NiceDecomposition) -> Result<SolveResult, TdError> {
    des_dp_profiled(g, nice).map(|(r, _)| r)
}

pub fn des_dp_profiled(g: &Graph, nice: &NiceDecomposition) -> Result<(SolveResult, DpProfile), TdError> {
    validate_nice(g, nice)?;
    if let Some(x) = nice.nodes.iter().find(|x| x.bag.len() > MAX_BAG) {
        return Err(TdError::InvalidNiceDecomposition(format!("bag of {} vertices is too large", x.bag.len())));
    }
    let start = Instant::now();
    let mut tables: Vec<Table> = (0..nice.nodes.len()).map(|_| Table::default()).collect();
    let mut profile = DpProfile::default();

    for x in nice.post_order() {
        let node = &nice.nodes[x];
        let bag = &node.bag;
        let pos = |v: usize| bag.binary_search(&v).expect("vertex in bag");
        let mut out = Table::default();
        match node.kind {
            NiceKind::Leaf => out.add(
                State {
                    sel: 0,
                    odd: 0,
                    class: Vec::new(),
                    done: false,
                },
                Back::Leaf,
            ),
            NiceKind::IntroduceVertex(v) => {
                let p = pos(v);
                for (i, s) in tables[node.children[0]].states.iter().enumerate() {
                    let mut skip = State {
                        sel: insert_bit(s.sel, p),
                        odd: insert_bit(s.odd, p),
                        class: s.class.clone(),
                        done: s.done,
                    };
                    skip.class.insert(p, NONE);
                    if !s.done {
                        let mut take = skip.clone();
                        take.sel |= 1 << p;
                        take.class[p] = NONE - 1;
                        out.add(take, Back::Unary(i as u32, true));
                    }
                    out.add(skip, Back::Unary(i as u32, false));
                }
            }
            NiceKind::IntroduceEdge(e) => {
                let (u, v) = g.edge(e);
                let (pu, pv) = (pos(u), pos(v));
                for (i, s) in tables[node.children[0]].states.iter().enumerate() {
                    let (su, sv) = (s.sel >> pu & 1 == 1, s.sel >> pv & 1 == 1);
                    if !su && !sv {
                        continue;
                    }
                    if su && sv {
                        let mut take = s.clone();
                        take.odd ^= (1 << pu) | (1 << pv);
                        let (a, b) = (take.class[pu], take.class[pv]);
                        for c in take.class.iter_mut().filter(|c| **c == b) {
                            *c = a;
                        }
                        out.add(take, Back::Unary(i as u32, true));
                    }
                    out.add(s.clone(), Back::Unary(i as u32, false));
                }
            }
            NiceKind::ForgetVertex(v) => {
                let child = &nice.nodes[node.children[0]];
                let p = child.bag.binary_search(&v).expect("vertex in child bag");
                for (i, s) in tables[node.children[0]].states.iter().enumerate() {
                    let mut next = State {
                        sel: remove_bit(s.sel, p),
                        odd: remove_bit(s.odd, p),
                        class: s.class.clone(),
                        done: s.done,
                    };
                    let c = next.class.remove(p);
                    if s.sel >> p & 1 == 1 {
                        if s.odd >> p & 1 == 1 {
                            continue;
                        }
                        if !next.class.contains(&c) {
                            if next.sel != 0 {
                                continue;
                            }
                            next.done = true;
                        }
                    }
                    out.add(next, Back::Unary(i as u32, false));
                }
            }
            NiceKind::Join => {
                let (l, r) = (&tables[node.children[0]], &tables[node.children[1]]);
                let mut by_sel: HashMap<u64, Vec<usize>> = HashMap::new();
                for (j, s) in r.states.iter().enumerate() {
                    by_sel.entry(s.sel).or_default().push(j);
                }
                let w = bag.len();
                for (i, a) in l.states.iter().enumerate() {
                    for &j in by_sel.get(&a.sel).map(Vec::as_slice).unwrap_or(&[]) {
                        let b = &r.states[j];
                        if a.done && b.done {
                            continue;
                        }
                        let mut parent: Vec<usize> = (0..w).collect();
                        fn find(p: &mut [usize], x: usize) -> usize {
                            let mut r = x;
                            while p[r] != r {
                                r = p[r];
                            }
                            p[x] = r;
                            r
                        }
                        for side in [&a.class, &b.class] {
                            let mut first: HashMap<u8, usize> = HashMap::new();
                            for (q, &c) in side.iter().enumerate().filter(|&(_, &c)| c != NONE) {
                                if let Some(&f) = first.get(&c) {
                                    let (x, y) = (find(&mut parent, f), find(&mut parent, q));
                                    parent[x] = y;
                                } else {
                                    first.insert(c, q);
                                }
                            }
                        }
                        let class = (0..w)
                            .map(|q| if a.sel >> q & 1 == 1 { find(&mut parent, q) as u8 } else { NONE })
                            .collect();
                        out.add(
                            State {
                                sel: a.sel,
                                odd: a.odd ^ b.odd,
                                class,
                                done: a.done || b.done,
                            },
                            Back::Join(i as u32, j as u32),
                        );
                    }
                }
            }
        }
        out.index = HashMap::new();
        profile.per_node.push((bag.len(), out.states.len()));
        debug_assert!(out.states.len() as u128 <= state_bound(bag.len()));
        tables[x] = out;
    }

    let stats = Stats {
        nodes: profile.total_states() as u64,
        elapsed: start.elapsed(),
    };
    let root = &tables[nice.root];
    let Some(accept) = root.states.iter().position(|s| s.done) else {
        return Ok((SolveResult::no(stats), profile));
    };

    let mut sol = DesSolution::default();
    let mut stack = vec![(nice.root, accept)];
    while let Some((x, i)) = stack.pop() {
        let node = &nice.nodes[x];
        match tables[x].back[i] {
            Back::Leaf => {}
            Back::Unary(c, taken) => {
                if taken {
                    match node.kind {
                        NiceKind::IntroduceVertex(v) => {
                            sol.v0.insert(v);
                        }
                        NiceKind::IntroduceEdge(e) => {
                            sol.e0.insert(e);
                        }
                        _ => unreachable!("only introductions take"),
                    }
                }
                stack.push((node.children[0], c as usize));
            }
            Back::Join(a, b) => {
                stack.push((node.children[0], a as usize));
                stack.push((node.children[1], b as usize));
            }
        }
    }
    let result = SolveResult::yes_des(g, sol, stats).map_err(|e| TdError::Certificate(e.to_string()))?;
    Ok((result, profile))
}

/// Edge-Hamiltonian cycle decision through the DES equivalence, using `td`.
pub fn decide_ehc_tw(g: &Graph, td: &TreeDecomposition) -> Result<bool, TdError> {
    match g.m() {
        0 | 1 => Ok(true),
        2 => {
            let ((a, b), (c, d)) = (g.edge(0), g.edge(1));
            Ok(a == c || a == d || b == c || b == d)
        }
        _ => Ok(des_dp(g, &make_nice(g, td)?)?.is_yes()),
    }
}
