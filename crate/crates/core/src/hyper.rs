//! Randomized color coding for Edge Hamiltonian Path on hypergraphs with a
//! given hitting set.
//!
//! Every type with more than `2k` hyperedges is colored with `2k` colors (all
//! used) and each color class is replaced by the union of its members. The
//! merged instance has at most `2k²` hyperedges and is solved exactly; a yes
//! there always converts back into a certificate for the input.

use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::{is_edge_walk, is_permutation, EdgeSeq, Mode};
use crate::graph::{EdgeSystem, Graph, Hypergraph};
use crate::oracle::{solve_edge_ham_exact, OracleError, SolveResult, Stats, DEFAULT_EDGE_HAM_CAP};
use crate::rng::{mix, stream_rng};
use crate::typing::{classify_types, insertion_point, normalize_order, TypeAssignment, TypingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error(transparent)]
    Typing(#[from] TypingError),
    #[error("merged instance has {size} hyperedges, over the oracle cap {cap}")]
    MergedInstanceTooLarge { size: usize, cap: usize },
    #[error("merged certificate is not an edge-Hamiltonian path of the merged instance")]
    InvalidMergedCertificate,
    #[error("no place to reinsert hyperedge {0}")]
    NoLargeGroup(usize),
    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
    #[error("vertices {0} and {1} share a color but are not adjacent")]
    NotAProperComplementColoring(usize, usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergedOrigin {
    Original(usize),
    Class { ty: usize, color: usize, members: Vec<usize> },
}

impl MergedOrigin {
    pub fn members(&self) -> &[usize] {
        match self {
            MergedOrigin::Original(e) => std::slice::from_ref(e),
            MergedOrigin::Class { members, .. } => members,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorMerge {
    pub colors_per_type: usize,
    /// Color of each original hyperedge; `None` for types that were not colored.
    pub coloring: Vec<Option<usize>>,
    pub merged: Hypergraph,
    pub back_map: Vec<MergedOrigin>,
    pub types: TypeAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperSolveConfig {
    pub delta: f64,
    pub max_rounds: u64,
    pub seed: u64,
    /// Enumerate every coloring instead of sampling when there are at most
    /// this many (up to renaming colors).
    pub deterministic_fallback_threshold: u64,
    pub oracle_cap: usize,
}

impl Default for HyperSolveConfig {
    fn default() -> Self {
        HyperSolveConfig {
            delta: 0.01,
            max_rounds: 1_000_000,
            seed: 0,
            deterministic_fallback_threshold: 4096,
            oracle_cap: DEFAULT_EDGE_HAM_CAP,
        }
    }
}

impl HyperSolveConfig {
    /// `min(max_rounds, ⌈e^{2k²}·ln(1/δ)⌉)`.
    pub fn rounds(&self, k: usize) -> u64 {
        let want = ((2 * k * k) as f64).exp() * (1.0 / self.delta).ln();
        if want >= self.max_rounds as f64 {
            self.max_rounds
        } else {
            (want.ceil() as u64).max(1)
        }
    }

    fn check(&self) -> Result<(), HyperError> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(HyperError::BadConfig(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.max_rounds == 0 {
            return Err(HyperError::BadConfig("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

fn large_types(t: &TypeAssignment) -> Vec<Vec<usize>> {
    let two_k = 2 * t.k();
    (0..t.k())
        .map(|i| t.edges_of_type(i).collect::<Vec<_>>())
        .map(|edges| if edges.len() > two_k { edges } else { Vec::new() })
        .collect()
}

/// Builds the merged instance for a given coloring.
pub fn merge_with_coloring(h: &Hypergraph, t: &TypeAssignment, coloring: Vec<Option<usize>>) -> ColorMerge {
    let two_k = 2 * t.k();
    let mut back_map: Vec<MergedOrigin> =
        (0..h.m()).filter(|&e| coloring[e].is_none()).map(MergedOrigin::Original).collect();
    for ty in 0..t.k() {
        let mut classes = vec![Vec::new(); two_k];
        for e in t.edges_of_type(ty) {
            if let Some(c) = coloring[e] {
                classes[c].push(e);
            }
        }
        for (color, members) in classes.into_iter().enumerate() {
            if !members.is_empty() {
                back_map.push(MergedOrigin::Class { ty, color, members });
            }
        }
    }
    let edges = back_map.iter().map(|o| {
        let mut union: Vec<usize> = o.members().iter().flat_map(|&e| h.members(e).iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        union
    });
    let merged = Hypergraph::new(h.n(), edges).expect("unions of valid hyperedges");
    ColorMerge {
        colors_per_type: two_k,
        coloring,
        merged,
        back_map,
        types: t.clone(),
    }
}

/// Colors every type with more than `2k` hyperedges: `2k` pivots get distinct
/// colors, the rest are colored uniformly; then merges each color class.
pub fn color_and_merge(h: &Hypergraph, t: &TypeAssignment, round_seed: u64) -> ColorMerge {
    let mut rng = stream_rng(round_seed, 0);
    let two_k = 2 * t.k();
    let mut coloring = vec![None; h.m()];
    for edges in large_types(t).into_iter().filter(|e| !e.is_empty()) {
        let pivots = sample(&mut rng, edges.len(), two_k).into_vec();
        let mut is_pivot = vec![false; edges.len()];
        for (color, &p) in pivots.iter().enumerate() {
            coloring[edges[p]] = Some(color);
            is_pivot[p] = true;
        }
        for (p, &e) in edges.iter().enumerate() {
            if !is_pivot[p] {
                coloring[e] = Some(rng.gen_range(0..two_k));
            }
        }
    }
    merge_with_coloring(h, t, coloring)
}

/// Expands a path of the merged instance into one of `h`: each merged edge is
/// replaced by class members through the junction vertices shared with its
/// neighbours, and the left-over hyperedges are inserted next to hyperedges of
/// their own type.
pub fn reconstruct_certificate(h: &Hypergraph, cm: &ColorMerge, merged_path: &EdgeSeq) -> Result<EdgeSeq, HyperError> {
    let (merged, t) = (&cm.merged, &cm.types);
    let r = merged_path.order.len();
    if !is_permutation(&merged_path.order, merged.m()) || !is_edge_walk(merged, &merged_path.order, Mode::Path) {
        return Err(HyperError::InvalidMergedCertificate);
    }
    let junction: Vec<usize> = merged_path
        .order
        .windows(2)
        .map(|w| merged.common_vertex(w[0], w[1]).expect("consecutive merged edges meet"))
        .collect();
    let mut used = vec![false; h.m()];
    let mut order = Vec::with_capacity(h.m());
    for (p, &x) in merged_path.order.iter().enumerate() {
        let members = cm.back_map[x].members();
        let holding = |v: usize| *members.iter().find(|&&e| h.contains(e, v)).expect("union covers v");
        let first = if p > 0 { holding(junction[p - 1]) } else { members[0] };
        let last = if p + 1 < r { holding(junction[p]) } else { first };
        for e in [first, last] {
            if !used[e] {
                used[e] = true;
                order.push(e);
            }
        }
    }
    let ty = |e: usize| t.type_of[e];
    for e in (0..h.m()).filter(|&e| !used[e]) {
        normalize_order(&mut order, ty);
        let at = insertion_point(&order, ty, ty(e)).ok_or(HyperError::NoLargeGroup(e))?;
        order.insert(at, e);
    }
    Ok(EdgeSeq::path(order))
}

fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// All set partitions of `0..n` into exactly `k` blocks, as restricted growth strings.
fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if used == k {
                out.push(cur.clone());
            }
            return;
        }
        if k - used > n - cur.len() {
            return;
        }
        for c in 0..(used + 1).min(k) {
            cur.push(c);
            go(n, k, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

fn solve_merged(h: &Hypergraph, cm: &ColorMerge, cap: usize) -> Result<Option<EdgeSeq>, HyperError> {
    if cm.merged.m() > cap {
        return Err(HyperError::MergedInstanceTooLarge { size: cm.merged.m(), cap });
    }
    let r = solve_edge_ham_exact(&cm.merged, Mode::Path, cap)?;
    match r.edge_seq() {
        Some(seq) => Ok(Some(reconstruct_certificate(h, cm, seq)?)),
        None => Ok(None),
    }
}

/// Decides whether `h` has an edge-Hamiltonian path. Answers yes with a
/// validated certificate, no when the search was exhaustive, and probably-no
/// when all sampled colorings failed.
pub fn decide_hyper_ehp(h: &Hypergraph, hitting_set: &[usize], cfg: &HyperSolveConfig) -> Result<SolveResult, HyperError> {
    cfg.check()?;
    let start = Instant::now();
    let t = classify_types(h, hitting_set)?;
    let stats = |rounds: u64| Stats {
        nodes: rounds,
        elapsed: start.elapsed(),
    };
    let yes = |seq: EdgeSeq, rounds: u64| SolveResult::yes_edges(h, seq, stats(rounds)).map_err(HyperError::from);

    let large = large_types(&t);
    let two_k = 2 * t.k();
    if large.iter().all(Vec::is_empty) {
        let cm = merge_with_coloring(h, &t, vec![None; h.m()]);
        return match solve_merged(h, &cm, cfg.oracle_cap)? {
            Some(seq) => yes(seq, 1),
            None => Ok(SolveResult::no(stats(1))),
        };
    }

    let exhaustive = large
        .iter()
        .filter(|e| !e.is_empty())
        .fold(1u128, |acc, e| acc.saturating_mul(stirling2(e.len(), two_k)));
    if exhaustive <= cfg.deterministic_fallback_threshold as u128 {
        let per_type: Vec<(&Vec<usize>, Vec<Vec<usize>>)> = large
            .iter()
            .filter(|e| !e.is_empty())
            .map(|e| (e, partitions(e.len(), two_k)))
            .collect();
        let mut digits = vec![0usize; per_type.len()];
        let mut tried = 0u64;
        loop {
            let mut coloring = vec![None; h.m()];
            for ((edges, parts), &d) in per_type.iter().zip(&digits) {
                for (&e, &c) in edges.iter().zip(&parts[d]) {
                    coloring[e] = Some(c);
                }
            }
            tried += 1;
            let cm = merge_with_coloring(h, &t, coloring);
            if let Some(seq) = solve_merged(h, &cm, cfg.oracle_cap)? {
                return yes(seq, tried);
            }
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < per_type[i].1.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                return Ok(SolveResult::no(stats(tried)));
            }
        }
    }

    let rounds = cfg.rounds(t.k());
    for round in 0..rounds {
        let cm = color_and_merge(h, &t, mix(cfg.seed, round));
        if let Some(seq) = solve_merged(h, &cm, cfg.oracle_cap)? {
            return yes(seq, round + 1);
        }
    }
    Ok(SolveResult::probably_no(stats(rounds)))
}

/// Builds a hypergraph whose line graph is `g` from a proper coloring of the
/// complement of `g` (0-based colors): vertices are the colors followed by the
/// edges of `g`, and vertex `v` becomes the hyperedge of its color and its
/// incident edges. The colors form a hitting set.
pub fn complement_coloring_reduction(g: &Graph, coloring: &[usize]) -> Result<(Hypergraph, Vec<usize>), HyperError> {
    assert_eq!(coloring.len(), g.n(), "one color per vertex");
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if coloring[u] == coloring[v] && !g.has_edge(u, v) {
                return Err(HyperError::NotAProperComplementColoring(u, v));
            }
        }
    }
    let k = coloring.iter().max().map_or(0, |c| c + 1);
    let edges = (0..g.n()).map(|v| {
        let mut e: Vec<usize> = g.incident(v).iter().map(|&i| k + i).collect();
        e.push(coloring[v]);
        e
    });
    let h = Hypergraph::new(k + g.m(), edges).expect("valid ids");
    Ok((h, (0..k).collect()))
}
