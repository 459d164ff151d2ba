//! Exhaustive reference solvers used to certify the parameterized algorithms
//! on small instances.
//!
//! * edge-Hamiltonicity via a subset DP over edges (Hamiltonicity of the line graph),
//! * dominating Eulerian subgraphs by enumerating edge subsets in order of size,
//! * exact treewidth by a DP over vertex subsets,
//! * `K_{t,t}` subgraph search.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::{check_des, validate_edge_sequence, DesSolution, DesViolation, EdgeSeq, Mode};
use crate::graph::{EdgeSystem, Graph};
use crate::tw::{decomposition_from_order, TreeDecomposition};

pub const DEFAULT_EDGE_HAM_CAP: usize = 22;
pub const DEFAULT_DES_CAP: usize = 20;
pub const DEFAULT_TREEWIDTH_CAP: usize = 15;
pub const DEFAULT_BICLIQUE_BUDGET: u64 = 10_000_000;

/// The edge-Hamiltonicity DP stores last-edge sets in a `u32`.
const EDGE_HAM_HARD_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {size} exceeds cap {cap}")]
    InstanceTooLarge { size: usize, cap: usize },
    #[error("equivalence is only asserted for at least 3 edges (got {0})")]
    TooFewEdges(usize),
    #[error("biclique search exceeded its node budget of {0}")]
    SearchBudgetExceeded(u64),
    #[error("certificate rejected by validator: {0}")]
    CertificateRejected(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub edge_ham: usize,
    pub des: usize,
    pub treewidth: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            edge_ham: DEFAULT_EDGE_HAM_CAP,
            des: DEFAULT_DES_CAP,
            treewidth: DEFAULT_TREEWIDTH_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    /// One-sided randomized answer: no witness found within the round budget.
    ProbablyNo,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::ProbablyNo => "probably-no",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    Edges(EdgeSeq),
    Des(DesSolution),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes: u64,
    pub elapsed: Duration,
}

/// A decision with an optional witness. A `Yes` always carries a certificate
/// that passed the matching validator when the result was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    answer: Answer,
    certificate: Option<Certificate>,
    stats: Stats,
}

impl SolveResult {
    pub fn yes_edges<G: EdgeSystem + ?Sized>(g: &G, seq: EdgeSeq, stats: Stats) -> Result<Self, OracleError> {
        match validate_edge_sequence(g, &seq) {
            Ok(true) => Ok(SolveResult {
                answer: Answer::Yes,
                certificate: Some(Certificate::Edges(seq)),
                stats,
            }),
            Ok(false) => Err(OracleError::CertificateRejected(format!(
                "consecutive edges do not intersect in {:?}",
                seq.order
            ))),
            Err(e) => Err(OracleError::CertificateRejected(e.to_string())),
        }
    }

    pub fn yes_des(g: &Graph, d: DesSolution, stats: Stats) -> Result<Self, OracleError> {
        check_des(g, &d).map_err(|e: DesViolation| OracleError::CertificateRejected(e.to_string()))?;
        Ok(SolveResult {
            answer: Answer::Yes,
            certificate: Some(Certificate::Des(d)),
            stats,
        })
    }

    pub fn no(stats: Stats) -> Self {
        SolveResult {
            answer: Answer::No,
            certificate: None,
            stats,
        }
    }

    pub fn probably_no(stats: Stats) -> Self {
        SolveResult {
            answer: Answer::ProbablyNo,
            certificate: None,
            stats,
        }
    }

    pub fn answer(&self) -> Answer {
        self.answer
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn edge_seq(&self) -> Option<&EdgeSeq> {
        match &self.certificate {
            Some(Certificate::Edges(s)) => Some(s),
            _ => None,
        }
    }

    pub fn des(&self) -> Option<&DesSolution> {
        match &self.certificate {
            Some(Certificate::Des(d)) => Some(d),
            _ => None,
        }
    }

    pub fn into_certificate(self) -> Option<Certificate> {
        self.certificate
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }
}

fn lowest_bit(x: u32) -> usize {
    x.trailing_zeros() as usize
}

/// Decides the edge-Hamiltonian path/cycle problem exactly by a DP over
/// (edge subset, last edge) states. Bit `i` of a subset is edge `i`; masks are
/// processed in increasing numeric order and ties are broken toward the lowest
/// edge index, so certificates are reproducible.
pub fn solve_edge_ham_exact<G: EdgeSystem + ?Sized>(g: &G, mode: Mode, cap: usize) -> Result<SolveResult, OracleError> {
    let start = Instant::now();
    let m = g.edge_count();
    let cap = cap.min(EDGE_HAM_HARD_LIMIT);
    if m > cap {
        return Err(OracleError::InstanceTooLarge { size: m, cap });
    }
    if m <= 1 {
        let stats = Stats {
            nodes: m as u64,
            elapsed: start.elapsed(),
        };
        return SolveResult::yes_edges(g, EdgeSeq { order: (0..m).collect(), mode }, stats);
    }
    let adj: Vec<u32> = (0..m)
        .map(|e| (0..m).filter(|&f| f != e && g.edges_share(e, f)).fold(0u32, |acc, f| acc | (1 << f)))
        .collect();
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut dp = vec![0u32; 1usize << m];
    let step = match mode {
        Mode::Path => {
            for e in 0..m {
                dp[1 << e] |= 1 << e;
            }
            1
        }
        Mode::Cycle => {
            // A cyclic order can be rotated to start with edge 0.
            dp[1] = 1;
            2
        }
    };
    let mut nodes = 0u64;
    let mut mask = 1usize;
    while mask < full as usize {
        let mut lasts = dp[mask];
        while lasts != 0 {
            let last = lowest_bit(lasts);
            lasts &= lasts - 1;
            nodes += 1;
            let mut ext = adj[last] & !(mask as u32);
            while ext != 0 {
                let f = lowest_bit(ext);
                ext &= ext - 1;
                dp[mask | (1 << f)] |= 1 << f;
            }
        }
        mask += step;
    }
    let finals = match mode {
        Mode::Path => dp[full as usize],
        Mode::Cycle => dp[full as usize] & adj[0],
    };
    let stats = |start: Instant| Stats {
        nodes,
        elapsed: start.elapsed(),
    };
    if finals == 0 {
        return Ok(SolveResult::no(stats(start)));
    }
    let mut order = Vec::with_capacity(m);
    let mut last = lowest_bit(finals);
    let mut mask = full as usize;
    loop {
        order.push(last);
        let prev = mask ^ (1 << last);
        if prev == 0 {
            break;
        }
        let candidates = dp[prev] & adj[last];
        debug_assert_ne!(candidates, 0);
        last = lowest_bit(candidates);
        mask = prev;
    }
    order.reverse();
    SolveResult::yes_edges(g, EdgeSeq { order, mode }, stats(start))
}

/// Next larger integer with the same popcount (Gosper's hack).
fn next_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Finds a minimum-size dominating Eulerian subgraph by exhaustion: first a
/// single covering vertex with no edges, then edge subsets by increasing size.
pub fn solve_des_exact(g: &Graph, cap: usize) -> Result<SolveResult, OracleError> {
    let start = Instant::now();
    let m = g.m();
    if m > cap || m > 63 {
        return Err(OracleError::InstanceTooLarge { size: m, cap });
    }
    let mut nodes = 0u64;
    for v in 0..g.n() {
        nodes += 1;
        if g.edges().iter().all(|&(a, b)| a == v || b == v) {
            let stats = Stats {
                nodes,
                elapsed: start.elapsed(),
            };
            return SolveResult::yes_des(g, DesSolution::single_vertex(v), stats);
        }
    }
    // Non-isolated vertices get bit positions; 2m ≤ 126 fits a u128.
    let mut slot = vec![usize::MAX; g.n()];
    let mut count = 0;
    for &(a, b) in g.edges() {
        for v in [a, b] {
            if slot[v] == usize::MAX {
                slot[v] = count;
                count += 1;
            }
        }
    }
    let ends: Vec<u128> = g.edges().iter().map(|&(a, b)| (1u128 << slot[a]) | (1u128 << slot[b])).collect();
    let connected = |subset: u64| -> bool {
        let first = subset.trailing_zeros() as usize;
        let mut reached = ends[first];
        let mut remaining = subset & !(1 << first);
        loop {
            let mut grew = false;
            let mut rest = remaining;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if ends[e] & reached != 0 {
                    reached |= ends[e];
                    remaining &= !(1 << e);
                    grew = true;
                }
            }
            if remaining == 0 {
                return true;
            }
            if !grew {
                return false;
            }
        }
    };
    let limit: u64 = 1u64 << m;
    for size in 1..=m {
        let mut subset: u64 = (1u64 << size) - 1;
        while subset < limit {
            nodes += 1;
            let mut parity = 0u128;
            let mut span = 0u128;
            let mut rest = subset;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                parity ^= ends[e];
                span |= ends[e];
            }
            if parity == 0 && ends.iter().all(|&x| x & span != 0) && connected(subset) {
                let d = DesSolution::from_edges(g, (0..m).filter(|&e| subset >> e & 1 == 1));
                let stats = Stats {
                    nodes,
                    elapsed: start.elapsed(),
                };
                return SolveResult::yes_des(g, d, stats);
            }
            if size == m {
                break;
            }
            subset = next_same_popcount(subset);
        }
    }
    Ok(SolveResult::no(Stats {
        nodes,
        elapsed: start.elapsed(),
    }))
}

/// Compares the edge-Hamiltonian cycle oracle with the dominating Eulerian
/// subgraph oracle. Only meaningful for `m ≥ 3`.
pub fn check_hn_equivalence(g: &Graph, caps: &OracleCaps) -> Result<bool, OracleError> {
    if g.m() < 3 {
        return Err(OracleError::TooFewEdges(g.m()));
    }
    let ehc = solve_edge_ham_exact(g, Mode::Cycle, caps.edge_ham)?;
    let des = solve_des_exact(g, caps.des)?;
    Ok(ehc.is_yes() == des.is_yes())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTreewidth {
    pub width: usize,
    /// Elimination order witnessing `width`.
    pub order: Vec<usize>,
}

impl ExactTreewidth {
    pub fn decomposition(&self, g: &Graph) -> TreeDecomposition {
        decomposition_from_order(g, &self.order)
    }
}

/// Exact treewidth by the classic DP over the set of already-eliminated vertices:
/// `TW(S) = min_{v∈S} max(TW(S∖v), |Q(S∖v, v)|)` where `Q(S, v)` is the set of
/// vertices outside `S ∪ {v}` reachable from `v` through `S`.
pub fn exact_treewidth_small(g: &Graph, cap: usize) -> Result<ExactTreewidth, OracleError> {
    let n = g.n();
    if n > cap || n > 24 {
        return Err(OracleError::InstanceTooLarge { size: n, cap });
    }
    if n == 0 {
        return Ok(ExactTreewidth {
            width: 0,
            order: Vec::new(),
        });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | (1 << w)))
        .collect();
    let q_size = |s: u32, v: usize| -> u32 {
        let mut reached = 1u32 << v;
        let mut frontier = reached;
        let mut outside = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = nbr[x] & !reached;
            reached |= nb;
            outside |= nb & !s;
            frontier |= nb & s;
        }
        outside.count_ones()
    };
    let full = (1usize << n) - 1;
    let mut tw = vec![i32::MAX; full + 1];
    let mut choice = vec![0u8; full + 1];
    tw[0] = -1;
    for s in 1..=full {
        let mut rest = s as u32;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let cand = tw[without].max(q_size(without as u32, v) as i32);
            if cand < tw[s] {
                tw[s] = cand;
                choice[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(ExactTreewidth {
        width: tw[full].max(0) as usize,
        order,
    })
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The two sides of a complete bipartite subgraph.
pub type Biclique = (Vec<usize>, Vec<usize>);

/// Searches for disjoint `A`, `B` with `|A| = |B| = t` and `A × B ⊆ E`.
/// Branches over `A` in increasing vertex order while tracking the common
/// neighbourhood, which must keep at least `t` vertices.
pub fn find_biclique(g: &Graph, t: usize, budget: u64) -> Result<Option<Biclique>, OracleError> {
    if t == 0 {
        return Ok(Some((Vec::new(), Vec::new())));
    }
    struct Search<'a> {
        g: &'a Graph,
        t: usize,
        budget: u64,
        nodes: u64,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn grow(&mut self, from: usize, common: Option<&[usize]>) -> Result<Option<Vec<usize>>, OracleError> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::SearchBudgetExceeded(self.budget));
            }
            if self.chosen.len() == self.t {
                let common = common.expect("t ≥ 1");
                return Ok(Some(common[..self.t].to_vec()));
            }
            let needed = self.t - self.chosen.len();
            for v in from..self.g.n() {
                if self.g.n() - v < needed {
                    break;
                }
                if self.g.degree(v) < self.t {
                    continue;
                }
                let next = match common {
                    None => self.g.neighbors(v).to_vec(),
                    Some(c) => intersect_sorted(c, self.g.neighbors(v)),
                };
                if next.len() < self.t {
                    continue;
                }
                self.chosen.push(v);
                if let Some(b) = self.grow(v + 1, Some(&next))? {
                    return Ok(Some(b));
                }
                self.chosen.pop();
            }
            Ok(None)
        }
    }
    let mut search = Search {
        g,
        t,
        budget,
        nodes: 0,
        chosen: Vec::new(),
    };
    Ok(search.grow(0, None)?.map(|b| (search.chosen.clone(), b)))
}

/// Smallest `t ≥ 1` for which the graph has no `K_{t,t}` subgraph.
pub fn smallest_excluded_biclique(g: &Graph, budget: u64) -> Result<usize, OracleError> {
    let mut t = 1;
    while find_biclique(g, t, budget)?.is_some() {
        t += 1;
    }
    Ok(t)
}
