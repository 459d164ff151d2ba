//! Deterministic instance generators for structured and random families.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, Hypergraph};
use crate::rng::stream_rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("infeasible family spec: {0}")]
    InfeasibleSpec(String),
    #[error("cannot parse family spec `{0}`")]
    BadSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// `K_{1,n}`: a center plus `n` leaves.
    Star(usize),
    Biclique(usize, usize),
    Gnm { n: usize, m: usize, seed: u64 },
    /// `m` random edges, each touching a planted set of `k` vertices.
    VcBounded { n: usize, k: usize, m: usize, seed: u64 },
    /// `m` random hyperedges of size ≤ `max_size`, each containing one of `k` planted vertices.
    HyperHs { n: usize, k: usize, m: usize, max_size: usize, seed: u64 },
    /// `K_{a,b}` on the first `a + b` vertices, `extra` more vertices and `m`
    /// random edges outside the biclique.
    Anchored { a: usize, b: usize, extra: usize, m: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    /// Planted vertex cover / hitting set, or a natural one for structured families.
    pub planted: Vec<usize>,
    pub spec: FamilySpec,
}

impl Generated {
    pub fn graph(&self) -> Option<&Graph> {
        match &self.instance {
            Instance::Graph(g) => Some(g),
            Instance::Hypergraph(_) => None,
        }
    }

    pub fn hypergraph(&self) -> Option<&Hypergraph> {
        match &self.instance {
            Instance::Hypergraph(h) => Some(h),
            Instance::Graph(_) => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.spec {
            FamilySpec::Gnm { seed, .. }
            | FamilySpec::VcBounded { seed, .. }
            | FamilySpec::HyperHs { seed, .. }
            | FamilySpec::Anchored { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Path(n) => write!(f, "path {n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle {n}"),
            FamilySpec::Complete(n) => write!(f, "complete {n}"),
            FamilySpec::Star(n) => write!(f, "star {n}"),
            FamilySpec::Biclique(a, b) => write!(f, "biclique {a} {b}"),
            FamilySpec::Gnm { n, m, seed } => write!(f, "gnm {n} {m} {seed}"),
            FamilySpec::VcBounded { n, k, m, seed } => write!(f, "vc_bounded {n} {k} {m} {seed}"),
            FamilySpec::HyperHs {
                n,
                k,
                m,
                max_size,
                seed,
            } => write!(f, "hyper_hs {n} {k} {m} {max_size} {seed}"),
            FamilySpec::Anchored { a, b, extra, m, seed } => write!(f, "anchored {a} {b} {extra} {m} {seed}"),
        }
    }
}

impl FamilySpec {
    /// Parses `name args...`; random families take the seed as a trailing
    /// argument or, when absent, from `default_seed`.
    pub fn parse(text: &str, default_seed: Option<u64>) -> Result<Self, GenerateError> {
        let bad = || GenerateError::BadSpec(text.to_string());
        let mut words = text.split(|c: char| c.is_whitespace() || c == ',' || c == ':').filter(|w| !w.is_empty());
        let name = words.next().ok_or_else(bad)?;
        let nums: Vec<u64> = words.map(|w| w.parse::<u64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let arity = |want: usize| -> Result<Vec<u64>, GenerateError> {
            match nums.len() {
                l if l == want => Ok(nums.clone()),
                l if l + 1 == want => default_seed.map(|s| [nums.clone(), vec![s]].concat()).ok_or_else(bad),
                _ => Err(bad()),
            }
        };
        let fixed = |want: usize| if nums.len() == want { Ok(nums.clone()) } else { Err(bad()) };
        let u = |x: u64| x as usize;
        Ok(match name {
            "path" => FamilySpec::Path(u(fixed(1)?[0])),
            "cycle" => FamilySpec::Cycle(u(fixed(1)?[0])),
            "complete" => FamilySpec::Complete(u(fixed(1)?[0])),
            "star" => FamilySpec::Star(u(fixed(1)?[0])),
            "biclique" => {
                let a = fixed(2)?;
                FamilySpec::Biclique(u(a[0]), u(a[1]))
            }
            "gnm" => {
                let a = arity(3)?;
                FamilySpec::Gnm {
                    n: u(a[0]),
                    m: u(a[1]),
                    seed: a[2],
                }
            }
            "vc_bounded" => {
                let a = arity(4)?;
                FamilySpec::VcBounded {
                    n: u(a[0]),
                    k: u(a[1]),
                    m: u(a[2]),
                    seed: a[3],
                }
            }
            "hyper_hs" => {
                let a = arity(5)?;
                FamilySpec::HyperHs {
                    n: u(a[0]),
                    k: u(a[1]),
                    m: u(a[2]),
                    max_size: u(a[3]),
                    seed: a[4],
                }
            }
            "anchored" => {
                let x = arity(5)?;
                FamilySpec::Anchored {
                    a: u(x[0]),
                    b: u(x[1]),
                    extra: u(x[2]),
                    m: u(x[3]),
                    seed: x[4],
                }
            }
            _ => return Err(bad()),
        })
    }
}

impl FromStr for FamilySpec {
    type Err = GenerateError;
    fn from_str(s: &str) -> Result<Self, GenerateError> {
        FamilySpec::parse(s, None)
    }
}

fn infeasible(spec: FamilySpec) -> GenerateError {
    GenerateError::InfeasibleSpec(spec.to_string())
}

fn graph(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("generator emits simple graphs")
}

pub fn generate_family(spec: FamilySpec) -> Result<Generated, GenerateError> {
    let (instance, planted) = match spec {
        FamilySpec::Path(n) => {
            let g = graph(n, (1..n).map(|i| (i - 1, i)));
            (Instance::Graph(g), (1..n.saturating_sub(1)).step_by(2).collect())
        }
        FamilySpec::Cycle(n) => {
            if n < 3 {
                return Err(infeasible(spec));
            }
            let g = graph(n, (0..n).map(|i| (i, (i + 1) % n)));
            (Instance::Graph(g), (0..n).step_by(2).collect())
        }
        FamilySpec::Complete(n) => (
            Instance::Graph(graph(n, (0..n).tuple_combinations())),
            (0..n.saturating_sub(1)).collect(),
        ),
        FamilySpec::Star(n) => (Instance::Graph(graph(n + 1, (1..=n).map(|v| (0, v)))), vec![0]),
        FamilySpec::Biclique(a, b) => {
            let g = graph(a + b, (0..a).cartesian_product(a..a + b));
            let side = if a <= b { (0..a).collect() } else { (a..a + b).collect() };
            (Instance::Graph(g), side)
        }
        FamilySpec::Gnm { n, m, seed } => {
            let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            if m > pairs.len() {
                return Err(infeasible(spec));
            }
            let mut rng = stream_rng(seed, 0);
            let mut chosen = sample(&mut rng, pairs.len(), m).into_vec();
            chosen.sort_unstable();
            let g = graph(n, chosen.into_iter().map(|i| pairs[i]));
            (Instance::Graph(g), Vec::new())
        }
        FamilySpec::VcBounded { n, k, m, seed } => {
            if k > n {
                return Err(infeasible(spec));
            }
            let mut rng = stream_rng(seed, 0);
            let mut planted = sample(&mut rng, n, k).into_vec();
            planted.sort_unstable();
            let mut in_set = vec![false; n];
            for &v in &planted {
                in_set[v] = true;
            }
            let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().filter(|&(u, v)| in_set[u] || in_set[v]).collect();
            if m > pairs.len() {
                return Err(infeasible(spec));
            }
            let mut chosen = sample(&mut rng, pairs.len(), m).into_vec();
            chosen.sort_unstable();
            (Instance::Graph(graph(n, chosen.into_iter().map(|i| pairs[i]))), planted)
        }
        FamilySpec::HyperHs {
            n,
            k,
            m,
            max_size,
            seed,
        } => {
            if k > n || max_size == 0 || (m > 0 && k == 0) {
                return Err(infeasible(spec));
            }
            let mut rng = stream_rng(seed, 0);
            let mut planted = sample(&mut rng, n, k).into_vec();
            planted.sort_unstable();
            let edges: Vec<Vec<usize>> = (0..m)
                .map(|_| {
                    let hub = planted[rng.gen_range(0..k)];
                    let size = rng.gen_range(1..=max_size.min(n));
                    let mut e = vec![hub];
                    while e.len() < size {
                        let v = rng.gen_range(0..n);
                        if !e.contains(&v) {
                            e.push(v);
                        }
                    }
                    e
                })
                .collect();
            let h = Hypergraph::new(n, edges).expect("generator emits valid hyperedges");
            (Instance::Hypergraph(h), planted)
        }
        FamilySpec::Anchored { a, b, extra, m, seed } => {
            let n = a + b + extra;
            let side = |v: usize| if v < a { 1 } else if v < a + b { 2 } else { 0 };
            let pairs: Vec<(usize, usize)> =
                (0..n).tuple_combinations().filter(|&(u, v)| !(side(u) == 1 && side(v) == 2)).collect();
            if m > pairs.len() {
                return Err(infeasible(spec));
            }
            let mut rng = stream_rng(seed, 0);
            let mut chosen = sample(&mut rng, pairs.len(), m).into_vec();
            chosen.sort_unstable();
            let g = graph(n, (0..a).cartesian_product(a..a + b).chain(chosen.into_iter().map(|i| pairs[i])));
            let small = if a <= b { 0..a } else { a..a + b };
            let planted = small.chain(a + b..n).collect();
            (Instance::Graph(g), planted)
        }
    };
    Ok(Generated { instance, planted, spec })
}
