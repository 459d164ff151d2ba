//! Edge types relative to an ordered hitting set, groups of an edge
//! permutation, and the reversal-based normalization of edge paths.
//!
//! Types are 0-based here: an edge has type `i` when `hitting_set[i]` is the
//! first hitting-set vertex it contains.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cert::{is_edge_walk, is_permutation, EdgeSeq, Mode};
use crate::graph::EdgeSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypingError {
    #[error("edge {0} is not hit by the given set")]
    NotAHittingSet(usize),
    #[error("hitting-set vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("hitting-set vertex {0} listed twice")]
    DuplicateVertex(usize),
    #[error("input is not a valid edge-Hamiltonian path")]
    InvalidInputPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAssignment {
    pub hitting_set: Vec<usize>,
    pub type_of: Vec<usize>,
}

impl TypeAssignment {
    pub fn k(&self) -> usize {
        self.hitting_set.len()
    }

    /// The hitting-set vertex that defines type `i`.
    pub fn hub(&self, i: usize) -> usize {
        self.hitting_set[i]
    }

    pub fn edges_of_type(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.type_of
            .iter()
            .enumerate()
            .filter(move |&(_, &t)| t == i)
            .map(|(e, _)| e)
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.k()];
        for &t in &self.type_of {
            c[t] += 1;
        }
        c
    }
}

pub fn classify_types<G: EdgeSystem + ?Sized>(g: &G, hitting_set: &[usize]) -> Result<TypeAssignment, TypingError> {
    let mut position = vec![usize::MAX; g.vertex_count()];
    for (i, &u) in hitting_set.iter().enumerate() {
        if u >= g.vertex_count() {
            return Err(TypingError::VertexOutOfRange(u));
        }
        if position[u] != usize::MAX {
            return Err(TypingError::DuplicateVertex(u));
        }
        position[u] = i;
    }
    let type_of = (0..g.edge_count())
        .map(|e| {
            g.members(e)
                .iter()
                .map(|&v| position[v])
                .min()
                .filter(|&p| p != usize::MAX)
                .ok_or(TypingError::NotAHittingSet(e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TypeAssignment {
        hitting_set: hitting_set.to_vec(),
        type_of,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub ty: usize,
    /// Positions in the sequence.
    pub range: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDecomposition {
    pub groups: Vec<Group>,
    /// Edge indices that start or end a group.
    pub special: BTreeSet<usize>,
}

impl GroupDecomposition {
    pub fn groups_of_type(&self, ty: usize) -> usize {
        self.groups.iter().filter(|g| g.ty == ty).count()
    }

    pub fn special_of_type(&self, t: &TypeAssignment, ty: usize) -> usize {
        self.special.iter().filter(|&&e| t.type_of[e] == ty).count()
    }
}

pub fn decompose_groups(s: &EdgeSeq, t: &TypeAssignment) -> GroupDecomposition {
    group_runs(&s.order, |e| t.type_of[e])
}

pub(crate) fn group_runs(order: &[usize], type_of: impl Fn(usize) -> usize) -> GroupDecomposition {
    let mut groups: Vec<Group> = Vec::new();
    for (p, &e) in order.iter().enumerate() {
        let ty = type_of(e);
        match groups.last_mut() {
            Some(g) if g.ty == ty => g.range.end = p + 1,
            _ => groups.push(Group { ty, range: p..p + 1 }),
        }
    }
    let special = groups
        .iter()
        .flat_map(|g| [order[g.range.start], order[g.range.end - 1]])
        .collect();
    GroupDecomposition { groups, special }
}

/// Rewrites `order` in place until no ordered pair of distinct types occurs as
/// consecutive edges more than once. Each step reverses the stretch between
/// two occurrences of the same transition, which keeps the walk valid and
/// strictly lowers the number of groups.
pub(crate) fn normalize_order(order: &mut [usize], type_of: impl Fn(usize) -> usize) {
    loop {
        let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut repeat = None;
        for p in 0..order.len().saturating_sub(1) {
            let pair = (type_of(order[p]), type_of(order[p + 1]));
            if pair.0 == pair.1 {
                continue;
            }
            if let Some(&q) = first_seen.get(&pair) {
                repeat = Some((q, p));
                break;
            }
            first_seen.insert(pair, p);
        }
        match repeat {
            Some((p, q)) => order[p + 1..=q].reverse(),
            None => return,
        }
    }
}

/// Position at which an edge of type `ty` can be inserted into a walk whose
/// edges have the given types: inside the first group of type `ty` with at
/// least two edges, or next to a type-`ty` edge at either end of the walk.
pub(crate) fn insertion_point(order: &[usize], type_of: impl Fn(usize) -> usize, ty: usize) -> Option<usize> {
    let runs = group_runs(order, &type_of);
    if let Some(g) = runs.groups.iter().find(|g| g.ty == ty && g.range.len() >= 2) {
        return Some(g.range.start + 1);
    }
    match (order.first(), order.last()) {
        (_, Some(&e)) if type_of(e) == ty => Some(order.len()),
        (Some(&e), _) if type_of(e) == ty => Some(0),
        _ => None,
    }
}

pub fn normalize_edge_path<G: EdgeSystem + ?Sized>(
    g: &G,
    s: &EdgeSeq,
    t: &TypeAssignment,
) -> Result<EdgeSeq, TypingError> {
    if !is_permutation(&s.order, g.edge_count()) || !is_edge_walk(g, &s.order, Mode::Path) {
        return Err(TypingError::InvalidInputPath);
    }
    let mut order = s.order.clone();
    normalize_order(&mut order, |e| t.type_of[e]);
    debug_assert!(is_edge_walk(g, &order, Mode::Path));
    Ok(EdgeSeq::path(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::validate_edge_sequence;
    use crate::graph::Graph;

    #[test]
    fn star_is_single_type() {
        let star = Graph::new(5, (1..5).map(|v| (0, v))).unwrap();
        let t = classify_types(&star, &[0]).unwrap();
        assert!(t.type_of.iter().all(|&ty| ty == 0));
    }

    #[test]
    fn smallest_index_rule() {
        let tri = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = classify_types(&tri, &[0, 1]).unwrap();
        assert_eq!(t.type_of, vec![0, 0, 1]);
        let t = classify_types(&tri, &[0, 1, 2]).unwrap();
        assert_eq!(t.type_of, vec![0, 0, 1]);
        assert_eq!(classify_types(&tri, &[2]), Err(TypingError::NotAHittingSet(0)));
        assert_eq!(classify_types(&tri, &[2, 2]), Err(TypingError::DuplicateVertex(2)));
    }

    fn typed(types: &[usize]) -> (EdgeSeq, TypeAssignment) {
        let s = EdgeSeq::path((0..types.len()).collect());
        let k = types.iter().max().map_or(0, |m| m + 1);
        let t = TypeAssignment {
            hitting_set: (0..k).collect(),
            type_of: types.to_vec(),
        };
        (s, t)
    }

    #[test]
    fn groups_and_special_edges() {
        let (s, t) = typed(&[0, 0, 1]);
        let d = decompose_groups(&s, &t);
        assert_eq!(d.groups, vec![Group { ty: 0, range: 0..2 }, Group { ty: 1, range: 2..3 }]);
        assert_eq!(d.special, BTreeSet::from([0, 1, 2]));

        let (s, t) = typed(&[0, 0, 0, 0]);
        let d = decompose_groups(&s, &t);
        assert_eq!(d.groups.len(), 1);
        assert_eq!(d.special.len(), 2);
        let (s, t) = typed(&[0]);
        assert_eq!(decompose_groups(&s, &t).special.len(), 1);

        let (s, t) = typed(&[0, 1, 0]);
        let d = decompose_groups(&s, &t);
        assert_eq!(d.groups.len(), 3);
        assert_eq!(d.special.len(), 3);
    }

    #[test]
    fn normalize_alternating_types() {
        // Cover {0, 1}; walk alternates between edges at 0 and edges at 1.
        // x0-0, 0-x1, x1-1, 1-x2, x2-0, 0-x3, x3-1, 1-x4 with x_i = 2..=6.
        let g = Graph::new(7, [(2, 0), (0, 3), (3, 1), (1, 4), (4, 0), (0, 5), (5, 1), (1, 6)]).unwrap();
        let t = classify_types(&g, &[0, 1]).unwrap();
        let s = EdgeSeq::path((0..8).collect());
        assert!(validate_edge_sequence(&g, &s).unwrap());
        assert_eq!(decompose_groups(&s, &t).groups.len(), 4);
        let out = normalize_edge_path(&g, &s, &t).unwrap();
        assert!(validate_edge_sequence(&g, &out).unwrap());
        let d = decompose_groups(&out, &t);
        let transitions = d.groups.windows(2).filter(|w| w[0].ty == 0 && w[1].ty == 1).count();
        assert!(transitions <= 1);
        assert!(d.groups.len() < 4);
    }

    #[test]
    fn normalize_fixpoints() {
        let g = Graph::new(5, [(0, 1), (0, 2), (2, 3), (3, 4)]).unwrap();
        let t = classify_types(&g, &[0, 3]).unwrap();
        let s = EdgeSeq::path(vec![1, 0, 2, 3]);
        assert!(normalize_edge_path(&g, &s, &t).is_err());
        let s = EdgeSeq::path(vec![0, 1, 2, 3]);
        assert_eq!(normalize_edge_path(&g, &s, &t).unwrap(), s);
        let star = Graph::new(4, (1..4).map(|v| (0, v))).unwrap();
        let t = classify_types(&star, &[0]).unwrap();
        let s = EdgeSeq::path(vec![2, 0, 1]);
        assert_eq!(normalize_edge_path(&star, &s, &t).unwrap(), s);
    }

    #[test]
    fn insertion_prefers_large_groups() {
        let ty = |e: usize| [0, 1, 1, 0][e];
        assert_eq!(insertion_point(&[0, 1, 2, 3], ty, 1), Some(2));
        assert_eq!(insertion_point(&[0, 1, 2, 3], ty, 0), Some(4));
        assert_eq!(insertion_point(&[1, 0, 2], ty, 0), None);
    }
}
