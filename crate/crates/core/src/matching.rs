//! Strong edge coloring of the bipartite constraint graph: a partition of
//! the arcs into induced matchings. Demand merging consumes the classes, so
//! only the 2*Delta^2 greedy guarantee matters, not optimality.

use thiserror::Error;

use crate::model::LabelCoverInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongColoring {
    /// Color per arc index.
    pub color_of: Vec<usize>,
    pub color_count: usize,
}

impl StrongColoring {
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.color_count];
        for (arc, &c) in self.color_of.iter().enumerate() {
            out[c].push(arc);
        }
        out
    }

    /// Checks that every class is an induced matching of the given arcs.
    pub fn validate(&self, arcs: &[(usize, usize)]) -> Result<(), MatchingError> {
        if self.color_of.len() != arcs.len() {
            return Err(MatchingError::WrongArcCount {
                got: self.color_of.len(),
                want: arcs.len(),
            });
        }
        for (color, class) in self.classes().into_iter().enumerate() {
            if !is_induced_matching_arcs(arcs, &class) {
                return Err(MatchingError::NotInducedMatching { color });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("unknown arc id {0}")]
    UnknownArc(usize),
    #[error("coloring covers {got} arcs, instance has {want}")]
    WrongArcCount { got: usize, want: usize },
    #[error("color class {color} is not an induced matching")]
    NotInducedMatching { color: usize },
}

/// True when the arcs pairwise share no endpoint and no arc of the graph
/// joins an endpoint of one to an endpoint of another.
pub fn is_induced_matching(
    instance: &LabelCoverInstance,
    arc_ids: &[usize],
) -> Result<bool, MatchingError> {
    let arcs: Vec<(usize, usize)> = instance.arcs.iter().map(|a| (a.left, a.right)).collect();
    for &id in arc_ids {
        if id >= arcs.len() {
            return Err(MatchingError::UnknownArc(id));
        }
    }
    Ok(is_induced_matching_arcs(&arcs, arc_ids))
}

/// Same check over a bare arc list; ids must be in range.
pub fn is_induced_matching_arcs(arcs: &[(usize, usize)], arc_ids: &[usize]) -> bool {
    let present: std::collections::BTreeSet<(usize, usize)> = arcs.iter().copied().collect();
    for (pos, &e) in arc_ids.iter().enumerate() {
        for &f in &arc_ids[pos + 1..] {
            let (ul, wl) = arcs[e];
            let (ur, wr) = arcs[f];
            if ul == ur || wl == wr {
                return false;
            }
            if present.contains(&(ul, wr)) || present.contains(&(ur, wl)) {
                return false;
            }
        }
    }
    true
}

/// Greedy strong edge coloring in arc order: each arc takes the smallest
/// color absent from its conflict set, where two arcs conflict when they
/// share an endpoint or an arc joins their endpoints. Uses at most
/// 2*Delta^2 colors.
pub fn strong_edge_color(instance: &LabelCoverInstance) -> StrongColoring {
    let arcs: Vec<(usize, usize)> = instance.arcs.iter().map(|a| (a.left, a.right)).collect();
    let coloring = strong_edge_color_arcs(&arcs, instance.left_count, instance.right_count);
    let delta = instance.degree_profile().max_degree;
    debug_assert!(coloring.color_count <= 2 * delta * delta || arcs.is_empty());
    coloring
}

pub fn strong_edge_color_arcs(
    arcs: &[(usize, usize)],
    left_count: usize,
    right_count: usize,
) -> StrongColoring {
    let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); left_count];
    let mut by_right: Vec<Vec<usize>> = vec![Vec::new(); right_count];
    for (idx, &(u, w)) in arcs.iter().enumerate() {
        by_left[u].push(idx);
        by_right[w].push(idx);
    }

    let mut color_of = vec![usize::MAX; arcs.len()];
    let mut color_count = 0usize;
    let mut used = Vec::new();
    for (idx, &(u, w)) in arcs.iter().enumerate() {
        used.clear();
        used.resize(color_count + 1, false);
        let mut mark = |other: usize, color_of: &[usize]| {
            if other < idx && color_of[other] != usize::MAX {
                used[color_of[other]] = true;
            }
        };
        // conflicts: arcs at the same endpoint, and arcs incident to a
        // neighbor of an endpoint (those are exactly the joined pairs)
        for &other in by_left[u].iter().chain(&by_right[w]) {
            mark(other, &color_of);
        }
        for &a in &by_left[u] {
            let (_, w2) = arcs[a];
            for &other in &by_right[w2] {
                mark(other, &color_of);
            }
        }
        for &a in &by_right[w] {
            let (u2, _) = arcs[a];
            for &other in &by_left[u2] {
                mark(other, &color_of);
            }
        }
        let color = used.iter().position(|&u| !u).unwrap_or(color_count);
        color_of[idx] = color;
        color_count = color_count.max(color + 1);
    }
    StrongColoring { color_of, color_count }
}
