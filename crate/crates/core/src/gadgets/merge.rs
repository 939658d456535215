//! Demand merging along strong edge coloring classes. Arcs sharing a color
//! form an induced matching in the source graph, so their gadget territories
//! are meant to meet only at shared endpoints and their demands can be
//! served by one merged terminal (rooted directed) or tracked as one demand
//! group (k-route cut).

use std::collections::BTreeSet;

use crate::matching::{MatchingError, StrongColoring};

use super::{
    EdgeCost, GadgetError, GadgetLayout, NetEdge, NetworkInstance, ProblemKind, Role,
};

#[derive(Clone, Debug)]
pub struct MergedInstance {
    pub base: NetworkInstance,
    pub coloring: StrongColoring,
    /// Demand ids grouped per color.
    pub classes: Vec<Vec<usize>>,
    /// Merged terminal vertex per color (rooted directed only).
    pub merged_terminal_of: Vec<Option<usize>>,
    pub k_new: u32,
}

impl MergedInstance {
    pub fn demand_count(&self) -> usize {
        self.classes.len()
    }
}

fn classes_of(
    layout: &GadgetLayout,
    coloring: &StrongColoring,
) -> Result<Vec<Vec<usize>>, GadgetError> {
    coloring.validate(&layout.source_arcs)?;
    if layout.demand_of.len() != layout.source_arcs.len() {
        return Err(GadgetError::ColoringInvalid(MatchingError::WrongArcCount {
            got: layout.demand_of.len(),
            want: layout.source_arcs.len(),
        }));
    }
    let mut classes = vec![Vec::new(); coloring.color_count];
    for (arc, &color) in coloring.color_of.iter().enumerate() {
        classes[color].push(layout.demand_of[arc]);
    }
    Ok(classes)
}

/// Unifies the terminals of each color class into one terminal with
/// requirement k*|class|, made uniform to k_new = k*max|class| by parallel
/// zero-cost root arcs. Rejects colorings whose classes are not induced
/// matchings.
pub fn merge_terminals_directed(
    instance: &NetworkInstance,
    layout: &GadgetLayout,
    coloring: &StrongColoring,
) -> Result<MergedInstance, GadgetError> {
    if instance.kind != ProblemKind::RootedDirected {
        return Err(GadgetError::WrongKind { expected: "rootedDirected", got: instance.kind });
    }
    let classes = classes_of(layout, coloring)?;
    let k = instance.k;
    let max_class = classes.iter().map(|c| c.len()).max().unwrap_or(1).max(1);
    let k_new = k * max_class as u32;

    // old terminal vertex -> color
    let mut color_of_terminal = vec![None; instance.vertex_count()];
    for (color, class) in classes.iter().enumerate() {
        for &demand in class {
            color_of_terminal[instance.terminals[demand]] = Some(color);
        }
    }

    let mut vertex_map = vec![usize::MAX; instance.vertex_count()];
    let mut roles = Vec::new();
    for (v, &role) in instance.roles.iter().enumerate() {
        if color_of_terminal[v].is_none() {
            vertex_map[v] = roles.len();
            roles.push(role);
        }
    }
    let mut merged_terminal_of = Vec::with_capacity(classes.len());
    for class in &classes {
        if class.is_empty() {
            merged_terminal_of.push(None);
            continue;
        }
        merged_terminal_of.push(Some(roles.len()));
        roles.push(Role::Terminal);
    }
    for (v, color) in color_of_terminal.iter().enumerate() {
        if let Some(c) = color {
            vertex_map[v] = merged_terminal_of[*c].expect("class with a terminal");
        }
    }

    let mut edges: Vec<NetEdge> = instance
        .edges
        .iter()
        .map(|e| NetEdge { u: vertex_map[e.u], v: vertex_map[e.v], ..*e })
        .collect();
    let root = vertex_map[instance.root.expect("rooted instance")];
    let mut terminals = Vec::new();
    for (color, class) in classes.iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let t = merged_terminal_of[color].unwrap();
        terminals.push(t);
        let deficit = k_new - k * class.len() as u32;
        if deficit > 0 {
            edges.push(NetEdge { u: root, v: t, cost: EdgeCost::Zero, mult: deficit });
        }
    }

    let base = NetworkInstance {
        directed: true,
        kind: ProblemKind::RootedDirected,
        k: k_new,
        roles,
        edges,
        root: Some(root),
        terminals,
        demands: Vec::new(),
    };
    Ok(MergedInstance {
        base,
        coloring: coloring.clone(),
        classes,
        merged_terminal_of,
        k_new,
    })
}

/// Kind-specific merged-demand construction with a pairwise disjointness
/// certificate over each class.
///
/// Rooted directed classes must have disjoint terminal path territories,
/// which reduces to disjoint left neighborhoods of the right endpoints;
/// an induced matching alone does not rule out a shared left neighbor
/// feeding padding arcs into both terminals. k-route classes must have
/// pairwise disjoint Z padding sets; the remaining territory pieces are
/// already separated by the induced-matching property.
pub fn merge_demands(
    instance: &NetworkInstance,
    layout: &GadgetLayout,
    coloring: &StrongColoring,
    kind: ProblemKind,
) -> Result<MergedInstance, GadgetError> {
    if kind != instance.kind {
        return Err(GadgetError::WrongKind { expected: kind.tag(), got: instance.kind });
    }
    let classes = classes_of(layout, coloring)?;
    match kind {
        ProblemKind::RootedDirected => {
            certify_directed(layout, &classes)?;
            merge_terminals_directed(instance, layout, coloring)
        }
        ProblemKind::KRouteCut => {
            certify_padding_disjoint(layout, &classes)?;
            Ok(MergedInstance {
                base: instance.clone(),
                coloring: coloring.clone(),
                classes,
                merged_terminal_of: Vec::new(),
                k_new: instance.k,
            })
        }
        other => Err(GadgetError::WrongKind { expected: "rootedDirected or kRouteCut", got: other }),
    }
}

fn certify_directed(layout: &GadgetLayout, classes: &[Vec<usize>]) -> Result<(), GadgetError> {
    let mut left_neighbors: Vec<BTreeSet<usize>> = Vec::new();
    for &(u, w) in &layout.source_arcs {
        if w >= left_neighbors.len() {
            left_neighbors.resize(w + 1, BTreeSet::new());
        }
        left_neighbors[w].insert(u);
    }
    for (color, class) in classes.iter().enumerate() {
        for (pos, &a) in class.iter().enumerate() {
            for &b in &class[pos + 1..] {
                let (_, wa) = layout.source_arcs[a];
                let (_, wb) = layout.source_arcs[b];
                if let Some(&shared) = left_neighbors[wa].intersection(&left_neighbors[wb]).next()
                {
                    return Err(GadgetError::SharedTerritory {
                        color,
                        arc_a: a,
                        arc_b: b,
                        vertex: format!("u{shared}"),
                    });
                }
            }
        }
    }
    Ok(())
}

fn certify_padding_disjoint(
    layout: &GadgetLayout,
    classes: &[Vec<usize>],
) -> Result<(), GadgetError> {
    for (color, class) in classes.iter().enumerate() {
        for (pos, &a) in class.iter().enumerate() {
            let za: BTreeSet<usize> = layout.padding[a].z.iter().copied().collect();
            for &b in &class[pos + 1..] {
                if let Some(&shared) = layout.padding[b].z.iter().find(|v| za.contains(v)) {
                    return Err(GadgetError::SharedTerritory {
                        color,
                        arc_a: a,
                        arc_b: b,
                        vertex: format!("v{shared}"),
                    });
                }
            }
        }
    }
    Ok(())
}
