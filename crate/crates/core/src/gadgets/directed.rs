//! Rooted k-connectivity gadget on directed graphs.
//!
//! One terminal per source arc. The root reaches every left vertex for
//! free; buying a left label edge (u_i, a) and a right label edge (b, w_j)
//! with a projecting to b opens the canonical route
//! r -> u_i -> a -> b -> w_j -> t_{i,j}. Padding arcs from the other left
//! neighbors of w_j and parallel root arcs raise every terminal's indegree
//! to exactly k = Delta, so all in-arcs must carry flow and the canonical
//! route cannot be avoided.

use std::collections::BTreeSet;

use crate::model::LabelCoverInstance;

use super::{
    emission_costs, EdgeCost, EdgeSink, GadgetError, GadgetLayout, NetworkInstance, PaddingSets,
    ProblemKind, Role, Side, SourceView,
};

pub fn to_directed_rooted(
    src: &LabelCoverInstance,
) -> Result<(NetworkInstance, GadgetLayout), GadgetError> {
    let costs = emission_costs(src)?;
    let view = SourceView::new(src);
    let (nu, nw) = (src.left_count, src.right_count);
    let (l1, l2) = (src.left_labels, src.right_labels);
    let k = src.degree_profile().max_degree as u32;

    // vertex ids: r, u_i, A blocks, w_j, B blocks, one terminal per arc
    let root = 0usize;
    let u_id = |i: usize| 1 + i;
    let a_id = |i: usize, l: usize| 1 + nu + i * l1 + l;
    let w_id = |j: usize| 1 + nu + nu * l1 + j;
    let b_id = |j: usize, l: usize| 1 + nu + nu * l1 + nw + j * l2 + l;
    let t_base = 1 + nu + nu * l1 + nw + nw * l2;
    let t_id = |e: usize| t_base + e;

    let mut roles = vec![Role::Plain; t_base + src.arcs.len()];
    roles[root] = Role::Root;
    for i in 0..nu {
        roles[u_id(i)] = Role::LeftVertex;
        for l in 0..l1 {
            roles[a_id(i, l)] = Role::LeftLabel;
        }
    }
    for j in 0..nw {
        roles[w_id(j)] = Role::RightVertex;
        for l in 0..l2 {
            roles[b_id(j, l)] = Role::RightLabel;
        }
    }
    for e in 0..src.arcs.len() {
        roles[t_id(e)] = Role::Terminal;
    }

    let mut sink = EdgeSink::new();
    let mut layout = GadgetLayout {
        source_left: nu,
        source_right: nw,
        source_left_labels: l1,
        source_right_labels: l2,
        source_max_degree: k as usize,
        source_arcs: view.arcs.clone(),
        ..GadgetLayout::default()
    };

    for i in 0..nu {
        sink.push(root, u_id(i), EdgeCost::Zero, 1);
    }
    for i in 0..nu {
        for l in 0..l1 {
            let e = sink.push(u_id(i), a_id(i, l), EdgeCost::Finite(costs.left), 1);
            layout.label_edge.insert((Side::Left, i, l), e);
        }
    }
    for j in 0..nw {
        for l in 0..l2 {
            let e = sink.push(b_id(j, l), w_id(j), EdgeCost::Finite(costs.right), 1);
            layout.label_edge.insert((Side::Right, j, l), e);
        }
    }
    // projection arcs, deduped across parallel source arcs
    let mut proj: BTreeSet<(usize, usize, usize, usize)> = BTreeSet::new();
    for arc in &src.arcs {
        for (a, &b) in arc.image.iter().enumerate() {
            proj.insert((arc.left, arc.right, a, b));
        }
    }
    for (i, j, a, b) in proj {
        sink.push(a_id(i, a), b_id(j, b), EdgeCost::Zero, 1);
    }

    for (e, arc) in src.arcs.iter().enumerate() {
        sink.push(w_id(arc.right), t_id(e), EdgeCost::Zero, 1);
        let others = view.other_lefts(arc.right, arc.left);
        for &i2 in &others {
            sink.push(u_id(i2), t_id(e), EdgeCost::Zero, 1);
        }
        let indeg = 1 + others.len() as u32;
        if indeg < k {
            sink.push(root, t_id(e), EdgeCost::Zero, k - indeg);
        }
        layout.demand_of.push(e);
        layout.padding.push(PaddingSets::default());
        layout.canonical.push(vec![
            root,
            u_id(arc.left),
            a_id(arc.left, 0),
            b_id(arc.right, arc.image[0]),
            w_id(arc.right),
            t_id(e),
        ]);
    }

    let net = NetworkInstance {
        directed: true,
        kind: ProblemKind::RootedDirected,
        k,
        roles,
        edges: sink.edges,
        root: Some(root),
        terminals: (0..src.arcs.len()).map(t_id).collect(),
        demands: Vec::new(),
    };
    Ok((net, layout))
}
