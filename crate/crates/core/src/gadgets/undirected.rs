//! Rooted k-connectivity gadget on undirected graphs.
//!
//! Canonical route per demand: r, X_{i,j}, u_i, A_i, B_j, w_j, t_{i,j}.
//! The clique X_{i,j} has one vertex more than Z_{i,j}, the surrounding
//! label and terminal vertices every non-canonical route must consume, so
//! k disjoint routes exist exactly when a canonical route can be bought.

use std::collections::BTreeSet;

use crate::model::LabelCoverInstance;

use super::{
    emission_costs, EdgeCost, EdgeSink, GadgetError, GadgetLayout, NetworkInstance, PaddingSets,
    ProblemKind, Role, Side, SourceView,
};

pub fn to_undirected_rooted(
    src: &LabelCoverInstance,
) -> Result<(NetworkInstance, GadgetLayout), GadgetError> {
    let costs = emission_costs(src)?;
    let view = SourceView::new(src);
    let near = view.arcs_within_two();
    let (nu, nw) = (src.left_count, src.right_count);
    let (l1, l2) = (src.left_labels, src.right_labels);
    let arc_count = src.arcs.len();

    let root = 0usize;
    let u_id = |i: usize| 1 + i;
    let a_id = |i: usize, l: usize| 1 + nu + i * l1 + l;
    let w_id = |j: usize| 1 + nu + nu * l1 + j;
    let b_id = |j: usize, l: usize| 1 + nu + nu * l1 + nw + j * l2 + l;
    let base = 1 + nu + nu * l1 + nw + nw * l2;

    // Z sizes determine X block sizes, which determine Y sizes and k.
    let z_lefts: Vec<Vec<usize>> = src
        .arcs
        .iter()
        .map(|arc| view.other_lefts(arc.right, arc.left))
        .collect();
    let z_rights: Vec<Vec<usize>> = src
        .arcs
        .iter()
        .map(|arc| view.other_rights(arc.left, arc.right))
        .collect();
    let z_size: Vec<usize> = (0..arc_count)
        .map(|e| z_lefts[e].len() * l1 + z_rights[e].len() * l2 + near[e].len())
        .collect();

    let mut next = base;
    let mut x_block: Vec<Vec<usize>> = Vec::with_capacity(arc_count);
    let mut t_id = Vec::with_capacity(arc_count);
    for e in 0..arc_count {
        let block: Vec<usize> = (0..z_size[e] + 1).map(|p| next + p).collect();
        next += block.len();
        x_block.push(block);
        t_id.push(next);
        next += 1;
    }

    let y_size: Vec<usize> = (0..arc_count)
        .map(|e| near[e].iter().map(|&f| x_block[f].len()).sum())
        .collect();
    let k = (0..arc_count)
        .map(|e| z_size[e] + y_size[e])
        .max()
        .unwrap_or(0) as u32
        + 1;

    let mut q_block: Vec<Vec<usize>> = Vec::with_capacity(arc_count);
    for e in 0..arc_count {
        let size = k as usize - z_size[e] - y_size[e] - 1;
        let block: Vec<usize> = (0..size).map(|p| next + p).collect();
        next += size;
        q_block.push(block);
    }

    let mut roles = vec![Role::Plain; next];
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
    for e in 0..arc_count {
        roles[t_id[e]] = Role::Terminal;
        for &x in &x_block[e] {
            roles[x] = Role::CliquePad;
        }
        for &q in &q_block[e] {
            roles[q] = Role::AuxPad;
        }
    }

    let mut sink = EdgeSink::new();
    let mut layout = GadgetLayout {
        source_left: nu,
        source_right: nw,
        source_left_labels: l1,
        source_right_labels: l2,
        source_max_degree: src.degree_profile().max_degree,
        source_arcs: view.arcs.clone(),
        ..GadgetLayout::default()
    };

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
        let z_vertices: Vec<usize> = z_lefts[e]
            .iter()
            .flat_map(|&i2| (0..l1).map(move |l| a_id(i2, l)))
            .chain(
                z_rights[e]
                    .iter()
                    .flat_map(|&j2| (0..l2).map(move |l| b_id(j2, l))),
            )
            .chain(near[e].iter().map(|&f| t_id[f]))
            .collect();
        debug_assert_eq!(z_vertices.len(), z_size[e]);
        let y_vertices: Vec<usize> = near[e]
            .iter()
            .flat_map(|&f| x_block[f].iter().copied())
            .collect();

        // clique X_{i,j} wired to the root and to u_i
        for (p, &x) in x_block[e].iter().enumerate() {
            for &x2 in &x_block[e][p + 1..] {
                sink.push(x, x2, EdgeCost::Zero, 1);
            }
            sink.push(root, x, EdgeCost::Zero, 1);
            sink.push(x, u_id(arc.left), EdgeCost::Zero, 1);
        }
        sink.push(w_id(arc.right), t_id[e], EdgeCost::Zero, 1);
        for &z in &z_vertices {
            for &x in &x_block[e] {
                sink.push(x, z, EdgeCost::Zero, 1);
            }
            sink.push(z, t_id[e], EdgeCost::Zero, 1);
        }
        for &y in &y_vertices {
            sink.push(y, t_id[e], EdgeCost::Zero, 1);
        }
        for &q in &q_block[e] {
            sink.push(root, q, EdgeCost::Zero, 1);
            sink.push(q, t_id[e], EdgeCost::Zero, 1);
        }

        layout.demand_of.push(e);
        layout.padding.push(PaddingSets {
            z: z_vertices,
            y: y_vertices,
            q: q_block[e].clone(),
            s: Vec::new(),
            x: x_block[e].clone(),
        });
        layout.canonical.push(vec![
            root,
            x_block[e][0],
            u_id(arc.left),
            a_id(arc.left, 0),
            b_id(arc.right, arc.image[0]),
            w_id(arc.right),
            t_id[e],
        ]);
    }

    let net = NetworkInstance {
        directed: false,
        kind: ProblemKind::RootedUndirected,
        k,
        roles,
        edges: sink.edges,
        root: Some(root),
        terminals: t_id,
        demands: Vec::new(),
    };
    Ok((net, layout))
}
