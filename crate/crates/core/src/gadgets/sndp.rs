//! Vertex-connectivity survivable network design gadget on undirected
//! graphs. One source-sink pair per source arc, with both endpoints wired
//! to every vertex of Y u Z; the canonical route s, u_i, A_i, B_j, w_j, t
//! supplies the one path beyond those, so the uniform requirement
//! k = max |Y u Z| + 1 is met exactly when the arc is covered.

use std::collections::BTreeSet;

use crate::model::LabelCoverInstance;

use super::{
    emission_costs, EdgeCost, EdgeSink, GadgetError, GadgetLayout, NetworkInstance, PaddingSets,
    ProblemKind, Role, Side, SourceView,
};

pub fn to_vc_sndp(
    src: &LabelCoverInstance,
) -> Result<(NetworkInstance, GadgetLayout), GadgetError> {
    let costs = emission_costs(src)?;
    let view = SourceView::new(src);
    let near = view.arcs_within_two();
    let (nu, nw) = (src.left_count, src.right_count);
    let (l1, l2) = (src.left_labels, src.right_labels);
    let arc_count = src.arcs.len();

    let u_id = |i: usize| i;
    let a_id = |i: usize, l: usize| nu + i * l1 + l;
    let w_id = |j: usize| nu + nu * l1 + j;
    let b_id = |j: usize, l: usize| nu + nu * l1 + nw + j * l2 + l;
    let pair_base = nu + nu * l1 + nw + nw * l2;
    let s_id = |e: usize| pair_base + 2 * e;
    let t_id = |e: usize| pair_base + 2 * e + 1;

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
    let yz_size: Vec<usize> = (0..arc_count)
        .map(|e| z_lefts[e].len() * l1 + z_rights[e].len() * l2 + 2 * near[e].len())
        .collect();
    let k = yz_size.iter().copied().max().unwrap_or(0) as u32 + 1;

    let mut next = pair_base + 2 * arc_count;
    let mut q_block: Vec<Vec<usize>> = Vec::with_capacity(arc_count);
    for e in 0..arc_count {
        let size = k as usize - yz_size[e] - 1;
        let block: Vec<usize> = (0..size).map(|p| next + p).collect();
        next += size;
        q_block.push(block);
    }

    let mut roles = vec![Role::Plain; next];
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
        roles[s_id(e)] = Role::Source;
        roles[t_id(e)] = Role::Sink;
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

    let mut demands = Vec::with_capacity(arc_count);
    for (e, arc) in src.arcs.iter().enumerate() {
        let yz_vertices: Vec<usize> = z_lefts[e]
            .iter()
            .flat_map(|&i2| (0..l1).map(move |l| a_id(i2, l)))
            .chain(
                z_rights[e]
                    .iter()
                    .flat_map(|&j2| (0..l2).map(move |l| b_id(j2, l))),
            )
            .chain(near[e].iter().flat_map(|&f| [s_id(f), t_id(f)]))
            .collect();
        debug_assert_eq!(yz_vertices.len(), yz_size[e]);

        sink.push(s_id(e), u_id(arc.left), EdgeCost::Zero, 1);
        sink.push(w_id(arc.right), t_id(e), EdgeCost::Zero, 1);
        for &x in &yz_vertices {
            sink.push(s_id(e), x, EdgeCost::Zero, 1);
            sink.push(x, t_id(e), EdgeCost::Zero, 1);
        }
        for &q in &q_block[e] {
            sink.push(s_id(e), q, EdgeCost::Zero, 1);
            sink.push(q, t_id(e), EdgeCost::Zero, 1);
        }

        demands.push(super::Demand { s: s_id(e), t: t_id(e), req: k });
        layout.demand_of.push(e);
        let z: Vec<usize> = yz_vertices[..yz_size[e] - 2 * near[e].len()].to_vec();
        let y: Vec<usize> = yz_vertices[yz_size[e] - 2 * near[e].len()..].to_vec();
        layout.padding.push(PaddingSets {
            z,
            y,
            q: q_block[e].clone(),
            s: Vec::new(),
            x: Vec::new(),
        });
        layout.canonical.push(vec![
            s_id(e),
            u_id(arc.left),
            a_id(arc.left, 0),
            b_id(arc.right, arc.image[0]),
            w_id(arc.right),
            t_id(e),
        ]);
    }

    let net = NetworkInstance {
        directed: false,
        kind: ProblemKind::VcSndp,
        k,
        roles,
        edges: sink.edges,
        root: None,
        terminals: Vec::new(),
        demands,
    };
    Ok((net, layout))
}
