//! Vertex-connectivity k-route cut gadget on undirected graphs.
//!
//! Labels become removable edges: each left label is an edge {a,a'} of
//! E(u_i) and each right label an edge {b,b'} of E(w_j). Per right vertex
//! the edges of E(w_j) are strung into a path P_j; per arc the edges of
//! E(u_i) are strung into a path Q_{i,j} ordered by preimage blocks, with
//! separator vertices between consecutive edges and infinite-cost cross
//! links tying each block boundary to the matching P_j edge boundary. The
//! cross links let a detour zig-zag around a removed edge unless a
//! projecting pair is removed on both paths, which is exactly covering the
//! arc. Star padding over Z u S fixes the intact connectivity at k+1 = z+2.
//!
//! Demand endpoints are per arc, and Z_{i,j} covers, beyond the paths and
//! separators of arcs sharing an endpoint, the demand endpoints of every
//! arc within line-graph distance two. Those arcs' padding stars attach to
//! this demand's own paths, so their endpoints must be absorbed; with them
//! in Z, deleting Z u S strips the demand down to its bare Q/P system.
//!
//! Separator vertices collapse across empty preimage blocks; boundaries
//! that land before the first or after the last edge get a dedicated lead
//! or trail separator on the path, keeping every cross link anchored.

use std::collections::BTreeSet;

use crate::model::LabelCoverInstance;

use super::{
    emission_costs, Demand, EdgeCost, EdgeSink, GadgetError, GadgetLayout, NetworkInstance,
    PaddingSets, ProblemKind, Role, Side, SourceView,
};

struct ArcPaths {
    /// Edge order of E(u_i) for this arc: preimage blocks in right-label
    /// order, ascending inside a block.
    order: Vec<usize>,
    /// Running count of edges in blocks 0..=t, indexed by right label t.
    prefix: Vec<usize>,
    lead: Option<usize>,
    inter: Vec<usize>,
    trail: Option<usize>,
}

impl ArcPaths {
    fn x_vertices(&self) -> Vec<usize> {
        self.lead
            .into_iter()
            .chain(self.inter.iter().copied())
            .chain(self.trail)
            .collect()
    }

    /// Separator carrying the cross links of the boundary after block t.
    fn separator_at(&self, position: usize, l1: usize) -> usize {
        if position == 0 {
            self.lead.expect("lead separator allocated")
        } else if position == l1 {
            self.trail.expect("trail separator allocated")
        } else {
            self.inter[position - 1]
        }
    }
}

pub fn to_k_route_cut(
    src: &LabelCoverInstance,
) -> Result<(NetworkInstance, GadgetLayout), GadgetError> {
    let costs = emission_costs(src)?;
    let view = SourceView::new(src);
    let near = view.arcs_within_two();
    let (nu, nw) = (src.left_count, src.right_count);
    let (l1, l2) = (src.left_labels, src.right_labels);
    let arc_count = src.arcs.len();

    let a_id = |i: usize, l: usize| i * 2 * l1 + 2 * l;
    let a2_id = |i: usize, l: usize| i * 2 * l1 + 2 * l + 1;
    let base_w = nu * 2 * l1;
    let b_id = |j: usize, l: usize| base_w + j * 2 * l2 + 2 * l;
    let b2_id = |j: usize, l: usize| base_w + j * 2 * l2 + 2 * l + 1;
    let pair_base = base_w + nw * 2 * l2;
    let s_id = |e: usize| pair_base + 2 * e;
    let t_id = |e: usize| pair_base + 2 * e + 1;
    let mut next = pair_base + 2 * arc_count;

    // separator layout per arc
    let mut paths: Vec<ArcPaths> = Vec::with_capacity(arc_count);
    for arc in &src.arcs {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); l2];
        for (a, &b) in arc.image.iter().enumerate() {
            blocks[b].push(a);
        }
        let order: Vec<usize> = blocks.iter().flatten().copied().collect();
        let mut prefix = Vec::with_capacity(l2);
        let mut acc = 0usize;
        for block in &blocks {
            acc += block.len();
            prefix.push(acc);
        }
        let boundary_positions: Vec<usize> = (0..l2.saturating_sub(1)).map(|t| prefix[t]).collect();
        let needs_lead = boundary_positions.iter().any(|&p| p == 0);
        let needs_trail = boundary_positions.iter().any(|&p| p == l1);
        let lead = needs_lead.then(|| {
            let v = next;
            next += 1;
            v
        });
        let inter: Vec<usize> = (0..l1.saturating_sub(1))
            .map(|_| {
                let v = next;
                next += 1;
                v
            })
            .collect();
        let trail = needs_trail.then(|| {
            let v = next;
            next += 1;
            v
        });
        paths.push(ArcPaths { order, prefix, lead, inter, trail });
    }

    // padding sets: path pieces of arcs sharing an endpoint, and the demand
    // endpoints of every arc within line distance two
    let mut z_sets: Vec<Vec<usize>> = Vec::with_capacity(arc_count);
    for (e, arc) in src.arcs.iter().enumerate() {
        let mut z: BTreeSet<usize> = BTreeSet::new();
        for &f in &view.by_right[arc.right] {
            if f == e {
                continue;
            }
            let (i2, _) = view.arcs[f];
            if i2 != arc.left {
                z.extend((0..l1).flat_map(|l| [a_id(i2, l), a2_id(i2, l)]));
            }
            z.extend(paths[f].x_vertices());
        }
        for &f in &view.by_left[arc.left] {
            let (_, j2) = view.arcs[f];
            if f == e || j2 == arc.right {
                continue;
            }
            z.extend(paths[f].x_vertices());
            z.extend((0..l2).flat_map(|l| [b_id(j2, l), b2_id(j2, l)]));
        }
        for &f in &near[e] {
            z.insert(s_id(f));
            z.insert(t_id(f));
        }
        z_sets.push(z.into_iter().collect());
    }
    let z_max = z_sets.iter().map(|z| z.len()).max().unwrap_or(0);
    let k = z_max as u32 + 1;

    let mut s_sets: Vec<Vec<usize>> = Vec::with_capacity(arc_count);
    for z in &z_sets {
        let block: Vec<usize> = (0..z_max - z.len()).map(|p| next + p).collect();
        next += block.len();
        s_sets.push(block);
    }

    let mut roles = vec![Role::Plain; next];
    for i in 0..nu {
        for l in 0..l1 {
            roles[a_id(i, l)] = Role::LeftLabel;
            roles[a2_id(i, l)] = Role::LeftLabel;
        }
    }
    for j in 0..nw {
        for l in 0..l2 {
            roles[b_id(j, l)] = Role::RightLabel;
            roles[b2_id(j, l)] = Role::RightLabel;
        }
    }
    for e in 0..arc_count {
        roles[s_id(e)] = Role::Source;
        roles[t_id(e)] = Role::Sink;
    }
    for p in &paths {
        for x in p.x_vertices() {
            roles[x] = Role::Separator;
        }
    }
    for s in &s_sets {
        for &v in s {
            roles[v] = Role::SlackPad;
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
            let e = sink.push(a_id(i, l), a2_id(i, l), EdgeCost::Finite(costs.left), 1);
            layout.label_edge.insert((Side::Left, i, l), e);
        }
    }
    for j in 0..nw {
        for l in 0..l2 {
            let e = sink.push(b_id(j, l), b2_id(j, l), EdgeCost::Finite(costs.right), 1);
            layout.label_edge.insert((Side::Right, j, l), e);
        }
        for l in 0..l2.saturating_sub(1) {
            sink.push_unique(b2_id(j, l), b_id(j, l + 1), EdgeCost::Infinite);
        }
    }

    let mut demands = Vec::with_capacity(arc_count);
    for (e, arc) in src.arcs.iter().enumerate() {
        let (i, j) = (arc.left, arc.right);
        let p = &paths[e];

        // Q path: lead?, edges of E(u_i) in psi order with separators, trail?
        let mut seq: Vec<usize> = Vec::new();
        if let Some(x) = p.lead {
            seq.push(x);
        }
        for (pos, &l) in p.order.iter().enumerate() {
            seq.push(a_id(i, l));
            seq.push(a2_id(i, l));
            if pos + 1 < p.order.len() {
                seq.push(p.inter[pos]);
            }
        }
        if let Some(x) = p.trail {
            seq.push(x);
        }
        for pair in seq.windows(2) {
            let finite_pair =
                roles[pair[0]] == Role::LeftLabel && roles[pair[1]] == Role::LeftLabel;
            if !finite_pair {
                sink.push_unique(pair[0], pair[1], EdgeCost::Infinite);
            }
        }
        // cross links at block boundaries
        for t in 0..l2.saturating_sub(1) {
            let x = p.separator_at(p.prefix[t], l1);
            sink.push_unique(b2_id(j, t), x, EdgeCost::Infinite);
            sink.push_unique(b_id(j, t + 1), x, EdgeCost::Infinite);
        }
        // demand endpoints join both path heads and tails
        sink.push_unique(s_id(e), seq[0], EdgeCost::Infinite);
        sink.push_unique(s_id(e), b_id(j, 0), EdgeCost::Infinite);
        sink.push_unique(*seq.last().unwrap(), t_id(e), EdgeCost::Infinite);
        sink.push_unique(b2_id(j, l2 - 1), t_id(e), EdgeCost::Infinite);
        // padding stars
        for &v in z_sets[e].iter().chain(&s_sets[e]) {
            sink.push_unique(s_id(e), v, EdgeCost::Infinite);
            sink.push_unique(v, t_id(e), EdgeCost::Infinite);
        }

        demands.push(Demand { s: s_id(e), t: t_id(e), req: k });
        layout.demand_of.push(e);
        layout.padding.push(PaddingSets {
            z: z_sets[e].clone(),
            y: Vec::new(),
            q: Vec::new(),
            s: s_sets[e].clone(),
            x: p.x_vertices(),
        });
        let mut canonical = vec![s_id(e)];
        canonical.extend(&seq);
        canonical.push(t_id(e));
        layout.canonical.push(canonical);
    }

    let net = NetworkInstance {
        directed: false,
        kind: ProblemKind::KRouteCut,
        k,
        roles,
        edges: sink.edges,
        root: None,
        terminals: Vec::new(),
        demands,
    };
    Ok((net, layout))
}
