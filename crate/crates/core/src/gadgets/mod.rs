//! Emission of connectivity instances from min-cost label-cover instances.
//!
//! Each gadget maps labels one-to-one onto positive-cost edges, arcs onto
//! demands, and pads with zero- or infinite-cost structure so that the
//! optimum network cost equals the optimum label-cover cost exactly. The
//! layout records the bijection, the per-demand padding sets, and the
//! canonical paths, which the verification suite replays.

mod directed;
mod kroute;
mod merge;
mod sndp;
mod undirected;

pub use directed::to_directed_rooted;
pub use kroute::to_k_route_cut;
pub use merge::{merge_demands, merge_terminals_directed, MergedInstance};
pub use sndp::to_vc_sndp;
pub use undirected::to_undirected_rooted;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::matching::MatchingError;
use crate::model::{LabelCoverInstance, LabelSet, MultiLabeling, Violation};
use crate::num::{q_zero, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProblemKind {
    RootedDirected,
    RootedUndirected,
    VcSndp,
    KRouteCut,
    /// Bare graph with no requirement structure; used for plain graph dumps
    /// and flow tests, never emitted by a gadget.
    Plain,
}

impl ProblemKind {
    pub fn tag(self) -> &'static str {
        match self {
            ProblemKind::RootedDirected => "rootedDirected",
            ProblemKind::RootedUndirected => "rootedUndirected",
            ProblemKind::VcSndp => "vcSndp",
            ProblemKind::KRouteCut => "kRouteCut",
            ProblemKind::Plain => "plain",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "rootedDirected" => ProblemKind::RootedDirected,
            "rootedUndirected" => ProblemKind::RootedUndirected,
            "vcSndp" => ProblemKind::VcSndp,
            "kRouteCut" => ProblemKind::KRouteCut,
            "plain" => ProblemKind::Plain,
            _ => return None,
        })
    }

    pub fn is_design(self) -> bool {
        matches!(
            self,
            ProblemKind::RootedDirected | ProblemKind::RootedUndirected | ProblemKind::VcSndp
        )
    }
}

/// Edge cost classes. Labels map onto the strictly positive finite class;
/// structural wiring is zero-cost in design gadgets and infinite-cost in the
/// cut gadget, where infinity marks edges a cut may never remove.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeCost {
    Zero,
    Finite(Q),
    Infinite,
}

impl EdgeCost {
    pub fn is_finite_positive(self) -> bool {
        matches!(self, EdgeCost::Finite(_))
    }

    pub fn amount(self) -> Q {
        match self {
            EdgeCost::Finite(c) => c,
            _ => q_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Plain,
    Root,
    Terminal,
    Source,
    Sink,
    LeftVertex,
    RightVertex,
    LeftLabel,
    RightLabel,
    /// Clique vertices forcing canonical path entries (rooted undirected).
    CliquePad,
    /// Auxiliary vertices equalizing requirements.
    AuxPad,
    /// Separator vertices threading label-edge paths (k-route cut).
    Separator,
    /// Slack vertices equalizing padding-set sizes (k-route cut).
    SlackPad,
}

impl Role {
    pub fn tag(self) -> &'static str {
        match self {
            Role::Plain => "plain",
            Role::Root => "root",
            Role::Terminal => "terminal",
            Role::Source => "source",
            Role::Sink => "sink",
            Role::LeftVertex => "left",
            Role::RightVertex => "right",
            Role::LeftLabel => "llabel",
            Role::RightLabel => "rlabel",
            Role::CliquePad => "padx",
            Role::AuxPad => "padq",
            Role::Separator => "sep",
            Role::SlackPad => "pads",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "plain" => Role::Plain,
            "root" => Role::Root,
            "terminal" => Role::Terminal,
            "source" => Role::Source,
            "sink" => Role::Sink,
            "left" => Role::LeftVertex,
            "right" => Role::RightVertex,
            "llabel" => Role::LeftLabel,
            "rlabel" => Role::RightLabel,
            "padx" => Role::CliquePad,
            "padq" => Role::AuxPad,
            "sep" => Role::Separator,
            "pads" => Role::SlackPad,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetEdge {
    pub u: usize,
    pub v: usize,
    pub cost: EdgeCost,
    pub mult: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Demand {
    pub s: usize,
    pub t: usize,
    pub req: u32,
}

#[derive(Clone, Debug)]
pub struct NetworkInstance {
    pub directed: bool,
    pub kind: ProblemKind,
    pub k: u32,
    pub roles: Vec<Role>,
    pub edges: Vec<NetEdge>,
    pub root: Option<usize>,
    pub terminals: Vec<usize>,
    /// Source-sink pairs for the non-rooted kinds; rooted kinds derive their
    /// pairs from root and terminals.
    pub demands: Vec<Demand>,
}

impl NetworkInstance {
    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    /// The demand pairs, uniform across kinds.
    pub fn demand_pairs(&self) -> Vec<Demand> {
        match self.kind {
            ProblemKind::RootedDirected | ProblemKind::RootedUndirected => {
                let r = self.root.expect("rooted instance has a root");
                self.terminals
                    .iter()
                    .map(|&t| Demand { s: r, t, req: self.k })
                    .collect()
            }
            _ => self.demands.clone(),
        }
    }

    pub fn finite_cost_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.cost.is_finite_positive())
            .map(|(i, _)| i)
            .collect()
    }

    /// Light structural checks; violations are strings naming the fault.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.k == 0 && self.kind != ProblemKind::Plain {
            out.push("k must be at least 1".into());
        }
        let n = self.vertex_count();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                out.push(format!("edge {i} endpoint out of range"));
            }
            if e.mult == 0 {
                out.push(format!("edge {i} has multiplicity 0"));
            }
            if e.cost == EdgeCost::Infinite && self.kind != ProblemKind::KRouteCut {
                out.push(format!("edge {i} has infinite cost outside the cut kind"));
            }
        }
        match self.kind {
            ProblemKind::RootedDirected | ProblemKind::RootedUndirected => {
                if self.root.is_none() {
                    out.push("rooted instance without root".into());
                }
                if self.terminals.is_empty() {
                    out.push("rooted instance without terminals".into());
                }
            }
            ProblemKind::VcSndp | ProblemKind::KRouteCut => {
                if self.demands.is_empty() {
                    out.push("instance without demand pairs".into());
                }
            }
            ProblemKind::Plain => {}
        }
        if self.kind == ProblemKind::RootedDirected && !self.directed {
            out.push("rootedDirected must be directed".into());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Left => "u",
            Side::Right => "w",
        }
    }
}

/// Named padding vertex sets of one demand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PaddingSets {
    pub z: Vec<usize>,
    pub y: Vec<usize>,
    pub q: Vec<usize>,
    pub s: Vec<usize>,
    pub x: Vec<usize>,
}

/// Provenance map from network elements back to label-cover elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GadgetLayout {
    pub source_left: usize,
    pub source_right: usize,
    pub source_left_labels: usize,
    pub source_right_labels: usize,
    pub source_max_degree: usize,
    /// Source arcs in arc-index order.
    pub source_arcs: Vec<(usize, usize)>,
    /// (side, source vertex, label) -> positive-cost edge index; a bijection
    /// onto the positive-cost edge set.
    pub label_edge: BTreeMap<(Side, usize, usize), usize>,
    /// Demand id per source arc.
    pub demand_of: Vec<usize>,
    pub padding: Vec<PaddingSets>,
    /// Representative canonical path per demand.
    pub canonical: Vec<Vec<usize>>,
}

impl GadgetLayout {
    pub fn edge_keys(&self) -> BTreeMap<usize, (Side, usize, usize)> {
        self.label_edge.iter().map(|(&k, &v)| (v, k)).collect()
    }
}

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("source instance has no label costs")]
    MissingCosts,
    #[error("label costs must be strictly positive for the label-edge bijection")]
    NonPositiveCosts,
    #[error("source instance is invalid: {0:?}")]
    InvalidSource(Vec<Violation>),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("edge {0} is not a label edge")]
    NotLabelEdge(usize),
    #[error("label {label} out of range on the {side} side")]
    LabelOutOfRange { side: &'static str, label: usize },
    #[error("instance kind {got:?} does not support this operation (expected {expected})")]
    WrongKind { expected: &'static str, got: ProblemKind },
    #[error("coloring rejected: {0}")]
    ColoringInvalid(#[from] MatchingError),
    #[error("color class {color} demands {arc_a} and {arc_b} share vertex {vertex}")]
    SharedTerritory { color: usize, arc_a: usize, arc_b: usize, vertex: String },
}

/// Precomputed source-instance views shared by the constructions.
pub(crate) struct SourceView {
    pub arcs: Vec<(usize, usize)>,
    pub by_left: Vec<Vec<usize>>,
    pub by_right: Vec<Vec<usize>>,
}

impl SourceView {
    pub fn new(src: &LabelCoverInstance) -> Self {
        let arcs: Vec<(usize, usize)> = src.arcs.iter().map(|a| (a.left, a.right)).collect();
        let mut by_left = vec![Vec::new(); src.left_count];
        let mut by_right = vec![Vec::new(); src.right_count];
        for (idx, &(u, w)) in arcs.iter().enumerate() {
            by_left[u].push(idx);
            by_right[w].push(idx);
        }
        SourceView { arcs, by_left, by_right }
    }

    /// Distinct other left endpoints of arcs into w, excluding `except`.
    pub fn other_lefts(&self, w: usize, except: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.by_right[w]
            .iter()
            .map(|&a| self.arcs[a].0)
            .filter(|&u| u != except)
            .collect();
        set.into_iter().collect()
    }

    /// Distinct other right endpoints of arcs out of u, excluding `except`.
    pub fn other_rights(&self, u: usize, except: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.by_left[u]
            .iter()
            .map(|&a| self.arcs[a].1)
            .filter(|&w| w != except)
            .collect();
        set.into_iter().collect()
    }

    /// Arcs at line-graph distance 1 or 2 from each arc, counting parallel
    /// copies as distinct line vertices.
    pub fn arcs_within_two(&self) -> Vec<BTreeSet<usize>> {
        let n = self.arcs.len();
        let adj = |e: usize| -> BTreeSet<usize> {
            let (u, w) = self.arcs[e];
            self.by_left[u]
                .iter()
                .chain(&self.by_right[w])
                .copied()
                .filter(|&f| f != e)
                .collect()
        };
        let one: Vec<BTreeSet<usize>> = (0..n).map(adj).collect();
        (0..n)
            .map(|e| {
                let mut near = one[e].clone();
                for &f in &one[e] {
                    near.extend(one[f].iter().copied());
                }
                near.remove(&e);
                near
            })
            .collect()
    }
}

/// Validates the source instance for gadget emission and returns its costs.
pub(crate) fn emission_costs(
    src: &LabelCoverInstance,
) -> Result<crate::model::LabelCosts, GadgetError> {
    let violations = src.validate();
    if !violations.is_empty() {
        return Err(GadgetError::InvalidSource(violations));
    }
    let costs = src.costs.ok_or(GadgetError::MissingCosts)?;
    if costs.left <= q_zero() || costs.right <= q_zero() {
        return Err(GadgetError::NonPositiveCosts);
    }
    Ok(costs)
}

/// Multi-labeling assigning label l to vertex v exactly when the matching
/// label edge is in the solution; the labeling cost equals the solution cost.
pub fn solution_to_labeling(
    instance: &NetworkInstance,
    layout: &GadgetLayout,
    solution_edges: &[usize],
) -> Result<MultiLabeling, GadgetError> {
    let keys = layout.edge_keys();
    let mut m = MultiLabeling {
        left: vec![LabelSet::empty(); layout.source_left],
        right: vec![LabelSet::empty(); layout.source_right],
    };
    for &e in solution_edges {
        if e >= instance.edges.len() {
            return Err(GadgetError::UnknownEdge(e));
        }
        let (side, vertex, label) = *keys.get(&e).ok_or(GadgetError::NotLabelEdge(e))?;
        match side {
            Side::Left => m.left[vertex].insert(label),
            Side::Right => m.right[vertex].insert(label),
        }
    }
    Ok(m)
}

/// Inverse of [`solution_to_labeling`]: the edge set of a multi-labeling.
pub fn labeling_to_solution(
    layout: &GadgetLayout,
    m: &MultiLabeling,
) -> Result<Vec<usize>, GadgetError> {
    let mut edges = Vec::new();
    for (vertex, set) in m.left.iter().enumerate() {
        for label in set.iter() {
            let e = layout
                .label_edge
                .get(&(Side::Left, vertex, label))
                .ok_or(GadgetError::LabelOutOfRange { side: "left", label })?;
            edges.push(*e);
        }
    }
    for (vertex, set) in m.right.iter().enumerate() {
        for label in set.iter() {
            let e = layout
                .label_edge
                .get(&(Side::Right, vertex, label))
                .ok_or(GadgetError::LabelOutOfRange { side: "right", label })?;
            edges.push(*e);
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// Deterministic dedupe-and-push helper for undirected zero or infinite
/// wiring; keeps first insertion order.
pub(crate) struct EdgeSink {
    pub edges: Vec<NetEdge>,
    seen: BTreeSet<(usize, usize, bool)>,
}

impl EdgeSink {
    pub fn new() -> Self {
        EdgeSink { edges: Vec::new(), seen: BTreeSet::new() }
    }

    pub fn push(&mut self, u: usize, v: usize, cost: EdgeCost, mult: u32) -> usize {
        self.edges.push(NetEdge { u, v, cost, mult });
        self.edges.len() - 1
    }

    /// Pushes an undirected structural edge unless an identical pair was
    /// already inserted with the same cost class.
    pub fn push_unique(&mut self, u: usize, v: usize, cost: EdgeCost) {
        let key = (u.min(v), u.max(v), cost == EdgeCost::Infinite);
        if self.seen.insert(key) {
            self.edges.push(NetEdge { u, v, cost, mult: 1 });
        }
    }
}
