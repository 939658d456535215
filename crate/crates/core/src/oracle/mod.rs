//! Ground-truth verification over emitted networks: openly-disjoint path
//! counting, design/cut solution checking, exact brute-force optima, and
//! end-to-end gap experiments pairing planted and unplanted instances.

mod flow;

pub use flow::{flow_at_least, opcount, FlowCertificate, SubgraphView};

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::gadgets::{
    to_directed_rooted, to_k_route_cut, to_undirected_rooted, to_vc_sndp, GadgetError,
    GadgetLayout, NetworkInstance, ProblemKind,
};
use crate::model::{LabelCoverInstance, ModelError, RandomProfile, DEFAULT_ENUM_CAP};
use crate::num::{q_int, q_zero, Q};
use crate::rng;
use crate::transforms::{self, TransformError};

/// Cap on the positive-cost edge count the network brute force accepts.
pub const DEFAULT_EDGE_CAP: usize = 24;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("source equals sink ({0})")]
    SameEndpoints(usize),
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("edge {0} out of range")]
    UnknownEdge(usize),
    #[error("infinite-cost edge {0} selected in a design instance")]
    InfiniteCostChosen(usize),
    #[error("infinite-cost edge {0} cannot be removed by a cut")]
    InfiniteCostRemoved(usize),
    #[error("operation needs {expected} but instance kind is {got:?}")]
    WrongKind { expected: &'static str, got: ProblemKind },
    #[error("{count} positive-cost edges exceed the enumeration cap {cap}")]
    EdgeCapExceeded { count: usize, cap: usize },
    #[error("no feasible solution over the positive-cost edge set")]
    NoFeasibleSolution,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Feasibility plus cost of a design solution: the subgraph made of all
/// zero-cost edges and the chosen ones must carry `req` openly disjoint
/// paths for every demand.
pub fn check_design_solution(
    instance: &NetworkInstance,
    chosen: &[usize],
) -> Result<(bool, Q), OracleError> {
    if !instance.kind.is_design() {
        return Err(OracleError::WrongKind { expected: "a design kind", got: instance.kind });
    }
    let chosen = dedup_edges(instance, chosen)?;
    for &e in &chosen {
        if instance.edges[e].cost == crate::gadgets::EdgeCost::Infinite {
            return Err(OracleError::InfiniteCostChosen(e));
        }
    }
    let cost = chosen.iter().map(|&e| instance.edges[e].cost.amount()).sum();
    let view = SubgraphView::design(instance, &chosen);
    for d in instance.demand_pairs() {
        if !flow_at_least(&view, d.s, d.t, d.req)? {
            return Ok((false, cost));
        }
    }
    Ok((true, cost))
}

/// Feasibility plus cost of a cut solution: after removing the edges, every
/// demand pair must drop below k openly disjoint paths.
pub fn check_cut_solution(
    instance: &NetworkInstance,
    removed: &[usize],
) -> Result<(bool, Q), OracleError> {
    if instance.kind != ProblemKind::KRouteCut {
        return Err(OracleError::WrongKind { expected: "kRouteCut", got: instance.kind });
    }
    let removed = dedup_edges(instance, removed)?;
    for &e in &removed {
        if instance.edges[e].cost == crate::gadgets::EdgeCost::Infinite {
            return Err(OracleError::InfiniteCostRemoved(e));
        }
    }
    let cost = removed.iter().map(|&e| instance.edges[e].cost.amount()).sum();
    let view = SubgraphView::cut(instance, &removed);
    for d in instance.demand_pairs() {
        if flow_at_least(&view, d.s, d.t, instance.k)? {
            return Ok((false, cost));
        }
    }
    Ok((true, cost))
}

fn dedup_edges(instance: &NetworkInstance, edges: &[usize]) -> Result<Vec<usize>, OracleError> {
    let mut set = BTreeSet::new();
    for &e in edges {
        if e >= instance.edges.len() {
            return Err(OracleError::UnknownEdge(e));
        }
        set.insert(e);
    }
    Ok(set.into_iter().collect())
}

/// Exact optimum over subsets of the positive-cost edges, by exhaustive
/// search ordered by nondecreasing cost. Design kinds minimize a feasible
/// purchase; the cut kind minimizes a feasible removal. When a layout is
/// supplied the enumeration order follows the label bijection (left labels
/// then right labels in vertex order), so the witness is the
/// lexicographically first optimal multi-labeling under that order.
pub fn brute_force_network_opt(
    instance: &NetworkInstance,
    layout: Option<&GadgetLayout>,
    cap: usize,
) -> Result<(Vec<usize>, Q), OracleError> {
    let mut finite = instance.finite_cost_edges();
    if finite.len() > cap {
        return Err(OracleError::EdgeCapExceeded { count: finite.len(), cap });
    }
    if let Some(layout) = layout {
        let keys = layout.edge_keys();
        finite.sort_by_key(|e| (keys.get(e).copied(), *e));
    }
    let feasible = |subset: &[usize]| -> Result<bool, OracleError> {
        Ok(match instance.kind {
            ProblemKind::KRouteCut => check_cut_solution(instance, subset)?.0,
            _ => check_design_solution(instance, subset)?.0,
        })
    };

    let costs: Vec<Q> = finite.iter().map(|&e| instance.edges[e].cost.amount()).collect();
    let distinct: BTreeSet<Q> = costs.iter().copied().collect();

    if distinct.len() <= 2 {
        // enumerate by (cost level, group split, combination) order
        let mut group_a = Vec::new();
        let mut group_b = Vec::new();
        let cost_a = costs.first().copied().unwrap_or_else(q_zero);
        for (pos, &e) in finite.iter().enumerate() {
            if costs[pos] == cost_a {
                group_a.push(e);
            } else {
                group_b.push(e);
            }
        }
        let cost_b = group_b
            .first()
            .map(|&e| instance.edges[e].cost.amount())
            .unwrap_or_else(q_zero);
        let mut levels: Vec<(Q, usize, usize)> = Vec::new();
        for na in 0..=group_a.len() {
            for nb in 0..=group_b.len() {
                levels.push((q_int(na as i128) * cost_a + q_int(nb as i128) * cost_b, na, nb));
            }
        }
        levels.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        for (cost, na, nb) in levels {
            let mut found: Option<Vec<usize>> = None;
            for_each_combination::<OracleError>(group_a.len(), na, &mut |ia| {
                if found.is_some() {
                    return Ok(());
                }
                for_each_combination::<OracleError>(group_b.len(), nb, &mut |ib| {
                    if found.is_some() {
                        return Ok(());
                    }
                    let mut subset: Vec<usize> = ia.iter().map(|&p| group_a[p]).collect();
                    subset.extend(ib.iter().map(|&p| group_b[p]));
                    subset.sort_unstable();
                    if feasible(&subset)? {
                        found = Some(subset);
                    }
                    Ok(())
                })
            })?;
            if let Some(subset) = found {
                return Ok((subset, cost));
            }
        }
        return Err(OracleError::NoFeasibleSolution);
    }

    // heterogeneous costs: plain subset scan with cost pruning
    let mut best: Option<(Q, Vec<usize>)> = None;
    let n = finite.len();
    for mask in 0u64..(1u64 << n) {
        let mut cost = q_zero();
        let mut subset = Vec::new();
        for (pos, &e) in finite.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                cost += costs[pos];
                subset.push(e);
            }
        }
        if let Some((bc, _)) = &best {
            if cost >= *bc {
                continue;
            }
        }
        subset.sort_unstable();
        if feasible(&subset)? {
            best = Some((cost, subset));
        }
    }
    best.map(|(c, s)| (s, c)).ok_or(OracleError::NoFeasibleSolution)
}

/// Lexicographic k-combinations of 0..n, visited in index order.
fn for_each_combination<E>(
    n: usize,
    k: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        // advance the rightmost index that can still move
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] + (k - pos) < n {
                idx[pos] += 1;
                for p in pos + 1..k {
                    idx[p] = idx[p - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return Ok(());
            }
        }
        if k == 0 {
            return Ok(());
        }
    }
}

#[derive(Clone, Debug)]
pub struct GapParams {
    pub profile: RandomProfile,
    pub gamma: Q,
    pub epsilon: Q,
    pub gadget: ProblemKind,
    pub run_pipeline: bool,
    pub enum_cap: u128,
    pub edge_cap: usize,
}

impl GapParams {
    pub fn new(profile: RandomProfile, gamma: Q, epsilon: Q, gadget: ProblemKind) -> Self {
        GapParams {
            profile,
            gamma,
            epsilon,
            gadget,
            run_pipeline: false,
            enum_cap: DEFAULT_ENUM_CAP,
            edge_cap: DEFAULT_EDGE_CAP,
        }
    }
}

/// One named measurement of a gap run; `bound_holds` is set when the
/// measurement checks an inequality.
#[derive(Clone, Debug)]
pub struct GapCheck {
    pub name: String,
    pub value: String,
    pub bound_holds: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub seed: u64,
    pub gadget: ProblemKind,
    pub yes_opt: Q,
    pub no_opt: Q,
    /// no_opt / yes_opt.
    pub ratio: Q,
    pub yes_max_fraction: Q,
    pub no_max_fraction: Q,
    /// C = c1|U| + c2|W| of the no-side instance.
    pub cost_unit: Q,
    pub delta: usize,
    pub k: u32,
    pub demand_count: usize,
    pub checks: Vec<GapCheck>,
    pub wall_ms: u128,
}

fn emit(
    kind: ProblemKind,
    src: &LabelCoverInstance,
) -> Result<(NetworkInstance, GadgetLayout), GadgetError> {
    match kind {
        ProblemKind::RootedDirected => to_directed_rooted(src),
        ProblemKind::RootedUndirected => to_undirected_rooted(src),
        ProblemKind::VcSndp => to_vc_sndp(src),
        ProblemKind::KRouteCut => to_k_route_cut(src),
        ProblemKind::Plain => Err(GadgetError::WrongKind { expected: "a gadget kind", got: kind }),
    }
}

/// Generates a planted yes-instance and an unplanted no-instance, runs the
/// optional shaping pipeline and the cost conversion on both, emits the
/// chosen gadget, and measures both optima with the exhaustive oracles.
pub fn gap_experiment(params: &GapParams, seed: u64) -> Result<GapReport, OracleError> {
    let start = Instant::now();
    let yes_raw =
        LabelCoverInstance::random_instance(&params.profile, rng::derived_seed(seed, "yes", 0))?;
    let no_raw =
        LabelCoverInstance::random_no_instance(&params.profile, rng::derived_seed(seed, "no", 0))?;

    let shape = |inst: LabelCoverInstance, which: &str| -> Result<LabelCoverInstance, OracleError> {
        if params.run_pipeline {
            let pp = transforms::PipelineParams::new(
                params.gamma,
                params.epsilon,
                rng::derived_seed(seed, which, 1),
            );
            Ok(transforms::run_pipeline(&inst, &pp)?.0)
        } else {
            Ok(inst)
        }
    };
    let yes = transforms::max_to_min(&shape(yes_raw, "yes-pipe")?, q_zero())?;
    let no = transforms::max_to_min(&shape(no_raw, "no-pipe")?, q_zero())?;

    let (yes_net, yes_layout) = emit(params.gadget, &yes)?;
    let (no_net, no_layout) = emit(params.gadget, &no)?;

    let (_, yes_opt) = brute_force_network_opt(&yes_net, Some(&yes_layout), params.edge_cap)?;
    let (_, no_opt) = brute_force_network_opt(&no_net, Some(&no_layout), params.edge_cap)?;
    let (_, yes_min) = yes.brute_force_min_cost(params.enum_cap)?;
    let (no_min_witness, no_min) = no.brute_force_min_cost(params.enum_cap)?;
    let (_, yes_frac) = yes.brute_force_max(params.enum_cap)?;
    let (_, no_frac) = no.brute_force_max(params.enum_cap)?;

    let c = q_int(2 * (no.left_count * no.right_count) as i128);
    let mut checks = Vec::new();
    checks.push(GapCheck {
        name: "yesOpt equals source min cost".into(),
        value: format!("{yes_opt} vs {yes_min}"),
        bound_holds: Some(yes_opt == yes_min),
    });
    checks.push(GapCheck {
        name: "noOpt equals source min cost".into(),
        value: format!("{no_opt} vs {no_min}"),
        bound_holds: Some(no_opt == no_min),
    });
    if params.epsilon == q_zero() && !params.run_pipeline {
        checks.push(GapCheck {
            name: "planted yesOpt within twice the spread cost".into(),
            value: format!("{yes_opt} vs 2C = {}", c),
            bound_holds: Some(yes_opt <= q_int(2 * (yes.left_count * yes.right_count) as i128)),
        });
    }
    // rounding the optimal multi-labeling cannot beat the exact max
    let rounded = transforms::round_multi_labeling(&no, &no_min_witness);
    let rounded_fraction = no.coverage_fraction(&rounded)?;
    checks.push(GapCheck {
        name: "rounded optimum stays below the exact max fraction".into(),
        value: format!("{rounded_fraction} vs {no_frac}"),
        bound_holds: Some(rounded_fraction <= no_frac),
    });

    let delta = no.degree_profile().max_degree;
    Ok(GapReport {
        seed,
        gadget: params.gadget,
        yes_opt,
        no_opt,
        ratio: if yes_opt == q_zero() { q_zero() } else { no_opt / yes_opt },
        yes_max_fraction: yes_frac,
        no_max_fraction: no_frac,
        cost_unit: c,
        delta,
        k: no_net.k,
        demand_count: no_net.demand_pairs().len(),
        checks,
        wall_ms: start.elapsed().as_millis(),
    })
}
