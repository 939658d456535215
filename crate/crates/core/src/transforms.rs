//! Instance-shaping passes over label-cover instances: right-degree
//! reduction through expanders, left-vertex splitting to full regularity,
//! random sparsification, large-degree trimming, the max-to-min cost
//! conversion, and conditional-expectation rounding of multi-labelings.
//!
//! Every pass is pure and seed-deterministic and records a trace carrying
//! degree profiles, the parameters used, and per-arc provenance.

use rand::Rng;
use thiserror::Error;

use crate::model::{DegreeProfile, LabelCosts, LabelCoverInstance, Labeling, MultiLabeling};
use crate::num::{q, q_int, q_one, q_to_f64, q_zero, Q};
use crate::rng;
use crate::spectral::{self, SpectralError, DEFAULT_EXPANDER_C, DEFAULT_EXPANDER_RETRIES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PassKind {
    RightDegree,
    Regularize,
    Sparsify,
    Trim,
}

impl PassKind {
    pub fn name(self) -> &'static str {
        match self {
            PassKind::RightDegree => "rightdeg",
            PassKind::Regularize => "regularize",
            PassKind::Sparsify => "sparsify",
            PassKind::Trim => "trim",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PassParams {
    pub gamma: Option<Q>,
    pub epsilon: Option<Q>,
    pub d_requested: Option<usize>,
    pub d_effective: Option<usize>,
    pub rho: Option<f64>,
    pub threshold: Option<f64>,
    pub attempt: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PassTrace {
    pub pass: PassKind,
    pub input_profile: DegreeProfile,
    pub output_profile: DegreeProfile,
    pub arc_multiplier: Option<usize>,
    pub params: PassParams,
    pub seed: Option<u64>,
    /// Source arc index for each output arc; total and single-valued.
    pub provenance: Vec<usize>,
    pub skipped: Option<String>,
    pub removed_vertex_fraction: Option<Q>,
}

/// Maps output arcs of the later pass back through the earlier pass.
pub fn compose_provenance(later: &[usize], earlier: &[usize]) -> Vec<usize> {
    later.iter().map(|&mid| earlier[mid]).collect()
}

#[derive(Clone, Debug)]
pub struct PipelineParams {
    /// Target soundness, in (0,1).
    pub gamma: Q,
    /// Completeness slack, in [0,1).
    pub epsilon: Q,
    /// Right-degree parameter; defaults to ceil(1/gamma).
    pub d: Option<usize>,
    /// Trim threshold; defaults to 2 * (1/gamma) * ln(max label set size).
    pub trim_threshold: Option<f64>,
    pub seed: u64,
    pub sparsify_retries: usize,
}

impl PipelineParams {
    pub fn new(gamma: Q, epsilon: Q, seed: u64) -> Self {
        PipelineParams { gamma, epsilon, d: None, trim_threshold: None, seed, sparsify_retries: 16 }
    }
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("input is not left-regular (degrees {min}..{max})")]
    NotLeftRegular { min: usize, max: usize },
    #[error("input is not biregular (left {lmin}..{lmax}, right {rmin}..{rmax})")]
    NotBiregular { lmin: usize, lmax: usize, rmin: usize, rmax: usize },
    #[error("left degree {left} is not an integer multiple of right degree {right}")]
    DegreeNotDivisible { left: usize, right: usize },
    #[error("input is not regular (left {lmin}..{lmax}, right {rmin}..{rmax})")]
    NotRegular { lmin: usize, lmax: usize, rmin: usize, rmax: usize },
    #[error("trim threshold must be positive, got {0}")]
    InvalidThreshold(f64),
    #[error("no expander for right vertex {right_vertex}: {source}")]
    ExpanderFailed {
        right_vertex: usize,
        #[source]
        source: SpectralError,
    },
    #[error("invalid pipeline parameters: {0}")]
    InvalidParams(String),
    #[error("sparsify retry budget of {attempts} exhausted")]
    SparsifyRetriesExhausted { attempts: usize },
    #[error("pipeline output degenerate: {0}")]
    DegenerateOutput(String),
    #[error("cost conversion budget violated: epsilon*|E| = {lhs} exceeds min(|U|,|W|) = {rhs}")]
    BudgetExceeded { lhs: String, rhs: String },
}

/// Default right-degree parameter ceil(1/gamma).
pub fn default_right_degree(gamma: Q) -> usize {
    let inv = gamma.recip();
    inv.ceil().to_integer() as usize
}

/// Default trim threshold 2 * (1/gamma) * ln(max label set size).
pub fn default_trim_threshold(gamma: Q, max_labels: usize) -> f64 {
    2.0 / q_to_f64(gamma) * (max_labels as f64).ln()
}

/// Sparsification rate (1/gamma) * ln(max label set size) / Delta.
pub fn sparsify_rate(gamma: Q, max_labels: usize, delta: usize) -> f64 {
    (max_labels as f64).ln() / (q_to_f64(gamma) * delta as f64)
}

/// Replaces each right vertex w by deg(w) copies matched to the vertices of
/// a d-regular expander H_w; every expander edge {w(i),w(j)} contributes the
/// constraint copies (u_i,w(j)) and (u_j,w(i)), so each original arc appears
/// with multiplicity exactly d, the output is right-regular with degree d,
/// and left-regular with degree d*D.
///
/// When d is odd and some right degree is odd no d-regular multigraph on
/// deg(w) vertices exists, so the pass bumps the effective degree to d+1;
/// the trace records both the requested and the effective value. Right
/// vertices with deg(w) <= d get a deterministic near-complete multigraph
/// instead of a sampled expander.
pub fn right_degree_reduce(
    instance: &LabelCoverInstance,
    d: usize,
    seed: u64,
) -> Result<(LabelCoverInstance, PassTrace), TransformError> {
    let input_profile = instance.degree_profile();
    if !input_profile.is_left_regular() {
        return Err(TransformError::NotLeftRegular {
            min: input_profile.min_left,
            max: input_profile.max_left,
        });
    }
    if d == 0 {
        return Err(TransformError::InvalidParams("d must be at least 1".into()));
    }

    let right_degrees = instance.right_degrees();
    let d_eff = if d % 2 == 1 && right_degrees.iter().any(|&x| x % 2 == 1) {
        d + 1
    } else {
        d
    };

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); instance.right_count];
    for (idx, arc) in instance.arcs.iter().enumerate() {
        incident[arc.right].push(idx);
    }

    let mut right_base = vec![0usize; instance.right_count];
    let mut total_copies = 0usize;
    for (w, inc) in incident.iter().enumerate() {
        right_base[w] = total_copies;
        total_copies += inc.len();
    }

    let mut arcs = Vec::with_capacity(instance.arcs.len() * d_eff);
    let mut provenance = Vec::with_capacity(instance.arcs.len() * d_eff);
    for (w, inc) in incident.iter().enumerate() {
        let n = inc.len();
        if n == 0 {
            continue;
        }
        let h = if n <= d_eff {
            spectral::near_complete_regular(n, d_eff)
                .map_err(|source| TransformError::ExpanderFailed { right_vertex: w, source })?
        } else {
            spectral::build_expander(
                n,
                d_eff,
                DEFAULT_EXPANDER_C,
                rng::derived_seed(seed, "expander", w as u64),
                DEFAULT_EXPANDER_RETRIES,
            )
            .map_err(|source| TransformError::ExpanderFailed { right_vertex: w, source })?
            .graph
        };
        let mut push = |src_pos: usize, copy_pos: usize| {
            let src = inc[src_pos];
            let a = &instance.arcs[src];
            arcs.push(crate::model::Arc {
                left: a.left,
                right: right_base[w] + copy_pos,
                image: a.image.clone(),
            });
            provenance.push(src);
        };
        for &(i, j) in &h.edges {
            if i == j {
                push(i, i);
                push(i, i);
            } else {
                push(i, j);
                push(j, i);
            }
        }
    }

    let planted = instance.planted.as_ref().map(|p| {
        let mut right = vec![0usize; total_copies];
        for (w, inc) in incident.iter().enumerate() {
            for pos in 0..inc.len() {
                right[right_base[w] + pos] = p.right[w];
            }
        }
        Labeling { left: p.left.clone(), right }
    });

    let out = LabelCoverInstance {
        left_count: instance.left_count,
        right_count: total_copies,
        left_labels: instance.left_labels,
        right_labels: instance.right_labels,
        arcs,
        costs: instance.costs,
        allow_parallel: true,
        planted,
    };
    let trace = PassTrace {
        pass: PassKind::RightDegree,
        input_profile,
        output_profile: out.degree_profile(),
        arc_multiplier: Some(d_eff),
        params: PassParams {
            d_requested: Some(d),
            d_effective: Some(d_eff),
            ..PassParams::default()
        },
        seed: Some(seed),
        provenance,
        skipped: None,
        removed_vertex_fraction: None,
    };
    Ok((out, trace))
}

/// Splits each left vertex of a (d1,d2)-biregular instance into D = d1/d2
/// copies, duplicating every incident arc onto each copy; the output is
/// d1-regular on both sides.
pub fn regularize(
    instance: &LabelCoverInstance,
) -> Result<(LabelCoverInstance, PassTrace), TransformError> {
    let input_profile = instance.degree_profile();
    if !input_profile.is_biregular() {
        return Err(TransformError::NotBiregular {
            lmin: input_profile.min_left,
            lmax: input_profile.max_left,
            rmin: input_profile.min_right,
            rmax: input_profile.max_right,
        });
    }
    let d1 = input_profile.max_left;
    let d2 = input_profile.max_right;
    let copies = if instance.arcs.is_empty() {
        1
    } else {
        if d1 % d2 != 0 {
            return Err(TransformError::DegreeNotDivisible { left: d1, right: d2 });
        }
        d1 / d2
    };

    let mut arcs = Vec::with_capacity(instance.arcs.len() * copies);
    let mut provenance = Vec::with_capacity(instance.arcs.len() * copies);
    for (idx, arc) in instance.arcs.iter().enumerate() {
        for c in 0..copies {
            arcs.push(crate::model::Arc {
                left: arc.left * copies + c,
                right: arc.right,
                image: arc.image.clone(),
            });
            provenance.push(idx);
        }
    }

    let planted = instance.planted.as_ref().map(|p| Labeling {
        left: p
            .left
            .iter()
            .flat_map(|&a| std::iter::repeat(a).take(copies))
            .collect(),
        right: p.right.clone(),
    });

    let out = LabelCoverInstance {
        left_count: instance.left_count * copies,
        right_count: instance.right_count,
        left_labels: instance.left_labels,
        right_labels: instance.right_labels,
        arcs,
        costs: instance.costs,
        allow_parallel: true,
        planted,
    };
    let trace = PassTrace {
        pass: PassKind::Regularize,
        input_profile,
        output_profile: out.degree_profile(),
        arc_multiplier: Some(copies),
        params: PassParams::default(),
        seed: None,
        provenance,
        skipped: None,
        removed_vertex_fraction: None,
    };
    Ok((out, trace))
}

/// Keeps each arc independently with probability
/// rho = (1/gamma) * ln(max label set size) / Delta. When rho exceeds 1 the
/// pass is skipped and the trace says so; clamping would be the identity
/// anyway and the skip keeps the record honest.
pub fn sparsify(
    instance: &LabelCoverInstance,
    gamma: Q,
    seed: u64,
) -> Result<(LabelCoverInstance, PassTrace), TransformError> {
    let input_profile = instance.degree_profile();
    if !input_profile.is_regular() {
        return Err(TransformError::NotRegular {
            lmin: input_profile.min_left,
            lmax: input_profile.max_left,
            rmin: input_profile.min_right,
            rmax: input_profile.max_right,
        });
    }
    let delta = input_profile.max_degree;
    let max_labels = instance.left_labels.max(instance.right_labels);
    let rho = sparsify_rate(gamma, max_labels, delta);

    if !rho.is_finite() || rho > 1.0 {
        let out = instance.clone();
        let provenance = (0..instance.arcs.len()).collect();
        let trace = PassTrace {
            pass: PassKind::Sparsify,
            input_profile: input_profile.clone(),
            output_profile: input_profile,
            arc_multiplier: None,
            params: PassParams { gamma: Some(gamma), rho: Some(rho), ..PassParams::default() },
            seed: Some(seed),
            provenance,
            skipped: Some(format!("rho {rho} exceeds 1, instance returned unchanged")),
            removed_vertex_fraction: None,
        };
        return Ok((out, trace));
    }

    let mut rng = rng::stream(seed, "sparsify");
    let mut arcs = Vec::new();
    let mut provenance = Vec::new();
    for (idx, arc) in instance.arcs.iter().enumerate() {
        let draw: f64 = rng.random();
        if draw < rho {
            arcs.push(arc.clone());
            provenance.push(idx);
        }
    }

    let out = LabelCoverInstance {
        arcs,
        planted: instance.planted.clone(),
        allow_parallel: instance.allow_parallel,
        ..instance.clone()
    };
    let trace = PassTrace {
        pass: PassKind::Sparsify,
        input_profile,
        output_profile: out.degree_profile(),
        arc_multiplier: None,
        params: PassParams { gamma: Some(gamma), rho: Some(rho), ..PassParams::default() },
        seed: Some(seed),
        provenance,
        skipped: None,
        removed_vertex_fraction: None,
    };
    Ok((out, trace))
}

/// Removes every vertex with degree above the threshold and its incident
/// arcs. Removal only lowers the remaining degrees, so one sweep suffices;
/// resampling on excessive removal is the pipeline's job.
pub fn trim_large_degree(
    instance: &LabelCoverInstance,
    threshold: f64,
) -> Result<(LabelCoverInstance, PassTrace), TransformError> {
    if !(threshold > 0.0) {
        return Err(TransformError::InvalidThreshold(threshold));
    }
    let input_profile = instance.degree_profile();
    let left_deg = instance.left_degrees();
    let right_deg = instance.right_degrees();

    let mut left_map = vec![None; instance.left_count];
    let mut right_map = vec![None; instance.right_count];
    let mut kept_left = 0usize;
    for (u, &deg) in left_deg.iter().enumerate() {
        if (deg as f64) <= threshold {
            left_map[u] = Some(kept_left);
            kept_left += 1;
        }
    }
    let mut kept_right = 0usize;
    for (w, &deg) in right_deg.iter().enumerate() {
        if (deg as f64) <= threshold {
            right_map[w] = Some(kept_right);
            kept_right += 1;
        }
    }

    let mut arcs = Vec::new();
    let mut provenance = Vec::new();
    for (idx, arc) in instance.arcs.iter().enumerate() {
        if let (Some(l), Some(r)) = (left_map[arc.left], right_map[arc.right]) {
            arcs.push(crate::model::Arc { left: l, right: r, image: arc.image.clone() });
            provenance.push(idx);
        }
    }

    let planted = instance.planted.as_ref().map(|p| Labeling {
        left: p
            .left
            .iter()
            .enumerate()
            .filter(|(u, _)| left_map[*u].is_some())
            .map(|(_, &a)| a)
            .collect(),
        right: p
            .right
            .iter()
            .enumerate()
            .filter(|(w, _)| right_map[*w].is_some())
            .map(|(_, &b)| b)
            .collect(),
    });

    let total = instance.left_count + instance.right_count;
    let removed = total - kept_left - kept_right;
    let out = LabelCoverInstance {
        left_count: kept_left,
        right_count: kept_right,
        arcs,
        planted,
        ..instance.clone()
    };
    let trace = PassTrace {
        pass: PassKind::Trim,
        input_profile,
        output_profile: out.degree_profile(),
        arc_multiplier: None,
        params: PassParams { threshold: Some(threshold), ..PassParams::default() },
        seed: None,
        provenance,
        skipped: None,
        removed_vertex_fraction: Some(if total == 0 {
            q_zero()
        } else {
            q(removed as i128, total as i128)
        }),
    };
    Ok((out, trace))
}

/// Full shaping pipeline: right-degree reduction with d = ceil(1/gamma),
/// regularization, sparsification, and trimming. When trimming removes more
/// than a 2^(1 - (1/3gamma)) fraction of the vertices the sparsify stage is
/// resampled with a fresh substream, within a bounded retry budget.
pub fn run_pipeline(
    instance: &LabelCoverInstance,
    params: &PipelineParams,
) -> Result<(LabelCoverInstance, Vec<PassTrace>), TransformError> {
    if params.gamma <= q_zero() || params.gamma >= q_one() {
        return Err(TransformError::InvalidParams("gamma must be in (0,1)".into()));
    }
    if params.epsilon < q_zero() || params.epsilon >= q_one() {
        return Err(TransformError::InvalidParams("epsilon must be in [0,1)".into()));
    }
    let max_labels = instance.left_labels.max(instance.right_labels);
    if max_labels < 2 {
        return Err(TransformError::InvalidParams(
            "label sets of size 1 have a zero trim threshold".into(),
        ));
    }

    let d = params.d.unwrap_or_else(|| default_right_degree(params.gamma));
    let threshold = params
        .trim_threshold
        .unwrap_or_else(|| default_trim_threshold(params.gamma, max_labels));
    let inv_gamma = 1.0 / q_to_f64(params.gamma);
    let resample_bound = (1.0 - inv_gamma / 3.0).exp2();

    let (reduced, mut trace_rd) =
        right_degree_reduce(instance, d, rng::derived_seed(params.seed, "stage-rightdeg", 0))?;
    trace_rd.params.gamma = Some(params.gamma);
    trace_rd.params.epsilon = Some(params.epsilon);
    let (regular, trace_reg) = regularize(&reduced)?;

    for attempt in 0..params.sparsify_retries.max(1) {
        let sparse_seed = rng::derived_seed(params.seed, "stage-sparsify", attempt as u64);
        let (sparse, trace_sp) = sparsify(&regular, params.gamma, sparse_seed)?;
        let (trimmed, mut trace_tr) = trim_large_degree(&sparse, threshold)?;
        trace_tr.params.attempt = Some(attempt);
        trace_tr.params.gamma = Some(params.gamma);
        let removed = trace_tr
            .removed_vertex_fraction
            .map(q_to_f64)
            .unwrap_or(0.0);
        if removed > resample_bound {
            continue;
        }
        if trimmed.left_count == 0 || trimmed.right_count == 0 {
            return Err(TransformError::DegenerateOutput(
                "trimming removed an entire vertex side".into(),
            ));
        }
        return Ok((trimmed, vec![trace_rd, trace_reg, trace_sp, trace_tr]));
    }
    Err(TransformError::SparsifyRetriesExhausted { attempts: params.sparsify_retries.max(1) })
}

/// Attaches the max-to-min label costs c1 = |W|, c2 = |U|, the integral
/// solution of c1|U| = c2|W|, so C = c1|U| + c2|W| = 2|U||W|. Requires
/// epsilon_budget * |E| <= min(|U|,|W|).
pub fn max_to_min(
    instance: &LabelCoverInstance,
    epsilon_budget: Q,
) -> Result<LabelCoverInstance, TransformError> {
    let lhs = epsilon_budget * q_int(instance.arcs.len() as i128);
    let rhs = q_int(instance.left_count.min(instance.right_count) as i128);
    if lhs > rhs {
        return Err(TransformError::BudgetExceeded {
            lhs: crate::num::format_q(lhs),
            rhs: crate::num::format_q(rhs),
        });
    }
    let mut out = instance.clone();
    out.costs = Some(LabelCosts {
        left: q_int(instance.right_count as i128),
        right: q_int(instance.left_count as i128),
    });
    Ok(out)
}

/// Expected covered-arc count when every vertex picks uniformly from its
/// set; vertices with empty sets count as the lexicographically first label.
pub fn expected_covered(instance: &LabelCoverInstance, m: &MultiLabeling) -> Q {
    let left: Vec<crate::model::LabelSet> = m
        .left
        .iter()
        .map(|s| if s.is_empty() { crate::model::LabelSet::singleton(0) } else { *s })
        .collect();
    let right: Vec<crate::model::LabelSet> = m
        .right
        .iter()
        .map(|s| if s.is_empty() { crate::model::LabelSet::singleton(0) } else { *s })
        .collect();
    let mut total = q_zero();
    for arc in &instance.arcs {
        let s = left[arc.left];
        let t = right[arc.right];
        let hits = s.iter().filter(|&a| t.contains(arc.image[a])).count();
        total += q(hits as i128, (s.len() * t.len()) as i128);
    }
    total
}

/// Rounds a multi-labeling to a single labeling covering at least the
/// expected count, by fixing vertices one at a time (left side then right,
/// in index order) to the label maximizing the conditional expectation,
/// ties broken lexicographically.
pub fn round_multi_labeling(instance: &LabelCoverInstance, m: &MultiLabeling) -> Labeling {
    assert_eq!(m.left.len(), instance.left_count, "multi-labeling shape mismatch");
    assert_eq!(m.right.len(), instance.right_count, "multi-labeling shape mismatch");

    let mut left: Vec<crate::model::LabelSet> = m
        .left
        .iter()
        .map(|s| if s.is_empty() { crate::model::LabelSet::singleton(0) } else { *s })
        .collect();
    let mut right: Vec<crate::model::LabelSet> = m
        .right
        .iter()
        .map(|s| if s.is_empty() { crate::model::LabelSet::singleton(0) } else { *s })
        .collect();

    let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); instance.left_count];
    let mut by_right: Vec<Vec<usize>> = vec![Vec::new(); instance.right_count];
    for (idx, arc) in instance.arcs.iter().enumerate() {
        by_left[arc.left].push(idx);
        by_right[arc.right].push(idx);
    }

    for u in 0..instance.left_count {
        if left[u].len() <= 1 {
            continue;
        }
        let mut best: Option<(Q, usize)> = None;
        for a in left[u].iter() {
            let mut gain = q_zero();
            for &idx in &by_left[u] {
                let arc = &instance.arcs[idx];
                let t = right[arc.right];
                let hit = if t.contains(arc.image[a]) { 1i128 } else { 0 };
                gain += q(hit, t.len() as i128);
            }
            if best.as_ref().map_or(true, |(g, _)| gain > *g) {
                best = Some((gain, a));
            }
        }
        left[u] = crate::model::LabelSet::singleton(best.unwrap().1);
    }
    for w in 0..instance.right_count {
        if right[w].len() <= 1 {
            continue;
        }
        let mut best: Option<(Q, usize)> = None;
        for b in right[w].iter() {
            let mut gain = q_zero();
            for &idx in &by_right[w] {
                let arc = &instance.arcs[idx];
                let s = left[arc.left];
                let hits = s.iter().filter(|&a| arc.image[a] == b).count();
                gain += q(hits as i128, s.len() as i128);
            }
            if best.as_ref().map_or(true, |(g, _)| gain > *g) {
                best = Some((gain, b));
            }
        }
        right[w] = crate::model::LabelSet::singleton(best.unwrap().1);
    }

    Labeling {
        left: left.iter().map(|s| s.iter().next().unwrap()).collect(),
        right: right.iter().map(|s| s.iter().next().unwrap()).collect(),
    }
}
