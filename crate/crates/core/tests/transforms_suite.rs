//! Shaping-pass contracts: exact degree arithmetic, provenance counts,
//! coverage preservation, sparsification statistics, trim bounds, pipeline
//! composition, the cost conversion, and conditional-expectation rounding.

mod common;

use common::swap_square;
use minrep_core::model::{Arc, LabelCoverInstance, LabelSet, Labeling, MultiLabeling};
use minrep_core::num::{q, q_int, q_one, q_zero};
use minrep_core::transforms::{
    default_trim_threshold, expected_covered, max_to_min, regularize, right_degree_reduce,
    round_multi_labeling, run_pipeline, sparsify, sparsify_rate, trim_large_degree,
    PipelineParams, TransformError,
};
use minrep_core::{RandomProfile, DEFAULT_ENUM_CAP};
use proptest::prelude::*;

fn left_regular_instance(left: usize, right: usize, degree: usize, seed: u64) -> LabelCoverInstance {
    let profile = RandomProfile {
        left,
        right,
        left_labels: 2,
        right_labels: 2,
        degree,
        epsilon: q_zero(),
    };
    LabelCoverInstance::random_instance(&profile, seed).unwrap()
}

/// Lifts a labeling of the input through the right-vertex copies using the
/// trace provenance: every copy of w inherits the label of w.
fn lift_right(
    input: &LabelCoverInstance,
    output: &LabelCoverInstance,
    trace: &minrep_core::PassTrace,
    labeling: &Labeling,
) -> Labeling {
    let mut right = vec![0usize; output.right_count];
    for (out_arc, &src_arc) in trace.provenance.iter().enumerate() {
        right[output.arcs[out_arc].right] = labeling.right[input.arcs[src_arc].right];
    }
    Labeling { left: labeling.left.clone(), right }
}

#[test]
fn right_degree_reduction_multiplies_arcs_exactly() {
    // left-regular degree 2, 4 arcs, d = 2
    let input = left_regular_instance(2, 3, 2, 5);
    assert_eq!(input.arcs.len(), 4);
    let (output, trace) = right_degree_reduce(&input, 2, 9).unwrap();
    assert_eq!(output.arcs.len(), 8);
    let profile = output.degree_profile();
    assert!(profile.is_biregular());
    assert_eq!(profile.max_right, 2);
    assert_eq!(profile.max_left, 4);
    // every input arc appears exactly d times
    let mut copies = vec![0usize; input.arcs.len()];
    for &src in &trace.provenance {
        copies[src] += 1;
    }
    assert!(copies.iter().all(|&c| c == 2));
}

#[test]
fn right_degree_reduction_preserves_lifted_coverage_exactly() {
    for seed in 0..10u64 {
        let input = left_regular_instance(3, 4, 2, seed);
        let (output, trace) = right_degree_reduce(&input, 3, seed ^ 77).unwrap();
        let mut rng_labels = Labeling {
            left: (0..input.left_count).map(|i| (i + seed as usize) % 2).collect(),
            right: (0..input.right_count).map(|i| (i * 7 + 1) % 2).collect(),
        };
        for _ in 0..2 {
            let lifted = lift_right(&input, &output, &trace, &rng_labels);
            assert_eq!(
                input.coverage_fraction(&rng_labels).unwrap(),
                output.coverage_fraction(&lifted).unwrap(),
                "seed {seed}"
            );
            rng_labels.left.iter_mut().for_each(|a| *a = 1 - *a);
        }
    }
}

#[test]
fn degree_one_right_vertices_use_the_fallback() {
    // star from the left: every right vertex has degree 1
    let input = left_regular_instance(1, 4, 4, 3);
    let (output, trace) = right_degree_reduce(&input, 2, 1).unwrap();
    let profile = output.degree_profile();
    assert_eq!(profile.max_right, 2);
    assert_eq!(profile.min_right, 2);
    assert_eq!(trace.arc_multiplier, Some(2));
}

#[test]
fn odd_parity_bumps_the_effective_degree() {
    // right degrees are odd, d = 3 is odd: no 3-regular multigraph exists
    // on an odd number of stubs, so the pass uses 4
    let input = left_regular_instance(3, 3, 1, 2);
    let (output, trace) = right_degree_reduce(&input, 3, 4).unwrap();
    assert_eq!(trace.params.d_requested, Some(3));
    assert_eq!(trace.params.d_effective, Some(4));
    assert_eq!(output.degree_profile().max_right, 4);
}

#[test]
fn non_left_regular_input_is_rejected() {
    let mut input = left_regular_instance(2, 3, 2, 5);
    input.arcs.pop();
    assert!(matches!(
        right_degree_reduce(&input, 2, 0),
        Err(TransformError::NotLeftRegular { .. })
    ));
}

#[test]
fn regularize_balances_biregular_input() {
    let input = left_regular_instance(2, 4, 4, 8);
    let (mid, _) = right_degree_reduce(&input, 2, 3).unwrap();
    let before = mid.degree_profile();
    assert_eq!((before.max_left, before.max_right), (8, 2));
    let (out, trace) = regularize(&mid).unwrap();
    let after = out.degree_profile();
    assert!(after.is_regular());
    assert_eq!(after.max_degree, 8);
    assert_eq!(out.arcs.len(), mid.arcs.len() * 4);
    assert_eq!(trace.arc_multiplier, Some(4));
}

#[test]
fn regularize_is_identity_on_regular_input() {
    let inst = swap_square();
    let (out, trace) = regularize(&inst).unwrap();
    assert_eq!(out.arcs.len(), inst.arcs.len());
    assert_eq!(trace.arc_multiplier, Some(1));
    assert_eq!(out.left_count, inst.left_count);
}

#[test]
fn regularize_preserves_brute_force_optimum_exactly() {
    for seed in 0..8u64 {
        let base = left_regular_instance(2, 2, 2, seed);
        let (mid, _) = right_degree_reduce(&base, 2, seed).unwrap();
        let (out, _) = regularize(&mid).unwrap();
        let (_, before) = mid.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
        let (_, after) = out.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(before, after, "seed {seed}");
    }
}

#[test]
fn sparsify_rate_matches_the_formula() {
    // gamma 1/4, max labels 4, delta 16
    let rho = sparsify_rate(q(1, 4), 4, 16);
    assert!((rho - 4.0 * 4.0f64.ln() / 16.0).abs() < 1e-15);
    assert!((rho - 0.34657359027997264).abs() < 1e-12);
}

#[test]
fn sparsify_skips_when_rate_exceeds_one() {
    let inst = swap_square();
    // delta 2, gamma 1/4: rho = 4 ln(2) / 2 > 1
    let (out, trace) = sparsify(&inst, q(1, 4), 3).unwrap();
    assert!(trace.skipped.is_some());
    assert_eq!(out.arcs.len(), inst.arcs.len());
    assert_eq!(trace.provenance.len(), inst.arcs.len());
}

#[test]
fn trim_is_identity_below_threshold() {
    let inst = swap_square();
    let (out, trace) = trim_large_degree(&inst, 2.5).unwrap();
    assert_eq!(out.arcs.len(), 4);
    assert_eq!(trace.removed_vertex_fraction, Some(q_zero()));
}

#[test]
fn trim_removes_star_centers() {
    let mut inst = swap_square();
    inst.left_count = 3;
    for w in 0..2 {
        inst.arcs.push(Arc { left: 2, right: w, image: vec![0, 0] });
        inst.arcs.push(Arc { left: 2, right: w, image: vec![0, 0] });
    }
    inst.allow_parallel = true;
    // left vertex 2 has degree 4, centers w0 and w1 now have degree 4
    let (out, trace) = trim_large_degree(&inst, 3.0).unwrap();
    assert!(out.degree_profile().max_degree as f64 <= 3.0);
    assert_eq!(out.left_count, 2);
    assert_eq!(out.right_count, 0);
    assert_eq!(trace.removed_vertex_fraction, Some(q(3, 5)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Trimming never leaves a vertex above the threshold and keeps only
    /// arcs whose endpoints survive.
    #[test]
    fn trim_bounds_the_max_degree(seed in any::<u64>(), threshold in 1.0f64..6.0) {
        let inst = left_regular_instance(3, 4, 3, seed);
        let (out, trace) = trim_large_degree(&inst, threshold).unwrap();
        let profile = out.degree_profile();
        prop_assert!(profile.max_degree as f64 <= threshold);
        prop_assert_eq!(trace.provenance.len(), out.arcs.len());
    }

    /// Every sparsify survivor is a copy of its source arc.
    #[test]
    fn sparsify_keeps_arcs_verbatim(seed in any::<u64>()) {
        let base = left_regular_instance(4, 4, 2, seed);
        let (mid, _) = right_degree_reduce(&base, 2, seed).unwrap();
        let (reg, _) = regularize(&mid).unwrap();
        let (out, trace) = sparsify(&reg, q(1, 2), seed).unwrap();
        for (out_idx, &src) in trace.provenance.iter().enumerate() {
            prop_assert_eq!(&out.arcs[out_idx], &reg.arcs[src]);
        }
    }
}

#[test]
fn pipeline_composes_and_respects_the_trim_bound() {
    let input = left_regular_instance(4, 6, 3, 11);
    let params = PipelineParams::new(q(1, 2), q(1, 8), 3);
    let (out, traces) = run_pipeline(&input, &params).unwrap();
    assert_eq!(traces.len(), 4);
    let threshold = default_trim_threshold(q(1, 2), 2);
    assert!(out.degree_profile().max_degree as f64 <= threshold);
    // stage order and multipliers
    assert_eq!(traces[0].pass.name(), "rightdeg");
    assert_eq!(traces[1].pass.name(), "regularize");
    assert_eq!(traces[2].pass.name(), "sparsify");
    assert_eq!(traces[3].pass.name(), "trim");
}

#[test]
fn pipeline_is_deterministic() {
    let input = left_regular_instance(4, 6, 3, 11);
    let params = PipelineParams::new(q(1, 2), q(1, 8), 17);
    let (a, _) = run_pipeline(&input, &params).unwrap();
    let (b, _) = run_pipeline(&input, &params).unwrap();
    assert_eq!(a.arcs, b.arcs);
    assert_eq!(a.right_count, b.right_count);
}

#[test]
fn pipeline_keeps_planted_completeness_at_epsilon_zero() {
    // a perfect plant survives every pass, so the exact optimum stays 1
    let input = left_regular_instance(2, 3, 2, 21);
    let params = PipelineParams::new(q(1, 2), q_zero(), 5);
    let (out, _) = run_pipeline(&input, &params).unwrap();
    let plant = out.planted.clone().unwrap();
    assert_eq!(out.coverage_fraction(&plant).unwrap(), q_one());
    if !out.arcs.is_empty() {
        let (_, best) = out.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(best, q_one());
    }
}

#[test]
fn max_to_min_sets_balanced_integral_costs() {
    let inst = LabelCoverInstance {
        left_count: 2,
        right_count: 3,
        left_labels: 1,
        right_labels: 1,
        arcs: vec![Arc { left: 0, right: 0, image: vec![0] }],
        costs: None,
        allow_parallel: false,
        planted: None,
    };
    let costed = max_to_min(&inst, q_zero()).unwrap();
    let costs = costed.costs.unwrap();
    assert_eq!(costs.left, q_int(3));
    assert_eq!(costs.right, q_int(2));
    // c1|U| = c2|W|, C = 12
    assert_eq!(costs.left * q_int(2), costs.right * q_int(3));
}

#[test]
fn max_to_min_rejects_budget_violations() {
    let inst = swap_square();
    // 1 * |E| = 4 > min(|U|,|W|) = 2
    assert!(matches!(
        max_to_min(&inst, q_one()),
        Err(TransformError::BudgetExceeded { .. })
    ));
    assert!(max_to_min(&inst, q(1, 2)).is_ok());
}

#[test]
fn repaired_multi_labeling_is_feasible_within_twice_the_spread() {
    // completeness witness: cover the uncovered arcs by adding one
    // projecting pair each; cost stays within 2C when eps|E| <= min side
    for seed in 0..12u64 {
        let profile = RandomProfile {
            left: 3,
            right: 3,
            left_labels: 2,
            right_labels: 2,
            degree: 2,
            epsilon: q(1, 3),
        };
        let raw = LabelCoverInstance::random_instance(&profile, seed).unwrap();
        let inst = max_to_min(&raw, q(1, 3)).unwrap();
        let plant = inst.planted.clone().unwrap();
        let mut repaired = plant.to_multi();
        for arc in &inst.arcs {
            if arc.image[plant.left[arc.left]] != plant.right[arc.right] {
                repaired.left[arc.left].insert(0);
                repaired.right[arc.right].insert(arc.image[0]);
            }
        }
        assert!(inst.is_feasible(&repaired).unwrap());
        let c = q_int(2 * (inst.left_count * inst.right_count) as i128);
        assert!(inst.multi_cost(&repaired).unwrap() <= q_int(2) * c);
    }
}

#[test]
fn rounding_the_worked_example_covers_three_arcs() {
    let inst = swap_square();
    let m = MultiLabeling {
        left: vec![LabelSet::from_labels(&[0]), LabelSet::from_labels(&[0, 1])],
        right: vec![LabelSet::from_labels(&[0]), LabelSet::from_labels(&[0])],
    };
    assert_eq!(expected_covered(&inst, &m), q_int(3));
    let rounded = round_multi_labeling(&inst, &m);
    assert!(inst.covered_count(&rounded).unwrap() >= 3);
}

#[test]
fn rounding_singletons_is_the_identity() {
    let inst = swap_square();
    let labeling = Labeling { left: vec![1, 0], right: vec![1, 0] };
    let rounded = round_multi_labeling(&inst, &labeling.to_multi());
    assert_eq!(rounded, labeling);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The rounded labeling covers at least the expected count, compared as
    /// exact rationals.
    #[test]
    fn rounding_beats_the_expectation(
        seed in any::<u64>(),
        left_masks in proptest::collection::vec(0u64..4, 3),
        right_masks in proptest::collection::vec(0u64..4, 3),
    ) {
        let profile = RandomProfile {
            left: 3,
            right: 3,
            left_labels: 2,
            right_labels: 2,
            degree: 2,
            epsilon: q_zero(),
        };
        let inst = LabelCoverInstance::random_no_instance(&profile, seed).unwrap();
        let m = MultiLabeling {
            left: left_masks.iter().map(|&m| LabelSet(m)).collect(),
            right: right_masks.iter().map(|&m| LabelSet(m)).collect(),
        };
        let expected = expected_covered(&inst, &m);
        let rounded = round_multi_labeling(&inst, &m);
        let covered = q_int(inst.covered_count(&rounded).unwrap() as i128);
        prop_assert!(covered >= expected, "covered {covered} expected {expected}");
    }
}
