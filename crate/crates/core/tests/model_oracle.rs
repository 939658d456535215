//! Exhaustive-oracle checks for coverage, cost, and the brute-force
//! searches, plus the counting invariants they must satisfy on arbitrary
//! instances.

mod common;

use common::{single_arc, swap_square};
use minrep_core::model::{Arc, LabelCoverInstance, LabelSet, Labeling, MultiLabeling};
use minrep_core::num::{q, q_int, q_one, q_zero};
use minrep_core::{RandomProfile, DEFAULT_ENUM_CAP};
use proptest::prelude::*;

#[test]
fn swap_square_best_labeling_covers_three_quarters() {
    let inst = swap_square();
    let (witness, fraction) = inst.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(fraction, q(3, 4));
    assert_eq!(inst.coverage_fraction(&witness).unwrap(), q(3, 4));
    // reproducible witness: first optimum in lexicographic order
    let again = inst.brute_force_max(DEFAULT_ENUM_CAP).unwrap().0;
    assert_eq!(witness, again);
}

#[test]
fn swap_square_min_cost_is_five() {
    let inst = swap_square();
    let (witness, cost) = inst.brute_force_min_cost(DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(cost, q_int(5));
    assert!(inst.is_feasible(&witness).unwrap());
    assert_eq!(inst.multi_cost(&witness).unwrap(), cost);
}

#[test]
fn swap_square_handmade_cover_costs_five() {
    let inst = swap_square();
    let m = MultiLabeling {
        left: vec![LabelSet::from_labels(&[0]), LabelSet::from_labels(&[0, 1])],
        right: vec![LabelSet::from_labels(&[0]), LabelSet::from_labels(&[0])],
    };
    assert_eq!(inst.multi_cost(&m).unwrap(), q_int(5));
    assert!(inst.is_feasible(&m).unwrap());
    let all = MultiLabeling::all_labels(&inst);
    assert_eq!(inst.multi_cost(&all).unwrap(), q_int(8));
    assert!(inst.is_feasible(&all).unwrap());
}

#[test]
fn two_disjoint_identity_arcs_are_fully_coverable() {
    let inst = common::two_disjoint_arcs();
    assert_eq!(inst.brute_force_max(DEFAULT_ENUM_CAP).unwrap().1, q_one());
}

#[test]
fn min_cost_refuses_beyond_cap_with_estimate() {
    let inst = swap_square();
    // space is 2^(2*2 + 2*2) = 256 candidates
    match inst.brute_force_min_cost(255) {
        Err(minrep_core::ModelError::EnumerationCapExceeded { estimate, cap }) => {
            assert_eq!(estimate, 256);
            assert_eq!(cap, 255);
        }
        other => panic!("expected refusal, got {other:?}"),
    }
    assert!(inst.brute_force_min_cost(256).is_ok());
}

fn arb_instance() -> impl Strategy<Value = LabelCoverInstance> {
    (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(u, w, l1, l2)| {
        let arcs = proptest::collection::vec(
            (0..u, 0..w, proptest::collection::vec(0..l2, l1)),
            0..=6,
        );
        arcs.prop_map(move |arcs| LabelCoverInstance {
            left_count: u,
            right_count: w,
            left_labels: l1,
            right_labels: l2,
            arcs: arcs
                .into_iter()
                .map(|(left, right, image)| Arc { left, right, image })
                .collect(),
            costs: Some(minrep_core::LabelCosts { left: q_int(1), right: q_int(1) }),
            allow_parallel: true,
            planted: None,
        })
    })
}

fn arb_labeling(inst: &LabelCoverInstance) -> impl Strategy<Value = Labeling> {
    let left = proptest::collection::vec(0..inst.left_labels, inst.left_count);
    let right = proptest::collection::vec(0..inst.right_labels, inst.right_count);
    (left, right).prop_map(|(left, right)| Labeling { left, right })
}

proptest! {
    /// Covered plus uncovered counts conserve the arc count.
    #[test]
    fn coverage_counting_is_conserved(
        (inst, labeling) in arb_instance().prop_flat_map(|inst| {
            let labeling = arb_labeling(&inst);
            (Just(inst), labeling)
        })
    ) {
        let covered = inst.covered_count(&labeling).unwrap();
        let uncovered = inst
            .arcs
            .iter()
            .filter(|a| a.image[labeling.left[a.left]] != labeling.right[a.right])
            .count();
        prop_assert_eq!(covered + uncovered, inst.arcs.len());
        if !inst.arcs.is_empty() {
            let fraction = inst.coverage_fraction(&labeling).unwrap();
            prop_assert_eq!(
                fraction,
                q_one() - q(uncovered as i128, inst.arcs.len() as i128)
            );
        }
    }

    /// The singleton multi-labeling of a labeling is feasible exactly when
    /// the labeling covers everything.
    #[test]
    fn singleton_feasibility_matches_full_coverage(
        (inst, labeling) in arb_instance().prop_flat_map(|inst| {
            let labeling = arb_labeling(&inst);
            (Just(inst), labeling)
        })
    ) {
        let full = inst.coverage_fraction(&labeling).unwrap() == q_one();
        prop_assert_eq!(inst.is_feasible(&labeling.to_multi()).unwrap(), full);
    }

    /// Deleting one arc lowers the optimal covered count by at most one,
    /// and never below the old count minus one.
    #[test]
    fn brute_force_max_is_monotone_under_arc_deletion(
        inst in arb_instance().prop_filter("needs arcs", |i| !i.arcs.is_empty()),
        pick in any::<proptest::sample::Index>(),
    ) {
        let total = inst.arcs.len() as i128;
        let (_, before) = inst.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
        let covered_before = before * q_int(total);
        let mut smaller = inst.clone();
        smaller.arcs.remove(pick.index(inst.arcs.len()));
        let covered_after = if smaller.arcs.is_empty() {
            q_zero()
        } else {
            let (_, after) = smaller.brute_force_max(DEFAULT_ENUM_CAP).unwrap();
            after * q_int(total - 1)
        };
        prop_assert!(covered_after <= covered_before);
        prop_assert!(covered_after >= covered_before - q_one());
    }

    /// Planted generation always admits its plant at epsilon zero.
    #[test]
    fn perfect_plants_cover_everything(seed in any::<u64>()) {
        let profile = RandomProfile {
            left: 3,
            right: 4,
            left_labels: 3,
            right_labels: 2,
            degree: 2,
            epsilon: q_zero(),
        };
        let inst = LabelCoverInstance::random_instance(&profile, seed).unwrap();
        let plant = inst.planted.clone().unwrap();
        prop_assert_eq!(inst.coverage_fraction(&plant).unwrap(), q_one());
    }

    /// Brute force over multi-labelings never beats the all-labels cost and
    /// its witness is feasible.
    #[test]
    fn min_cost_witness_is_feasible_and_bounded(
        inst in arb_instance()
    ) {
        let (witness, cost) = inst.brute_force_min_cost(DEFAULT_ENUM_CAP).unwrap();
        prop_assert!(inst.is_feasible(&witness).unwrap());
        let all = MultiLabeling::all_labels(&inst);
        prop_assert!(cost <= inst.multi_cost(&all).unwrap());
        prop_assert_eq!(inst.multi_cost(&witness).unwrap(), cost);
    }
}

#[test]
fn single_arc_examples() {
    let inst = single_arc();
    assert_eq!(inst.brute_force_max(DEFAULT_ENUM_CAP).unwrap().1, q_one());
    assert_eq!(inst.brute_force_min_cost(DEFAULT_ENUM_CAP).unwrap().1, q_int(2));
}
