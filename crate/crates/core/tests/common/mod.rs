//! Shared fixtures for the integration suites.

#![allow(dead_code)]

use minrep_core::model::{Arc, LabelCosts, LabelCoverInstance};
use minrep_core::num::{q_int, Q};

/// One arc, two left labels projecting onto a single right label.
pub fn single_arc() -> LabelCoverInstance {
    LabelCoverInstance {
        left_count: 1,
        right_count: 1,
        left_labels: 2,
        right_labels: 1,
        arcs: vec![Arc { left: 0, right: 0, image: vec![0, 0] }],
        costs: Some(LabelCosts { left: q_int(1), right: q_int(1) }),
        allow_parallel: false,
        planted: None,
    }
}

/// Complete bipartite 2x2 over labels {0,1}: three identity projections and
/// one swap, so the best single labeling covers 3 of 4 arcs and the
/// cheapest unit-cost cover spends 5 labels.
pub fn swap_square() -> LabelCoverInstance {
    swap_square_with_costs(q_int(1), q_int(1))
}

pub fn swap_square_with_costs(left: Q, right: Q) -> LabelCoverInstance {
    LabelCoverInstance {
        left_count: 2,
        right_count: 2,
        left_labels: 2,
        right_labels: 2,
        arcs: vec![
            Arc { left: 0, right: 0, image: vec![0, 1] },
            Arc { left: 0, right: 1, image: vec![0, 1] },
            Arc { left: 1, right: 0, image: vec![0, 1] },
            Arc { left: 1, right: 1, image: vec![1, 0] },
        ],
        costs: Some(LabelCosts { left, right }),
        allow_parallel: false,
        planted: None,
    }
}

/// Two vertex-disjoint identity arcs.
pub fn two_disjoint_arcs() -> LabelCoverInstance {
    LabelCoverInstance {
        left_count: 2,
        right_count: 2,
        left_labels: 2,
        right_labels: 2,
        arcs: vec![
            Arc { left: 0, right: 0, image: vec![0, 1] },
            Arc { left: 1, right: 1, image: vec![0, 1] },
        ],
        costs: Some(LabelCosts { left: q_int(2), right: q_int(2) }),
        allow_parallel: false,
        planted: None,
    }
}

/// Seeded small instance with uniformly random projections and costs from
/// the max-to-min rule. Suitable for exhaustive oracles.
pub fn random_costed(
    left: usize,
    right: usize,
    left_labels: usize,
    right_labels: usize,
    degree: usize,
    seed: u64,
) -> LabelCoverInstance {
    let profile = minrep_core::RandomProfile {
        left,
        right,
        left_labels,
        right_labels,
        degree,
        epsilon: minrep_core::num::q_zero(),
    };
    let inst = LabelCoverInstance::random_no_instance(&profile, seed).unwrap();
    minrep_core::max_to_min(&inst, minrep_core::num::q_zero()).unwrap()
}
