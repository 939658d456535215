//! Min-cost label-cover tooling: instance shaping passes, connectivity
//! gadget emitters, and the exact oracles that verify, at desk scale, that
//! the emitted instances preserve structure and optimum cost.
//!
//! The crate is organized around the flow of an experiment: build or load a
//! label-cover instance ([`model`]), shape its degrees ([`transforms`],
//! backed by [`spectral`]), convert maximum coverage to minimum cost, emit
//! one of four connectivity problems ([`gadgets`], with demand merging via
//! [`matching`]), and verify everything with flows and exhaustive search
//! ([`oracle`]).

pub mod gadgets;
pub mod io;
pub mod matching;
pub mod model;
pub mod num;
pub mod oracle;
pub mod rng;
pub mod spectral;
pub mod transforms;

pub use gadgets::{
    merge_demands, merge_terminals_directed, solution_to_labeling, to_directed_rooted,
    to_k_route_cut, to_undirected_rooted, to_vc_sndp, EdgeCost, GadgetError, GadgetLayout,
    MergedInstance, NetworkInstance, ProblemKind, Role, Side,
};
pub use matching::{is_induced_matching, strong_edge_color, StrongColoring};
pub use model::{
    DegreeProfile, LabelCosts, LabelCoverInstance, LabelSet, Labeling, ModelError, MultiLabeling,
    RandomProfile, Violation, DEFAULT_ENUM_CAP,
};
pub use num::Q;
pub use oracle::{
    brute_force_network_opt, check_cut_solution, check_design_solution, flow_at_least,
    gap_experiment, opcount, FlowCertificate, GapParams, GapReport, OracleError, SubgraphView,
    DEFAULT_EDGE_CAP,
};
pub use spectral::{
    build_expander, random_regular, second_eigenvalue, RegularGraph, SpectralCertificate,
};
pub use transforms::{
    default_right_degree, default_trim_threshold, max_to_min, regularize, right_degree_reduce,
    round_multi_labeling, run_pipeline, sparsify, trim_large_degree, PassTrace, PipelineParams,
    TransformError,
};
