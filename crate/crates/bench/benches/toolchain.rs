use criterion::{criterion_group, criterion_main, Criterion};

use minrep_core::gadgets::to_directed_rooted;
use minrep_core::num::{q, q_zero};
use minrep_core::oracle::{opcount, SubgraphView};
use minrep_core::transforms::{max_to_min, run_pipeline, PipelineParams};
use minrep_core::{LabelCoverInstance, RandomProfile, DEFAULT_ENUM_CAP};

fn base_instance(left: usize, right: usize, degree: usize) -> LabelCoverInstance {
    let profile = RandomProfile {
        left,
        right,
        left_labels: 3,
        right_labels: 3,
        degree,
        epsilon: q_zero(),
    };
    LabelCoverInstance::random_instance(&profile, 42).unwrap()
}

fn bench_pipeline(c: &mut Criterion) {
    let inst = base_instance(24, 32, 4);
    let params = PipelineParams::new(q(1, 3), q(1, 8), 5);
    c.bench_function("pipeline_24x32_d4", |b| {
        b.iter(|| run_pipeline(&inst, &params).unwrap())
    });
}

fn bench_strong_coloring(c: &mut Criterion) {
    let inst = base_instance(48, 48, 4);
    c.bench_function("strong_color_48x48_d4", |b| {
        b.iter(|| minrep_core::strong_edge_color(&inst))
    });
}

fn bench_opcount(c: &mut Criterion) {
    let src = max_to_min(&base_instance(4, 4, 3), q_zero()).unwrap();
    let (net, _) = to_directed_rooted(&src).unwrap();
    let view = SubgraphView::full(&net);
    let demand = net.demand_pairs()[0];
    c.bench_function("opcount_directed_gadget", |b| {
        b.iter(|| opcount(&view, demand.s, demand.t).unwrap())
    });
}

fn bench_min_cost(c: &mut Criterion) {
    let src = max_to_min(&base_instance(3, 3, 2), q_zero()).unwrap();
    c.bench_function("brute_force_min_cost_3x3x3", |b| {
        b.iter(|| src.brute_force_min_cost(DEFAULT_ENUM_CAP).unwrap())
    });
}

criterion_group!(
    benches,
    bench_pipeline,
    bench_strong_coloring,
    bench_opcount,
    bench_min_cost
);
criterion_main!(benches);
