use chainforge::forcing::{generic_run, RunConfig};
use chainforge::gmunu::{is_copy, GraphShape, SymbolicSet};
use chainforge::qline::{Rat, Window};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn forcing(c: &mut Criterion) {
    let window = Window::bounded(Rat::int(-10), Rat::int(10), 64).unwrap();
    let mut group = c.benchmark_group("generic_run");
    group.sample_size(10);
    for (n, steps) in [(3, 100), (4, 100)] {
        group.bench_function(format!("n{n}_steps{steps}"), |b| {
            b.iter(|| generic_run(black_box(n), steps, window, RunConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn clique_scan(c: &mut Criterion) {
    let window = Window::bounded(Rat::int(-10), Rat::int(10), 64).unwrap();
    let run = generic_run(3, 300, window, RunConfig::default()).unwrap();
    let g = run.union_graph();
    c.bench_function("find_clique_k3_300", |b| b.iter(|| black_box(&g).find_clique(3)));
}

fn copy_check(c: &mut Criterion) {
    let sets: Vec<SymbolicSet> = ["default=full; 3:fin{0,1}", "default=[mod2{0},empty]; 0:cofin{4}", "default=mod3{1}+{0}"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let shape = GraphShape::omega_omega();
    c.bench_function("is_copy_omega_omega", |b| {
        b.iter(|| sets.iter().filter(|s| is_copy(black_box(s), shape).unwrap()).count())
    });
}

criterion_group!(kernels, forcing, clique_scan, copy_check);
criterion_main!(kernels);
