use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ppverify_bench::two_parameter_grid;
use ppverify_core::{instantiate, verify, FieldCtx};

fn family_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_parameter_sweep");
    group.sample_size(10);
    for q in [4u64, 9] {
        let ctx = FieldCtx::new(q).unwrap();
        let specs = two_parameter_grid(q);
        group.bench_function(BenchmarkId::new("instantiate", q), |b| {
            b.iter(|| {
                specs
                    .iter()
                    .map(|s| instantiate(s, &ctx).unwrap().f.terms().len())
                    .sum::<usize>()
            })
        });
        group.bench_function(BenchmarkId::new("verify", q), |b| {
            b.iter(|| {
                specs
                    .iter()
                    .filter(|s| verify(s, &ctx).unwrap().agree)
                    .count()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, family_sweep);
criterion_main!(benches);
