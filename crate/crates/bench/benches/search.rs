use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nest_core::{automorphism_group, canonical_form, NestParams, PermGroup};

fn params() -> Vec<NestParams> {
    [
        (5, 1, 2, 3, 2),
        (8, 1, 3, 4, 3),
        (12, 2, 4, 8, 5),
        (26, 2, 13, 15, 1),
        (50, 2, 25, 27, 1),
    ]
    .into_iter()
    .map(|(n, a, b, c, k)| NestParams::new(n, a, b, c, k).unwrap())
    .collect()
}

fn automorphisms(c: &mut Criterion) {
    let mut group = c.benchmark_group("automorphism_group");
    for p in params() {
        let g = p.build();
        group.bench_with_input(BenchmarkId::from_parameter(p), &g, |b, g| {
            b.iter(|| automorphism_group(black_box(g)))
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_form");
    for p in params() {
        let g = p.build();
        group.bench_with_input(BenchmarkId::from_parameter(p), &g, |b, g| {
            b.iter(|| canonical_form(black_box(g)))
        });
    }
    group.finish();
}

fn schreier_sims(c: &mut Criterion) {
    let p = NestParams::new(50, 2, 25, 27, 1).unwrap();
    let gens = automorphism_group(&p.build()).generators().to_vec();
    c.bench_function("schreier_sims/aut(50,2,25,27,1)", |b| {
        b.iter(|| PermGroup::new(100, black_box(gens.clone())).unwrap())
    });
}

criterion_group!(benches, automorphisms, certificates, schreier_sims);
criterion_main!(benches);
