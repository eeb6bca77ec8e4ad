use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use orthospec_bench::unit_points;
use orthospec_core::geometry::{enumerate_terms, FeasiblePair, ModelKind};
use orthospec_core::{instantiate, rogers, verify, BigReal, QuadNum, VerifyOptions};

fn bench_rogers(c: &mut Criterion) {
    let mut group = c.benchmark_group("rogers");
    for prec in [128u32, 256, 512] {
        let pts = unit_points(16, prec);
        group.bench_with_input(BenchmarkId::from_parameter(prec), &pts, |b, pts| {
            b.iter(|| {
                for x in pts {
                    black_box(rogers(x).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let crown = FeasiblePair::double_crown_i(QuadNum::from_int(3)).unwrap();
    let cf = FeasiblePair::even_period_cf(&"1,2,3".parse().unwrap()).unwrap();
    c.bench_function("enumerate/double_crown_i/50", |b| {
        b.iter(|| enumerate_terms(black_box(&crown), ModelKind::DoubleCrownI, 50).unwrap())
    });
    c.bench_function("enumerate/even_period_cf/20", |b| {
        b.iter(|| enumerate_terms(black_box(&cf), ModelKind::EvenPeriodCf, 20).unwrap())
    });
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    let opts = VerifyOptions::default();
    for id in ["eq-4.7", "eq-12.2", "thm-15.3"] {
        let identity = instantiate(id, &[]).unwrap();
        group.bench_function(id, |b| b.iter(|| verify(black_box(&identity), &opts).unwrap()));
    }
    let basel = instantiate("eq-13.3", &[]).unwrap();
    let loose = VerifyOptions::new(128, BigReal::parse_decimal("1e-3", 128).unwrap(), 10_000);
    group.bench_function("eq-13.3/10k", |b| b.iter(|| verify(black_box(&basel), &loose).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_rogers, bench_enumerate, bench_verify);
criterion_main!(benches);
