use chlab_bench::{soliton, spectral_data};
use chlab_core::hankel::{hankel_det, HankelIndex};
use chlab_core::soliton::{eval_physical, hirota_g, InversionConfig};
use chlab_core::Real;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

/// `D_{N/2}^1`, the widest subset sum for each `N`.
fn bench_hankel_det(c: &mut Criterion) {
    let mut group = c.benchmark_group("hankel_det");
    for n in [4, 6, 8] {
        let data = spectral_data(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| hankel_det(black_box(data), HankelIndex::new(n as i64 / 2, 1)))
        });
    }
    group.finish();
}

fn bench_hirota_g(c: &mut Criterion) {
    let mut group = c.benchmark_group("hirota_g");
    let (y, t) = (Real::parse("0.3").unwrap(), Real::zero());
    for n in [1, 3, 6] {
        let spec = soliton(n, 0.125);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| hirota_g(black_box(spec), &y, &t))
        });
    }
    group.finish();
}

fn bench_eval_physical(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_physical");
    let (x, t) = (Real::parse("0.5").unwrap(), Real::zero());
    let cfg = InversionConfig::default();
    for n in [1, 3] {
        let spec = soliton(n, 0.125);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, spec| {
            b.iter(|| eval_physical(black_box(spec), &x, &t, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_hankel_det, bench_hirota_g, bench_eval_physical);
criterion_main!(benches);
