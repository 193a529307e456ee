use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use egb_core::eggbeater::{enumerate, param_search, EggBeaterParams};
use egb_core::equivariant::mu_p;
use egb_core::field::Rational;
use egb_core::par::Execution;
use egb_core::persistence::bottleneck_with;
use egb_core::sample::{self, BarcodeShape};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn eggbeater(c: &mut Criterion) {
    let (mu, nu) = param_search(3, &q(4), 12).unwrap();
    let step = egb_core::eggbeater::lattice_step(&q(4), &mu, &nu);
    let params = EggBeaterParams::new(3, q(4), step * q(4), mu, nu).unwrap();
    let mut g = c.benchmark_group("eggbeater_enumerate_p3");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate(black_box(&params), exec).unwrap())
        });
    }
    g.finish();
}

fn spreads(c: &mut Criterion) {
    let mut rng = sample::rng(7);
    let modules: Vec<_> = (0..32).map(|_| sample::random_zp_module(&mut rng, 3, 3, 10, 2).module).collect();
    let mut g = c.benchmark_group("mu_p_batch_32");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(&modules, |m| mu_p(m, Execution::Sequential).unwrap()))
        });
    }
    g.finish();
}

fn bottleneck(c: &mut Criterion) {
    let mut rng = sample::rng(8);
    let shape = BarcodeShape { max_bars: 40, max_mult: 2, ..Default::default() };
    let a = sample::random_barcode(&mut rng, &shape);
    let b = sample::random_barcode(&mut rng, &shape);
    let mut g = c.benchmark_group("bottleneck_40_bars");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bch, &exec| {
            bch.iter(|| bottleneck_with(black_box(&a), black_box(&b), exec))
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = eggbeater, spreads, bottleneck
}
criterion_main!(benches);
