use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dconormal::cli::parse_variety;
use dconormal::conormal::{nash_ideal, transversality_check};
use dconormal::grassmann::chart_cover;
use dconormal::par::{self, Mode};
use dconormal::polar::polar_draws;
use dconormal::whitney::{condition_w_probe, delta_bound_property, WhitneyInstance};

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn delta(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta_bound_property");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "n6_d3_t2_2000"), |b| {
            par::set_mode(mode);
            b.iter(|| delta_bound_property(6, 3, 2, 2000, 7).unwrap())
        });
    }
    group.finish();
}

fn polar(c: &mut Criterion) {
    let cone = parse_variety("vars: x y z\nx^2 + y^2 + z^2").unwrap();
    let mut group = c.benchmark_group("polar_draws");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "cone_5_draws"), |b| {
            par::set_mode(mode);
            b.iter(|| polar_draws(&cone, 1, 2, 5, 2024).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let umbrella = parse_variety("vars: x y z\nx^2 - y^2*z").unwrap();
    let chart = chart_cover(3, 2).unwrap()[0].clone();
    let nash = nash_ideal(&umbrella, &chart).unwrap();
    let w = WhitneyInstance::new(umbrella.clone(), &[2], chart_cover(3, 2).unwrap()[1].clone()).unwrap();
    let mut group = c.benchmark_group("sampling");
    group.sample_size(20);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "umbrella_transversality_25"), |b| {
            par::set_mode(mode);
            b.iter(|| transversality_check(&nash, 25, 9).unwrap())
        });
        group.bench_function(BenchmarkId::new(name, "umbrella_w_probe_20"), |b| {
            par::set_mode(mode);
            b.iter(|| condition_w_probe(&w, 20, 2).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, delta, polar, sampling);
criterion_main!(benches);
