use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qiradar_core::mc::{run_trials, FadingModel, DEFAULT_BUDGET};
use qiradar_core::roc::{log_pf_grid, marcum_q, provider_for, saddlepoint_roc_at, SaddleVariant};
use qiradar_core::{Hypothesis, RadarKind, RadarScenario};

fn special(c: &mut Criterion) {
    let mut g = c.benchmark_group("marcum_q");
    for (a, b) in [(1.0, 1.0), (4.36, 3.03), (30.0, 35.0)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{a}-{b}")), &(a, b), |bench, &(a, b)| {
            bench.iter(|| marcum_q(black_box(a), black_box(b)).unwrap())
        });
    }
    g.finish();
}

fn saddle(c: &mut Criterion) {
    let s = RadarScenario::default();
    let grid = log_pf_grid(-7.0, -0.30103, 41);
    let mut g = c.benchmark_group("saddlepoint_roc");
    for radar in [RadarKind::Qcn, RadarKind::QiOpa] {
        let provider = provider_for(radar, &s).unwrap();
        g.bench_function(radar.as_str(), |bench| {
            bench.iter(|| saddlepoint_roc_at(provider.as_ref(), black_box(&grid), SaddleVariant::Corrected).unwrap())
        });
    }
    g.finish();
}

fn trials(c: &mut Criterion) {
    let s = RadarScenario { m_modes: 2_000, kappa: 0.1, n_s: 0.1, ..RadarScenario::default() };
    let mut g = c.benchmark_group("mc_trials_1000");
    g.sample_size(10);
    for radar in [RadarKind::Ccn, RadarKind::QiOpa, RadarKind::CsHom] {
        g.bench_function(radar.as_str(), |bench| {
            bench.iter(|| run_trials(&s, radar, Hypothesis::H1, 1_000, 1, FadingModel::None, DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, special, saddle, trials);
criterion_main!(benches);
